use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Polarization tag. `H` doubles as the x-polarized / ordinary state and
/// `V` as the y-polarized / extraordinary state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::H, Pol::V];

    pub fn index(self) -> usize {
        match self {
            Pol::H => 0,
            Pol::V => 1,
        }
    }

    pub fn from_index(i: usize) -> Pol {
        if i == 0 {
            Pol::H
        } else {
            Pol::V
        }
    }

    pub fn flipped(self) -> Pol {
        match self {
            Pol::H => Pol::V,
            Pol::V => Pol::H,
        }
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::H => "H",
            Pol::V => "V",
        })
    }
}

impl FromStr for Pol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "H" | "h" | "x" => Ok(Pol::H),
            "V" | "v" | "y" => Ok(Pol::V),
            other => Err(format!("unknown polarization `{other}` (expected H or V)")),
        }
    }
}

/// One basis mode: spatial rail, polarization and OAM winding number.
///
/// The derived ordering is the canonical basis order: rail, then H before V,
/// then ell ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub rail: usize,
    pub pol: Pol,
    pub ell: i32,
}

impl ModeIndex {
    pub const fn new(rail: usize, pol: Pol, ell: i32) -> Self {
        ModeIndex { rail, pol, ell }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{:+}>", self.rail, self.pol, self.ell)
    }
}

/// Hybrid mode space: `rails` spatial ports, two polarizations and the OAM
/// window `-window..=window`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    rails: usize,
    window: u32,
}

impl Space {
    pub fn new(rails: usize, window: u32) -> Result<Self> {
        if rails == 0 {
            return Err(Error::InvalidSpace("at least one rail is required".into()));
        }
        Ok(Space { rails, window })
    }

    pub fn rails(&self) -> usize {
        self.rails
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Number of OAM values per (rail, pol) block.
    pub fn ell_count(&self) -> usize {
        2 * self.window as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.rails * 2 * self.ell_count()
    }

    pub fn ell_in_window(&self, ell: i32) -> bool {
        ell.unsigned_abs() <= self.window
    }

    pub fn contains(&self, mode: ModeIndex) -> bool {
        mode.rail < self.rails && self.ell_in_window(mode.ell)
    }

    pub fn check_rail(&self, rail: usize) -> Result<()> {
        if rail < self.rails {
            Ok(())
        } else {
            Err(Error::InvalidRail {
                rail,
                rails: self.rails,
            })
        }
    }

    pub fn index_of(&self, mode: ModeIndex) -> Option<usize> {
        if !self.contains(mode) {
            return None;
        }
        let block = self.ell_count();
        let offset = (mode.ell + self.window as i32) as usize;
        Some((mode.rail * 2 + mode.pol.index()) * block + offset)
    }

    /// Like [`Space::index_of`] but reports an error for foreign modes.
    pub fn try_index(&self, mode: ModeIndex) -> Result<usize> {
        self.index_of(mode).ok_or(Error::ModeOutOfSpace(mode))
    }

    /// Inverse of [`Space::index_of`]. Panics if `index >= dim()`.
    pub fn mode(&self, index: usize) -> ModeIndex {
        assert!(index < self.dim(), "basis index {index} out of range");
        let block = self.ell_count();
        let ell = (index % block) as i32 - self.window as i32;
        let rp = index / block;
        ModeIndex::new(rp / 2, Pol::from_index(rp % 2), ell)
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        (0..self.dim()).map(move |i| self.mode(i))
    }

    pub fn ells(&self) -> impl Iterator<Item = i32> {
        let w = self.window as i32;
        -w..=w
    }
}

/// Lists the basis of a space with `rails` rails and OAM window `window` in
/// canonical order.
pub fn basis_enumerate(rails: usize, window: u32) -> Result<Vec<ModeIndex>> {
    let space = Space::new(rails, window)?;
    Ok(space.modes().collect())
}
