use std::fmt;

use super::Circuit;
use crate::error::Result;
use crate::hilbert::{apply, ModeIndex, Pol, State};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SortCell<T> {
    pub rail: usize,
    pub pol: Pol,
    pub prob: T,
}

/// Routing of one input OAM value over every output (rail, pol) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SortRow<T> {
    pub ell: i32,
    pub cells: Vec<SortCell<T>>,
}

impl<T: Real> SortRow<T> {
    /// Most probable output cell; ties go to the first in canonical order.
    pub fn best(&self) -> SortCell<T> {
        self.cells
            .iter()
            .copied()
            .fold(None, |best: Option<SortCell<T>>, cell| match best {
                Some(b) if b.prob >= cell.prob => Some(b),
                _ => Some(cell),
            })
            .expect("at least one output cell")
    }

    pub fn total(&self) -> T {
        self.cells.iter().fold(T::zero(), |acc, c| acc + c.prob)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SortReport<T> {
    rows: Vec<SortRow<T>>,
}

impl<T: Real> SortReport<T> {
    pub fn rows(&self) -> &[SortRow<T>] {
        &self.rows
    }

    /// True if every input lands in one cell with probability `>= 1 - tol`
    /// and no two inputs share an output rail.
    pub fn is_rail_permutation(&self, tol: T) -> bool {
        let mut rails: Vec<usize> = self.rows.iter().map(|r| r.best().rail).collect();
        let sharp = self.rows.iter().all(|r| r.best().prob >= T::one() - tol);
        rails.sort_unstable();
        rails.dedup();
        sharp && rails.len() == self.rows.len()
    }
}

impl<T: Real> fmt::Display for SortReport<T> {
    /// TSV: `ell rail pol prob` with the dominant cell of each input.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ell\trail\tpol\tprob")?;
        for row in &self.rows {
            let b = row.best();
            writeln!(f, "{}\t{}\t{}\t{:.12}", row.ell, b.rail, b.pol, b.prob)?;
        }
        Ok(())
    }
}

/// Sends each `|rail, pol, ell>` through the compiled circuit and reports the
/// output probability of every (rail, pol) cell.
pub fn run_sort<T: Real>(
    circuit: &Circuit<T>,
    inputs: &[i32],
    rail: usize,
    pol: Pol,
) -> Result<SortReport<T>> {
    let space = circuit.space();
    let sources = inputs
        .iter()
        .map(|&ell| State::basis(space, ModeIndex::new(rail, pol, ell)))
        .collect::<Result<Vec<_>>>()?;
    let u = circuit.compile()?;
    let rows = inputs
        .iter()
        .zip(&sources)
        .map(|(&ell, psi)| {
            let out = apply(&u, psi)?;
            let cells = out
                .port_marginals()
                .into_iter()
                .map(|(rail, pol, prob)| SortCell { rail, pol, prob })
                .collect();
            Ok(SortRow { ell, cells })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SortReport { rows })
}
