use num_traits::{One, Zero};

use super::basis::{ModeIndex, Pol, Space};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Complex amplitudes over the canonical basis of a [`Space`].
#[derive(Clone, Debug, PartialEq)]
pub struct State<T> {
    space: Space,
    amps: Vec<C<T>>,
}

impl<T: Real> State<T> {
    /// Normalized state; rejects `|sum |a|^2 - 1| > 1e-9`.
    pub fn new(space: Space, amps: Vec<C<T>>) -> Result<Self> {
        Self::with_tolerance(space, amps, T::circuit_tol())
    }

    pub fn with_tolerance(space: Space, amps: Vec<C<T>>, tol: T) -> Result<Self> {
        let state = Self::unnormalized(space, amps)?;
        let n2 = state.norm_sqr();
        if (n2 - T::one()).abs() > tol {
            return Err(Error::NotNormalized(n2.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    /// Intermediate vector with no normalization requirement.
    pub fn unnormalized(space: Space, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amps.len(),
            });
        }
        Ok(State { space, amps })
    }

    pub fn basis(space: Space, mode: ModeIndex) -> Result<Self> {
        let mut amps = vec![C::zero(); space.dim()];
        amps[space.try_index(mode)?] = C::one();
        Ok(State { space, amps })
    }

    /// Equal-weight superposition of the given modes (duplicates ignored).
    pub fn uniform(space: Space, modes: &[ModeIndex]) -> Result<Self> {
        let mut amps = vec![C::zero(); space.dim()];
        let mut seen = 0usize;
        for &m in modes {
            let i = space.try_index(m)?;
            if amps[i].is_zero() {
                amps[i] = C::one();
                seen += 1;
            }
        }
        if seen == 0 {
            return Err(Error::NotNormalized(0.0));
        }
        let s = C::new(T::one() / T::from_usize(seen).unwrap().sqrt(), T::zero());
        for a in &mut amps {
            *a *= s;
        }
        Ok(State { space, amps })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn amplitude(&self, mode: ModeIndex) -> Result<C<T>> {
        Ok(self.amps[self.space.try_index(mode)?])
    }

    pub fn probability(&self, mode: ModeIndex) -> Result<T> {
        Ok(self.amplitude(mode)?.norm_sqr())
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, C<T>)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.space.mode(i), a))
    }

    /// Probability summed over OAM for every (rail, pol) cell, canonical order.
    pub fn port_marginals(&self) -> Vec<(usize, Pol, T)> {
        let block = self.space.ell_count();
        self.amps
            .chunks(block)
            .enumerate()
            .map(|(rp, chunk)| {
                let p = chunk.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
                (rp / 2, Pol::from_index(rp % 2), p)
            })
            .collect()
    }
}
