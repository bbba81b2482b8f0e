//! Circuits as ordered element stages, their compilation to unitaries, and the
//! named constructions built from them.

mod gates;
mod library;
mod resources;
mod sort;

use std::collections::BTreeSet;

pub use gates::{
    check_gate, cnot_matrix, oam_hadamard_matrix, polarization_hadamard_matrix, qubit_modes,
    three_cnot_swap, GateCheck, GateName, GateRow,
};
pub use library::{
    cnot, mz_sorter, mz_tree, pauli_x_power, pos, pos_core, pos_inverse, pos_tree, swap,
    tree_window, z_gate, DEFAULT_WINDOW, X_SUBSPACE,
};
pub use resources::resource_count;
pub use sort::{run_sort, SortCell, SortReport, SortRow};

use crate::elements::{Element, ElementKind, Support};
use crate::error::{Error, Result};
use crate::hilbert::{compose, ModeIndex, Operator, Pol, Space};
use crate::scalar::Real;

/// Modes a circuit is specified on: one polarization and a set of OAM values,
/// on every rail. Shifting elements only check the window for modes reachable
/// from this subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSubspace {
    pol: Pol,
    ells: BTreeSet<i32>,
}

impl ActiveSubspace {
    pub fn new(pol: Pol, ells: impl IntoIterator<Item = i32>) -> Self {
        ActiveSubspace {
            pol,
            ells: ells.into_iter().collect(),
        }
    }

    pub fn pol(&self) -> Pol {
        self.pol
    }

    pub fn ells(&self) -> &BTreeSet<i32> {
        &self.ells
    }

    pub fn contains(&self, mode: ModeIndex) -> bool {
        mode.pol == self.pol && self.ells.contains(&mode.ell)
    }

    /// Active modes of `space` in canonical order.
    pub fn modes(&self, space: Space) -> Vec<ModeIndex> {
        space.modes().filter(|&m| self.contains(m)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    space: Space,
    stages: Vec<Element<T>>,
    active: Option<ActiveSubspace>,
}

impl<T: Real> Circuit<T> {
    pub fn new(space: Space) -> Self {
        Circuit {
            space,
            stages: Vec::new(),
            active: None,
        }
    }

    pub fn with_active(mut self, active: ActiveSubspace) -> Result<Self> {
        self.set_active(Some(active))?;
        Ok(self)
    }

    pub fn set_active(&mut self, active: Option<ActiveSubspace>) -> Result<()> {
        if let Some(a) = &active {
            if let Some(&ell) = a.ells.iter().find(|&&l| !self.space.ell_in_window(l)) {
                return Err(Error::ModeOutOfSpace(ModeIndex::new(0, a.pol, ell)));
            }
        }
        self.active = active;
        Ok(())
    }

    pub fn push(&mut self, stage: Element<T>) -> Result<()> {
        stage.validate(self.space)?;
        self.stages.push(stage);
        Ok(())
    }

    pub fn extend(&mut self, stages: impl IntoIterator<Item = Element<T>>) -> Result<()> {
        stages.into_iter().try_for_each(|s| self.push(s))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn stages(&self) -> &[Element<T>] {
        &self.stages
    }

    pub fn active(&self) -> Option<&ActiveSubspace> {
        self.active.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Same stages and active subspace on a different OAM window.
    pub fn retarget(&self, window: u32) -> Result<Self> {
        let mut c = Circuit::new(Space::new(self.space.rails(), window)?);
        c.set_active(self.active.clone())?;
        c.extend(self.stages.iter().cloned())?;
        Ok(c)
    }

    /// Ordered product of the stage unitaries, first stage applied first.
    pub fn compile(&self) -> Result<Operator<T>> {
        let space = self.space;
        let active_cols = self
            .active
            .as_ref()
            .map(|a| {
                a.modes(space)
                    .into_iter()
                    .map(|m| space.try_index(m))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;

        let mut acc = Operator::identity(space);
        for stage in &self.stages {
            let support = match (&active_cols, stage.kind()) {
                (Some(cols), ElementKind::Spp | ElementKind::Slm) => {
                    Some(reachable(&acc, cols, T::circuit_tol()))
                }
                _ => None,
            };
            let op = stage.build(space, support.as_ref())?;
            acc = compose(&op, &acc)?;
        }

        let defect = acc.matrix().unitarity_defect();
        if defect > T::circuit_tol() {
            return Err(Error::NotUnitary(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(acc)
    }
}

/// Rows of `acc` carrying amplitude above `tol` from any of `cols`.
fn reachable<T: Real>(acc: &Operator<T>, cols: &[usize], tol: T) -> Support {
    let m = acc.matrix();
    let mask = (0..m.dim())
        .map(|r| cols.iter().any(|&col| m[(r, col)].norm() > tol))
        .collect();
    Support::from_mask(mask)
}

pub fn compile<T: Real>(circuit: &Circuit<T>) -> Result<Operator<T>> {
    circuit.compile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    #[test]
    fn empty_circuit_is_identity() {
        let space = Space::new(2, 2).unwrap();
        let c = Circuit::<f64>::new(space);
        assert_eq!(c.compile().unwrap(), Operator::identity(space));
    }

    #[test]
    fn double_dove_is_identity() {
        let space = Space::new(1, 3).unwrap();
        let mut c = Circuit::<f64>::new(space);
        c.push(Element::DovePrism {
            alpha: 0.0,
            rail: 0,
        })
        .unwrap();
        c.push(Element::DovePrism {
            alpha: 0.0,
            rail: 0,
        })
        .unwrap();
        assert_eq!(c.compile().unwrap(), Operator::identity(space));
    }

    #[test]
    fn push_rejects_bad_rail() {
        let mut c = Circuit::<f64>::new(Space::new(1, 1).unwrap());
        assert!(c.push(Element::Mirror { rail: 1 }).is_err());
        assert!(c
            .push(Element::BeamSplitter {
                rail_a: 0,
                rail_b: 0
            })
            .is_err());
    }

    #[test]
    fn shifting_without_active_subspace_overflows() {
        let mut c = Circuit::<f64>::new(Space::new(1, 2).unwrap());
        c.push(Element::SpiralPhasePlate { q: 1, rail: 0 }).unwrap();
        assert!(matches!(c.compile(), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn active_subspace_relaxes_window_check() {
        let space = Space::new(1, 2).unwrap();
        let mut c = Circuit::<f64>::new(space)
            .with_active(ActiveSubspace::new(Pol::H, [-2, -1, 0, 1]))
            .unwrap();
        c.push(Element::SpiralPhasePlate { q: 1, rail: 0 }).unwrap();
        c.push(Element::SpiralPhasePlate { q: -1, rail: 0 })
            .unwrap();
        assert_eq!(c.compile().unwrap(), Operator::identity(space));
        c.push(Element::SpiralPhasePlate { q: 2, rail: 0 }).unwrap();
        assert!(c.compile().is_err());
    }

    #[test]
    fn active_subspace_must_fit_window() {
        let c = Circuit::<f64>::new(Space::new(1, 1).unwrap());
        assert!(c.with_active(ActiveSubspace::new(Pol::H, [2])).is_err());
    }

    #[test]
    fn pos_stages_reproduce_hybrid_state() {
        // -(1/2)[(1 + e) |ell,H> + (1 - e) |ell,V>], e = e^{i 2 ell alpha};
        // the overall -1 comes from the two i-carrying wave plates.
        let space = Space::new(1, 4).unwrap();
        for alpha in [FRAC_PI_2, 0.3, 1.2] {
            let mut c = Circuit::<f64>::new(space);
            c.extend([
                Element::HalfWavePlate {
                    theta: FRAC_PI_8,
                    rail: 0,
                },
                Element::PsdpRotated { alpha, rail: 0 },
                Element::Psdp { rail: 0 },
                Element::HalfWavePlate {
                    theta: FRAC_PI_8,
                    rail: 0,
                },
            ])
            .unwrap();
            let u = c.compile().unwrap();
            for ell in space.ells() {
                let e = num_complex::Complex::from_polar(1.0, 2.0 * ell as f64 * alpha);
                let h = u
                    .amplitude(
                        ModeIndex::new(0, Pol::H, ell),
                        ModeIndex::new(0, Pol::H, ell),
                    )
                    .unwrap();
                let v = u
                    .amplitude(
                        ModeIndex::new(0, Pol::V, ell),
                        ModeIndex::new(0, Pol::H, ell),
                    )
                    .unwrap();
                assert!((h + (e + 1.0) * 0.5).norm() < 1e-12);
                assert!((v + (1.0 - e) * 0.5).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn retarget_keeps_stages() {
        let c = cnot::<f64>();
        let small = c.retarget(1).unwrap();
        assert_eq!(small.stages(), c.stages());
        assert_eq!(small.space().window(), 1);
        let u = small.compile().unwrap();
        assert!(u.matrix().is_unitary(1e-12));
        assert_eq!(u.dim(), 6);
    }
}
