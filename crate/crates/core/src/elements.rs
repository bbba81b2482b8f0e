//! Unitaries of the individual optical elements on a hybrid mode space.
//!
//! Single-rail elements act on one rail and leave every other rail alone.
//! Rotation angles are in radians. Shifting elements (spiral phase plates and
//! polarization-selective SLMs) refuse to push a populated mode outside the
//! OAM window; see [`Support`].

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hilbert::{compose, CMatrix, ModeIndex, Operator, Pol, Space};
use crate::scalar::{c, c_re, cis, Real, C};

/// Placed optical element. Every variant carries the rail(s) it acts on.
#[derive(Clone, Debug, PartialEq)]
pub enum Element<T> {
    /// Dove prism rotated by `alpha` about the beam axis.
    DovePrism {
        alpha: T,
        rail: usize,
    },
    /// Half-wave plate with slow axis at `theta`.
    HalfWavePlate {
        theta: T,
        rail: usize,
    },
    /// Polarization-selective Dove prism, unrotated.
    Psdp {
        rail: usize,
    },
    /// Polarization-selective Dove prism rotated by `alpha`, compensated by
    /// half-wave plates at `alpha / 2` on either side.
    PsdpRotated {
        alpha: T,
        rail: usize,
    },
    /// Spiral phase plate adding `q` units of OAM.
    SpiralPhasePlate {
        q: i32,
        rail: usize,
    },
    /// SLM fork hologram that shifts OAM by `shift` on one polarization only.
    SelectiveSlm {
        pol: Pol,
        shift: i32,
        rail: usize,
    },
    BeamSplitter {
        rail_a: usize,
        rail_b: usize,
    },
    PolarizingBeamSplitter {
        rail_a: usize,
        rail_b: usize,
    },
    Mirror {
        rail: usize,
    },
    /// Hadamard on the two-level OAM subspace `{ell_plus, ell_minus}`.
    OamHadamard {
        ell_plus: i32,
        ell_minus: i32,
        rail: usize,
    },
    /// Two Dove prisms at relative angle `pi * n / modulus`.
    ZPower {
        n: i32,
        modulus: u32,
        rail: usize,
    },
}

/// Element families, used for resource accounting. Both PSDP variants count
/// as one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Bs,
    Dove,
    Hwp,
    Mirror,
    OamHadamard,
    Pbs,
    Psdp,
    Slm,
    Spp,
    ZPower,
}

impl ElementKind {
    pub fn label(self) -> &'static str {
        match self {
            ElementKind::Bs => "BS",
            ElementKind::Dove => "DP",
            ElementKind::Hwp => "HWP",
            ElementKind::Mirror => "MIRROR",
            ElementKind::OamHadamard => "OAM_H",
            ElementKind::Pbs => "PBS",
            ElementKind::Psdp => "PSDP",
            ElementKind::Slm => "SLM",
            ElementKind::Spp => "SPP",
            ElementKind::ZPower => "Z",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Set of basis modes known to carry amplitude. Shifting elements only check
/// the window for modes in the support; modes outside it are wrapped
/// cyclically inside the window so the operator stays unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    mask: Vec<bool>,
}

impl Support {
    pub fn full(space: Space) -> Self {
        Support {
            mask: vec![true; space.dim()],
        }
    }

    pub fn empty(space: Space) -> Self {
        Support {
            mask: vec![false; space.dim()],
        }
    }

    pub fn from_modes(space: Space, modes: impl IntoIterator<Item = ModeIndex>) -> Result<Self> {
        let mut s = Self::empty(space);
        for m in modes {
            s.mask[space.try_index(m)?] = true;
        }
        Ok(s)
    }

    pub(crate) fn from_mask(mask: Vec<bool>) -> Self {
        Support { mask }
    }

    pub fn contains(&self, space: Space, mode: ModeIndex) -> bool {
        space
            .index_of(mode)
            .map(|i| self.mask.get(i).copied().unwrap_or(false))
            .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Real> Element<T> {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::DovePrism { .. } => ElementKind::Dove,
            Element::HalfWavePlate { .. } => ElementKind::Hwp,
            Element::Psdp { .. } | Element::PsdpRotated { .. } => ElementKind::Psdp,
            Element::SpiralPhasePlate { .. } => ElementKind::Spp,
            Element::SelectiveSlm { .. } => ElementKind::Slm,
            Element::BeamSplitter { .. } => ElementKind::Bs,
            Element::PolarizingBeamSplitter { .. } => ElementKind::Pbs,
            Element::Mirror { .. } => ElementKind::Mirror,
            Element::OamHadamard { .. } => ElementKind::OamHadamard,
            Element::ZPower { .. } => ElementKind::ZPower,
        }
    }

    pub fn rails(&self) -> Vec<usize> {
        match *self {
            Element::BeamSplitter { rail_a, rail_b }
            | Element::PolarizingBeamSplitter { rail_a, rail_b } => vec![rail_a, rail_b],
            Element::DovePrism { rail, .. }
            | Element::HalfWavePlate { rail, .. }
            | Element::Psdp { rail }
            | Element::PsdpRotated { rail, .. }
            | Element::SpiralPhasePlate { rail, .. }
            | Element::SelectiveSlm { rail, .. }
            | Element::Mirror { rail }
            | Element::OamHadamard { rail, .. }
            | Element::ZPower { rail, .. } => vec![rail],
        }
    }

    /// Checks placement and parameters against a space without building.
    pub fn validate(&self, space: Space) -> Result<()> {
        for r in self.rails() {
            space.check_rail(r)?;
        }
        match *self {
            Element::BeamSplitter { rail_a, rail_b }
            | Element::PolarizingBeamSplitter { rail_a, rail_b }
                if rail_a == rail_b =>
            {
                Err(Error::InvalidElement(format!(
                    "two-rail element needs distinct rails, got {rail_a} twice"
                )))
            }
            Element::SpiralPhasePlate { q: shift, .. } | Element::SelectiveSlm { shift, .. } => {
                check_shift_bound(shift, space)
            }
            Element::OamHadamard {
                ell_plus,
                ell_minus,
                ..
            } => check_oam_pair(ell_plus, ell_minus, space),
            Element::ZPower { modulus, .. } if modulus < 2 => Err(Error::InvalidElement(format!(
                "Z power modulus must be at least 2, got {modulus}"
            ))),
            _ => Ok(()),
        }
    }

    /// Builds the element's unitary. `support` restricts the window check of
    /// shifting elements; `None` checks every mode.
    pub fn build(&self, space: Space, support: Option<&Support>) -> Result<Operator<T>> {
        self.validate(space)?;
        match *self {
            Element::DovePrism { alpha, rail } => dove(alpha, rail, space),
            Element::HalfWavePlate { theta, rail } => hwp(theta, rail, space),
            Element::Psdp { rail } => psdp(rail, space),
            Element::PsdpRotated { alpha, rail } => psdp_rotated(alpha, rail, space),
            Element::SpiralPhasePlate { q, rail } => spp(q, rail, space, support),
            Element::SelectiveSlm { pol, shift, rail } => {
                slm_selective(pol, shift, rail, space, support)
            }
            Element::BeamSplitter { rail_a, rail_b } => bs(rail_a, rail_b, space),
            Element::PolarizingBeamSplitter { rail_a, rail_b } => pbs(rail_a, rail_b, space),
            Element::Mirror { rail } => mirror(rail, space),
            Element::OamHadamard {
                ell_plus,
                ell_minus,
                rail,
            } => oam_hadamard(ell_plus, ell_minus, rail, space),
            Element::ZPower { n, modulus, rail } => z_power(n, modulus, rail, space),
        }
    }
}

fn check_shift_bound(shift: i32, space: Space) -> Result<()> {
    if shift.unsigned_abs() > 2 * space.window() {
        Err(Error::InvalidElement(format!(
            "OAM shift {shift} exceeds twice the window {}",
            space.window()
        )))
    } else {
        Ok(())
    }
}

fn check_oam_pair(plus: i32, minus: i32, space: Space) -> Result<()> {
    if plus == minus {
        return Err(Error::InvalidElement(format!(
            "OAM Hadamard needs two distinct modes, got {plus} twice"
        )));
    }
    for ell in [plus, minus] {
        if !space.ell_in_window(ell) {
            return Err(Error::InvalidElement(format!(
                "OAM Hadamard mode {ell} outside window {}",
                space.window()
            )));
        }
    }
    Ok(())
}

/// Operator acting through `local` on one rail and as identity elsewhere.
/// `local(pol, ell)` returns the `(pol, ell, amplitude)` images of a mode.
fn on_rail<T, F>(space: Space, rail: usize, local: F) -> Result<Operator<T>>
where
    T: Real,
    F: Fn(Pol, i32) -> Result<Vec<(Pol, i32, C<T>)>>,
{
    space.check_rail(rail)?;
    Operator::from_columns(space, |m| {
        if m.rail != rail {
            return Ok(vec![(m, C::one())]);
        }
        Ok(local(m.pol, m.ell)?
            .into_iter()
            .map(|(p, l, a)| (ModeIndex::new(rail, p, l), a))
            .collect())
    })
}

/// Dove prism rotated by `alpha`: `|pol, ell> -> e^{i 2 ell alpha} |pol, -ell>`
/// on both polarizations.
pub fn dove<T: Real>(alpha: T, rail: usize, space: Space) -> Result<Operator<T>> {
    let two = T::lit(2.0);
    on_rail(space, rail, |pol, ell| {
        let phase = cis(two * T::from_i32(ell).unwrap() * alpha);
        Ok(vec![(pol, -ell, phase)])
    })
}

/// 2x2 rotation `[[cos a, -sin a], [sin a, cos a]]` in the (H, V) basis.
pub fn rotation<T: Real>(alpha: T) -> CMatrix<T> {
    let (s, co) = alpha.sin_cos();
    CMatrix::from_rows(vec![vec![c_re(co), c_re(-s)], vec![c_re(s), c_re(co)]]).expect("2x2")
}

/// Jones matrix of a half-wave plate with slow axis at `theta`:
/// `i [[cos 2t, sin 2t], [sin 2t, -cos 2t]]`.
pub fn hwp_jones<T: Real>(theta: T) -> CMatrix<T> {
    let (s, co) = (T::lit(2.0) * theta).sin_cos();
    let i = c(T::zero(), T::one());
    CMatrix::from_rows(vec![vec![i * co, i * s], vec![i * s, -i * co]]).expect("2x2")
}

/// Lifts a 2x2 Jones matrix to the full space on one rail; OAM untouched.
pub fn polarization_op<T: Real>(
    jones: &CMatrix<T>,
    rail: usize,
    space: Space,
) -> Result<Operator<T>> {
    if jones.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: jones.dim(),
        });
    }
    on_rail(space, rail, |pol, ell| {
        Ok(Pol::ALL
            .iter()
            .map(|&out| (out, ell, jones[(out.index(), pol.index())]))
            .filter(|(_, _, a)| !a.is_zero())
            .collect())
    })
}

pub fn hwp<T: Real>(theta: T, rail: usize, space: Space) -> Result<Operator<T>> {
    polarization_op(&hwp_jones(theta), rail, space)
}

/// `|H><H| (x) 1 + |V><V| (x) U_s(alpha)` written down directly.
fn selective_dove<T: Real>(alpha: T, rail: usize, space: Space) -> Result<Operator<T>> {
    let two = T::lit(2.0);
    on_rail(space, rail, |pol, ell| {
        Ok(match pol {
            Pol::H => vec![(pol, ell, C::one())],
            Pol::V => vec![(pol, -ell, cis(two * T::from_i32(ell).unwrap() * alpha))],
        })
    })
}

/// Unrotated PSDP: H modes pass, V modes have `ell -> -ell`.
pub fn psdp<T: Real>(rail: usize, space: Space) -> Result<Operator<T>> {
    selective_dove(T::zero(), rail, space)
}

/// Rotated PSDP assembly. Built as the physical stack
/// `H(alpha/2) . R(alpha) J_alpha R(-alpha) . H(alpha/2)`, which equals
/// `-J_alpha` on the acting rail. The stack is only a consistency check: the
/// directly written `J_alpha` is returned once the two agree.
pub fn psdp_rotated<T: Real>(alpha: T, rail: usize, space: Space) -> Result<Operator<T>> {
    let j_alpha = selective_dove(alpha, rail, space)?;
    let rot = polarization_op(&rotation(alpha), rail, space)?;
    let rot_back = polarization_op(&rotation(-alpha), rail, space)?;
    let plate = hwp(alpha / T::lit(2.0), rail, space)?;

    let crystal = compose(&rot, &compose(&j_alpha, &rot_back)?)?;
    let sandwich = compose(&plate, &compose(&crystal, &plate)?)?;

    // The identity holds on the acting rail only; other rails stay untouched.
    let flip = polarization_op(&CMatrix::identity(2).scale(c_re(-T::one())), rail, space)?;
    let minus_j = compose(&flip, &j_alpha)?;
    let defect = sandwich.matrix().max_abs_diff(minus_j.matrix())?;
    if defect > T::element_tol() {
        return Err(Error::SelfCheck(format!(
            "rotated PSDP sandwich deviates from -J_alpha by {defect}"
        )));
    }
    Ok(j_alpha)
}

fn wrap_ell(ell: i32, window: u32) -> i32 {
    let w = window as i32;
    (ell + w).rem_euclid(2 * w + 1) - w
}

/// Shared body of the shifting elements. `acts_on(pol)` selects the
/// polarizations that get shifted.
fn shift_op<T: Real>(
    shift: i32,
    acts_on: impl Fn(Pol) -> bool,
    rail: usize,
    space: Space,
    support: Option<&Support>,
) -> Result<Operator<T>> {
    space.check_rail(rail)?;
    check_shift_bound(shift, space)?;
    let window = space.window();
    for pol in Pol::ALL.into_iter().filter(|&p| acts_on(p)) {
        for ell in space.ells() {
            let mode = ModeIndex::new(rail, pol, ell);
            let populated = support.is_none_or(|s| s.contains(space, mode));
            if populated && !space.ell_in_window(ell + shift) {
                return Err(Error::WindowOverflow {
                    mode,
                    shift,
                    window,
                });
            }
        }
    }
    on_rail(space, rail, |pol, ell| {
        let target = if acts_on(pol) {
            wrap_ell(ell + shift, window)
        } else {
            ell
        };
        Ok(vec![(pol, target, C::one())])
    })
}

/// Spiral phase plate: `|pol, ell> -> |pol, ell + q>` on both polarizations.
pub fn spp<T: Real>(
    q: i32,
    rail: usize,
    space: Space,
    support: Option<&Support>,
) -> Result<Operator<T>> {
    shift_op(q, |_| true, rail, space, support)
}

/// OAM shift applied to one polarization only.
pub fn slm_selective<T: Real>(
    pol: Pol,
    shift: i32,
    rail: usize,
    space: Space,
    support: Option<&Support>,
) -> Result<Operator<T>> {
    shift_op(shift, |p| p == pol, rail, space, support)
}

fn check_pair(rail_a: usize, rail_b: usize, space: Space) -> Result<()> {
    space.check_rail(rail_a)?;
    space.check_rail(rail_b)?;
    if rail_a == rail_b {
        return Err(Error::InvalidElement(format!(
            "two-rail element needs distinct rails, got {rail_a} twice"
        )));
    }
    Ok(())
}

/// Balanced beamsplitter `(1/sqrt 2) [[1, 1], [1, -1]]` on the rail pair,
/// identical for every (pol, ell).
pub fn bs<T: Real>(rail_a: usize, rail_b: usize, space: Space) -> Result<Operator<T>> {
    check_pair(rail_a, rail_b, space)?;
    let s = c_re(T::FRAC_1_SQRT_2());
    Operator::from_columns(space, |m| {
        let a = ModeIndex::new(rail_a, m.pol, m.ell);
        let b = ModeIndex::new(rail_b, m.pol, m.ell);
        Ok(if m.rail == rail_a {
            vec![(a, s), (b, s)]
        } else if m.rail == rail_b {
            vec![(a, s), (b, -s)]
        } else {
            vec![(m, C::one())]
        })
    })
}

/// Polarizing beamsplitter: H transmits (keeps its rail), V swaps rails.
pub fn pbs<T: Real>(rail_a: usize, rail_b: usize, space: Space) -> Result<Operator<T>> {
    check_pair(rail_a, rail_b, space)?;
    Operator::from_columns(space, |m| {
        let rail = match (m.pol, m.rail) {
            (Pol::V, r) if r == rail_a => rail_b,
            (Pol::V, r) if r == rail_b => rail_a,
            (_, r) => r,
        };
        Ok(vec![(ModeIndex::new(rail, m.pol, m.ell), C::one())])
    })
}

/// Idealized mirror.
pub fn mirror<T: Real>(rail: usize, space: Space) -> Result<Operator<T>> {
    space.check_rail(rail)?;
    Ok(Operator::identity(space))
}

/// Hadamard on `{|ell_plus>, |ell_minus>}` for both polarizations.
pub fn oam_hadamard<T: Real>(
    ell_plus: i32,
    ell_minus: i32,
    rail: usize,
    space: Space,
) -> Result<Operator<T>> {
    check_oam_pair(ell_plus, ell_minus, space)?;
    let s = c_re(T::FRAC_1_SQRT_2());
    on_rail(space, rail, |pol, ell| {
        Ok(if ell == ell_plus {
            vec![(pol, ell_plus, s), (pol, ell_minus, s)]
        } else if ell == ell_minus {
            vec![(pol, ell_plus, s), (pol, ell_minus, -s)]
        } else {
            vec![(pol, ell, C::one())]
        })
    })
}

/// `dove(0) . dove(pi n / modulus)`: diagonal with `e^{i 2 pi ell n / modulus}`.
pub fn z_power<T: Real>(n: i32, modulus: u32, rail: usize, space: Space) -> Result<Operator<T>> {
    if modulus < 2 {
        return Err(Error::InvalidElement(format!(
            "Z power modulus must be at least 2, got {modulus}"
        )));
    }
    let alpha = T::PI() * T::from_i32(n).unwrap() / T::from_u32(modulus).unwrap();
    compose(&dove(T::zero(), rail, space)?, &dove(alpha, rail, space)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{apply, check_unitary, equal_up_to_global_phase, State};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    const TOL: f64 = 1e-12;

    fn sp(rails: usize, window: u32) -> Space {
        Space::new(rails, window).unwrap()
    }

    fn m(rail: usize, pol: Pol, ell: i32) -> ModeIndex {
        ModeIndex::new(rail, pol, ell)
    }

    fn amp(op: &Operator<f64>, to: ModeIndex, from: ModeIndex) -> C<f64> {
        op.amplitude(to, from).unwrap()
    }

    fn close(a: C<f64>, b: C<f64>) -> bool {
        (a - b).norm() <= TOL
    }

    #[test]
    fn dove_unrotated_flips_ell() {
        let u = dove(0.0, 0, sp(1, 1)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::H, -1), m(0, Pol::H, 1)),
            c(1.0, 0.0)
        ));
    }

    #[test]
    fn dove_quarter_turn_adds_pi_phase() {
        let u = dove(FRAC_PI_2, 0, sp(1, 1)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::V, -1), m(0, Pol::V, 1)),
            c(-1.0, 0.0)
        ));
    }

    #[test]
    fn dove_fixes_zero_mode() {
        for alpha in [0.0, 0.3, 1.7] {
            let u = dove(alpha, 0, sp(1, 2)).unwrap();
            assert!(close(
                amp(&u, m(0, Pol::H, 0), m(0, Pol::H, 0)),
                c(1.0, 0.0)
            ));
        }
    }

    #[test]
    fn dove_only_touches_its_rail() {
        let u = dove(0.4, 1, sp(2, 1)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::H, 1), m(0, Pol::H, 1)),
            c(1.0, 0.0)
        ));
    }

    #[test]
    fn hwp_zero_is_diag_i_minus_i() {
        let j = hwp_jones(0.0f64);
        assert!(close(j[(0, 0)], c(0.0, 1.0)));
        assert!(close(j[(1, 1)], c(0.0, -1.0)));
        assert!(close(j[(0, 1)], c(0.0, 0.0)));
    }

    #[test]
    fn hwp_eighth_turn_makes_diagonal() {
        let u = hwp(FRAC_PI_8, 0, sp(1, 0)).unwrap();
        let out = apply(&u, &State::basis(sp(1, 0), m(0, Pol::H, 0)).unwrap()).unwrap();
        let expect = c(0.0, FRAC_1_SQRT_2);
        assert!(close(out.amplitude(m(0, Pol::H, 0)).unwrap(), expect));
        assert!(close(out.amplitude(m(0, Pol::V, 0)).unwrap(), expect));
    }

    #[test]
    fn hwp_quarter_turn_swaps_with_i() {
        let u = hwp(FRAC_PI_4, 0, sp(1, 0)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::V, 0), m(0, Pol::H, 0)),
            c(0.0, 1.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::H, 0), m(0, Pol::V, 0)),
            c(0.0, 1.0)
        ));
    }

    #[test]
    fn hwp_squares_to_minus_identity() {
        let space = sp(1, 1);
        for theta in [0.0, 0.2, FRAC_PI_8, 1.1] {
            let h = hwp(theta, 0, space).unwrap();
            let sq = compose(&h, &h).unwrap();
            let minus_id = Operator::identity(space).scale(c(-1.0, 0.0));
            assert!(sq.matrix().max_abs_diff(minus_id.matrix()).unwrap() <= TOL);
            assert!(equal_up_to_global_phase(
                &sq,
                &Operator::identity(space),
                TOL
            ));
        }
    }

    #[test]
    fn psdp_examples() {
        let u = psdp::<f64>(0, sp(1, 1)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::H, 1), m(0, Pol::H, 1)),
            c(1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::V, -1), m(0, Pol::V, 1)),
            c(1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::V, 0), m(0, Pol::V, 0)),
            c(1.0, 0.0)
        ));
    }

    #[test]
    fn psdp_rotated_zero_is_psdp() {
        let space = sp(1, 3);
        let a = psdp_rotated(0.0, 0, space).unwrap();
        let b = psdp(0, space).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() <= TOL);
    }

    #[test]
    fn psdp_rotated_quarter_turn() {
        let u = psdp_rotated(FRAC_PI_2, 0, sp(1, 2)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::V, -1), m(0, Pol::V, 1)),
            c(-1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::H, 1), m(0, Pol::H, 1)),
            c(1.0, 0.0)
        ));
    }

    #[test]
    fn psdp_rotated_eighth_turn_on_ell_two() {
        // e^{i 2 * 2 * pi/4} = e^{i pi}
        let u = psdp_rotated(FRAC_PI_4, 0, sp(1, 2)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::V, -2), m(0, Pol::V, 2)),
            c(PI.cos(), PI.sin())
        ));
    }

    #[test]
    fn psdp_rotated_is_identity_on_h() {
        let space = sp(1, 3);
        for alpha in [0.1, 0.7, 2.9] {
            let u = psdp_rotated(alpha, 0, space).unwrap();
            let h_modes: Vec<_> = space.ells().map(|l| m(0, Pol::H, l)).collect();
            let block = u.restrict(&h_modes).unwrap();
            assert!(
                block
                    .max_abs_diff(&CMatrix::identity(h_modes.len()))
                    .unwrap()
                    <= TOL
            );
        }
    }

    #[test]
    fn rotation_examples() {
        let id = CMatrix::<f64>::identity(2);
        assert!(rotation(0.0).max_abs_diff(&id).unwrap() <= TOL);
        let quarter = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        assert!(rotation(FRAC_PI_2).max_abs_diff(&quarter).unwrap() <= TOL);
        let prod = rotation(0.83).mul(&rotation(-0.83)).unwrap();
        assert!(prod.max_abs_diff(&id).unwrap() <= TOL);
    }

    fn support(space: Space, pols: &[Pol], ells: &[i32]) -> Support {
        Support::from_modes(
            space,
            pols.iter()
                .flat_map(|&p| ells.iter().map(move |&l| m(0, p, l))),
        )
        .unwrap()
    }

    #[test]
    fn spp_shifts_populated_modes() {
        let space = sp(1, 2);
        let s = support(space, &[Pol::H, Pol::V], &[-2, -1, 0, 1]);
        let up = spp::<f64>(1, 0, space, Some(&s)).unwrap();
        assert!(close(
            amp(&up, m(0, Pol::H, -1), m(0, Pol::H, -2)),
            c(1.0, 0.0)
        ));
        let s = support(space, &[Pol::H], &[2]);
        let down = spp::<f64>(-1, 0, space, Some(&s)).unwrap();
        assert!(close(
            amp(&down, m(0, Pol::H, 1), m(0, Pol::H, 2)),
            c(1.0, 0.0)
        ));
    }

    #[test]
    fn spp_zero_is_identity() {
        let space = sp(1, 2);
        let u = spp::<f64>(0, 0, space, None).unwrap();
        assert_eq!(u, Operator::identity(space));
    }

    #[test]
    fn spp_refuses_window_overflow() {
        let space = sp(1, 2);
        let err = spp::<f64>(1, 0, space, None).unwrap_err();
        assert!(matches!(err, Error::WindowOverflow { shift: 1, .. }));
        let s = support(space, &[Pol::V], &[2]);
        assert!(spp::<f64>(1, 0, space, Some(&s)).is_err());
    }

    #[test]
    fn spp_shift_bound() {
        assert!(matches!(
            spp::<f64>(5, 0, sp(1, 2), None),
            Err(Error::InvalidElement(_))
        ));
    }

    #[test]
    fn spp_inverse_pair() {
        let space = sp(1, 3);
        let s = support(space, &[Pol::H, Pol::V], &[-2, -1, 0, 1, 2]);
        let up = spp::<f64>(1, 0, space, Some(&s)).unwrap();
        let down = spp::<f64>(-1, 0, space, Some(&s)).unwrap();
        let id = compose(&down, &up).unwrap();
        assert_eq!(id, Operator::identity(space));
    }

    #[test]
    fn slm_acts_on_one_polarization() {
        let space = sp(1, 2);
        let s = support(space, &[Pol::H], &[-2, 0]);
        let u = slm_selective::<f64>(Pol::H, 2, 0, space, Some(&s)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::H, 0), m(0, Pol::H, -2)),
            c(1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::V, -1), m(0, Pol::V, -1)),
            c(1.0, 0.0)
        ));

        let s = support(space, &[Pol::V], &[0]);
        let u = slm_selective::<f64>(Pol::V, 2, 0, space, Some(&s)).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::V, 2), m(0, Pol::V, 0)),
            c(1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(0, Pol::H, 0), m(0, Pol::H, 0)),
            c(1.0, 0.0)
        ));

        let u = slm_selective::<f64>(Pol::H, 0, 0, space, None).unwrap();
        assert_eq!(u, Operator::identity(space));
    }

    #[test]
    fn slm_checks_only_selected_polarization() {
        let space = sp(1, 2);
        // V at ell = 2 is populated but the SLM only shifts H.
        let s = support(space, &[Pol::H], &[0]);
        let mut s2 = s.clone();
        s2.mask[space.index_of(m(0, Pol::V, 2)).unwrap()] = true;
        assert!(slm_selective::<f64>(Pol::H, 2, 0, space, Some(&s2)).is_ok());
    }

    #[test]
    fn beamsplitter_convention() {
        let space = sp(2, 1);
        let u = bs::<f64>(0, 1, space).unwrap();
        let s = c(FRAC_1_SQRT_2, 0.0);
        let a = m(0, Pol::H, 1);
        let b = m(1, Pol::H, 1);
        assert!(close(amp(&u, a, a), s));
        assert!(close(amp(&u, b, a), s));
        assert!(close(amp(&u, a, b), s));
        assert!(close(amp(&u, b, b), -s));
        let twice = compose(&u, &u).unwrap();
        assert!(
            twice
                .matrix()
                .max_abs_diff(&CMatrix::identity(space.dim()))
                .unwrap()
                <= TOL
        );
    }

    #[test]
    fn two_rail_elements_reject_same_rail() {
        assert!(bs::<f64>(1, 1, sp(2, 0)).is_err());
        assert!(pbs::<f64>(0, 0, sp(2, 0)).is_err());
        assert!(pbs::<f64>(0, 2, sp(2, 0)).is_err());
    }

    #[test]
    fn pbs_transmits_h_reflects_v() {
        let space = sp(2, 1);
        let u = pbs::<f64>(0, 1, space).unwrap();
        assert!(close(
            amp(&u, m(0, Pol::H, 1), m(0, Pol::H, 1)),
            c(1.0, 0.0)
        ));
        assert!(close(
            amp(&u, m(1, Pol::V, -1), m(0, Pol::V, -1)),
            c(1.0, 0.0)
        ));
        assert_eq!(compose(&u, &u).unwrap(), Operator::identity(space));
    }

    #[test]
    fn mirror_is_identity() {
        let space = sp(2, 1);
        let a = mirror::<f64>(1, space).unwrap();
        assert_eq!(compose(&a, &a).unwrap(), Operator::identity(space));
        assert!(mirror::<f64>(2, space).is_err());
    }

    #[test]
    fn oam_hadamard_examples() {
        let space = sp(1, 1);
        let u = oam_hadamard::<f64>(1, -1, 0, space).unwrap();
        let psi = State::uniform(space, &[m(0, Pol::H, 1), m(0, Pol::H, -1)]).unwrap();
        let out = apply(&u, &psi).unwrap();
        assert!(close(out.amplitude(m(0, Pol::H, 1)).unwrap(), c(1.0, 0.0)));
        assert!(
            compose(&u, &u)
                .unwrap()
                .matrix()
                .max_abs_diff(&CMatrix::identity(space.dim()))
                .unwrap()
                <= TOL
        );
        assert!(close(
            amp(&u, m(0, Pol::V, 0), m(0, Pol::V, 0)),
            c(1.0, 0.0)
        ));
        assert!(oam_hadamard::<f64>(1, 1, 0, space).is_err());
        assert!(oam_hadamard::<f64>(2, 1, 0, space).is_err());
    }

    #[test]
    fn z_power_examples() {
        let space = sp(1, 2);
        let z = z_power::<f64>(1, 2, 0, space).unwrap();
        assert!(close(
            amp(&z, m(0, Pol::H, 1), m(0, Pol::H, 1)),
            c(-1.0, 0.0)
        ));
        assert!(close(
            amp(&z, m(0, Pol::H, 0), m(0, Pol::H, 0)),
            c(1.0, 0.0)
        ));
        let z0 = z_power::<f64>(0, 5, 0, space).unwrap();
        assert!(
            z0.matrix()
                .max_abs_diff(&CMatrix::identity(space.dim()))
                .unwrap()
                <= TOL
        );
        let z4 = z_power::<f64>(1, 4, 0, space).unwrap();
        assert!(close(
            amp(&z4, m(0, Pol::V, 1), m(0, Pol::V, 1)),
            c(0.0, 1.0)
        ));
        assert!(z_power::<f64>(1, 1, 0, space).is_err());
    }

    #[test]
    fn every_builder_is_unitary() {
        let space = sp(2, 3);
        let s = support(space, &[Pol::H, Pol::V], &[-1, 0, 1]);
        let ops = vec![
            dove(0.37, 0, space).unwrap(),
            hwp(0.21, 1, space).unwrap(),
            psdp(0, space).unwrap(),
            psdp_rotated(1.0, 1, space).unwrap(),
            spp(2, 0, space, Some(&s)).unwrap(),
            slm_selective(Pol::V, -2, 0, space, Some(&s)).unwrap(),
            bs(0, 1, space).unwrap(),
            pbs(1, 0, space).unwrap(),
            mirror(0, space).unwrap(),
            oam_hadamard(2, -3, 1, space).unwrap(),
            z_power(3, 7, 0, space).unwrap(),
        ];
        for op in &ops {
            assert!(check_unitary(op, TOL));
        }
    }

    #[test]
    fn element_kind_merges_psdp_variants() {
        let a: Element<f64> = Element::Psdp { rail: 0 };
        let b = Element::PsdpRotated {
            alpha: 0.5,
            rail: 0,
        };
        assert_eq!(a.kind(), b.kind());
        assert_eq!(a.kind().label(), "PSDP");
    }

    #[test]
    fn works_in_single_precision() {
        let space = sp(1, 2);
        let u = psdp_rotated(0.6f32, 0, space).unwrap();
        assert!(u.matrix().is_unitary(1e-5));
    }
}
