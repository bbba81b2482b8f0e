//! Named constructions: interferometric and PSDP-based OAM sorters, the
//! polarization/OAM CNOT and SWAP, generalized Pauli X powers and Z.

use super::{ActiveSubspace, Circuit};
use crate::elements::Element;
use crate::error::{Error, Result};
use crate::hilbert::{Pol, Space};
use crate::scalar::Real;

/// OAM window used by the prebuilt circuits unless a larger one is needed.
pub const DEFAULT_WINDOW: u32 = 8;

/// OAM values of the four-dimensional subspace the X powers act on.
pub const X_SUBSPACE: [i32; 4] = [-2, -1, 0, 1];

fn space(rails: usize, window: u32) -> Space {
    Space::new(rails, window).expect("rails >= 1")
}

/// Window large enough to carry `0..n` for an `n`-mode sorter.
pub fn tree_window(n: usize) -> u32 {
    DEFAULT_WINDOW.max(n.saturating_sub(1) as u32)
}

fn tree_levels(n: usize) -> Result<u32> {
    match n {
        2 | 4 | 8 | 16 => Ok(n.trailing_zeros()),
        _ => Err(Error::UnsupportedSize(n)),
    }
}

/// Mach-Zehnder stages: input on `input`, Dove-prism arm on `arm`.
fn mz_stages<T: Real>(alpha: T, input: usize, arm: usize) -> Vec<Element<T>> {
    vec![
        Element::BeamSplitter {
            rail_a: input,
            rail_b: arm,
        },
        Element::DovePrism { alpha, rail: arm },
        Element::DovePrism {
            alpha: T::zero(),
            rail: arm,
        },
        Element::Mirror { rail: arm },
        Element::Mirror { rail: input },
        Element::BeamSplitter {
            rail_a: input,
            rail_b: arm,
        },
    ]
}

/// Polarization-domain sorter without the final PBS: H-HWP-PSDP(alpha)-PSDP(0)-HWP.
fn pos_core_stages<T: Real>(alpha: T, rail: usize) -> Vec<Element<T>> {
    let theta = T::FRAC_PI_8();
    vec![
        Element::HalfWavePlate { theta, rail },
        Element::PsdpRotated { alpha, rail },
        Element::Psdp { rail },
        Element::HalfWavePlate { theta, rail },
    ]
}

/// The PSDPs of [`pos_core_stages`] in swapped order.
fn pos_inverse_stages<T: Real>(alpha: T, rail: usize) -> Vec<Element<T>> {
    let theta = T::FRAC_PI_8();
    vec![
        Element::HalfWavePlate { theta, rail },
        Element::Psdp { rail },
        Element::PsdpRotated { alpha, rail },
        Element::HalfWavePlate { theta, rail },
    ]
}

fn build<T: Real>(space: Space, stages: Vec<Element<T>>) -> Circuit<T> {
    let mut c = Circuit::new(space);
    c.extend(stages).expect("library stages fit their space");
    c
}

/// Two-rail Mach-Zehnder sorter with the Dove-prism pair in the rail-1 arm.
/// With `alpha = pi/2`, even OAM entering rail 0 leaves on rail 0 and odd OAM
/// on rail 1.
pub fn mz_sorter<T: Real>(alpha: T) -> Circuit<T> {
    build(space(2, DEFAULT_WINDOW), mz_stages(alpha, 0, 1))
}

/// One-rail PSDP OAM sorter core (no PBS). On H input, `|ell>` leaves as
/// `-(1/2)[(1 + e)|ell,H> + (1 - e)|ell,V>]` with `e = e^{i 2 ell alpha}`.
pub fn pos_core<T: Real>(alpha: T) -> Circuit<T> {
    build(space(1, DEFAULT_WINDOW), pos_core_stages(alpha, 0))
}

/// PSDP OAM sorter followed by a PBS onto rail 1.
pub fn pos<T: Real>(alpha: T) -> Circuit<T> {
    let mut stages = pos_core_stages(alpha, 0);
    stages.push(Element::PolarizingBeamSplitter {
        rail_a: 0,
        rail_b: 1,
    });
    build(space(2, DEFAULT_WINDOW), stages)
}

pub fn pos_inverse<T: Real>(alpha: T) -> Circuit<T> {
    build(space(1, DEFAULT_WINDOW), pos_inverse_stages(alpha, 0))
}

#[derive(Clone, Copy)]
enum TreeKind {
    MachZehnder,
    Polarization,
}

/// Binary sorter tree. Level `k` uses `alpha = pi / 2^(k+1)` and pairs each
/// occupied rail `r` with the fresh rail `r + 2^k`.
///
/// A rail whose modes share residue `rho != 0` modulo `2^k` sees phases
/// `e^{i 2 ell alpha}` that are not `+-1`, so its sorter runs in a frame shifted
/// by `-rho` (spiral phase plates on both rails before, `+rho` after).
fn tree<T: Real>(n: usize, kind: TreeKind) -> Result<Circuit<T>> {
    let levels = tree_levels(n)?;
    let sp = space(n, tree_window(n));
    let mut c = Circuit::new(sp).with_active(ActiveSubspace::new(Pol::H, 0..n as i32))?;

    // (residue, polarization) carried by each occupied rail.
    let mut rails = vec![(0usize, Pol::H)];
    for k in 0..levels {
        let width = 1usize << k;
        let alpha = T::PI() / T::from_usize(2 * width).unwrap();
        let mut next = rails.clone();
        next.resize(2 * width, (0, Pol::H));
        for r in 0..width {
            let fresh = r + width;
            let (residue, pol) = rails[r];
            let shift = residue as i32;
            if shift != 0 {
                for rail in [r, fresh] {
                    c.push(Element::SpiralPhasePlate { q: -shift, rail })?;
                }
            }
            match kind {
                TreeKind::MachZehnder => {
                    c.extend(mz_stages(alpha, r, fresh))?;
                    next[r] = (residue, pol);
                    next[fresh] = (residue + width, pol);
                }
                TreeKind::Polarization => {
                    c.extend(pos_core_stages(alpha, r))?;
                    c.push(Element::PolarizingBeamSplitter {
                        rail_a: r,
                        rail_b: fresh,
                    })?;
                    // Matching phase (e = +1) keeps the input polarization,
                    // e = -1 flips it; the PBS then sends V to the other rail.
                    let (stay, moved) = match pol {
                        Pol::H => ((residue, Pol::H), (residue + width, Pol::V)),
                        Pol::V => ((residue + width, Pol::H), (residue, Pol::V)),
                    };
                    next[r] = stay;
                    next[fresh] = moved;
                }
            }
            if shift != 0 {
                for rail in [r, fresh] {
                    c.push(Element::SpiralPhasePlate { q: shift, rail })?;
                }
            }
        }
        rails = next;
    }
    Ok(c)
}

/// `n - 1` Mach-Zehnder sorters in a tree; `|ell>` (0 <= ell < n) entering
/// rail 0 leaves on rail `ell`.
pub fn mz_tree<T: Real>(n: usize) -> Result<Circuit<T>> {
    tree(n, TreeKind::MachZehnder)
}

/// `n - 1` PSDP sorters with PBSs in a tree; every `|ell>` (0 <= ell < n)
/// entering rail 0 in H leaves on its own rail.
pub fn pos_tree<T: Real>(n: usize) -> Result<Circuit<T>> {
    tree(n, TreeKind::Polarization)
}

/// Polarization-controlled NOT on OAM `{+1, -1}`: a single unrotated PSDP.
pub fn cnot<T: Real>() -> Circuit<T> {
    build(space(1, DEFAULT_WINDOW), vec![Element::Psdp { rail: 0 }])
}

/// Three PSDP CNOTs; the middle one is conjugated by Hadamards on both
/// qubits (HWP at pi/8 on polarization, OAM Hadamard on `{+1, -1}`).
pub fn swap<T: Real>() -> Circuit<T> {
    let hadamards = || {
        [
            Element::HalfWavePlate {
                theta: T::FRAC_PI_8(),
                rail: 0,
            },
            Element::OamHadamard {
                ell_plus: 1,
                ell_minus: -1,
                rail: 0,
            },
        ]
    };
    let mut stages = vec![Element::Psdp { rail: 0 }];
    stages.extend(hadamards());
    stages.push(Element::Psdp { rail: 0 });
    stages.extend(hadamards());
    stages.push(Element::Psdp { rail: 0 });
    build(space(1, DEFAULT_WINDOW), stages)
}

/// `X^k` on OAM `{-2, -1, 0, 1}` carried in H, single beam.
///
/// After the sorter core even modes sit in H and odd modes in V, so the PSDP
/// that flips the even modes is sandwiched between quarter-turn HWPs that
/// exchange the polarizations.
pub fn pauli_x_power<T: Real>(k: u32) -> Result<Circuit<T>> {
    let half_pi = T::FRAC_PI_2();
    let quarter = T::FRAC_PI_4();
    let flip_even = || {
        vec![
            Element::HalfWavePlate {
                theta: quarter,
                rail: 0,
            },
            Element::Psdp { rail: 0 },
            Element::HalfWavePlate {
                theta: quarter,
                rail: 0,
            },
        ]
    };
    let mut stages = Vec::new();
    match k {
        1 => {
            stages.push(Element::SpiralPhasePlate { q: 1, rail: 0 });
            stages.extend(pos_core_stages(half_pi, 0));
            stages.extend(flip_even());
            stages.extend(pos_inverse_stages(half_pi, 0));
        }
        2 => {
            stages.extend(pos_core_stages(half_pi, 0));
            stages.push(Element::SelectiveSlm {
                pol: Pol::H,
                shift: 2,
                rail: 0,
            });
            stages.push(Element::DovePrism {
                alpha: T::zero(),
                rail: 0,
            });
            stages.extend(pos_inverse_stages(half_pi, 0));
        }
        3 => {
            stages.extend(pos_core_stages(half_pi, 0));
            stages.extend(flip_even());
            stages.extend(pos_inverse_stages(half_pi, 0));
            stages.push(Element::SpiralPhasePlate { q: -1, rail: 0 });
        }
        other => return Err(Error::InvalidPower(other)),
    }
    let mut c = Circuit::new(space(1, DEFAULT_WINDOW))
        .with_active(ActiveSubspace::new(Pol::H, X_SUBSPACE))?;
    c.extend(stages)?;
    Ok(c)
}

/// Single-stage `Z^n` for dimension `modulus`, built from two Dove prisms.
pub fn z_gate<T: Real>(n: i32, modulus: u32) -> Result<Circuit<T>> {
    let mut c = Circuit::new(space(1, DEFAULT_WINDOW));
    c.push(Element::ZPower {
        n,
        modulus,
        rail: 0,
    })?;
    Ok(c)
}
