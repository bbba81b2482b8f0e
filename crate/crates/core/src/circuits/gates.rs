//! Truth-table checks of the prebuilt gates against their logical definitions.
//!
//! Qubit encodings: polarization H = 0, V = 1 (control, high bit); OAM +1 = 0,
//! -1 = 1 (target, low bit).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::library::{cnot, pauli_x_power, swap, z_gate, X_SUBSPACE};
use crate::error::Result;
use crate::hilbert::{CMatrix, ModeIndex, Pol};
use crate::scalar::{c_re, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateName {
    Cnot,
    Swap,
    X,
    X2,
    X3,
    Z,
}

impl GateName {
    pub const ALL: [GateName; 6] = [
        GateName::Cnot,
        GateName::Swap,
        GateName::X,
        GateName::X2,
        GateName::X3,
        GateName::Z,
    ];
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateName::Cnot => "cnot",
            GateName::Swap => "swap",
            GateName::X => "x",
            GateName::X2 => "x2",
            GateName::X3 => "x3",
            GateName::Z => "z",
        })
    }
}

impl FromStr for GateName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        GateName::ALL
            .into_iter()
            .find(|g| g.to_string() == s)
            .ok_or_else(|| format!("unknown gate `{s}` (expected cnot, swap, x, x2, x3 or z)"))
    }
}

/// Polarization x OAM qubit basis in logical order 00, 01, 10, 11.
pub fn qubit_modes() -> [ModeIndex; 4] {
    [
        ModeIndex::new(0, Pol::H, 1),
        ModeIndex::new(0, Pol::H, -1),
        ModeIndex::new(0, Pol::V, 1),
        ModeIndex::new(0, Pol::V, -1),
    ]
}

fn hadamard<T: Real>() -> CMatrix<T> {
    let s = c_re(T::FRAC_1_SQRT_2());
    CMatrix::from_rows(vec![vec![s, s], vec![s, -s]]).expect("2x2")
}

pub fn polarization_hadamard_matrix<T: Real>() -> CMatrix<T> {
    hadamard()
}

pub fn oam_hadamard_matrix<T: Real>() -> CMatrix<T> {
    hadamard()
}

/// `|i, j> -> |i, j xor i>` with the polarization qubit as control.
pub fn cnot_matrix<T: Real>() -> CMatrix<T> {
    CMatrix::from_fn(4, |r, col| {
        let (i, j) = (col >> 1, col & 1);
        if r == (i << 1 | (j ^ i)) {
            c_re(T::one())
        } else {
            c_re(T::zero())
        }
    })
}

/// `C_fwd C_back C_fwd`, with `C_back = (H (x) H) C_fwd (H (x) H)`.
pub fn three_cnot_swap<T: Real>() -> CMatrix<T> {
    let hh = polarization_hadamard_matrix::<T>().kron(&oam_hadamard_matrix());
    let fwd = cnot_matrix::<T>();
    let back = hh.mul(&fwd).and_then(|m| m.mul(&hh)).expect("4x4");
    fwd.mul(&back).and_then(|m| m.mul(&fwd)).expect("4x4")
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateRow {
    pub input: String,
    pub output: String,
    pub phase: Complex64,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateCheck {
    pub name: GateName,
    /// Empty if the compiled block is not a phased permutation.
    pub rows: Vec<GateRow>,
    /// Additional named checks with their outcome.
    pub checks: Vec<(String, bool)>,
    pub pass: bool,
}

fn qubit_label(m: ModeIndex) -> String {
    format!("{},{:+}", m.pol, m.ell)
}

fn ell_label(m: ModeIndex) -> String {
    format!("{:+}", m.ell)
}

fn fmt_phase(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:+.12}{:+.12}i", clean(z.re), clean(z.im))
}

/// Compiles the named gate, extracts its truth table on the gate's subspace
/// and compares it with the logical definition.
pub fn check_gate(name: GateName) -> Result<GateCheck> {
    const EXACT: f64 = 1e-12;
    const DEEP: f64 = 1e-9;

    type Label = fn(ModeIndex) -> String;
    let (circuit, modes, expected, label): (_, Vec<ModeIndex>, Vec<usize>, Label) = match name {
        GateName::Cnot => (
            cnot::<f64>(),
            qubit_modes().to_vec(),
            vec![0, 1, 3, 2],
            qubit_label,
        ),
        GateName::Swap => (
            swap::<f64>(),
            qubit_modes().to_vec(),
            vec![0, 2, 1, 3],
            qubit_label,
        ),
        GateName::X | GateName::X2 | GateName::X3 => {
            let k = match name {
                GateName::X => 1,
                GateName::X2 => 2,
                _ => 3,
            };
            let modes = X_SUBSPACE
                .iter()
                .map(|&l| ModeIndex::new(0, Pol::H, l))
                .collect();
            let perm = (0..4).map(|i| (i + k as usize) % 4).collect();
            (pauli_x_power::<f64>(k)?, modes, perm, ell_label)
        }
        GateName::Z => {
            let modes = (0..4).map(|l| ModeIndex::new(0, Pol::H, l)).collect();
            (z_gate::<f64>(1, 4)?, modes, vec![0, 1, 2, 3], ell_label)
        }
    };

    let block = circuit.compile()?.restrict(&modes)?;
    let tol = match name {
        GateName::Cnot | GateName::Z => EXACT,
        _ => DEEP,
    };
    let table = block.as_phased_permutation(tol);

    let mut checks = Vec::new();
    let rows = match &table {
        Some(p) => p
            .images()
            .iter()
            .enumerate()
            .map(|(col, &(r, phase))| GateRow {
                input: label(modes[col]),
                output: label(modes[r]),
                phase,
                expected: label(modes[expected[col]]),
            })
            .collect(),
        None => Vec::new(),
    };
    checks.push(("phased_permutation".to_string(), table.is_some()));
    let perm_ok = table.as_ref().is_some_and(|p| p.permutation() == expected);
    checks.push(("permutation".to_string(), perm_ok));

    match name {
        GateName::Cnot => {
            let unit = table
                .as_ref()
                .is_some_and(|p| p.phases().iter().all(|z| (z - 1.0).norm() <= EXACT));
            checks.push(("unit_phases".to_string(), unit));
        }
        GateName::Swap => {
            let oracle = three_cnot_swap::<f64>();
            checks.push((
                "global_phase_vs_three_cnot".to_string(),
                block.equal_up_to_global_phase(&oracle, DEEP),
            ));
        }
        GateName::Z => {
            let ok = table.as_ref().is_some_and(|p| {
                p.phases().iter().enumerate().all(|(l, z)| {
                    let want = Complex64::from_polar(1.0, std::f64::consts::TAU * l as f64 / 4.0);
                    (z - want).norm() <= EXACT
                })
            });
            checks.push(("phases_e^(2 pi i ell/4)".to_string(), ok));
        }
        _ => {}
    }

    let pass = checks.iter().all(|(_, ok)| *ok);
    Ok(GateCheck {
        name,
        rows,
        checks,
        pass,
    })
}

impl fmt::Display for GateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gate\t{}", self.name)?;
        writeln!(f, "input\toutput\tphase\texpected")?;
        for row in &self.rows {
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                row.input,
                row.output,
                fmt_phase(row.phase),
                row.expected
            )?;
        }
        for (name, ok) in &self.checks {
            writeln!(f, "check\t{}\t{}", name, if *ok { "PASS" } else { "FAIL" })?;
        }
        writeln!(f, "result\t{}", if self.pass { "PASS" } else { "FAIL" })
    }
}
