//! Reference matrices built directly from the element definitions with
//! nalgebra, independent of the crate's own matrix code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use psdp_sim::CMatrix;

pub type Na = DMatrix<Complex64>;

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn to_na(m: &CMatrix<f64>) -> Na {
    Na::from_fn(m.dim(), m.dim(), |r, c| m[(r, c)])
}

pub fn max_diff(a: &Na, b: &Na) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Single rail, window `l`: index = pol * (2l + 1) + (ell + l).
pub fn idx(l: i32, pol: usize, ell: i32) -> usize {
    pol * (2 * l as usize + 1) + (ell + l) as usize
}

/// Jones matrix tensored with the OAM identity on a single rail.
pub fn jones(l: i32, m: [[Complex64; 2]; 2]) -> Na {
    let n = 2 * l as usize + 1;
    let j = Na::from_fn(2, 2, |r, c| m[r][c]);
    j.kronecker(&Na::identity(n, n))
}

pub fn rotation(l: i32, a: f64) -> Na {
    jones(l, [[re(a.cos()), re(-a.sin())], [re(a.sin()), re(a.cos())]])
}

/// Half-wave plate at `theta`: `i [[cos 2t, sin 2t], [sin 2t, -cos 2t]]`.
pub fn hwp(l: i32, theta: f64) -> Na {
    let i = Complex64::i();
    let (s, c) = (2.0 * theta).sin_cos();
    jones(l, [[i * c, i * s], [i * s, -i * c]])
}

/// Identity on H; on V, `|ell> -> e^{i 2 ell alpha} |-ell>`.
pub fn selective_dove(l: i32, alpha: f64) -> Na {
    let n = 2 * (2 * l as usize + 1);
    let mut m = Na::zeros(n, n);
    for ell in -l..=l {
        m[(idx(l, 0, ell), idx(l, 0, ell))] = re(1.0);
        m[(idx(l, 1, -ell), idx(l, 1, ell))] = Complex64::from_polar(1.0, 2.0 * ell as f64 * alpha);
    }
    m
}

/// Logical CNOT on |pol, oam> with pol the control, order 00, 01, 10, 11.
pub fn cnot4() -> Na {
    let mut m = Na::zeros(4, 4);
    for (col, row) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(row, col)] = re(1.0);
    }
    m
}

pub fn hadamard2() -> Na {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    Na::from_row_slice(2, 2, &[s, s, s, -s])
}

/// SWAP from three CNOTs, the middle one reversed by Hadamard conjugation.
pub fn three_cnot_swap() -> Na {
    let hh = hadamard2().kronecker(&hadamard2());
    let back = &hh * cnot4() * &hh;
    cnot4() * back * cnot4()
}

/// `|z| = 1` phase `p` with `a = p b` entrywise, if one exists within `tol`.
pub fn global_phase(a: &Na, b: &Na, tol: f64) -> Option<Complex64> {
    let (k, _) = b.iter().enumerate().find(|(_, z)| z.norm() > 0.5)?;
    let p = a.as_slice()[k] / b.as_slice()[k];
    ((p.norm() - 1.0).abs() <= tol && max_diff(a, &(b * p)) <= tol).then_some(p)
}

/// Negative uniaxial crystals used for geometry sweeps: (name, n_o, n_e).
pub const MATERIALS: [(&str, f64, f64); 5] = [
    ("calcite", 1.658, 1.486),
    ("sodium nitrate", 1.587, 1.336),
    ("beta barium borate", 1.6551, 1.5425),
    ("lithium niobate", 2.286, 2.203),
    ("sapphire", 1.768, 1.760),
];
