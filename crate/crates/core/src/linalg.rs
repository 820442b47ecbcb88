//! Small dense linear algebra: 2x2 spinor matrices and unitary eigenphases.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lattice::C64;

pub type Mat2 = Matrix2<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// Largest singular value.
pub fn op_norm(m: &Mat2) -> f64 {
    m.singular_values().max()
}

/// `exp(-i angle n.sigma)` for a real unit vector `n`.
pub fn rotation(n: [f64; 3], angle: f64) -> Mat2 {
    let (s, co) = angle.sin_cos();
    let ns = sigma_x() * c(n[0], 0.0) + sigma_y() * c(n[1], 0.0) + sigma_z() * c(n[2], 0.0);
    identity2() * c(co, 0.0) - ns * c(0.0, s)
}

/// Angle wrapped to `[-pi, pi)`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y >= PI {
        y - TAU
    } else {
        y
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Largest entry of `|U^dagger U - I|`.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let p = u.adjoint() * u;
    let mut m: f64 = 0.0;
    for r in 0..p.nrows() {
        for col in 0..p.ncols() {
            let target = if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) };
            m = m.max((p[(r, col)] - target).norm());
        }
    }
    m
}

/// Eigenphases of `e^{-i alpha} U` through the Cayley map
/// `H = i (I - V)(I + V)^{-1}`, whose eigenvalues are `tan(psi / 2)`.
fn cayley_phases(u: &DMatrix<C64>, alpha: f64) -> Option<Vec<f64>> {
    let d = u.nrows();
    let v = u * C64::from_polar(1.0, -alpha);
    let id = DMatrix::<C64>::identity(d, d);
    let plus = &id + &v;
    let minus = &id - &v;
    // H = i (I - V)(I + V)^{-1}; solve (I + V)^T X^T = (I - V)^T for the right inverse.
    let lu = plus.transpose().lu();
    let xt = lu.solve(&minus.transpose())?;
    let h = xt.transpose() * c(0.0, 1.0);
    let herm = (&h + h.adjoint()) * c(0.5, 0.0);
    if herm.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    let eig = SymmetricEigen::new(herm);
    Some(
        eig.eigenvalues
            .iter()
            .map(|t| wrap_phase(2.0 * t.atan() + alpha))
            .collect(),
    )
}

/// Eigenphases `phi` (eigenvalues `e^{i phi}`) of a unitary matrix, sorted
/// ascending in `[-pi, pi)`.
///
/// The Cayley pole is first placed at an arbitrary angle, then moved to the
/// middle of the widest gap of the resulting spectrum so that `I + V` stays
/// well conditioned. This copes with highly degenerate spectra such as those
/// of signed permutation matrices, where shifted QR on the raw matrix stalls.
pub fn unitary_eigenphases(u: &DMatrix<C64>) -> Result<Vec<f64>> {
    let d = u.nrows();
    if d != u.ncols() {
        return Err(Error::InvalidConfig("eigenphases need a square matrix".into()));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let defect = unitarity_defect(u);
    if defect > 1e-9 {
        return Err(Error::InvalidConfig(format!("matrix is not unitary (defect {defect:.3e})")));
    }
    let rough = [1.0, 2.3, -0.7, 2.9, -2.2]
        .iter()
        .find_map(|&a| cayley_phases(u, a))
        .ok_or_else(|| Error::InvalidConfig("eigenphase solve failed".into()))?;
    let mut sorted = rough;
    sorted.sort_by(f64::total_cmp);
    let mut best = (TAU - (sorted[d - 1] - sorted[0]), sorted[d - 1]);
    for w in sorted.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    // pole of the Cayley map sits at psi = pi, i.e. at alpha + pi
    let center = best.1 + best.0 / 2.0;
    let alpha = wrap_phase(center - PI);
    let mut phases = cayley_phases(u, alpha)
        .ok_or_else(|| Error::InvalidConfig("eigenphase solve failed".into()))?;
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Largest pairing distance between two phase multisets, matched after sorting.
/// Both the `[-pi, pi)` and `[0, 2pi)` cuts are tried and the better one kept,
/// so clusters that straddle either cut still pair correctly.
pub fn phase_multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let cut = |xs: &[f64], shift: f64| {
        let mut v: Vec<f64> = xs.iter().map(|x| wrap_phase(x - shift)).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    [0.0, PI, PI / 2.0, -PI / 2.0]
        .iter()
        .map(|&shift| {
            let (x, y) = (cut(a, shift), cut(b, shift));
            x.iter()
                .zip(&y)
                .map(|(p, q)| angle_distance(*p, *q))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}
