//! Small dense complex linear algebra helpers used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Frobenius norm.
pub fn frob(m: &CMat) -> f64 {
    m.norm()
}

/// ‖M − M†‖_F, the Hermiticity defect.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    frob(&(m - m.adjoint()))
}

/// ‖U†U − I‖_F, the unitarity defect.
pub fn unitarity_residual(u: &CMat) -> f64 {
    frob(&(u.adjoint() * u - identity(u.nrows())))
}

/// ‖AB − BA‖_F.
pub fn commutator_norm(a: &CMat, b: &CMat) -> f64 {
    frob(&(a * b - b * a))
}

/// Eigendecomposition of a Hermitian matrix, eigenpairs sorted by descending
/// eigenvalue. Eigenvectors are orthonormal columns returned as owned vectors.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, Vec<CVec>) {
    let dim = m.nrows();
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = order
        .iter()
        .map(|&i| CVec::from_iterator(dim, se.eigenvectors.column(i).iter().cloned()))
        .collect();
    (vals, vecs)
}

/// e^{−iHt} for Hermitian H, computed exactly through the eigendecomposition.
pub fn exp_neg_i_ht(h: &CMat, t: f64) -> CMat {
    let dim = h.nrows();
    let (vals, vecs) = hermitian_eigen(h);
    let mut out = CMat::zeros(dim, dim);
    for (lambda, v) in vals.iter().zip(&vecs) {
        let phase = Complex64::from_polar(1.0, -lambda * t);
        out += v * v.adjoint() * phase;
    }
    out
}

/// Principal argument mapped to (−π, π].
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -std::f64::consts::PI {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// Wrap an angle to (−π, π].
pub fn wrap_to_pi(angle: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}
