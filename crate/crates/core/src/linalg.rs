//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// (M + M†)/2, removes rounding asymmetry before a Hermitian solver sees it.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_hermitian_deviation(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn operator_norm2(m: &Matrix2<C64>) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// Deviation of `U†U` from the identity, entrywise maximum.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_defect2(m: &Matrix2<C64>) -> f64 {
    let prod = m.adjoint() * m;
    (prod - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Nearest unitary to a 2x2 matrix (polar factor `W V†` of `W Σ V†`),
/// together with the smallest singular value of the input.
pub fn polar_unitary2(m: &Matrix2<C64>) -> (Matrix2<C64>, f64) {
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_min = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    (u * v_t, sigma_min)
}

/// Rotate the global phase so the first component with modulus above
/// `1e-12` is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = z.conj() / z.norm();
        for a in v.iter_mut() {
            *a *= phase;
        }
    }
}

/// `⟨v|M|v⟩` for Hermitian `M`, real part only.
pub fn expectation(m: &CMatrix, v: &[C64]) -> f64 {
    let d = v.len();
    let mut acc = ZERO;
    for i in 0..d {
        let mut row = ZERO;
        for j in 0..d {
            row += m[(i, j)] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_ascending() {
        let m = CMatrix::from_row_slice(2, 2, &[C64::new(0.1, 0.0), ZERO, ZERO, C64::new(0.9, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 0.1).abs() < 1e-14 && (vals[1] - 0.9).abs() < 1e-14);
        assert!((vecs[(1, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = Matrix2::new(C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0));
        let (u, smin) = polar_unitary2(&h.scale(0.9));
        assert!((smin - 0.9).abs() < 1e-12);
        assert!((u - h).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn trace_norm_of_pauli_z_is_two() {
        let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        assert!((trace_norm(&z) - 2.0).abs() < 1e-14);
    }
}
