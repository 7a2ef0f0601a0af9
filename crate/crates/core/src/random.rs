//! Seeded sampling of states, unitaries and acceptance operators.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix};
use crate::state::Qustring;

pub type LabRng = ChaCha8Rng;

pub fn rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Qustring {
    loop {
        let amps: Vec<C64> = (0..1usize << size).map(|_| gaussian(rng)).collect();
        if let Ok(q) = Qustring::normalized(amps) {
            return q;
        }
    }
}

/// Haar-random unitary from a Gaussian matrix by Gram-Schmidt with phase fix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let u = haar_unitary(rng, 2);
    Matrix2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)])
}

/// Random Hermitian `M` with `0 ≤ M ≤ I`: Haar eigenbasis, uniform spectrum.
pub fn acceptance_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let u = haar_unitary(rng, dim);
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |_, _| C64::new(rng.random::<f64>(), 0.0)));
    linalg::hermitian_part(&(&u * diag * u.adjoint()))
}
