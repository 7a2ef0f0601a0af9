//! Pure states (qustrings), tuples of them, and density matrices.
//!
//! Index convention: qubit 0 is the leftmost factor and the most significant
//! bit of the amplitude index, so `|s⟩` for a bit string `s` lives at the
//! index whose binary expansion reads `s`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// Relative norm slack accepted by [`Qustring::new`].
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

/// A unit vector in a `2^n`-dimensional Hilbert space.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QustringRepr", into = "QustringRepr")]
pub struct Qustring {
    size: usize,
    amps: Vec<C64>,
}

impl Qustring {
    /// Validates and renormalizes an amplitude vector.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(Error::NormOutOfTolerance { norm, tolerance: INPUT_NORM_TOLERANCE });
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Qustring { size: dim.trailing_zeros() as usize, amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NormOutOfTolerance { norm, tolerance: INPUT_NORM_TOLERANCE });
        }
        Ok(Qustring { size: dim.trailing_zeros() as usize, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `size` qubits.
    pub fn basis(size: usize, index: usize) -> Self {
        let dim = 1usize << size;
        assert!(index < dim, "basis index {index} out of range for {size} qubits");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Qustring { size, amps }
    }

    pub fn zero(size: usize) -> Self {
        Self::basis(size, 0)
    }

    /// `|+⟩^{⊗size}`.
    pub fn plus(size: usize) -> Self {
        let dim = 1usize << size;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Qustring { size, amps: vec![a; dim] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Qustring) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Kronecker product; `self` supplies the high-order qubits.
    pub fn tensor(&self, other: &Qustring) -> Qustring {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Qustring { size: self.size + other.size, amps }
    }

    pub fn projector(&self) -> DensityMatrix {
        let v = &self.amps;
        let d = v.len();
        DensityMatrix { matrix: CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()) }
    }

    /// Trace distance between the two projectors, `2·sqrt(1 - |⟨a|b⟩|²)`,
    /// evaluated as twice the norm of the part of `b` orthogonal to `a` so
    /// that nearly equal states do not lose precision to cancellation.
    pub fn projector_distance(&self, other: &Qustring) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let c = self.inner(other);
        let residual: f64 = self.amps.iter().zip(&other.amps).map(|(a, b)| (b - c * a).norm_sqr()).sum();
        2.0 * residual.sqrt().min(1.0)
    }

    /// Equality up to global phase.
    pub fn same_state(&self, other: &Qustring, tol: f64) -> bool {
        self.projector_distance(other) < tol
    }

    /// Probability of observing basis string `index` in a full measurement.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}

impl fmt::Debug for Qustring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Qustring[{}](", self.size)?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, ")")
    }
}

/// Wire form: `{"size_n": n, "amplitudes": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct QustringRepr {
    size_n: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<QustringRepr> for Qustring {
    type Error = Error;

    fn try_from(r: QustringRepr) -> Result<Self> {
        let q = Qustring::new(r.amplitudes.iter().map(|p| C64::new(p[0], p[1])).collect())?;
        if q.size != r.size_n {
            return Err(Error::DimMismatch { left: r.size_n, right: q.size });
        }
        Ok(q)
    }
}

impl From<Qustring> for QustringRepr {
    fn from(q: Qustring) -> Self {
        QustringRepr { size_n: q.size, amplitudes: q.amps.iter().map(|a| [a.re, a.im]).collect() }
    }
}

/// An ordered, nonempty tuple of qustrings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTuple {
    parts: Vec<Qustring>,
}

impl QTuple {
    pub fn new(parts: Vec<Qustring>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadLayout("a tuple needs at least one part".into()));
        }
        Ok(QTuple { parts })
    }

    pub fn single(q: Qustring) -> Self {
        QTuple { parts: vec![q] }
    }

    pub fn parts(&self) -> &[Qustring] {
        &self.parts
    }

    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    /// Sum of part sizes.
    pub fn total_size(&self) -> usize {
        self.parts.iter().map(Qustring::size).sum()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.parts.iter().map(Qustring::size).collect()
    }

    pub fn flatten(&self) -> Qustring {
        let mut it = self.parts.iter();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, p| acc.tensor(p))
    }

    /// `k`-fold tensor power of the flattened tuple.
    pub fn copies(&self, k: usize, budgets: &Budgets) -> Result<Qustring> {
        if k == 0 {
            return Err(Error::BadLayout("copy count must be at least 1".into()));
        }
        let total = self.total_size().saturating_mul(k);
        budgets.check_qubits(total)?;
        let flat = self.flatten();
        let mut out = flat.clone();
        for _ in 1..k {
            out = out.tensor(&flat);
        }
        Ok(out)
    }

    /// Equality part by part, up to a global phase on each part.
    pub fn same_state(&self, other: &QTuple, tol: f64) -> bool {
        self.parts.len() == other.parts.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a.same_state(b, tol))
    }
}

impl From<Qustring> for QTuple {
    fn from(q: Qustring) -> Self {
        QTuple::single(q)
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || d != matrix.ncols() {
            return Err(Error::DimMismatch { left: d, right: matrix.ncols() });
        }
        if linalg::max_hermitian_deviation(&matrix) > 1e-12 {
            return Err(Error::BadLayout("density matrix is not Hermitian".into()));
        }
        let trace: f64 = (0..d).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::BadLayout(format!("density matrix has trace {trace}")));
        }
        let (vals, _) = linalg::hermitian_eigen(&matrix);
        if vals.first().copied().unwrap_or(0.0) < -1e-10 {
            return Err(Error::BadLayout("density matrix has a negative eigenvalue".into()));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Maximally mixed state on `dim` levels.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(dim, dim).scale(1.0 / dim as f64) }
    }

    /// Sum of singular values of `self - other`; lies in `[0, 2]`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { left: self.dim(), right: other.dim() });
        }
        let diff = linalg::hermitian_part(&(&self.matrix - &other.matrix));
        let (vals, _) = linalg::hermitian_eigen(&diff);
        Ok(vals.iter().map(|v| v.abs()).sum())
    }

    /// Reduced state on the registers listed in `keep`.
    ///
    /// `layout` gives the dimension of each register, leftmost first; their
    /// product must equal `self.dim()`. `keep` must be strictly increasing.
    pub fn partial_trace(&self, layout: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let total: usize = layout.iter().product();
        if layout.is_empty() || layout.contains(&0) || total != self.dim() {
            return Err(Error::BadLayout(format!("layout {layout:?} does not factor dimension {}", self.dim())));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= layout.len()) {
            return Err(Error::BadLayout(format!("keep list {keep:?} is not an increasing list of registers")));
        }
        let traced: Vec<usize> = (0..layout.len()).filter(|r| !keep.contains(r)).collect();
        let kept_dim: usize = keep.iter().map(|&r| layout[r]).product();
        let traced_dim: usize = traced.iter().map(|&r| layout[r]).product();

        // Strides of each register in the full index.
        let mut strides = vec![1usize; layout.len()];
        for r in (0..layout.len().saturating_sub(1)).rev() {
            strides[r] = strides[r + 1] * layout[r + 1];
        }
        let compose = |regs: &[usize], mut idx: usize| -> usize {
            let mut full = 0;
            for &r in regs.iter().rev() {
                full += (idx % layout[r]) * strides[r];
                idx /= layout[r];
            }
            full
        };

        let mut out = CMatrix::zeros(kept_dim, kept_dim);
        for i in 0..kept_dim {
            let fi = compose(keep, i);
            for j in 0..kept_dim {
                let fj = compose(keep, j);
                let mut acc = ZERO;
                for t in 0..traced_dim {
                    let ft = compose(&traced, t);
                    acc += self.matrix[(fi + ft, fj + ft)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix { matrix: out })
    }

    /// Tensor product with `self` on the high-order side.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: self.matrix.kronecker(&other.matrix) }
    }
}

impl From<&Qustring> for DensityMatrix {
    fn from(q: &Qustring) -> Self {
        q.projector()
    }
}
