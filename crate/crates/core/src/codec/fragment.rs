use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::generator::{apply_layers, node_count, node_label, Generator, Node};
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{DensityMatrix, Qustring};

/// Largest supported number of fractional bits (f64 mantissa).
pub const MAX_PRECISION_BITS: u32 = 52;

/// Smallest singular value a fragment node may have before polar
/// projection is refused.
pub const MIN_SINGULAR_VALUE: f64 = 1e-8;

/// Fractional bits `t = ⌈log₂(1/ε)⌉` for precision `ε ∈ (0, 1)`.
pub fn precision_bits(eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidPrecision(format!("ε = {eps} is not in (0, 1)")));
    }
    let t = (1.0 / eps).log2().ceil();
    if t > MAX_PRECISION_BITS as f64 {
        return Err(Error::InvalidPrecision(format!("ε = {eps:e} needs {t} bits, more than {MAX_PRECISION_BITS}")));
    }
    Ok(t as u32)
}

/// Precision `ε·2^{-n-4}` at which a depth-`n` fragment reconstructs its
/// state to trace distance `ε`.
pub fn reconstruction_precision(eps: f64, n: usize) -> f64 {
    eps * (-(n as f64) - 4.0).exp2()
}

/// Fixed-point truncation of a generator.
///
/// Every real and imaginary part is stored as an integer multiple of `2^-t`,
/// truncated toward zero. Node entries are kept row-major as
/// `[re00, im00, re01, im01, re10, im10, re11, im11]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    n: usize,
    t: u32,
    raw: Vec<[i64; 8]>,
}

impl Fragment {
    pub fn from_raw(n: usize, t: u32, raw: Vec<[i64; 8]>) -> Result<Self> {
        if t == 0 || t > MAX_PRECISION_BITS {
            return Err(Error::InvalidPrecision(format!("t = {t} is outside 1..={MAX_PRECISION_BITS}")));
        }
        if raw.len() != node_count(n) {
            return Err(Error::BadLayout(format!("fragment of depth {n} needs {} nodes, got {}", node_count(n), raw.len())));
        }
        let one = 1i64 << t;
        // |entry| ≤ 1 + 2^{1-t}, squared and scaled by 2^{2t}.
        let bound = (one + 2) as i128 * (one + 2) as i128;
        for (i, node) in raw.iter().enumerate() {
            for pair in node.chunks(2) {
                let sq = pair[0] as i128 * pair[0] as i128 + pair[1] as i128 * pair[1] as i128;
                if pair.iter().any(|c| c.abs() > one) || sq > bound {
                    return Err(Error::MalformedPayload(format!("node {} has an entry of magnitude above 1", node_label(i))));
                }
            }
        }
        Ok(Fragment { n, t, raw })
    }

    /// Truncates every generator entry to `⌈log₂(1/ε)⌉` fractional bits.
    pub fn quantize(generator: &Generator, eps: f64) -> Result<Self> {
        let t = precision_bits(eps)?;
        let scale = (t as f64).exp2();
        let trunc = |x: f64| (x * scale).trunc() as i64;
        let raw = generator
            .nodes()
            .iter()
            .map(|u| {
                let mut out = [0i64; 8];
                for (k, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                    out[2 * k] = trunc(u[(i, j)].re);
                    out[2 * k + 1] = trunc(u[(i, j)].im);
                }
                out
            })
            .collect();
        Ok(Fragment { n: generator.n(), t, raw })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision_bits(&self) -> u32 {
        self.t
    }

    pub fn raw(&self) -> &[[i64; 8]] {
        &self.raw
    }

    pub fn node_count(&self) -> usize {
        self.raw.len()
    }

    /// Node `index` as a complex matrix.
    pub fn matrix(&self, index: usize) -> Node {
        let scale = (-(self.t as f64)).exp2();
        let r = &self.raw[index];
        let e = |k: usize| C64::new(r[2 * k] as f64 * scale, r[2 * k + 1] as f64 * scale);
        Matrix2::new(e(0), e(1), e(2), e(3))
    }

    /// Largest entrywise modulus `|u_ij - ũ_ij|` over all nodes.
    pub fn max_entry_error(&self, source: &Generator) -> Result<f64> {
        self.check_source(source)?;
        Ok((0..self.node_count())
            .flat_map(|i| {
                let d = source.nodes()[i] - self.matrix(i);
                d.iter().map(|z| z.norm()).collect::<Vec<_>>()
            })
            .fold(0.0, f64::max))
    }

    /// Largest operator-norm distance `‖U - Ũ‖` over all nodes.
    pub fn max_node_error(&self, source: &Generator) -> Result<f64> {
        self.check_source(source)?;
        Ok((0..self.node_count()).map(|i| linalg::operator_norm2(&(source.nodes()[i] - self.matrix(i)))).fold(0.0, f64::max))
    }

    fn check_source(&self, source: &Generator) -> Result<()> {
        if source.n() != self.n {
            return Err(Error::DimMismatch { left: self.n, right: source.n() });
        }
        Ok(())
    }

    /// Nodes projected to their nearest unitaries.
    pub fn unitary_nodes(&self) -> Result<Vec<Node>> {
        (0..self.node_count())
            .map(|i| {
                let (u, sigma) = linalg::polar_unitary2(&self.matrix(i));
                if sigma < MIN_SINGULAR_VALUE {
                    return Err(Error::NonInvertibleNode { node: node_label(i), sigma });
                }
                Ok(u)
            })
            .collect()
    }

    /// The state prepared by the layered unitary projections of the nodes.
    pub fn reconstruct_state(&self) -> Result<Qustring> {
        let nodes = self.unitary_nodes()?;
        let amps = apply_layers(self.n, |i| nodes[i]);
        Qustring::normalized(amps)
    }

    /// Density matrix of [`Fragment::reconstruct_state`].
    pub fn reconstruct(&self) -> Result<DensityMatrix> {
        Ok(self.reconstruct_state()?.projector())
    }
}
