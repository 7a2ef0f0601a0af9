use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};
use crate::random;
use crate::state::Qustring;

pub type Node = Matrix2<C64>;

/// Weight below which a subtree counts as empty and gets the identity node.
pub const DEGENERATE_WEIGHT: f64 = 1e-12;

/// Position of node `s` (length `len`, value `bits`) in length-then-lex order.
pub fn node_index(len: usize, bits: usize) -> usize {
    (1usize << len) - 1 + bits
}

/// Inverse of [`node_index`]: `(len, bits)`.
pub fn node_key(index: usize) -> (usize, usize) {
    let len = (usize::BITS - 1 - (index + 1).leading_zeros()) as usize;
    (len, index + 1 - (1usize << len))
}

/// Human-readable node label; `λ` for the root.
pub fn node_label(index: usize) -> String {
    let (len, bits) = node_key(index);
    if len == 0 {
        return "λ".into();
    }
    (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn node_count(n: usize) -> usize {
    (1usize << (n + 1)) - 1
}

/// Tree of 2x2 unitaries `U^(s)`, one for every bit string `s` of length at
/// most `n`, whose layered controlled application to `|0^{n+1}⟩` produces an
/// `(n+1)`-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    n: usize,
    nodes: Vec<Node>,
}

/// `[c1, c2]` as the first column, `[-conj(c2), conj(c1)]` as the second.
fn complete(c1: C64, c2: C64) -> Node {
    Node::new(c1, -c2.conj(), c2, c1.conj())
}

impl Generator {
    pub fn new(n: usize, nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() != node_count(n) {
            return Err(Error::BadLayout(format!("generator of depth {n} needs {} nodes, got {}", node_count(n), nodes.len())));
        }
        for (i, u) in nodes.iter().enumerate() {
            let defect = linalg::unitarity_defect2(u);
            if defect > 1e-10 {
                return Err(Error::InvalidGate(format!("node {} is not unitary (defect {defect:e})", node_label(i))));
            }
        }
        Ok(Generator { n, nodes })
    }

    /// Every node Haar-random.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        Generator { n, nodes: (0..node_count(n)).map(|_| random::haar_unitary2(rng)).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Generator { n, nodes: vec![Node::identity(); node_count(n)] }
    }

    /// Depth; the generated state has `n + 1` qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, len: usize, bits: usize) -> &Node {
        &self.nodes[node_index(len, bits)]
    }

    /// Splits `φ` into its generator.
    ///
    /// For `|s| < n` the first column holds the square roots of the branch
    /// weights below `s0` and `s1`, normalized by `g_s`; at the last level it
    /// holds the amplitudes `γ_{s0}`, `γ_{s1}` themselves over `g_s`.
    pub fn decompose(phi: &Qustring) -> Result<Self> {
        let qubits = phi.size();
        if qubits == 0 {
            return Err(Error::BadLayout("a generator needs at least one qubit".into()));
        }
        let n = qubits - 1;
        let amps = phi.amplitudes();

        // weights[len][bits] = Σ_t |γ_{bits t}|², prefixes of length 0..=n+1.
        let mut weights: Vec<Vec<f64>> = vec![Vec::new(); n + 2];
        weights[n + 1] = amps.iter().map(|a| a.norm_sqr()).collect();
        for len in (0..=n).rev() {
            let below = &weights[len + 1];
            weights[len] = (0..1usize << len).map(|s| below[2 * s] + below[2 * s + 1]).collect();
        }

        let mut nodes = Vec::with_capacity(node_count(n));
        for len in 0..=n {
            for s in 0..1usize << len {
                let g = weights[len][s].sqrt();
                if g < DEGENERATE_WEIGHT {
                    nodes.push(Node::identity());
                    continue;
                }
                let (c1, c2) = if len < n {
                    let w = &weights[len + 1];
                    (C64::new(w[2 * s].sqrt() / g, 0.0), C64::new(w[2 * s + 1].sqrt() / g, 0.0))
                } else {
                    (amps[2 * s] / g, amps[2 * s + 1] / g)
                };
                nodes.push(complete(c1, c2));
            }
        }
        Ok(Generator { n, nodes })
    }

    /// `U_n ⋯ U_1 U_0 |0^{n+1}⟩`.
    pub fn recompose(&self) -> Qustring {
        let amps = apply_layers(self.n, |i| self.nodes[i]);
        Qustring::normalized(amps).expect("unitary layers preserve the norm")
    }
}

/// Applies `U_k = Σ_{|s|=k} |s⟩⟨s| ⊗ U^(s) ⊗ I` for `k = 0..=n` to `|0^{n+1}⟩`.
pub(crate) fn apply_layers(n: usize, node: impl Fn(usize) -> Node) -> Vec<C64> {
    let qubits = n + 1;
    let mut amps = vec![ZERO; 1usize << qubits];
    amps[0] = ONE;
    for k in 0..=n {
        let tail = qubits - k - 1;
        for s in 0..1usize << k {
            let u = node(node_index(k, s));
            for rest in 0..1usize << tail {
                let i0 = (s << (tail + 1)) | rest;
                let i1 = i0 | (1usize << tail);
                let (a0, a1) = (amps[i0], amps[i1]);
                amps[i0] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                amps[i1] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
    }
    amps
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn first_column(u: &Node) -> [C64; 2] {
        [u[(0, 0)], u[(1, 0)]]
    }

    #[test]
    fn node_ordering() {
        let labels: Vec<String> = (0..7).map(node_label).collect();
        assert_eq!(labels, ["λ", "0", "1", "00", "01", "10", "11"]);
        for i in 0..100 {
            let (len, bits) = node_key(i);
            assert_eq!(node_index(len, bits), i);
        }
    }

    #[test]
    fn all_zero_state_gives_identity_completions() {
        let g = Generator::decompose(&Qustring::zero(3)).unwrap();
        assert_eq!(g.nodes().len(), 7);
        for u in g.nodes() {
            assert_eq!(*u, Node::identity());
        }
    }

    #[test]
    fn bell_state_generator() {
        let bell = Qustring::from_real(&[S, 0.0, 0.0, S]).unwrap();
        let g = Generator::decompose(&bell).unwrap();
        let root = first_column(g.node(0, 0));
        assert!((root[0].re - S).abs() < 1e-15 && (root[1].re - S).abs() < 1e-15);
        assert_eq!(first_column(g.node(1, 0)), [ONE, ZERO]);
        assert_eq!(first_column(g.node(1, 1)), [ZERO, ONE]);
        for u in g.nodes() {
            assert!(linalg::unitarity_defect2(u) < 1e-15);
        }
        assert!(g.recompose().projector_distance(&bell) < 1e-14);
    }

    #[test]
    fn identity_generator_recomposes_to_zero_state() {
        assert_eq!(Generator::identity(1).recompose(), Qustring::zero(2));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = random::rng(17);
        for size in 1..=4 {
            let phi = random::haar_state(&mut rng, size);
            let back = Generator::decompose(&phi).unwrap().recompose();
            let d = phi.projector().trace_distance(&back.projector()).unwrap();
            assert!(d < 1e-10, "size {size}: {d}");
        }
    }

    #[test]
    fn random_generator_output_is_unit() {
        let mut rng = random::rng(2);
        for _ in 0..10 {
            let g = Generator::random(&mut rng, 2);
            assert!((g.recompose().norm_sqr() - 1.0).abs() < 1e-12);
            let raw = apply_layers(2, |i| g.nodes()[i]);
            assert!((raw.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_node_count_and_non_unitary() {
        assert!(Generator::new(1, vec![Node::identity(); 2]).is_err());
        let mut nodes = vec![Node::identity(); 3];
        nodes[1] = nodes[1].scale(1.1);
        assert!(matches!(Generator::new(1, nodes), Err(Error::InvalidGate(_))));
    }
}
