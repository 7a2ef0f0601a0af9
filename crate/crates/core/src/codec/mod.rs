//! Generator state codec: qustring ⇄ tree of 2x2 unitaries ⇄ fixed-point
//! fragment ⇄ bytes, plus reconstruction from a fragment.

mod fragment;
mod generator;
mod wire;

pub use fragment::{precision_bits, reconstruction_precision, Fragment, MAX_PRECISION_BITS, MIN_SINGULAR_VALUE};
pub use generator::{node_count, node_index, node_key, node_label, Generator, Node, DEGENERATE_WEIGHT};
pub use wire::{encoded_len, HEADER_LEN, MAGIC, MAX_DEPTH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::Qustring;

/// JSON form of a generator: one row-major `[[re, im]; 4]` per node, in
/// length-then-lexicographic label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub n: usize,
    pub nodes: Vec<GeneratorNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorNode {
    pub label: String,
    pub matrix: [[f64; 2]; 4],
}

impl From<&Generator> for GeneratorFile {
    fn from(g: &Generator) -> Self {
        let nodes = g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, u)| GeneratorNode {
                label: node_label(i),
                matrix: [u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]].map(|z| [z.re, z.im]),
            })
            .collect();
        GeneratorFile { n: g.n(), nodes }
    }
}

impl TryFrom<GeneratorFile> for Generator {
    type Error = crate::Error;

    fn try_from(f: GeneratorFile) -> Result<Self> {
        let nodes = f
            .nodes
            .iter()
            .map(|node| {
                let e = node.matrix.map(|p| num_complex::Complex64::new(p[0], p[1]));
                Node::new(e[0], e[1], e[2], e[3])
            })
            .collect();
        Generator::new(f.n, nodes)
    }
}

/// Trace distance between `|φ⟩⟨φ|` and the reconstruction of the fragment
/// of `φ`'s generator quantized at `eps`.
pub fn round_trip_distance(phi: &Qustring, eps: f64) -> Result<f64> {
    let g = Generator::decompose(phi)?;
    let rho = Fragment::quantize(&g, eps)?.reconstruct()?;
    phi.projector().trace_distance(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn generator_file_round_trip() {
        let mut rng = random::rng(4);
        let g = Generator::random(&mut rng, 2);
        let text = serde_json::to_string(&GeneratorFile::from(&g)).unwrap();
        let back: Generator = serde_json::from_str::<GeneratorFile>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn distance_shrinks_with_precision() {
        let mut rng = random::rng(99);
        for size in 2..=5 {
            let phi = random::haar_state(&mut rng, size);
            let ds: Vec<f64> = [4, 6, 8, 10].iter().map(|&k| round_trip_distance(&phi, (-(k as f64)).exp2()).unwrap()).collect();
            assert!(ds.windows(2).all(|w| w[1] <= w[0]), "{ds:?}");
        }
    }
}
