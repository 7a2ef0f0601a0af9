//! Decompose random qustrings into generator trees and recompose them.

use qph::codec::{node_label, Generator, GeneratorFile};
use qph::random;

fn main() -> qph::Result<()> {
    let mut rng = random::rng(1);
    for size in 1..=5 {
        let phi = random::haar_state(&mut rng, size);
        let g = Generator::decompose(&phi)?;
        let back = g.recompose();
        let d = phi.projector().trace_distance(&back.projector())?;
        println!("{size} qubits: depth {} with {} nodes, trace distance {d:.2e}", g.n(), g.nodes().len());
    }

    let phi = qph::state::Qustring::from_real(&[0.6, 0.0, 0.0, 0.8])?;
    let g = Generator::decompose(&phi)?;
    for (i, u) in g.nodes().iter().enumerate() {
        println!("U[{:>2}] first column ({:.3}, {:.3})", node_label(i), u[(0, 0)], u[(1, 0)]);
    }
    println!("{}", serde_json::to_string(&GeneratorFile::from(&g))?);
    Ok(())
}
