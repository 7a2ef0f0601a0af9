//! Quantified values of one- and two-level instances with every method.

use qph::circuit::{library, Assignment, Role};
use qph::quantifier::{
    classical_quantifier_value, complement_instance, decide, qopt_value, DecisionThresholds, HierarchyInstance, Method,
    Quantifier,
};
use qph::{random, Budgets};

fn main() -> qph::Result<()> {
    let b = Budgets::default();

    // sup over w1, inf over w2 of P[w1 = w2]: the prover's best is 1/2.
    let f = library::equality_test(("w1", Role::Witness), ("w2", Role::Witness))?;
    let game = HierarchyInstance::new(f, vec![vec!["w1".into()], vec!["w2".into()]], Quantifier::Sup, Assignment::new())?;
    for method in
        [Method::Exact, Method::Grid { r: 2 }, Method::Grid { r: 4 }, Method::Alternating { iters: 5, restarts: 4, seed: 1 }]
    {
        let r = qopt_value(&game, method, &b)?;
        // A certified heuristic value is exact for its witness, hence only a lower bound here.
        println!("equality game, {:<14} value {:.9} certified {}", method.to_string(), r.value, r.certified);
    }
    let c = qopt_value(&complement_instance(&game), Method::Exact, &b)?.value;
    println!("complement (inf-sup of 1 - f): {c:.9}");

    // A random single-level instance: quantum witnesses can beat classical ones.
    let mut rng = random::rng(5);
    let m = random::acceptance_matrix(&mut rng, 4);
    let f = library::from_acceptance_matrix(&[("w1", Role::Witness, 2)], &m)?;
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new())?;
    let q = qopt_value(&inst, Method::Exact, &b)?;
    let cl = classical_quantifier_value(&inst, &b)?;
    println!("random instance: quantum {:.6}, classical {:.6}", q.value, cl.value);
    println!("best witness {:?}", q.witness.unwrap()[0]);
    println!("verdict at (3/4, 1/4): {:?}", decide(&inst, &DecisionThresholds::default(), Method::Exact, &b)?);
    Ok(())
}
