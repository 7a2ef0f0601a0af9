//! Majority-vote amplification of constant and witness-dependent instances.

use qph::circuit::{library, Assignment, Role};
use qph::quantifier::{amplify, majority_probability, qopt_value, HierarchyInstance, Method, Quantifier};
use qph::Budgets;

fn main() -> qph::Result<()> {
    let b = Budgets::default();
    for v in [0.25, 0.5, 0.75] {
        let inst = HierarchyInstance::new(library::constant(v, &[])?, vec![], Quantifier::Sup, Assignment::new())?;
        for t in [1, 3, 5] {
            let got = qopt_value(&amplify(&inst, t, &b)?, Method::Exact, &b)?.value;
            println!("v={v} t={t}: circuit {got:.12}, binomial {:.12}", majority_probability(v, t));
        }
    }
    // Three copies of a measured witness: the prover may entangle the copies.
    let f = library::measure_qubit("w1", Role::Witness)?;
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new())?;
    let a = amplify(&inst, 3, &b)?;
    println!("amplified witness width {} qubits, value {:.9}", a.p(), qopt_value(&a, Method::Exact, &b)?.value);
    println!("{}", amplify(&inst, 2, &b).unwrap_err());
    Ok(())
}
