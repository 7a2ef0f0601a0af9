//! Separability of threshold sets: a mixed input makes one side separable
//! but not the other, and an unmixed |+> acceptor breaks separability.

use qph::algebra::{problem_separability, PartialProblem, Side, ThresholdProblem};
use qph::circuit::{library, Assignment, QuantumFunction, Role};
use qph::quantifier::{DecisionThresholds, HierarchyInstance, Method, Quantifier};
use qph::state::Qustring;
use qph::{random, Budgets};

fn problem(f: QuantumFunction, input: &str, lead: Quantifier) -> qph::Result<PartialProblem> {
    let inputs: Assignment = [(input.to_string(), Qustring::zero(1))].into();
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], lead, inputs)?;
    Ok(ThresholdProblem::new(inst, DecisionThresholds::default(), Method::Exact, Budgets::default()).into())
}

fn main() -> qph::Result<()> {
    let b = Budgets::default();
    let mut rng = random::rng(9);
    let probes: Vec<Qustring> = (0..100).map(|_| random::haar_state(&mut rng, 1)).chain([Qustring::plus(1)]).collect();

    let eq = library::equality_test(("x", Role::Input), ("w1", Role::Witness))?.classical_mix("x")?;
    for (lead, f) in [(Quantifier::Sup, eq.clone()), (Quantifier::Inf, eq.negated())] {
        let p = problem(f, "x", lead)?;
        for side in [Side::Accept, Side::Reject] {
            let rep = problem_separability(&p, side, 1, &probes, &b)?;
            let ce = rep.counterexample.map(|c| format!("{:?}", c.phi[0])).unwrap_or_default();
            println!(
                "mixed equality, {lead:?}-form {side:?} set: separable on {} probes: {} {ce}",
                rep.probes_checked, rep.verified
            );
        }
    }

    let plus = problem(library::half_plus_acceptor(true)?, "in", Quantifier::Sup)?;
    let rep = problem_separability(&plus, Side::Reject, 1, &probes, &b)?;
    println!(
        "unmixed |+> acceptor, reject set: separable {} counterexample {:?}",
        rep.verified,
        rep.counterexample.map(|c| c.phi)
    );
    Ok(())
}
