//! Partial decision problems: set algebra, inclusion and classical parts.

use qph::algebra::{
    classical_part, complement, includes, intersect, pair, union, unpair, ExplicitProblem, PartialProblem, ThresholdProblem,
};
use qph::circuit::{library, Role};
use qph::quantifier::{DecisionThresholds, HierarchyInstance, Method, Quantifier};
use qph::state::{QTuple, Qustring};
use qph::Budgets;

fn show(name: &str, p: &PartialProblem) {
    if let PartialProblem::Explicit(e) = p {
        println!(
            "{name}: accept {:?}, reject {:?}",
            e.accept().iter().map(QTuple::parts).collect::<Vec<_>>(),
            e.reject().iter().map(QTuple::parts).collect::<Vec<_>>()
        );
    }
}

fn main() -> qph::Result<()> {
    let b = Budgets::default();
    let x = QTuple::single(Qustring::basis(1, 0));
    let y = QTuple::single(Qustring::basis(1, 1));
    let z = QTuple::single(Qustring::plus(1));
    let p: PartialProblem = ExplicitProblem::new(1, vec![x.clone()], vec![y.clone()])?.into();
    let q: PartialProblem = ExplicitProblem::new(1, vec![x.clone()], vec![z.clone()])?.into();
    show("P", &p);
    show("Q", &q);
    show("P & Q", &intersect(&p, &q)?);
    show("P | Q", &union(&p, &q)?);
    show("not P", &complement(&p));
    println!("P in Q: {}", includes(&p, &q)?);
    let wide: PartialProblem = ExplicitProblem::new(1, vec![x.clone()], vec![y.clone(), z.clone()])?.into();
    let wider: PartialProblem = ExplicitProblem::new(1, vec![x, y], vec![z])?.into();
    println!("({{x}},{{y,z}}) in ({{x,y}},{{z}}): {}", includes(&wide, &wider)?);

    let code = pair(&["101", "0"])?;
    println!("pair(101, 0) = {code}, unpair -> {:?}", unpair(&code)?);

    // Accepts two-qubit inputs whose first qubit reads 1.
    let f = library::from_acceptance_matrix(
        &[("x", Role::Input, 2)],
        &qph::linalg::CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0.into(), 0.0.into(), 1.0.into(), 0.9.into()])),
    )?;
    let inst = HierarchyInstance::new(f, vec![], Quantifier::Sup, [("x".to_string(), Qustring::zero(2))].into())?;
    let t: PartialProblem = ThresholdProblem::new(inst, DecisionThresholds::default(), Method::Exact, b).into();
    let parts = classical_part(&t, 1, 2, &b)?;
    println!("classical part: accept {:?}, reject {:?}, total {}", parts.accept.tuples(), parts.reject.tuples(), parts.total);
    Ok(())
}
