//! Build an acceptance circuit, save it as JSON, reload it and inspect its
//! acceptance operator.

use qph::circuit::{library, Assignment, Gate, QuantumFunction, Role};
use qph::state::Qustring;
use qph::Budgets;

fn main() -> qph::Result<()> {
    let budgets = Budgets::default();
    // Accepts when the witness rotated by H reads 1.
    let f = QuantumFunction::builder()
        .register("w1", Role::Witness, 1)
        .register("out", Role::Ancilla, 1)
        .gates([Gate::h(0), Gate::cnot(0, 1)])
        .output(1)
        .build()?;
    let text = f.to_json();
    println!("{text}");
    let back = QuantumFunction::from_json(&text)?;

    for (name, q) in [("|0>", Qustring::basis(1, 0)), ("|->", Qustring::from_real(&[0.5f64.sqrt(), -(0.5f64.sqrt())])?)] {
        let a: Assignment = [("w1".to_string(), q)].into();
        println!("P[accept | {name}] = {:.6}", back.evaluate(&a, &budgets)?);
    }
    let op = back.acceptance_operator(&Assignment::new(), &["w1"], &budgets)?;
    println!("acceptance operator:{}", op.matrix());

    let eq = library::equality_test(("a", Role::Witness), ("b", Role::Witness))?;
    let a: Assignment = [("a".to_string(), Qustring::plus(1)), ("b".to_string(), Qustring::basis(1, 0))].into();
    println!("equality test on |+>, |0>: {:.6}", eq.evaluate(&a, &budgets)?);
    println!("its complement: {:.6}", eq.negated().evaluate(&a, &budgets)?);
    Ok(())
}
