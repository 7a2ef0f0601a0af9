//! Discretized quantifier ranges: grid sizes, truncation and convergence of
//! grid optima to the top eigenvalue.

use qph::circuit::{library, Assignment, Role};
use qph::linalg;
use qph::quantifier::{norm_precision, qopt_value, truncation_norm_deviation, GridSpec, HierarchyInstance, Method, Quantifier};
use qph::{random, Budgets};

fn main() -> qph::Result<()> {
    let b = Budgets::default();
    for (n, r) in [(1, 1), (1, 3), (2, 2), (2, 4)] {
        let g = GridSpec::new(n, r)?;
        println!(
            "n={n} r={r}: {} raw layouts, {} values, within budget: {}",
            g.layout_count(),
            g.value_count(),
            g.check(&b).is_ok()
        );
    }

    let mut rng = random::rng(6);
    for eps in [0.25, 0.0625] {
        let r = norm_precision(eps, 2)?;
        let dev = (0..100).map(|_| truncation_norm_deviation(&random::haar_state(&mut rng, 2), r)).fold(0.0, f64::max);
        println!("eps {eps}: r = {r}, worst squared-norm deviation {dev:.4}");
    }

    let m = random::acceptance_matrix(&mut rng, 2);
    let lambda = *linalg::hermitian_eigen(&m).0.last().expect("nonempty spectrum");
    let f = library::from_acceptance_matrix(&[("w1", Role::Witness, 1)], &m)?;
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new())?;
    for r in 1..=5 {
        let v = qopt_value(&inst, Method::Grid { r }, &b)?.value;
        println!("r={r}: grid value {v:.9}, gap {:.2e} (bound {:.3})", lambda - v, (3.0 - r as f64).exp2());
    }
    Ok(())
}
