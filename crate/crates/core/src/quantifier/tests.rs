use super::*;
use crate::circuit::{library, Assignment, Role};
use crate::linalg::CMatrix;
use crate::random;
use crate::state::Qustring;
use crate::Budgets;
use num_complex::Complex64 as C64;

fn b() -> Budgets {
    Budgets::default()
}

fn one_level(f: crate::circuit::QuantumFunction, leading: Quantifier) -> HierarchyInstance {
    HierarchyInstance::new(f, vec![vec!["w1".into()]], leading, Assignment::new()).unwrap()
}

fn equality_instance() -> HierarchyInstance {
    let f = library::equality_test(("w1", Role::Witness), ("w2", Role::Witness)).unwrap();
    HierarchyInstance::new(f, vec![vec!["w1".into()], vec!["w2".into()]], Quantifier::Sup, Assignment::new()).unwrap()
}

fn matrix_instance(m: &CMatrix, leading: Quantifier) -> HierarchyInstance {
    let f = library::from_acceptance_matrix(&[("w1", Role::Witness, 1)], m).unwrap();
    one_level(f, leading)
}

#[test]
fn constant_function_every_method() {
    let f = library::constant(0.5, &[("w1", Role::Witness, 1)]).unwrap();
    for lead in [Quantifier::Sup, Quantifier::Inf] {
        let inst = one_level(f.clone(), lead);
        for method in [Method::Exact, Method::Grid { r: 3 }, Method::Alternating { iters: 3, restarts: 2, seed: 1 }] {
            let v = qopt_value(&inst, method, &b()).unwrap().value;
            assert!((v - 0.5).abs() < 1e-12, "{method}: {v}");
        }
        assert!((classical_quantifier_value(&inst, &b()).unwrap().value - 0.5).abs() < 1e-12);
        let c = qopt_value(&complement_instance(&inst), Method::Exact, &b()).unwrap().value;
        assert!((c - 0.5).abs() < 1e-12);
    }
}

#[test]
fn measured_witness_sup_and_inf() {
    let f = library::measure_qubit("w1", Role::Witness).unwrap();
    let sup = qopt_value(&one_level(f.clone(), Quantifier::Sup), Method::Exact, &b()).unwrap();
    assert!((sup.value - 1.0).abs() < 1e-12);
    assert!(sup.witness.unwrap()[0].same_state(&Qustring::basis(1, 1), 1e-9));
    assert!(sup.certified);
    let inf = qopt_value(&one_level(f, Quantifier::Inf), Method::Grid { r: 2 }, &b()).unwrap();
    assert!(inf.value.abs() < 1e-12);
}

#[test]
fn equality_game_is_one_half() {
    let inst = equality_instance();
    let exact = qopt_value(&inst, Method::Exact, &b()).unwrap();
    assert!((exact.value - 0.5).abs() < 1e-9, "{}", exact.value);
    let w = &exact.witness.unwrap()[0];
    assert!((w.probability(0) - 0.5).abs() < 1e-9);
    for r in [2, 3, 4] {
        let g = qopt_value(&inst, Method::Grid { r }, &b()).unwrap().value;
        assert!((g - 0.5).abs() < 1e-9, "grid({r}) = {g}");
    }
    // Analytic: inner inf over ψ₂ is min(q, 1 − q) where q = |⟨0|ψ₁⟩|².
    let analytic = (0..=1000).map(|i| i as f64 / 1000.0).map(|q| q.min(1.0 - q)).fold(0.0, f64::max);
    assert!((analytic - 0.5).abs() < 1e-12);
    let comp = qopt_value(&complement_instance(&inst), Method::Grid { r: 4 }, &b()).unwrap().value;
    assert!((comp - 0.5).abs() < 1e-9);
}

#[test]
fn complement_of_point_nine_is_point_one() {
    let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(0.9, 0.0), C64::new(0.3, 0.0)]));
    let inst = matrix_instance(&m, Quantifier::Sup);
    let v = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
    let c = qopt_value(&complement_instance(&inst), Method::Exact, &b()).unwrap().value;
    assert!((v - 0.9).abs() < 1e-9 && (c - 0.1).abs() < 1e-9);
}

#[test]
fn classical_versus_quantum_on_plus_projector() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = Qustring::from_real(&[h, h]).unwrap();
    let m = plus.projector().matrix().clone();
    let inst = matrix_instance(&m, Quantifier::Sup);
    let q = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
    let c = classical_quantifier_value(&inst, &b()).unwrap().value;
    assert!((q - 1.0).abs() < 1e-9 && (c - 0.5).abs() < 1e-9);
}

#[test]
fn random_instances_order_and_duality() {
    let mut rng = random::rng(21);
    for i in 0..10 {
        let m = random::acceptance_matrix(&mut rng, 2);
        let lead = if i % 2 == 0 { Quantifier::Sup } else { Quantifier::Inf };
        let inst = matrix_instance(&m, lead);
        let q = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
        let c = classical_quantifier_value(&inst, &b()).unwrap().value;
        match lead {
            Quantifier::Sup => assert!(c <= q + 1e-9),
            Quantifier::Inf => assert!(c >= q - 1e-9),
        }
        let d = qopt_value(&complement_instance(&inst), Method::Exact, &b()).unwrap().value;
        assert!((q + d - 1.0).abs() < 1e-9);
        // The heuristic agrees with the eigenvalue for a single register.
        let alt = qopt_value(&inst, Method::Alternating { iters: 2, restarts: 2, seed: 3 }, &b()).unwrap();
        assert!((alt.value - q).abs() < 1e-9 && alt.certified);
    }
}

#[test]
fn grid_converges_to_eigenvalue() {
    let mut rng = random::rng(2);
    for _ in 0..3 {
        let m = random::acceptance_matrix(&mut rng, 2);
        let inst = matrix_instance(&m, Quantifier::Sup);
        let lambda = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
        let errs: Vec<f64> = (2..=4).map(|r| lambda - qopt_value(&inst, Method::Grid { r }, &b()).unwrap().value).collect();
        for (r, e) in (2..).zip(&errs) {
            assert!(*e >= -1e-12 && *e <= (3.0 - r as f64).exp2());
        }
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{errs:?}");
    }
}

#[test]
fn minimax_on_a_random_game() {
    let mut rng = random::rng(4);
    let regs = [("w1", Role::Witness, 1), ("w2", Role::Witness, 1)];
    let m = random::acceptance_matrix(&mut rng, 4);
    let f = library::from_acceptance_matrix(&regs, &m).unwrap();
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()], vec!["w2".into()]], Quantifier::Sup, Assignment::new()).unwrap();
    let t = inst.transposed();
    assert_eq!(t.leading(), Quantifier::Inf);
    let supinf = qopt_value(&inst, Method::Grid { r: 2 }, &b()).unwrap().value;
    let infsup = qopt_value(&t, Method::Grid { r: 2 }, &b()).unwrap().value;
    assert!(supinf <= infsup + 1e-9);
    let alt = qopt_value(&inst, Method::Alternating { iters: 4, restarts: 3, seed: 9 }, &b()).unwrap();
    // A certified heuristic for a leading sup is a lower bound of the exact value.
    let exact = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
    assert!(alt.certified && alt.value <= exact + 1e-6);
}

#[test]
fn three_levels_exact_is_unsupported() {
    let f = library::constant(0.3, &[("a", Role::Witness, 1), ("b", Role::Witness, 1), ("c", Role::Witness, 1)]).unwrap();
    let levels = vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]];
    let inst = HierarchyInstance::new(f, levels, Quantifier::Sup, Assignment::new()).unwrap();
    assert!(matches!(qopt_value(&inst, Method::Exact, &b()), Err(crate::Error::NotSupported(_))));
    let v = qopt_value(&inst, Method::Grid { r: 1 }, &b()).unwrap().value;
    assert!((v - 0.3).abs() < 1e-12);
    assert!((classical_quantifier_value(&inst, &b()).unwrap().value - 0.3).abs() < 1e-12);
}

#[test]
fn decisions_at_default_thresholds() {
    let th = DecisionThresholds::default();
    assert_eq!(th.classify(1.0), Verdict::Accept);
    assert_eq!(th.classify(0.0), Verdict::Reject);
    assert_eq!(th.classify(0.5), Verdict::OutsideLegalRegion);
    assert_eq!(th.classify(0.75 - 5e-10), Verdict::Accept);
    assert!(DecisionThresholds::new(0.6, 0.3).is_err());
    assert!(DecisionThresholds::new(0.25, 0.75).is_err());
    let f = library::measure_qubit("w1", Role::Witness).unwrap();
    assert_eq!(decide(&one_level(f.clone(), Quantifier::Sup), &th, Method::Exact, &b()).unwrap(), Verdict::Accept);
    assert_eq!(decide(&one_level(f, Quantifier::Inf), &th, Method::Exact, &b()).unwrap(), Verdict::Reject);
}

#[test]
fn amplification_matches_binomial() {
    assert!((majority_probability(0.75, 3) - 27.0 / 32.0).abs() < 1e-15);
    assert!((majority_probability(0.25, 3) - 5.0 / 32.0).abs() < 1e-15);
    for v in [0.25, 0.5, 0.75, 1.0] {
        let f = library::constant(v, &[]).unwrap();
        let inst = HierarchyInstance::new(f, Vec::new(), Quantifier::Sup, Assignment::new()).unwrap();
        for t in [1, 3, 5] {
            let a = amplify(&inst, t, &b()).unwrap();
            let got = qopt_value(&a, Method::Exact, &b()).unwrap().value;
            assert!((got - majority_probability(v, t)).abs() < 1e-12, "v={v} t={t}: {got}");
        }
    }
    let f = library::constant(0.5, &[]).unwrap();
    let inst = HierarchyInstance::new(f, Vec::new(), Quantifier::Sup, Assignment::new()).unwrap();
    assert!(matches!(amplify(&inst, 2, &b()), Err(crate::Error::EvenT(2))));
}

#[test]
fn amplified_witness_level() {
    let f = library::measure_qubit("w1", Role::Witness).unwrap();
    let inst = one_level(f, Quantifier::Sup);
    let a = amplify(&inst, 3, &b()).unwrap();
    assert_eq!(a.p(), 3);
    assert_eq!(a.grid_precision(), 9);
    assert!((qopt_value(&a, Method::Exact, &b()).unwrap().value - 1.0).abs() < 1e-9);
}

#[test]
fn extra_witness_copies_never_hurt() {
    // f reads the witness once; g reads ψ ⊗ ψ' and ignores ψ'.
    let mut rng = random::rng(12);
    let m = random::acceptance_matrix(&mut rng, 2);
    let inst = matrix_instance(&m, Quantifier::Sup);
    let big = CMatrix::from_fn(4, 4, |i, j| if i % 2 == j % 2 { m[(i / 2, j / 2)] } else { C64::new(0.0, 0.0) });
    let f2 = library::from_acceptance_matrix(&[("w1", Role::Witness, 2)], &big).unwrap();
    let inst2 = one_level(f2, Quantifier::Sup);
    let v1 = qopt_value(&inst, Method::Exact, &b()).unwrap().value;
    let v2 = qopt_value(&inst2, Method::Exact, &b()).unwrap().value;
    assert!(v2 >= v1 - 1e-9);
}

#[test]
fn instance_validation_and_json() {
    let f = library::equality_test(("w1", Role::Witness), ("w2", Role::Witness)).unwrap();
    assert!(HierarchyInstance::new(f.clone(), vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new()).is_err());
    assert!(HierarchyInstance::new(f.clone(), vec![vec!["w1".into(), "w2".into()], vec![]], Quantifier::Sup, Assignment::new())
        .is_err());
    let inst = equality_instance();
    let back = HierarchyInstance::from_json(&inst.to_json()).unwrap();
    assert_eq!(back, inst);
    let input = library::half_plus_acceptor(true).unwrap();
    assert!(HierarchyInstance::new(input.clone(), vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new()).is_err());
    let mut a = Assignment::new();
    a.insert("in".into(), Qustring::plus(1));
    let ok = HierarchyInstance::new(input, vec![vec!["w1".into()]], Quantifier::Sup, a).unwrap();
    assert!((qopt_value(&ok, Method::Exact, &b()).unwrap().value - 0.5).abs() < 1e-9);
}

#[test]
fn method_strings() {
    for s in ["exact", "grid:3", "alt:5,2,7"] {
        assert_eq!(s.parse::<Method>().unwrap().to_string(), s);
    }
    assert_eq!("alt:5,2".parse::<Method>().unwrap(), Method::Alternating { iters: 5, restarts: 2, seed: 0 });
    assert!("grid:x".parse::<Method>().is_err());
}
