use super::*;
use crate::circuit::{library, Assignment, QuantumFunction, Role};
use crate::error::Error;
use crate::quantifier::{decide, DecisionThresholds, HierarchyInstance, Method, Quantifier, Verdict};
use crate::random;
use crate::state::{QTuple, Qustring};
use crate::Budgets;

fn b() -> Budgets {
    Budgets::default()
}

fn t(q: Qustring) -> QTuple {
    QTuple::single(q)
}

fn plus() -> Qustring {
    Qustring::plus(1)
}

// x = |0>, y = |1>, z = |+> over a one-qubit ground.
fn xyz() -> (QTuple, QTuple, QTuple) {
    (t(Qustring::basis(1, 0)), t(Qustring::basis(1, 1)), t(plus()))
}

fn explicit(accept: &[&QTuple], reject: &[&QTuple]) -> PartialProblem {
    let v = |s: &[&QTuple]| s.iter().map(|&x| x.clone()).collect();
    ExplicitProblem::new(1, v(accept), v(reject)).unwrap().into()
}

fn as_explicit(p: &PartialProblem) -> &ExplicitProblem {
    match p {
        PartialProblem::Explicit(e) => e,
        PartialProblem::Threshold(_) => panic!("expected explicit"),
    }
}

fn same(p: &PartialProblem, q: &PartialProblem) -> bool {
    as_explicit(p).same_as(as_explicit(q))
}

fn input_instance(f: QuantumFunction, levels: Vec<Vec<String>>, lead: Quantifier) -> HierarchyInstance {
    let inputs: Assignment = f
        .registers_with_role(Role::Input)
        .iter()
        .map(|n| (n.to_string(), Qustring::zero(f.register(n).unwrap().qubits)))
        .collect();
    HierarchyInstance::new(f, levels, lead, inputs).unwrap()
}

fn threshold(f: QuantumFunction, levels: Vec<Vec<String>>, lead: Quantifier) -> PartialProblem {
    ThresholdProblem::new(input_instance(f, levels, lead), DecisionThresholds::default(), Method::Exact, b()).into()
}

#[test]
fn explicit_validation() {
    let (x, y, _) = xyz();
    assert!(matches!(ExplicitProblem::new(1, vec![x.clone()], vec![x.clone()]), Err(Error::OverlappingSets)));
    // Global phase does not make a new element.
    let minus_x = t(Qustring::new(vec![(-1.0).into(), 0.0.into()]).unwrap());
    assert!(matches!(ExplicitProblem::new(1, vec![x.clone()], vec![minus_x]), Err(Error::OverlappingSets)));
    let two = t(Qustring::basis(2, 0));
    assert!(matches!(ExplicitProblem::new(1, vec![two], vec![]), Err(Error::SizeOverflow { .. })));
    let p = ExplicitProblem::new(1, vec![x.clone(), x.clone()], vec![y]).unwrap();
    assert_eq!(p.accept().len(), 1);
    assert_eq!(p.legal_region().len(), 2);
}

#[test]
fn complement_swaps_and_is_an_involution() {
    let (x, y, z) = xyz();
    let p = explicit(&[&x], &[&y]);
    assert!(same(&complement(&p), &explicit(&[&y], &[&x])));
    let q = explicit(&[&x, &z], &[&y]);
    assert!(same(&complement(&complement(&q)), &q));
}

#[test]
fn intersection_by_hand() {
    let (x, y, z) = xyz();
    let p = explicit(&[&x], &[&y]);
    let q = explicit(&[&x], &[&z]);
    assert!(same(&intersect(&p, &q).unwrap(), &explicit(&[&x], &[])));
    // With a partitioned legal region, P ∩ P‾ accepts nothing.
    let pc = intersect(&p, &complement(&p)).unwrap();
    assert!(as_explicit(&pc).accept().is_empty());
    // Union by hand: E = {x}, accept ({x}∪{x})∩E = {x}, reject {y}∩{z} = ∅.
    assert!(same(&union(&p, &q).unwrap(), &explicit(&[&x], &[])));
}

#[test]
fn de_morgan_commutativity_associativity_idempotence() {
    let (x, y, z) = xyz();
    let problems = [
        explicit(&[&x], &[&y]),
        explicit(&[&x], &[&z]),
        explicit(&[&x, &y], &[&z]),
        explicit(&[&z], &[&x, &y]),
        explicit(&[], &[&x]),
        explicit(&[&y, &z], &[]),
    ];
    for p in &problems {
        assert!(same(&intersect(p, p).unwrap(), p));
        assert!(same(&union(p, p).unwrap(), p));
        for q in &problems {
            let lhs = complement(&union(p, q).unwrap());
            let rhs = intersect(&complement(p), &complement(q)).unwrap();
            assert!(same(&lhs, &rhs));
            assert!(same(&intersect(p, q).unwrap(), &intersect(q, p).unwrap()));
            assert!(same(&union(p, q).unwrap(), &union(q, p).unwrap()));
            for r in &problems {
                let i1 = intersect(&intersect(p, q).unwrap(), r).unwrap();
                let i2 = intersect(p, &intersect(q, r).unwrap()).unwrap();
                assert!(same(&i1, &i2));
                let u1 = union(&union(p, q).unwrap(), r).unwrap();
                let u2 = union(p, &union(q, r).unwrap()).unwrap();
                assert!(same(&u1, &u2));
            }
        }
    }
}

#[test]
fn inclusion_examples() {
    let (x, y, z) = xyz();
    let p = explicit(&[&x], &[&y]);
    assert!(includes(&p, &p).unwrap());
    assert!(includes(&explicit(&[&x], &[&y, &z]), &explicit(&[&x, &y], &[&z])).unwrap());
    assert!(!includes(&p, &explicit(&[&x], &[&z])).unwrap());
    let wide: PartialProblem = ExplicitProblem::new(2, vec![x.clone()], vec![]).unwrap().into();
    assert!(matches!(includes(&p, &wide), Err(Error::GroundMismatch { left: 1, right: 2 })));
    assert!(matches!(intersect(&p, &wide), Err(Error::GroundMismatch { .. })));
}

#[test]
fn threshold_complement_matches_decide() {
    let mut rng = random::rng(5);
    let m = random::acceptance_matrix(&mut rng, 4);
    let f = library::from_acceptance_matrix(&[("x", Role::Input, 1), ("w1", Role::Witness, 1)], &m).unwrap();
    let p = threshold(f.clone(), vec![vec!["w1".into()]], Quantifier::Sup);
    let pc = complement(&p);
    let inst = input_instance(f, vec![vec!["w1".into()]], Quantifier::Sup);
    let swap = |v: Verdict| match v {
        Verdict::Accept => Verdict::Reject,
        Verdict::Reject => Verdict::Accept,
        o => o,
    };
    for _ in 0..20 {
        let phi = random::haar_state(&mut rng, 1);
        let direct = decide(
            &inst.with_inputs([("x".to_string(), phi.clone())].into()).unwrap(),
            &DecisionThresholds::default(),
            Method::Exact,
            &b(),
        )
        .unwrap();
        assert_eq!(p.membership(&t(phi.clone())).unwrap(), direct);
        assert_eq!(pc.membership(&t(phi)).unwrap(), swap(direct));
    }
    // Tuples of the wrong shape are outside the legal region.
    assert_eq!(p.membership(&t(Qustring::zero(2))).unwrap(), Verdict::OutsideLegalRegion);
    assert!(matches!(intersect(&p, &pc), Err(Error::NotSupported(_))));
}

#[test]
fn pairing_round_trip() {
    for parts in [vec![], vec!["".to_string()], vec!["1".into(), "0110".into()], vec!["1".repeat(300), "0".into()]] {
        let code = pair(&parts).unwrap();
        assert_eq!(unpair(&code).unwrap(), parts);
    }
    // 300 needs two length bytes.
    assert_eq!(pair(&["1".repeat(300)]).unwrap().len(), 16 + 300);
    assert!(pair(&["12"]).is_err());
    assert!(unpair("0000001").is_err());
    assert!(unpair("0000001").is_err());
    assert!(unpair("00000010").is_err());
}

#[test]
fn classical_part_examples() {
    // Accepts exactly basis states starting with 1.
    let f = library::measure_qubit("x", Role::Input).unwrap();
    let p = threshold(f, vec![], Quantifier::Sup);
    let parts = classical_part(&p, 1, 1, &b()).unwrap();
    assert_eq!(parts.accept.tuples(), vec![vec!["1".to_string()]]);
    assert_eq!(parts.reject.tuples(), vec![vec!["0".to_string()]]);
    assert!(parts.total);
    assert_eq!(parts.tested, 2);
    let swapped = classical_part(&complement(&p), 1, 1, &b()).unwrap();
    assert_eq!((swapped.accept, swapped.reject), (parts.reject, parts.accept));

    // |+⟩ acceptor: both basis states score 1/2 and fall in the gap.
    let proj = crate::linalg::CMatrix::from_element(2, 2, 0.5.into());
    let f = library::from_acceptance_matrix(&[("x", Role::Input, 1)], &proj).unwrap();
    let p = threshold(f, vec![], Quantifier::Sup);
    assert_eq!(p.membership(&t(plus())).unwrap(), Verdict::Accept);
    let parts = classical_part(&p, 1, 1, &b()).unwrap();
    assert!(parts.accept.is_empty() && parts.reject.is_empty());
    assert!(!parts.total);

    let small = Budgets { grid_count: 4, ..b() };
    assert!(matches!(classical_part(&p, 1, 3, &small), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn classical_parts_of_random_thresholds_are_disjoint() {
    let mut rng = random::rng(8);
    for _ in 0..5 {
        let m = random::acceptance_matrix(&mut rng, 8);
        let f = library::from_acceptance_matrix(&[("x", Role::Input, 2), ("w1", Role::Witness, 1)], &m).unwrap();
        let p = threshold(f, vec![vec!["w1".into()]], Quantifier::Sup);
        let parts = classical_part(&p, 1, 2, &b()).unwrap();
        // Only two-qubit tuples fit the input; one-qubit ones are outside.
        assert_eq!(parts.tested, 6);
        assert!(parts.accept.encoded().all(|c| !parts.reject.encoded().any(|d| d == c)));
        assert!(parts.accept.tuples().iter().chain(&parts.reject.tuples()).all(|tup| tup[0].len() == 2));
    }
}

#[test]
fn separability_trivial_cases() {
    let mut rng = random::rng(3);
    let probes: Vec<Probe> = (0..10).map(|_| Probe::new(vec![random::haar_state(&mut rng, 2)], vec![])).collect();
    let all = is_classically_separable(|_| Ok(true), 2, 1, &probes, &b()).unwrap();
    assert!(all.verified);
    assert_eq!(all.probes_checked, 4 + 10);
    // Basis states only: every superposition is a violation.
    let basis_only = |q: &QTuple| Ok(q.parts()[0].amplitudes().iter().filter(|a| a.norm() > 1e-12).count() == 1);
    let report = is_classically_separable(basis_only, 2, 1, &probes, &b()).unwrap();
    assert!(!report.verified);
    assert_eq!(report.counterexample.unwrap(), probes[0]);
    let tiny = Budgets { grid_count: 2, ..b() };
    assert!(matches!(is_classically_separable(|_| Ok(true), 2, 1, &probes, &tiny), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn separability_of_mixed_thresholds() {
    // Input/witness equality, mixed over the input: g(|x⟩) = 1 on both basis
    // states, g(|+⟩) = 1/2. The reject set of a sup-form is separable; the
    // accept set is not.
    let f = library::equality_test(("x", Role::Input), ("w1", Role::Witness)).unwrap().classical_mix("x").unwrap();
    let sup = threshold(f.clone(), vec![vec!["w1".into()]], Quantifier::Sup);
    let probes = [plus()];
    let c = problem_separability(&sup, Side::Accept, 1, &probes, &b()).unwrap();
    assert!(!c.verified);
    assert!(c.counterexample.unwrap().phi[0].same_state(&plus(), 1e-12));
    assert!(problem_separability(&sup, Side::Reject, 1, &probes, &b()).unwrap().verified);

    // Inf-form: the roles swap.
    let inf = threshold(f.negated(), vec![vec!["w1".into()]], Quantifier::Inf);
    assert!(problem_separability(&inf, Side::Accept, 1, &probes, &b()).unwrap().verified);
    assert!(!problem_separability(&inf, Side::Reject, 1, &probes, &b()).unwrap().verified);

    // Without quantifiers the mixed value is linear in the basis weights.
    let mut rng = random::rng(4);
    let m = random::acceptance_matrix(&mut rng, 2);
    let f = library::from_acceptance_matrix(&[("x", Role::Input, 1)], &m).unwrap().classical_mix("x").unwrap();
    let p = threshold(f, vec![], Quantifier::Sup);
    let probes: Vec<Qustring> = (0..20).map(|_| random::haar_state(&mut rng, 1)).collect();
    for side in [Side::Accept, Side::Reject] {
        assert!(problem_separability(&p, side, 1, &probes, &b()).unwrap().verified);
    }
}

#[test]
fn problem_file_round_trip() {
    let (x, y, _) = xyz();
    let p = ExplicitProblem::new(1, vec![x], vec![y]).unwrap();
    let json = serde_json::to_string(&ProblemFile::from_explicit(&p)).unwrap();
    let back: ProblemFile = serde_json::from_str(&json).unwrap();
    assert!(as_explicit(&back.into_problem(&b()).unwrap()).same_as(&p));
}
