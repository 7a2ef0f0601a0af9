use rayon::prelude::*;

use super::report::{Case, Relation, Report};
use super::ExperimentConfig;
use crate::algebra::{problem_separability, PartialProblem, Side, ThresholdProblem};
use crate::circuit::{library, Assignment, QuantumFunction, Role};
use crate::codec::{reconstruction_precision, Fragment, Generator};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantifier::{
    amplify, classical_quantifier_value, complement_instance, eigen_oracle, majority_probability, qopt_value, DecisionThresholds,
    HierarchyInstance, Method, Quantifier,
};
use crate::random::{self, LabRng};
use crate::state::Qustring;
use crate::Budgets;

pub const SUITES: [&str; 8] = [
    "generator-roundtrip",
    "fragment-bounds",
    "m0-reconstruction",
    "grid-convergence",
    "amplification",
    "duality",
    "separability",
    "classical-vs-quantum",
];

/// Runs the named lemma-check suite. Inputs are drawn sequentially from
/// the seeded generator; cases are evaluated in parallel.
pub fn run_lemma_suite(name: &str, cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let cases = match name {
        "generator-roundtrip" => generator_roundtrip(cfg),
        "fragment-bounds" => fragment_bounds(cfg),
        "m0-reconstruction" => reconstruction(cfg),
        "grid-convergence" => grid_convergence(cfg),
        "amplification" => amplification(cfg),
        "duality" => duality(cfg),
        "separability" => separability(cfg),
        "classical-vs-quantum" => classical_vs_quantum(cfg),
        _ => return Err(Error::ConfigInvalid(format!("unknown suite {name:?}; expected one of {SUITES:?}"))),
    }?;
    Ok(Report::new(name, cfg.seed, cases))
}

fn rng(cfg: &ExperimentConfig) -> LabRng {
    random::rng(cfg.seed)
}

fn generator_roundtrip(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let ns = &cfg.sweeps.n;
    let states: Vec<(usize, Qustring)> = (0..cfg.sweeps.samples)
        .map(|i| {
            let n = ns[i % ns.len()];
            (n, random::haar_state(&mut rng, n + 1))
        })
        .collect();
    states
        .par_iter()
        .enumerate()
        .map(|(i, (n, phi))| {
            let back = Generator::decompose(phi)?.recompose();
            let d = phi.projector().trace_distance(&back.projector())?;
            Ok(Case::new(format!("{i:04}"), "recomposed state trace distance", Relation::AtMost, d, 1e-10).n(*n))
        })
        .collect()
}

fn fragment_bounds(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let points: Vec<(usize, f64, Vec<Generator>)> = sweep_points(cfg)
        .into_iter()
        .map(|(n, eps)| (n, eps, (0..cfg.sweeps.samples).map(|_| Generator::random(&mut rng, n)).collect()))
        .collect();
    let nested: Vec<Vec<Case>> = points
        .par_iter()
        .enumerate()
        .map(|(i, (n, eps, gens))| {
            let (mut entry, mut node) = (0.0f64, 0.0f64);
            for g in gens {
                let f = Fragment::quantize(g, *eps)?;
                entry = entry.max(f.max_entry_error(g)?);
                node = node.max(f.max_node_error(g)?);
            }
            Ok(vec![
                Case::new(format!("{i:04}-entry"), "fragment entrywise error 2eps", Relation::AtMost, entry, 2.0 * eps)
                    .n(*n)
                    .eps(*eps),
                Case::new(format!("{i:04}-node"), "fragment node operator-norm error 4eps", Relation::AtMost, node, 4.0 * eps)
                    .n(*n)
                    .eps(*eps),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn sweep_points(cfg: &ExperimentConfig) -> Vec<(usize, f64)> {
    cfg.sweeps.n.iter().flat_map(|&n| cfg.sweeps.eps.iter().map(move |&e| (n, e))).collect()
}

/// One row per `(n, ε)`: the largest trace distance over the samples after
/// quantizing at `ε·2^{-n-4}`.
fn reconstruction(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let points: Vec<(usize, f64, Vec<Qustring>)> = sweep_points(cfg)
        .into_iter()
        .map(|(n, eps)| (n, eps, (0..cfg.sweeps.samples).map(|_| random::haar_state(&mut rng, n + 1)).collect()))
        .collect();
    points
        .par_iter()
        .enumerate()
        .map(|(i, (n, eps, states))| {
            let mut worst = 0.0f64;
            for phi in states {
                let g = Generator::decompose(phi)?;
                let rho = Fragment::quantize(&g, reconstruction_precision(*eps, *n))?.reconstruct()?;
                worst = worst.max(phi.projector().trace_distance(&rho)?);
            }
            Ok(Case::new(format!("{i:04}"), "reconstruction trace distance eps", Relation::AtMost, worst, *eps).n(*n).eps(*eps))
        })
        .collect()
}

fn witness_instance(m: &CMatrix, lead: Quantifier) -> Result<HierarchyInstance> {
    let f = library::from_acceptance_matrix(&[("w1", Role::Witness, 1)], m)?;
    HierarchyInstance::new(f, vec![vec!["w1".into()]], lead, Assignment::new())
}

/// Distance of the one-qubit grid optimum from the top eigenvalue, per `r`,
/// plus monotonicity of that distance in `r`.
fn grid_convergence(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let mut rs = cfg.sweeps.r.clone();
    rs.sort_unstable();
    let mats: Vec<CMatrix> = (0..cfg.sweeps.samples).map(|_| random::acceptance_matrix(&mut rng, 2)).collect();
    let b = cfg.budgets;
    let nested: Vec<Vec<Case>> = mats
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let inst = witness_instance(m, Quantifier::Sup)?;
            let lambda = linalg::hermitian_eigen(m).0.last().copied().unwrap_or(0.0);
            let mut cases = Vec::new();
            let mut gaps = Vec::new();
            for &r in &rs {
                let v = qopt_value(&inst, Method::Grid { r }, &b)?.value;
                let gap = (v - lambda).abs();
                gaps.push(gap);
                let allowed = (3.0 - r as f64).exp2();
                cases
                    .push(Case::new(format!("{i:04}-r{r:02}"), "grid gap 2^(3-r)", Relation::AtMost, gap, allowed).r(r).value(v));
            }
            let rise = gaps.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            cases.push(Case::new(format!("{i:04}-monotone"), "grid gap non-increasing in r", Relation::AtMost, rise, 1e-12));
            Ok(cases)
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn amplification(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let b = cfg.budgets;
    let points: Vec<(f64, usize)> = cfg.sweeps.v.iter().flat_map(|&v| cfg.sweeps.t.iter().map(move |&t| (v, t))).collect();
    points
        .par_iter()
        .enumerate()
        .map(|(i, &(v, t))| {
            let f = library::constant(v, &[])?;
            let inst = HierarchyInstance::new(f, Vec::new(), Quantifier::Sup, Assignment::new())?;
            let got = qopt_value(&amplify(&inst, t, &b)?, Method::Exact, &b)?.value;
            let want = majority_probability(v, t);
            Ok(Case::new(format!("{i:04}"), "majority vote binomial", Relation::AtMost, (got - want).abs(), 1e-12)
                .t(t)
                .value(got)
                .note(format!("v = {v}")))
        })
        .collect()
}

fn two_level_instance(m: &CMatrix, lead: Quantifier) -> Result<HierarchyInstance> {
    let f = library::from_acceptance_matrix(&[("w1", Role::Witness, 1), ("w2", Role::Witness, 1)], m)?;
    HierarchyInstance::new(f, vec![vec!["w1".into()], vec!["w2".into()]], lead, Assignment::new())
}

/// `f + f̄ = 1` for random one-level instances (exact) and two-level
/// instances (grid at precision 3), plus sup-inf ≤ inf-sup on the latter.
fn duality(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let b = cfg.budgets;
    let lead = |i: usize| if i.is_multiple_of(2) { Quantifier::Sup } else { Quantifier::Inf };
    let one: Vec<CMatrix> = (0..cfg.sweeps.samples).map(|_| random::acceptance_matrix(&mut rng, 2)).collect();
    let two: Vec<CMatrix> = (0..cfg.sweeps.samples.div_ceil(2)).map(|_| random::acceptance_matrix(&mut rng, 4)).collect();
    let mut cases: Vec<Case> = one
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let inst = witness_instance(m, lead(i))?;
            let v = qopt_value(&inst, Method::Exact, &b)?.value;
            let c = qopt_value(&complement_instance(&inst), Method::Exact, &b)?.value;
            Ok(Case::new(format!("k1-{i:04}"), "complement duality", Relation::AtMost, (v + c - 1.0).abs(), 1e-9).value(v))
        })
        .collect::<Result<_>>()?;
    let grid = Method::Grid { r: 3 };
    let nested: Vec<Vec<Case>> = two
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let inst = two_level_instance(m, lead(i))?;
            let v = qopt_value(&inst, grid, &b)?.value;
            let c = qopt_value(&complement_instance(&inst), grid, &b)?.value;
            let sup_first = two_level_instance(m, Quantifier::Sup)?;
            let supinf = qopt_value(&sup_first, grid, &b)?.value;
            let infsup = qopt_value(&sup_first.transposed(), grid, &b)?.value;
            Ok(vec![
                Case::new(format!("k2-{i:04}"), "complement duality", Relation::AtMost, (v + c - 1.0).abs(), 1e-9).r(3).value(v),
                Case::new(format!("k2-{i:04}-minimax"), "sup-inf at most inf-sup", Relation::AtMost, supinf - infsup, 1e-9)
                    .r(3)
                    .value(supinf),
            ])
        })
        .collect::<Result<_>>()?;
    cases.extend(nested.into_iter().flatten());
    Ok(cases)
}

/// A one-qubit-input, one-qubit-witness threshold problem whose base reads
/// the input only after measuring it.
pub(crate) fn mixed_threshold(m: &CMatrix, lead: Quantifier, b: &Budgets) -> Result<PartialProblem> {
    let f = library::from_acceptance_matrix(&[("x", Role::Input, 1), ("w1", Role::Witness, 1)], m)?.classical_mix("x")?;
    Ok(threshold(f, vec![vec!["w1".into()]], lead, b)?.into())
}

fn threshold(f: QuantumFunction, levels: Vec<Vec<String>>, lead: Quantifier, b: &Budgets) -> Result<ThresholdProblem> {
    let inputs: Assignment = [("x".to_string(), Qustring::zero(1))].into();
    let inst = HierarchyInstance::new(f, levels, lead, inputs)?;
    Ok(ThresholdProblem::new(inst, DecisionThresholds::default(), Method::Exact, *b))
}

/// The unmixed `½|+⟩⟨+|` acceptor with a (useless) witness.
pub(crate) fn plus_acceptor(b: &Budgets) -> Result<PartialProblem> {
    let f = library::half_plus_acceptor(true)?;
    let inputs: Assignment = [("in".to_string(), Qustring::zero(1))].into();
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], Quantifier::Sup, inputs)?;
    Ok(ThresholdProblem::new(inst, DecisionThresholds::default(), Method::Exact, *b).into())
}

/// Both threshold sets of random mixed one-level problems must pass the
/// separability check on the probe states; the unmixed `|+⟩` acceptor must
/// fail it.
fn separability(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let b = cfg.budgets;
    let inputs: Vec<(CMatrix, Vec<Qustring>)> = (0..cfg.sweeps.samples)
        .map(|_| {
            let m = random::acceptance_matrix(&mut rng, 4);
            (m, (0..cfg.sweeps.probes).map(|_| random::haar_state(&mut rng, 1)).collect())
        })
        .collect();
    let nested: Vec<Vec<Case>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, (m, probes))| {
            let lead = if i % 2 == 0 { Quantifier::Sup } else { Quantifier::Inf };
            let p = mixed_threshold(m, lead, &b)?;
            [(Side::Accept, "accept"), (Side::Reject, "reject")]
                .into_iter()
                .map(|(side, tag)| {
                    let rep = problem_separability(&p, side, 1, probes, &b)?;
                    let mut case = Case::new(
                        format!("{i:04}-{tag}"),
                        "threshold set classically separable",
                        Relation::AtMost,
                        f64::from(u8::from(!rep.verified)),
                        0.0,
                    )
                    .value(rep.probes_checked as f64);
                    if let Some(ce) = rep.counterexample {
                        case = case.note(format!("{lead:?}-form {tag} set; counterexample {:?}", ce.phi[0]));
                    }
                    Ok(case)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut cases: Vec<Case> = nested.into_iter().flatten().collect();
    let probes: Vec<Qustring> =
        (0..cfg.sweeps.probes).map(|_| random::haar_state(&mut rng, 1)).chain([Qustring::plus(1)]).collect();
    let rep = problem_separability(&plus_acceptor(&b)?, Side::Reject, 1, &probes, &b)?;
    cases.push(
        Case::new(
            "plus-acceptor",
            "unmixed acceptor yields a counterexample",
            Relation::AtLeast,
            f64::from(u8::from(!rep.verified)),
            1.0,
        )
        .value(rep.probes_checked as f64),
    );
    Ok(cases)
}

/// Classical witnesses never beat quantum ones for a leading sup, and tie
/// when the acceptance operator is diagonal.
fn classical_vs_quantum(cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let mut rng = rng(cfg);
    let b = cfg.budgets;
    let general: Vec<CMatrix> = (0..cfg.sweeps.samples).map(|_| random::acceptance_matrix(&mut rng, 2)).collect();
    let diagonal: Vec<CMatrix> = (0..cfg.sweeps.samples.div_ceil(2))
        .map(|_| CMatrix::from_diagonal(&nalgebra::DVector::from_fn(2, |_, _| rand::Rng::random::<f64>(&mut rng).into())))
        .collect();
    let all: Vec<(bool, &CMatrix)> = general.iter().map(|m| (false, m)).chain(diagonal.iter().map(|m| (true, m))).collect();
    all.par_iter()
        .enumerate()
        .map(|(i, &(diag, m))| {
            let inst = witness_instance(m, Quantifier::Sup)?;
            let c = classical_quantifier_value(&inst, &b)?.value;
            let (q, _) = eigen_oracle(&inst.base().acceptance_operator(&Assignment::new(), &["w1"], &b)?, Quantifier::Sup, &b)?;
            Ok(if diag {
                Case::new(format!("diag-{i:04}"), "diagonal operator equality", Relation::AtMost, (c - q).abs(), 1e-9).value(q)
            } else {
                Case::new(format!("gen-{i:04}"), "classical at most quantum", Relation::AtMost, c - q, 1e-9).value(q)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.sweeps.samples = 4;
        cfg.sweeps.r = vec![2, 3];
        cfg.sweeps.probes = 10;
        cfg
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_lemma_suite("nope", &small()), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn roundtrip_suite_with_seed_7() {
        let mut cfg = ExperimentConfig::default().with_seed(7);
        cfg.sweeps.samples = 50;
        let r = run_lemma_suite("generator-roundtrip", &cfg).unwrap();
        assert_eq!(r.cases.len(), 50);
        assert!(r.passed());
        assert!(r.max_measured("recomposed state trace distance").unwrap() < 1e-10);
    }

    #[test]
    fn amplification_reports_binomials() {
        let mut cfg = small();
        cfg.sweeps.v = vec![0.75, 0.25];
        cfg.sweeps.t = vec![3];
        let r = run_lemma_suite("amplification", &cfg).unwrap();
        let values: Vec<f64> = r.cases.iter().map(|c| c.value.unwrap()).collect();
        assert!((values[0] - 27.0 / 32.0).abs() < 1e-12 && (values[1] - 5.0 / 32.0).abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn reconstruction_csv_has_one_row_per_sweep_point() {
        let mut cfg = small();
        cfg.sweeps.n = vec![1, 2];
        let r = run_lemma_suite("m0-reconstruction", &cfg).unwrap();
        assert!(r.passed());
        let csv = super::super::render(&r, super::super::Format::Csv).unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 4);
    }

    #[test]
    fn other_suites_run_small() {
        for name in ["fragment-bounds", "grid-convergence", "duality", "classical-vs-quantum"] {
            let r = run_lemma_suite(name, &small()).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.cases.iter().find(|c| !c.passed));
        }
        let sep = run_lemma_suite("separability", &small()).unwrap();
        assert!(sep.cases.iter().find(|c| c.id == "plus-acceptor").unwrap().passed);
    }

    #[test]
    fn same_seed_same_report() {
        let a = run_lemma_suite("duality", &small()).unwrap();
        let b = run_lemma_suite("duality", &small()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_sweeps() {
        let mut cfg = small();
        cfg.sweeps.t = vec![2];
        assert!(matches!(run_lemma_suite("amplification", &cfg), Err(Error::ConfigInvalid(_))));
        assert!(ExperimentConfig::from_json(r#"{"budgets": {"qubits": 0}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let cfg = ExperimentConfig::from_json(r#"{"seed": 3, "sweeps": {"n": [1]}}"#).unwrap();
        assert_eq!((cfg.seed, cfg.sweeps.n.clone(), cfg.sweeps.samples), (3, vec![1], 20));
    }
}
