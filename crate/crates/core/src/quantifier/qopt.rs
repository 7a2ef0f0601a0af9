use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::{extreme_eigenpair, Quantifier};
use super::grid::{best_index, GridSpec};
use super::instance::HierarchyInstance;
use crate::circuit::Assignment;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE};
use crate::random;
use crate::state::Qustring;
use crate::Budgets;

/// How the nested optimum is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Method {
    /// Eigenvalue oracle for `k = 1`; for `k = 2` the outer level runs over
    /// the instance's grid precision and the inner level is an eigenvalue.
    Exact,
    /// Every level ranges over normalized grid states at precision `r`.
    Grid { r: u32 },
    /// Block-coordinate best responses from random starts; a heuristic bound.
    Alternating { iters: usize, restarts: usize, seed: u64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::Grid { r } => write!(f, "grid:{r}"),
            Method::Alternating { iters, restarts, seed } => write!(f, "alt:{iters},{restarts},{seed}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// `exact`, `grid:r`, or `alt:iters,restarts[,seed]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown method {s:?}; expected exact, grid:r or alt:iters,restarts[,seed]"));
        if s == "exact" {
            return Ok(Method::Exact);
        }
        if let Some(r) = s.strip_prefix("grid:") {
            return Ok(Method::Grid { r: r.parse().map_err(|_| bad())? });
        }
        if let Some(rest) = s.strip_prefix("alt:") {
            let parts: Vec<u64> =
                rest.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            return match parts[..] {
                [iters, restarts] => Ok(Method::Alternating { iters: iters as usize, restarts: restarts as usize, seed: 0 }),
                [iters, restarts, seed] => Ok(Method::Alternating { iters: iters as usize, restarts: restarts as usize, seed }),
                _ => Err(bad()),
            };
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QoptResult {
    pub value: f64,
    pub method: String,
    /// Optimal first-level witness tuple, when the instance has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Qustring>>,
    /// False for heuristic bounds that are not the method's exact optimum.
    pub certified: bool,
}

/// Range of a single level.
#[derive(Debug, Clone, Copy)]
enum Range {
    Grid(u32),
    Basis,
    Eigen,
}

struct Engine<'a> {
    inst: &'a HierarchyInstance,
    budgets: &'a Budgets,
    ranges: Vec<Range>,
    /// Acceptance operator over every witness register in level order,
    /// when it fits the matrix budget. Inner operators are then partial
    /// contractions of it instead of fresh simulations.
    joint: Option<CMatrix>,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a HierarchyInstance, budgets: &'a Budgets, ranges: Vec<Range>) -> Result<Self> {
        let names: Vec<&str> = inst.levels().iter().flatten().map(String::as_str).collect();
        let qubits = names.len() * inst.p();
        let joint = if !names.is_empty() && qubits < usize::BITS as usize && 1usize << qubits <= budgets.matrix_dim {
            Some(inst.base().acceptance_operator(inst.inputs(), &names, budgets)?.matrix().clone())
        } else {
            None
        };
        Ok(Engine { inst, budgets, ranges, joint })
    }

    fn candidates(&self, level: usize) -> Result<Arc<Vec<Qustring>>> {
        let p = self.inst.p();
        match self.ranges[level] {
            Range::Grid(r) => {
                let spec = GridSpec::new(p, r)?;
                self.budgets.check_grid("grid layout patterns per level", product_count(spec.layout_count(), self.inst.m()))?;
                spec.distinct_states(self.budgets)
            }
            Range::Basis => {
                self.budgets.check_qubits(p)?;
                Ok(Arc::new((0..1usize << p).map(|i| Qustring::basis(p, i)).collect()))
            }
            Range::Eigen => unreachable!("eigen ranges are only used innermost"),
        }
    }

    fn start(&self) -> Result<(f64, Vec<Qustring>)> {
        self.solve(0, self.inst.inputs(), &[ONE])
    }

    /// Nested optimum with levels `< level` fixed, both as register values in
    /// `fixed` and as their joint state `prefix`; returns the value and the
    /// optimal tuple of level `level`.
    fn solve(&self, level: usize, fixed: &Assignment, prefix: &[C64]) -> Result<(f64, Vec<Qustring>)> {
        let k = self.inst.k();
        if k == 0 {
            return Ok((self.inst.base().evaluate(fixed, self.budgets)?, Vec::new()));
        }
        let names: Vec<&str> = self.inst.levels()[level].iter().map(String::as_str).collect();
        let mode = self.inst.quantifier(level);
        if level + 1 == k {
            return self.innermost(&names, mode, fixed, prefix);
        }
        let lists = self.candidates(level)?;
        let count = product_count(lists.len() as u128, names.len());
        let count = usize::try_from(count).map_err(|_| Error::BudgetExceeded {
            what: "witness tuples",
            count,
            budget: usize::MAX as u128,
        })?;
        let values: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let tuple = tuple_at(&lists, names.len(), idx);
                let mut next = prefix.to_vec();
                for s in &tuple {
                    next = kron(&next, s.amplitudes());
                }
                if self.joint.is_some() {
                    return self.solve(level + 1, fixed, &next).map(|(v, _)| v);
                }
                let mut a = fixed.clone();
                for (name, s) in names.iter().zip(tuple) {
                    a.insert(name.to_string(), s);
                }
                self.solve(level + 1, &a, &next).map(|(v, _)| v)
            })
            .collect::<Result<_>>()?;
        let best = best_index(&values, mode);
        Ok((values[best], tuple_at(&lists, names.len(), best)))
    }

    fn inner_operator(&self, names: &[&str], fixed: &Assignment, prefix: &[C64]) -> Result<CMatrix> {
        match &self.joint {
            Some(j) => Ok(contract(j, prefix)),
            None => Ok(self.inst.base().acceptance_operator(fixed, names, self.budgets)?.matrix().clone()),
        }
    }

    fn innermost(&self, names: &[&str], mode: Quantifier, fixed: &Assignment, prefix: &[C64]) -> Result<(f64, Vec<Qustring>)> {
        let m = self.inner_operator(names, fixed, prefix)?;
        match self.ranges[self.inst.k() - 1] {
            Range::Eigen => {
                if names.len() != 1 {
                    return Err(Error::NotSupported(
                        "exact evaluation of a level with several witness registers needs a product-state optimizer".into(),
                    ));
                }
                let (v, w) = extreme_eigenpair(&m, mode)?;
                Ok((v, vec![w]))
            }
            Range::Grid(r) if names.len() == 1 => {
                let spec = GridSpec::new(self.inst.p(), r)?;
                let (v, w) = spec.optimize(&m, mode, self.budgets)?;
                Ok((v, vec![w]))
            }
            Range::Basis => {
                // Basis tuples are basis states of the joint register.
                let diag: Vec<f64> = (0..m.nrows()).map(|i| m[(i, i)].re).collect();
                let best = best_index(&diag, mode);
                let p = self.inst.p();
                let tuple =
                    (0..names.len()).map(|j| Qustring::basis(p, best >> (p * (names.len() - 1 - j)) & ((1 << p) - 1))).collect();
                Ok((diag[best], tuple))
            }
            Range::Grid(_) => {
                let lists = self.candidates(self.inst.k() - 1)?;
                let count = product_count(lists.len() as u128, names.len()) as usize;
                let values: Vec<f64> = (0..count)
                    .into_par_iter()
                    .map(|idx| {
                        let t = tuple_at(&lists, names.len(), idx);
                        let joint = t[1..].iter().fold(t[0].clone(), |acc, s| acc.tensor(s));
                        linalg::expectation(&m, joint.amplitudes())
                    })
                    .collect();
                let best = best_index(&values, mode);
                Ok((values[best], tuple_at(&lists, names.len(), best)))
            }
        }
    }
}

fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `(⟨Φ| ⊗ I) J (|Φ⟩ ⊗ I)` for a prefix state `Φ` on the leading registers.
fn contract(j: &CMatrix, phi: &[C64]) -> CMatrix {
    let outer = phi.len();
    let inner = j.nrows() / outer;
    CMatrix::from_fn(inner, inner, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for (x, px) in phi.iter().enumerate() {
            if *px == C64::new(0.0, 0.0) {
                continue;
            }
            let mut row = C64::new(0.0, 0.0);
            for (y, py) in phi.iter().enumerate() {
                row += j[(x * inner + a, y * inner + b)] * py;
            }
            acc += px.conj() * row;
        }
        acc
    })
}

fn product_count(per: u128, m: usize) -> u128 {
    (0..m).fold(1u128, |acc, _| acc.saturating_mul(per))
}

/// Tuple number `idx` in mixed radix, first register most significant.
fn tuple_at(list: &[Qustring], m: usize, mut idx: usize) -> Vec<Qustring> {
    let mut out = vec![list[0].clone(); m];
    for slot in out.iter_mut().rev() {
        *slot = list[idx % list.len()].clone();
        idx /= list.len();
    }
    out
}

fn clamp_result(inst: &HierarchyInstance, method: Method, (value, witness): (f64, Vec<Qustring>), certified: bool) -> QoptResult {
    QoptResult { value: value.clamp(0.0, 1.0), method: method.to_string(), witness: (inst.k() > 0).then_some(witness), certified }
}

/// `opr₁ ψ⃗₁ … opr_k ψ⃗_k f(φ⃗, ψ⃗₁, …, ψ⃗_k)` by the chosen method.
///
/// Grid ranges are checked level by level: each level's enumeration must fit
/// the grid budget on its own.
pub fn qopt_value(inst: &HierarchyInstance, method: Method, budgets: &Budgets) -> Result<QoptResult> {
    let k = inst.k();
    let ranges = match method {
        Method::Exact => match k {
            0 => Vec::new(),
            1 => vec![Range::Eigen],
            2 => vec![Range::Grid(inst.grid_precision()), Range::Eigen],
            _ => return Err(Error::NotSupported(format!("exact evaluation with {k} quantifier levels"))),
        },
        Method::Grid { r } => vec![Range::Grid(r); k],
        Method::Alternating { iters, restarts, seed } => return alternating(inst, iters, restarts, seed, budgets),
    };
    let engine = Engine::new(inst, budgets, ranges)?;
    Ok(clamp_result(inst, method, engine.start()?, true))
}

/// The same nesting with every level restricted to computational-basis
/// strings.
pub fn classical_quantifier_value(inst: &HierarchyInstance, budgets: &Budgets) -> Result<QoptResult> {
    let bits = (inst.k() * inst.m() * inst.p()) as u32;
    let count = if bits >= 128 { u128::MAX } else { 1u128 << bits };
    budgets.check_grid("classical witness combinations", count)?;
    let engine = Engine::new(inst, budgets, vec![Range::Basis; inst.k()])?;
    let (value, witness) = engine.start()?;
    Ok(QoptResult {
        value: value.clamp(0.0, 1.0),
        method: "classical".into(),
        witness: (inst.k() > 0).then_some(witness),
        certified: true,
    })
}

/// Block-coordinate best responses. Each restart draws Haar-random witnesses,
/// then repeatedly replaces every register by the extreme eigenvector of its
/// acceptance operator given the others. The reported value is re-scored
/// with the first-level tuple fixed and the rest resolved exactly when that
/// is possible (`k ≤ 2`, single-register inner level), which makes it a
/// valid bound: from below for a leading sup, from above for a leading inf.
fn alternating(inst: &HierarchyInstance, iters: usize, restarts: usize, seed: u64, budgets: &Budgets) -> Result<QoptResult> {
    let method = Method::Alternating { iters, restarts, seed };
    let k = inst.k();
    if k == 0 {
        return Ok(clamp_result(inst, method, (inst.base().evaluate(inst.inputs(), budgets)?, Vec::new()), true));
    }
    if restarts == 0 {
        return Err(Error::ConfigInvalid("alternating optimization needs at least one restart".into()));
    }
    let p = inst.p();
    let certified = k == 1 || (k == 2 && inst.m() == 1);
    let mut rng = random::rng(seed);
    let mut best: Option<(f64, Vec<Qustring>)> = None;
    for _ in 0..restarts {
        let mut w: Vec<Vec<Qustring>> =
            inst.levels().iter().map(|l| l.iter().map(|_| random::haar_state(&mut rng, p)).collect()).collect();
        for _ in 0..iters.max(1) {
            for level in 0..k {
                for j in 0..inst.m() {
                    let name = inst.levels()[level][j].as_str();
                    let mut a = inst.assignment(&w);
                    a.remove(name);
                    let m = inst.base().acceptance_operator(&a, &[name], budgets)?;
                    w[level][j] = extreme_eigenpair(m.matrix(), inst.quantifier(level))?.1;
                }
            }
        }
        // Score: first level fixed, the rest resolved exactly when possible.
        let value = if certified {
            let mut a = inst.inputs().clone();
            for (name, v) in inst.levels()[0].iter().zip(&w[0]) {
                a.insert(name.clone(), v.clone());
            }
            if k == 1 {
                inst.base().evaluate(&a, budgets)?
            } else {
                let names: Vec<&str> = inst.levels()[1].iter().map(String::as_str).collect();
                let m = inst.base().acceptance_operator(&a, &names, budgets)?;
                extreme_eigenpair(m.matrix(), inst.quantifier(1))?.0
            }
        } else {
            inst.base().evaluate(&inst.assignment(&w), budgets)?
        };
        if best.as_ref().is_none_or(|(b, _)| inst.leading().better(value, *b)) {
            best = Some((value, w.swap_remove(0)));
        }
    }
    Ok(clamp_result(inst, method, best.expect("at least one restart"), certified))
}

/// Promise thresholds `(a, b)` with `a + b = 1` and `a > b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionThresholds {
    a: f64,
    b: f64,
}

impl Default for DecisionThresholds {
    fn default() -> Self {
        DecisionThresholds { a: 0.75, b: 0.25 }
    }
}

impl DecisionThresholds {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !((a + b - 1.0).abs() <= 1e-12 && a > b && (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)) {
            return Err(Error::InvalidThresholds { a, b });
        }
        Ok(DecisionThresholds { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn classify(&self, value: f64) -> Verdict {
        if value >= self.a - GAP_TOLERANCE {
            Verdict::Accept
        } else if value <= self.b + GAP_TOLERANCE {
            Verdict::Reject
        } else {
            Verdict::OutsideLegalRegion
        }
    }
}

/// Slack on threshold comparisons.
pub const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    OutsideLegalRegion,
}

pub fn decide(inst: &HierarchyInstance, th: &DecisionThresholds, method: Method, budgets: &Budgets) -> Result<Verdict> {
    Ok(th.classify(qopt_value(inst, method, budgets)?.value))
}

/// `P[Bin(t, v) > t/2]`, the value of a `t`-fold majority vote over
/// independent runs accepting with probability `v`.
pub fn majority_probability(v: f64, t: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=t {
        if 2 * j > t {
            total += binom * v.powi(j as i32) * (1.0 - v).powi((t - j) as i32);
        }
        binom = binom * (t - j) as f64 / (j + 1) as f64;
    }
    total
}
