use serde::{Deserialize, Serialize};

use crate::circuit::{Assignment, Role};
use crate::error::{Error, Result};
use crate::quantifier::{qopt_value, DecisionThresholds, HierarchyInstance, Method, Verdict};
use crate::state::QTuple;
use crate::Budgets;

/// Projector distance below which two tuples are the same element.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Where an input falls relative to a partial decision problem.
pub type Membership = Verdict;

/// Finite accept and reject lists over tuples of at most `ground_size`
/// qubits in total.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitProblem {
    ground_size: usize,
    accept: Vec<QTuple>,
    reject: Vec<QTuple>,
}

fn contains(set: &[QTuple], t: &QTuple) -> bool {
    set.iter().any(|s| s.same_state(t, STATE_TOLERANCE))
}

fn dedup(items: impl IntoIterator<Item = QTuple>) -> Vec<QTuple> {
    let mut out: Vec<QTuple> = Vec::new();
    for t in items {
        if !contains(&out, &t) {
            out.push(t);
        }
    }
    out
}

fn union_of(a: &[QTuple], b: &[QTuple]) -> Vec<QTuple> {
    dedup(a.iter().chain(b).cloned())
}

fn intersection_of(a: &[QTuple], b: &[QTuple]) -> Vec<QTuple> {
    a.iter().filter(|t| contains(b, t)).cloned().collect()
}

fn subset(a: &[QTuple], b: &[QTuple]) -> bool {
    a.iter().all(|t| contains(b, t))
}

fn set_eq(a: &[QTuple], b: &[QTuple]) -> bool {
    subset(a, b) && subset(b, a)
}

impl ExplicitProblem {
    pub fn new(ground_size: usize, accept: Vec<QTuple>, reject: Vec<QTuple>) -> Result<Self> {
        for t in accept.iter().chain(&reject) {
            if t.total_size() > ground_size {
                return Err(Error::SizeOverflow { requested: t.total_size(), budget: ground_size });
            }
        }
        let (accept, reject) = (dedup(accept), dedup(reject));
        if accept.iter().any(|t| contains(&reject, t)) {
            return Err(Error::OverlappingSets);
        }
        Ok(ExplicitProblem { ground_size, accept, reject })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn accept(&self) -> &[QTuple] {
        &self.accept
    }

    pub fn reject(&self) -> &[QTuple] {
        &self.reject
    }

    /// `A ∪ B`.
    pub fn legal_region(&self) -> Vec<QTuple> {
        union_of(&self.accept, &self.reject)
    }

    pub fn membership(&self, t: &QTuple) -> Membership {
        if contains(&self.accept, t) {
            Verdict::Accept
        } else if contains(&self.reject, t) {
            Verdict::Reject
        } else {
            Verdict::OutsideLegalRegion
        }
    }

    /// Same accept and reject sets, compared as sets.
    pub fn same_as(&self, other: &ExplicitProblem) -> bool {
        self.ground_size == other.ground_size && set_eq(&self.accept, &other.accept) && set_eq(&self.reject, &other.reject)
    }

    fn check_ground(&self, other: &ExplicitProblem) -> Result<()> {
        if self.ground_size != other.ground_size {
            return Err(Error::GroundMismatch { left: self.ground_size, right: other.ground_size });
        }
        Ok(())
    }

    /// `(A,B)‾ = (B,A)`.
    pub fn complement(&self) -> ExplicitProblem {
        ExplicitProblem { ground_size: self.ground_size, accept: self.reject.clone(), reject: self.accept.clone() }
    }

    /// `(A,B) ∩ (C,D) = (A∩C, (B∪D)∩E)` with `E = (A∪B)∩(C∪D)`.
    pub fn intersect(&self, other: &ExplicitProblem) -> Result<ExplicitProblem> {
        self.check_ground(other)?;
        let e = intersection_of(&self.legal_region(), &other.legal_region());
        let accept = intersection_of(&self.accept, &other.accept);
        let reject = intersection_of(&union_of(&self.reject, &other.reject), &e);
        ExplicitProblem::new(self.ground_size, accept, reject)
    }

    /// `(A,B) ∪ (C,D) = ((A∪C)∩E, B∩D)` with `E = (A∪B)∩(C∪D)`.
    pub fn union(&self, other: &ExplicitProblem) -> Result<ExplicitProblem> {
        self.check_ground(other)?;
        let e = intersection_of(&self.legal_region(), &other.legal_region());
        let accept = intersection_of(&union_of(&self.accept, &other.accept), &e);
        let reject = intersection_of(&self.reject, &other.reject);
        ExplicitProblem::new(self.ground_size, accept, reject)
    }

    /// `(A,B) ⊆ (C,D)` iff `A ⊆ C` and `A∪B = C∪D`.
    pub fn includes_in(&self, other: &ExplicitProblem) -> Result<bool> {
        self.check_ground(other)?;
        Ok(subset(&self.accept, &other.accept) && set_eq(&self.legal_region(), &other.legal_region()))
    }
}

/// Inputs accepted when the quantified value reaches `a` and rejected when
/// it stays below `b`. Tuple parts feed the instance's input registers in
/// declaration order.
#[derive(Debug, Clone)]
pub struct ThresholdProblem {
    instance: HierarchyInstance,
    thresholds: DecisionThresholds,
    method: Method,
    budgets: Budgets,
    swapped: bool,
}

impl ThresholdProblem {
    pub fn new(instance: HierarchyInstance, thresholds: DecisionThresholds, method: Method, budgets: Budgets) -> Self {
        ThresholdProblem { instance, thresholds, method, budgets, swapped: false }
    }

    pub fn instance(&self) -> &HierarchyInstance {
        &self.instance
    }

    pub fn thresholds(&self) -> DecisionThresholds {
        self.thresholds
    }

    /// Input register widths, i.e. the tuple shape this problem speaks about.
    pub fn shape(&self) -> Vec<usize> {
        let base = self.instance.base();
        base.registers_with_role(Role::Input).iter().map(|n| base.register(n).map_or(0, |r| r.qubits)).collect()
    }

    /// The quantified value on input `t`.
    pub fn value(&self, t: &QTuple) -> Result<f64> {
        let base = self.instance.base();
        let names = base.registers_with_role(Role::Input);
        if names.len() != t.arity() || self.shape() != t.shape() {
            return Err(Error::RegisterMismatch(format!(
                "tuple of shape {:?} does not fit inputs of shape {:?}",
                t.shape(),
                self.shape()
            )));
        }
        let inputs: Assignment = names.iter().map(|n| n.to_string()).zip(t.parts().iter().cloned()).collect();
        Ok(qopt_value(&self.instance.with_inputs(inputs)?, self.method, &self.budgets)?.value)
    }

    pub fn membership(&self, t: &QTuple) -> Result<Membership> {
        if t.shape() != self.shape() {
            return Ok(Verdict::OutsideLegalRegion);
        }
        let m = self.thresholds.classify(self.value(t)?);
        Ok(if self.swapped { swap(m) } else { m })
    }

    pub fn complement(&self) -> ThresholdProblem {
        ThresholdProblem { swapped: !self.swapped, ..self.clone() }
    }
}

fn swap(m: Membership) -> Membership {
    match m {
        Verdict::Accept => Verdict::Reject,
        Verdict::Reject => Verdict::Accept,
        Verdict::OutsideLegalRegion => Verdict::OutsideLegalRegion,
    }
}

#[derive(Debug, Clone)]
pub enum PartialProblem {
    Explicit(ExplicitProblem),
    Threshold(ThresholdProblem),
}

impl From<ExplicitProblem> for PartialProblem {
    fn from(p: ExplicitProblem) -> Self {
        PartialProblem::Explicit(p)
    }
}

impl From<ThresholdProblem> for PartialProblem {
    fn from(p: ThresholdProblem) -> Self {
        PartialProblem::Threshold(p)
    }
}

impl PartialProblem {
    pub fn membership(&self, t: &QTuple) -> Result<Membership> {
        match self {
            PartialProblem::Explicit(p) => Ok(p.membership(t)),
            PartialProblem::Threshold(p) => p.membership(t),
        }
    }

    pub fn complement(&self) -> PartialProblem {
        match self {
            PartialProblem::Explicit(p) => p.complement().into(),
            PartialProblem::Threshold(p) => p.complement().into(),
        }
    }

    fn explicit_pair<'a>(&'a self, other: &'a PartialProblem, op: &str) -> Result<(&'a ExplicitProblem, &'a ExplicitProblem)> {
        match (self, other) {
            (PartialProblem::Explicit(a), PartialProblem::Explicit(b)) => Ok((a, b)),
            _ => Err(Error::NotSupported(format!("{op} needs explicit problems"))),
        }
    }

    pub fn intersect(&self, other: &PartialProblem) -> Result<PartialProblem> {
        let (a, b) = self.explicit_pair(other, "intersection")?;
        Ok(a.intersect(b)?.into())
    }

    pub fn union(&self, other: &PartialProblem) -> Result<PartialProblem> {
        let (a, b) = self.explicit_pair(other, "union")?;
        Ok(a.union(b)?.into())
    }

    pub fn includes_in(&self, other: &PartialProblem) -> Result<bool> {
        let (a, b) = self.explicit_pair(other, "inclusion")?;
        a.includes_in(b)
    }
}

/// Free functions mirroring the methods.
pub fn complement(p: &PartialProblem) -> PartialProblem {
    p.complement()
}

pub fn intersect(p: &PartialProblem, q: &PartialProblem) -> Result<PartialProblem> {
    p.intersect(q)
}

pub fn union(p: &PartialProblem, q: &PartialProblem) -> Result<PartialProblem> {
    p.union(q)
}

/// `P ⊆ Q` in the partial-problem sense.
pub fn includes(p: &PartialProblem, q: &PartialProblem) -> Result<bool> {
    p.includes_in(q)
}

/// JSON problem description.
///
/// ```json
/// {"mode": "explicit", "ground_size": 1,
///  "accept": [[{"size_n": 1, "amplitudes": [[1,0],[0,0]]}]], "reject": []}
/// {"mode": "threshold", "instance": {…}, "a": 0.75, "b": 0.25, "method": "exact"}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ProblemFile {
    Explicit {
        ground_size: usize,
        accept: Vec<Vec<crate::state::Qustring>>,
        reject: Vec<Vec<crate::state::Qustring>>,
    },
    Threshold {
        instance: crate::quantifier::InstanceFile,
        #[serde(default = "default_a")]
        a: f64,
        #[serde(default = "default_b")]
        b: f64,
        #[serde(default = "default_method")]
        method: String,
    },
}

fn default_a() -> f64 {
    0.75
}

fn default_b() -> f64 {
    0.25
}

fn default_method() -> String {
    "exact".into()
}

impl ProblemFile {
    pub fn into_problem(self, budgets: &Budgets) -> Result<PartialProblem> {
        match self {
            ProblemFile::Explicit { ground_size, accept, reject } => {
                let tuples = |v: Vec<Vec<crate::state::Qustring>>| v.into_iter().map(QTuple::new).collect::<Result<Vec<_>>>();
                Ok(ExplicitProblem::new(ground_size, tuples(accept)?, tuples(reject)?)?.into())
            }
            ProblemFile::Threshold { instance, a, b, method } => {
                Ok(ThresholdProblem::new(instance.try_into()?, DecisionThresholds::new(a, b)?, method.parse()?, *budgets).into())
            }
        }
    }

    /// Explicit problems only; threshold problems are not serialized back.
    pub fn from_explicit(p: &ExplicitProblem) -> ProblemFile {
        let lists = |v: &[QTuple]| v.iter().map(|t| t.parts().to_vec()).collect();
        ProblemFile::Explicit { ground_size: p.ground_size, accept: lists(&p.accept), reject: lists(&p.reject) }
    }
}
