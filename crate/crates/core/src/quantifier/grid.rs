//! Discretized witness ranges.
//!
//! A grid vector on `n` qubits has `2^n` complex amplitudes whose real and
//! imaginary parts are sign-magnitude fractions `±k/2^r`, `0 ≤ k < 2^r`.
//! The layout stores one sign bit and `r` magnitude bits per component,
//! `2^{(r+1)·2^{n+1}}` bit patterns in all; that number is what budgets are
//! checked against. Enumeration visits each distinct value vector once
//! (negative zero is not revisited), skips vectors of squared norm below
//! `1/4`, and emits the rest normalized.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::Quantifier;
use super::kdtree::{self, FeatureTree};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::Qustring;
use crate::Budgets;

/// Grid vectors are deduplicated into distinct states when at most this many
/// value vectors exist; larger grids are streamed.
pub const DEDUP_LIMIT: u128 = 1 << 21;

const MAX_QUBITS: usize = 10;
const MAX_BITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub r: u32,
}

fn saturating_pow(base: u128, exp: u128) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

impl GridSpec {
    pub fn new(n: usize, r: u32) -> Result<Self> {
        if r == 0 || r > MAX_BITS {
            return Err(Error::InvalidPrecision(format!("grid precision r = {r} is outside 1..={MAX_BITS}")));
        }
        if n > MAX_QUBITS {
            return Err(Error::SizeOverflow { requested: n, budget: MAX_QUBITS });
        }
        Ok(GridSpec { n, r })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Real components per vector, `2^{n+1}`.
    pub fn components(&self) -> usize {
        2 * self.dim()
    }

    /// Largest magnitude numerator, `2^r - 1`.
    pub fn max_numerator(&self) -> i64 {
        (1i64 << self.r) - 1
    }

    /// Number of bit patterns in the layout, `2^{(r+1)·2^{n+1}}` (saturating).
    pub fn layout_count(&self) -> u128 {
        let bits = (self.r as u128 + 1) * self.components() as u128;
        if bits >= 128 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    /// Number of distinct value vectors, `(2^{r+1} - 1)^{2^{n+1}}` (saturating).
    pub fn value_count(&self) -> u128 {
        saturating_pow((1u128 << (self.r + 1)) - 1, self.components() as u128)
    }

    pub fn check(&self, budgets: &Budgets) -> Result<()> {
        budgets.check_grid("grid layout patterns", self.layout_count())
    }

    /// Normalized grid states in enumeration order.
    pub fn enumerate(&self, budgets: &Budgets) -> Result<impl Iterator<Item = Qustring> + '_> {
        self.check(budgets)?;
        let spec = *self;
        Ok(RawPoints::new(spec, None).map(move |v| spec.point_state(&v)))
    }

    /// Integer numerator vectors that pass the norm filter, in enumeration
    /// order. Components are interleaved `[re₀, im₀, re₁, im₁, …]`.
    pub fn raw_points(&self, budgets: &Budgets) -> Result<impl Iterator<Item = Vec<i64>>> {
        self.check(budgets)?;
        Ok(RawPoints::new(*self, None))
    }

    pub(crate) fn point_state(&self, v: &[i64]) -> Qustring {
        Qustring::normalized(to_complex(v)).expect("filtered grid vectors are nonzero")
    }

    /// The grid's states up to global phase, in first-occurrence order.
    ///
    /// Results are cached per `(n, r)`.
    pub fn distinct_states(&self, budgets: &Budgets) -> Result<Arc<Vec<Qustring>>> {
        Ok(self.index(budgets)?.states.clone())
    }

    fn index(&self, budgets: &Budgets) -> Result<Arc<GridIndex>> {
        self.check(budgets)?;
        static CACHE: OnceLock<Mutex<HashMap<GridSpec, Arc<GridIndex>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("grid cache").get(self) {
            return Ok(hit.clone());
        }
        let mut seen = HashSet::new();
        let states: Vec<Qustring> =
            RawPoints::new(*self, None).filter(|v| seen.insert(projector_key(v))).map(|v| self.point_state(&v)).collect();
        let mut flat = Vec::new();
        for s in &states {
            kdtree::features(s.amplitudes(), &mut flat);
        }
        let dim = self.dim() * self.dim();
        let radius = (1.0 - 1.0 / self.dim() as f64).sqrt();
        let index = Arc::new(GridIndex { states: Arc::new(states), tree: FeatureTree::build(dim, radius, flat) });
        cache.lock().expect("grid cache").insert(*self, index.clone());
        Ok(index)
    }

    /// Best value of `⟨ψ|M|ψ⟩` over the grid's states, with the first state
    /// (in enumeration order) reaching it.
    pub fn optimize(&self, m: &CMatrix, mode: Quantifier, budgets: &Budgets) -> Result<(f64, Qustring)> {
        self.check(budgets)?;
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimMismatch { left: m.nrows(), right: self.dim() });
        }
        if self.value_count() <= DEDUP_LIMIT {
            let index = self.index(budgets)?;
            let (mut c, offset) = kdtree::coefficients(m);
            if mode == Quantifier::Inf {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            let (v, i) = index.tree.argmax(&c);
            let v = if mode == Quantifier::Inf { offset - v } else { offset + v };
            return Ok((v, index.states[i].clone()));
        }
        // Streamed: parallel over the leading component, merged in order.
        let top = self.max_numerator();
        let chunks: Vec<Option<(f64, Vec<i64>)>> = (-top..=top)
            .into_par_iter()
            .map(|lead| {
                let mut best: Option<(f64, Vec<i64>)> = None;
                for v in RawPoints::new(*self, Some(lead)) {
                    let val = quadratic_form(m, &v);
                    if best.as_ref().is_none_or(|(b, _)| mode.better(val, *b)) {
                        best = Some((val, v));
                    }
                }
                best
            })
            .collect();
        let mut best: Option<(f64, Vec<i64>)> = None;
        for (val, v) in chunks.into_iter().flatten() {
            if best.as_ref().is_none_or(|(b, _)| mode.better(val, *b)) {
                best = Some((val, v));
            }
        }
        let (val, v) = best.expect("a grid has at least one vector");
        Ok((val, self.point_state(&v)))
    }
}

struct GridIndex {
    states: Arc<Vec<Qustring>>,
    tree: FeatureTree,
}

/// Index of the first best value.
pub(crate) fn best_index(values: &[f64], mode: Quantifier) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if mode.better(v, values[best]) {
            best = i;
        }
    }
    best
}

fn to_complex(v: &[i64]) -> Vec<C64> {
    v.chunks(2).map(|p| C64::new(p[0] as f64, p[1] as f64)).collect()
}

fn quadratic_form(m: &CMatrix, v: &[i64]) -> f64 {
    let d = m.nrows();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..d {
        let vi = C64::new(v[2 * i] as f64, v[2 * i + 1] as f64);
        den += vi.norm_sqr();
        let mut row = C64::new(0.0, 0.0);
        for j in 0..d {
            row += m[(i, j)] * C64::new(v[2 * j] as f64, v[2 * j + 1] as f64);
        }
        num += (vi.conj() * row).re;
    }
    num / den
}

/// Canonical integer form of `vv†`, identical for vectors that differ by a
/// positive scale or a global phase.
fn projector_key(v: &[i64]) -> Vec<i64> {
    let d = v.len() / 2;
    let mut key = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in i..d {
            let (a, b) = (v[2 * i], v[2 * i + 1]);
            let (c, e) = (v[2 * j], v[2 * j + 1]);
            // v_i · conj(v_j)
            key.push(a * c + b * e);
            if i != j {
                key.push(b * c - a * e);
            }
        }
    }
    let g = key.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
    if g > 1 {
        key.iter_mut().for_each(|x| *x /= g);
    }
    key
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Odometer over numerator vectors, last component fastest, each running
/// from `-(2^r - 1)` to `2^r - 1`. With `lead` set, the first component is
/// pinned to that value.
struct RawPoints {
    top: i64,
    threshold: i64,
    current: Vec<i64>,
    pinned: bool,
    done: bool,
}

impl RawPoints {
    fn new(spec: GridSpec, lead: Option<i64>) -> Self {
        let top = spec.max_numerator();
        let mut current = vec![-top; spec.components()];
        if let Some(l) = lead {
            current[0] = l;
        }
        // Squared norm ≥ 1/4 ⇔ Σk² ≥ 2^{2r}/4 = 2^{2r-2}.
        let threshold = 1i64 << (2 * spec.r).saturating_sub(2);
        RawPoints { top, threshold, current, pinned: lead.is_some(), done: false }
    }

    fn advance(&mut self) {
        let floor = usize::from(self.pinned);
        for i in (floor..self.current.len()).rev() {
            if self.current[i] < self.top {
                self.current[i] += 1;
                return;
            }
            self.current[i] = -self.top;
        }
        self.done = true;
    }
}

impl Iterator for RawPoints {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while !self.done {
            let v = self.current.clone();
            self.advance();
            if v.iter().map(|x| x * x).sum::<i64>() >= self.threshold {
                return Some(v);
            }
        }
        None
    }
}

/// Componentwise truncation toward zero of `φ`'s amplitudes to `r`
/// fractional bits. The result is not renormalized.
pub fn truncate_to_grid(phi: &Qustring, r: u32) -> Vec<C64> {
    let scale = (r as f64).exp2();
    let t = |x: f64| (x * scale).trunc() / scale;
    phi.amplitudes().iter().map(|a| C64::new(t(a.re), t(a.im))).collect()
}

/// `|‖α̃‖² − 1|` for the truncation `α̃` of `φ`.
pub fn truncation_norm_deviation(phi: &Qustring, r: u32) -> f64 {
    (truncate_to_grid(phi, r).iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs()
}

/// Grid precision `⌈log₂(1/ε)⌉ + n + 2` at which truncation keeps the
/// squared norm within `ε` of one.
pub fn norm_precision(eps: f64, n: usize) -> Result<u32> {
    Ok(crate::codec::precision_bits(eps)? + n as u32 + 2)
}
