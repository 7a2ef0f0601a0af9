//! Exact maximization of a linear functional over a fixed point cloud.
//!
//! `⟨ψ|M|ψ⟩` is linear in the projector `ψψ†`, so a grid's states become
//! real feature vectors and every inner optimization is a max-dot-product
//! query, answered by branch and bound over a k-d tree of bounding boxes.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;

use crate::linalg::CMatrix;

const LEAF: usize = 16;
/// Boxes whose bound trails the incumbent by more than this are pruned.
const PRUNE_SLACK: f64 = 1e-12;

/// Real coordinates of `ψψ† − I/d`: `|ψ_i|² − 1/d` for each `i`, then
/// `√2·Re(ψ_i ψ̄_j), √2·Im(ψ_i ψ̄_j)` for each `i < j`. The scaling makes
/// the Euclidean norm the Frobenius norm, so unit vectors land on the
/// sphere of radius `√(1 − 1/d)`.
pub(crate) fn features(psi: &[C64], out: &mut Vec<f64>) {
    let d = psi.len();
    out.extend(psi.iter().map(|a| a.norm_sqr() - 1.0 / d as f64));
    for i in 0..d {
        for j in i + 1..d {
            let z = psi[i] * psi[j].conj() * SQRT_2;
            out.push(z.re);
            out.push(z.im);
        }
    }
}

/// Coefficients `c` and offset `o` with `c·features(ψ) + o = ⟨ψ|M|ψ⟩` for
/// Hermitian `M` and unit `ψ`; `c` carries no trace part.
pub(crate) fn coefficients(m: &CMatrix) -> (Vec<f64>, f64) {
    let d = m.nrows();
    let offset = (0..d).map(|i| m[(i, i)].re).sum::<f64>() / d as f64;
    let mut c: Vec<f64> = (0..d).map(|i| m[(i, i)].re - offset).collect();
    for i in 0..d {
        for j in i + 1..d {
            c.push(SQRT_2 * m[(i, j)].re);
            c.push(SQRT_2 * m[(i, j)].im);
        }
    }
    (c, offset)
}

enum Node {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    node: Node,
}

struct Query<'a> {
    c: &'a [f64],
    norm: f64,
    unit: Vec<f64>,
}

pub(crate) struct FeatureTree {
    dim: usize,
    /// Common norm of every point.
    radius: f64,
    points: Vec<f64>,
    /// Original index of each stored point.
    order: Vec<usize>,
    cells: Vec<Cell>,
}

impl FeatureTree {
    pub(crate) fn build(dim: usize, radius: f64, flat: Vec<f64>) -> Self {
        let n = flat.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        let mut tree = FeatureTree { dim, radius, points: Vec::new(), order: Vec::new(), cells: Vec::new() };
        tree.split(&flat, &mut order[..], 0);
        tree.points = order.iter().flat_map(|&i| flat[i * dim..(i + 1) * dim].iter().copied()).collect();
        tree.order = order;
        tree
    }

    /// Builds the subtree over `idx`, which sits at offset `start` of the
    /// final point order.
    fn split(&mut self, flat: &[f64], idx: &mut [usize], start: usize) -> usize {
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in idx.iter() {
            for k in 0..dim {
                lo[k] = lo[k].min(flat[i * dim + k]);
                hi[k] = hi[k].max(flat[i * dim + k]);
            }
        }
        let me = self.cells.len();
        let leaf = Node::Leaf { start, end: start + idx.len() };
        if idx.len() <= LEAF {
            self.cells.push(Cell { lo, hi, node: leaf });
            return me;
        }
        let axis = (0..dim).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).expect("dim > 0");
        self.cells.push(Cell { lo, hi, node: leaf });
        let mid = idx.len() / 2;
        idx.select_nth_unstable_by(mid, |&a, &b| flat[a * dim + axis].total_cmp(&flat[b * dim + axis]).then(a.cmp(&b)));
        let (l, r) = idx.split_at_mut(mid);
        let left = self.split(flat, l, start);
        let right = self.split(flat, r, start + mid);
        self.cells[me].node = Node::Split { left, right };
        me
    }

    /// Upper bound of `c·x` over the cell: the smaller of the box corner
    /// bound and, since every point has norm `ρ`, `|c|(ρ − δ²/2ρ)` with `δ`
    /// the distance from `ρĉ` to the box.
    fn bound(&self, cell: &Cell, q: &Query) -> f64 {
        let linear: f64 =
            q.c.iter().zip(cell.lo.iter().zip(&cell.hi)).map(|(&ck, (&l, &h))| if ck >= 0.0 { ck * h } else { ck * l }).sum();
        if q.norm == 0.0 {
            return linear;
        }
        let d2: f64 = q
            .unit
            .iter()
            .zip(cell.lo.iter().zip(&cell.hi))
            .map(|(&u, (&l, &h))| {
                let gap = (l - u).max(u - h).max(0.0);
                gap * gap
            })
            .sum();
        linear.min(q.norm * (self.radius - d2 / (2.0 * self.radius)))
    }

    /// Largest `c·x` over the points and the smallest original index
    /// reaching it (exact ties resolved like a linear scan).
    pub(crate) fn argmax(&self, c: &[f64]) -> (f64, usize) {
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let unit = if norm > 0.0 { c.iter().map(|x| x * self.radius / norm).collect() } else { vec![0.0; c.len()] };
        let q = Query { c, norm, unit };
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        self.visit(0, &q, &mut best);
        best
    }

    fn visit(&self, cell: usize, q: &Query, best: &mut (f64, usize)) {
        let c = q.c;
        let here = &self.cells[cell];
        if self.bound(here, q) + PRUNE_SLACK < best.0 {
            return;
        }
        match here.node {
            Node::Leaf { start, end } => {
                for s in start..end {
                    let x = &self.points[s * self.dim..(s + 1) * self.dim];
                    let v: f64 = x.iter().zip(c).map(|(a, b)| a * b).sum();
                    let i = self.order[s];
                    if v > best.0 || (v == best.0 && i < best.1) {
                        *best = (v, i);
                    }
                }
            }
            Node::Split { left, right } => {
                let (bl, br) = (self.bound(&self.cells[left], q), self.bound(&self.cells[right], q));
                let (first, second) = if bl >= br { (left, right) } else { (right, left) };
                self.visit(first, q, best);
                self.visit(second, q, best);
            }
        }
    }
}
