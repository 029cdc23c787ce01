//! Best uniform approximation by g₁(a·x) + g₂(b·x) on a parallelogram.
//!
//! Everything is done in the coordinates y₁ = a·x, y₂ = b·x, where the
//! parallelogram becomes the box [c₁,d₁]×[c₂,d₂] and ridge functions become
//! functions of one coordinate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Field, ScalarField};
use crate::scalar::Real;
use crate::table::{Interp, Profile, RidgeSum, UnivariateTable};

/// {x ∈ R²: c₁ ≤ a·x ≤ d₁, c₂ ≤ b·x ≤ d₂}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelogramDomain {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c1: f64,
    pub d1: f64,
    pub c2: f64,
    pub d2: f64,
}

impl ParallelogramDomain {
    pub fn new(a: [f64; 2], b: [f64; 2], (c1, d1): (f64, f64), (c2, d2): (f64, f64)) -> Result<Self> {
        let all = [a[0], a[1], b[0], b[1], c1, d1, c2, d2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("domain parameters must be finite".into()));
        }
        if !(c1 < d1 && c2 < d2) {
            return Err(Error::Invalid("bounds need c₁ < d₁ and c₂ < d₂".into()));
        }
        if a[0] * b[1] - a[1] * b[0] == 0.0 {
            return Err(Error::DependentDirections(0, 1));
        }
        Ok(ParallelogramDomain { a, b, c1, d1, c2, d2 })
    }

    /// The unit square with coordinate directions.
    pub fn unit_square() -> Self {
        ParallelogramDomain { a: [1.0, 0.0], b: [0.0, 1.0], c1: 0.0, d1: 1.0, c2: 0.0, d2: 1.0 }
    }

    /// Δ = a₁b₂ − a₂b₁.
    pub fn det(&self) -> f64 {
        self.a[0] * self.b[1] - self.a[1] * self.b[0]
    }

    pub fn to_y(&self, x: &[f64]) -> [f64; 2] {
        [self.a[0] * x[0] + self.a[1] * x[1], self.b[0] * x[0] + self.b[1] * x[1]]
    }

    pub fn to_x(&self, y1: f64, y2: f64) -> [f64; 2] {
        let d = self.det();
        [(y1 * self.b[1] - y2 * self.a[1]) / d, (y2 * self.a[0] - y1 * self.b[0]) / d]
    }

    /// y-grid with `n + 1` equally spaced values per axis; both families of
    /// fibers are grid lines.
    fn axes(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        (axis(self.c1, self.d1, n), axis(self.c2, self.d2, n))
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 }).collect()
}

/// f₁(y₁, y₂) = f(x(y)) on [c₁,d₁]×[c₂,d₂].
pub fn pullback(f: &ScalarField, dom: &ParallelogramDomain) -> Result<ScalarField> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: f.dim() });
    }
    let d = dom.det();
    let m = vec![vec![dom.b[1] / d, -dom.a[1] / d], vec![-dom.b[0] / d, dom.a[0] / d]];
    f.compose_linear(m, vec![0.0, 0.0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedVerdict {
    pub pass: bool,
    /// Smallest value of the mixed expression seen.
    pub worst_value: f64,
    pub worst_point: [f64; 2],
    pub tolerance: f64,
}

/// Checks f_{x₁x₂}(a₁b₂ + a₂b₁) − f_{x₁x₁}a₂b₂ − f_{x₂x₂}a₁b₁ ≥ −tol at the
/// centres of a `grid_n`² cell grid.
///
/// The expression equals Δ²·∂²f₁/∂y₁∂y₂, which is estimated by the central
/// mixed difference in y. That stencil is a rectangle functional, so it
/// vanishes on ridge sums up to rounding, however curved the profiles are.
pub fn mixed_condition_check(f: &dyn Field, dom: &ParallelogramDomain, grid_n: usize) -> Result<MixedVerdict> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: f.dim() });
    }
    let n = grid_n.max(1);
    let (w1, w2) = (dom.d1 - dom.c1, dom.d2 - dom.c2);
    let (h1, h2) = (w1 / n as f64 / 8.0, w2 / n as f64 / 8.0);
    let det2 = dom.det() * dom.det();
    let f1 = |y1: f64, y2: f64| f.eval(&dom.to_x(y1, y2));
    let mut sup: f64 = 0.0;
    let mut worst = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..n {
        for j in 0..n {
            let y1 = dom.c1 + w1 * (i as f64 + 0.5) / n as f64;
            let y2 = dom.c2 + w2 * (j as f64 + 0.5) / n as f64;
            sup = sup.max(f1(y1, y2).abs());
            let mixed = (f1(y1 + h1, y2 + h2) - f1(y1 + h1, y2 - h2) - f1(y1 - h1, y2 + h2) + f1(y1 - h1, y2 - h2))
                / (4.0 * h1 * h2);
            let v = det2 * mixed;
            let x = dom.to_x(y1, y2);
            if !v.is_finite() {
                return Err(Error::Evaluation(x.to_vec()));
            }
            if v < worst.0 {
                worst = (v, x);
            }
        }
    }
    let tolerance = 1e-8 * (1.0 + sup);
    Ok(MixedVerdict { pass: worst.0 >= -tolerance, worst_value: worst.0, worst_point: worst.1, tolerance })
}

/// The closed-form best approximation and its error.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPair {
    pub domain: ParallelogramDomain,
    pub error: f64,
    f1: ScalarField,
}

impl ExtremalPair {
    fn f1(&self, y1: f64, y2: f64) -> f64 {
        self.f1.eval(&[y1, y2])
    }

    /// g₁,₀(y₁) = ½f₁(y₁,c₂) + ½f₁(y₁,d₂) − ¼f₁(c₁,c₂) − ¼f₁(d₁,d₂).
    pub fn g1(&self, y1: f64) -> f64 {
        let d = &self.domain;
        0.5 * (self.f1(y1, d.c2) + self.f1(y1, d.d2)) - 0.25 * (self.f1(d.c1, d.c2) + self.f1(d.d1, d.d2))
    }

    /// g₂,₀(y₂) = ½f₁(c₁,y₂) + ½f₁(d₁,y₂) − ¼f₁(c₁,d₂) − ¼f₁(d₁,c₂).
    pub fn g2(&self, y2: f64) -> f64 {
        let d = &self.domain;
        0.5 * (self.f1(d.c1, y2) + self.f1(d.d1, y2)) - 0.25 * (self.f1(d.c1, d.d2) + self.f1(d.d1, d.c2))
    }

    /// g₁,₀(a·x) + g₂,₀(b·x).
    pub fn eval(&self, x: &[f64]) -> f64 {
        let [y1, y2] = self.domain.to_y(x);
        self.g1(y1) + self.g2(y2)
    }

    pub fn g1_table(&self, knots: usize) -> Result<UnivariateTable<f64>> {
        UnivariateTable::sample(self.domain.c1, self.domain.d1, knots, Interp::Linear, |t| self.g1(t))
    }

    pub fn g2_table(&self, knots: usize) -> Result<UnivariateTable<f64>> {
        UnivariateTable::sample(self.domain.c2, self.domain.d2, knots, Interp::Linear, |t| self.g2(t))
    }

    /// Tabulated version of the approximant.
    pub fn to_ridge_sum(&self, knots: usize) -> Result<RidgeSum<f64>> {
        RidgeSum::new()
            .with_term(self.domain.a.to_vec(), Profile::Table(self.g1_table(knots)?))?
            .with_term(self.domain.b.to_vec(), Profile::Table(self.g2_table(knots)?))
    }
}

impl Field for ExtremalPair {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, x: &[f64]) -> f64 {
        ExtremalPair::eval(self, x)
    }
}

/// ¼(f₁(c₁,c₂) + f₁(d₁,d₂) − f₁(c₁,d₂) − f₁(d₁,c₂)): the error when the
/// mixed condition holds.
pub fn corner_functional(f1: &dyn Field, dom: &ParallelogramDomain) -> f64 {
    let v = |u: f64, w: f64| f1.eval(&[u, w]);
    0.25 * (v(dom.c1, dom.c2) + v(dom.d1, dom.d2) - v(dom.c1, dom.d2) - v(dom.d1, dom.c2))
}

/// Grid resolution of the hypothesis check in [`best_uniform`].
pub const CHECK_GRID: usize = 32;

/// Best uniform approximation from the two-direction ridge class, when the
/// mixed-derivative condition holds; otherwise `Hypothesis`.
pub fn best_uniform(f: &ScalarField, dom: &ParallelogramDomain) -> Result<ExtremalPair> {
    let verdict = mixed_condition_check(f, dom, CHECK_GRID)?;
    if !verdict.pass {
        return Err(Error::Hypothesis(format!(
            "mixed condition fails at ({}, {}) with value {:e}; use the grid minimax oracle instead",
            verdict.worst_point[0], verdict.worst_point[1], verdict.worst_value
        )));
    }
    let f1 = pullback(f, dom)?;
    let error = corner_functional(&f1, dom);
    if !error.is_finite() {
        return Err(Error::Evaluation(dom.to_x(dom.c1, dom.c2).to_vec()));
    }
    Ok(ExtremalPair { domain: *dom, error: error.max(0.0), f1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalStatus {
    /// A closed path on which the residual alternates ±‖residual‖.
    Extremal,
    /// The residual vanishes on the grid.
    ZeroResidual,
    /// No alternating closed path at this resolution.
    NoWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalVerdict {
    pub status: ExtremalStatus,
    /// ‖f − candidate‖ on the grid.
    pub norm: f64,
    /// Points of the alternating closed path, in x-coordinates; the residual
    /// is +norm at the first point.
    pub witness: Option<Vec<[f64; 2]>>,
    /// Longest alternating path found (in points).
    pub longest_alternating: usize,
}

/// Looks for a closed path of grid points on which f − candidate alternates
/// between +‖f − candidate‖ and −‖f − candidate‖ (within `tol`).
///
/// Points are edges between their y₁-line and y₂-line; orienting + points
/// from y₁ to y₂ and − points back turns alternating closed paths into
/// directed cycles.
pub fn verify_extremal(
    f: &dyn Field,
    candidate: &dyn Field,
    dom: &ParallelogramDomain,
    grid_n: usize,
    tol: f64,
) -> Result<ExtremalVerdict> {
    let n = grid_n.max(1);
    let (ys1, ys2) = dom.axes(n);
    let m = n + 1;
    let mut r = vec![0.0; m * m];
    for (i, &y1) in ys1.iter().enumerate() {
        for (j, &y2) in ys2.iter().enumerate() {
            let x = dom.to_x(y1, y2);
            let v = f.eval(&x) - candidate.eval(&x);
            if !v.is_finite() {
                return Err(Error::Evaluation(x.to_vec()));
            }
            r[i * m + j] = v;
        }
    }
    let norm = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if norm <= tol {
        return Ok(ExtremalVerdict { status: ExtremalStatus::ZeroResidual, norm, witness: None, longest_alternating: 1 });
    }
    // Nodes 0..m are y₁-lines, m..2m are y₂-lines; each edge is a point.
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * m];
    for i in 0..m {
        for j in 0..m {
            let v = r[i * m + j];
            if v >= norm - tol {
                out[i].push((m + j, i * m + j));
            } else if v <= -norm + tol {
                out[m + j].push((i, i * m + j));
            }
        }
    }
    let to_x = |p: usize| dom.to_x(ys1[p / m], ys2[p % m]);
    if let Some(cycle) = directed_cycle(&out) {
        // Start at a + point.
        let start = cycle.iter().position(|&p| r[p] > 0.0).unwrap_or(0);
        let mut pts: Vec<usize> = cycle[start..].to_vec();
        pts.extend_from_slice(&cycle[..start]);
        let len = pts.len();
        return Ok(ExtremalVerdict {
            status: ExtremalStatus::Extremal,
            norm,
            witness: Some(pts.into_iter().map(to_x).collect()),
            longest_alternating: len,
        });
    }
    Ok(ExtremalVerdict { status: ExtremalStatus::NoWitness, norm, witness: None, longest_alternating: longest_path(&out) })
}

/// Edge labels of some directed cycle, in order.
fn directed_cycle(out: &[Vec<(usize, usize)>]) -> Option<Vec<usize>> {
    let n = out.len();
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        state[s] = 1;
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            if *k < out[u].len() {
                let (v, e) = out[u][*k];
                *k += 1;
                match state[v] {
                    0 => {
                        state[v] = 1;
                        via[v] = Some((u, e));
                        stack.push((v, 0));
                    }
                    1 => {
                        let mut edges = vec![e];
                        let mut w = u;
                        while w != v {
                            let (p, pe) = via[w].expect("on stack");
                            edges.push(pe);
                            w = p;
                        }
                        edges.reverse();
                        return Some(edges);
                    }
                    _ => {}
                }
            } else {
                state[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Longest path (in edges) of an acyclic graph.
fn longest_path(out: &[Vec<(usize, usize)>]) -> usize {
    fn go(u: usize, out: &[Vec<(usize, usize)>], memo: &mut [Option<usize>]) -> usize {
        if let Some(v) = memo[u] {
            return v;
        }
        let best = out[u].iter().map(|&(v, _)| 1 + go(v, out, memo)).max().unwrap_or(0);
        memo[u] = Some(best);
        best
    }
    let mut memo = vec![None; out.len()];
    (0..out.len()).map(|u| go(u, out, &mut memo)).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DsResult {
    /// norms[k] = ‖f_{k+1}‖ on the grid, so norms[0] = ‖f‖.
    pub norms: Vec<f64>,
    /// Accumulated g₁ on the y₁ grid and g₂ on the y₂ grid.
    pub g1: Vec<(f64, f64)>,
    pub g2: Vec<(f64, f64)>,
}

impl DsResult {
    /// ‖fₙ‖, n ≥ 1.
    pub fn norm(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|k| self.norms.get(k).copied())
    }
}

/// Midrange sweeps on a rows × cols table (row r is the fiber y₁ = const):
/// each step subtracts the row midranges, then the column midranges.
/// Returns the sup norms before the first and after every step, and the
/// accumulated row and column functions.
pub fn midrange_sweeps<T: Real>(values: &mut [T], rows: usize, cols: usize, steps: usize) -> (Vec<T>, Vec<T>, Vec<T>) {
    assert_eq!(values.len(), rows * cols, "table shape");
    let sup = |v: &[T]| v.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let half = T::lit(0.5);
    let mut norms = vec![sup(values)];
    let mut g1 = vec![T::zero(); rows];
    let mut g2 = vec![T::zero(); cols];
    for _ in 0..steps {
        for (r, g) in g1.iter_mut().enumerate() {
            let row = &mut values[r * cols..(r + 1) * cols];
            let (lo, hi) = row.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let mid = (lo + hi) * half;
            row.iter_mut().for_each(|v| *v -= mid);
            *g += mid;
        }
        for (c, g) in g2.iter_mut().enumerate() {
            let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
            for r in 0..rows {
                let v = values[r * cols + c];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let mid = (lo + hi) * half;
            for r in 0..rows {
                values[r * cols + c] -= mid;
            }
            *g += mid;
        }
        norms.push(sup(values));
    }
    (norms, g1, g2)
}

/// Diliberto–Straus iteration on an (n+1)² grid aligned with both
/// directions, for `iters` steps.
pub fn diliberto_straus(f: &dyn Field, dom: &ParallelogramDomain, grid_n: usize, iters: usize) -> Result<DsResult> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: f.dim() });
    }
    let n = grid_n.max(1);
    let (ys1, ys2) = dom.axes(n);
    let m = n + 1;
    let mut values = Vec::with_capacity(m * m);
    for &y1 in &ys1 {
        for &y2 in &ys2 {
            let x = dom.to_x(y1, y2);
            values.push(f.try_eval(&x)?);
        }
    }
    let (norms, g1, g2) = midrange_sweeps(&mut values, m, m, iters);
    Ok(DsResult {
        norms,
        g1: ys1.into_iter().zip(g1).collect(),
        g2: ys2.into_iter().zip(g2).collect(),
    })
}
