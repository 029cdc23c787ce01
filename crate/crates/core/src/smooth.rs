//! Smooth ridge decomposition in the plane.
//!
//! If f(x,y) = Σ fᵢ(aᵢx + bᵢy) over n pairwise independent directions and f
//! is of class C^{n−2}, the fᵢ can be replaced by C^{n−2} profiles built
//! explicitly. The last two directions are sent to e₁, e₂; the mixed
//! derivative of f* along the normals l₁..l_{n−2} of the other directions
//! splits as h₁(x') + h₂(y'), and repeated integration then peels off one
//! ridge term per level. Derivatives here are finite differences and
//! integrals are taken on cubic tables, so the result carries a residual.

use serde::Serialize;

use crate::bolts::AxisRect;
use crate::error::{Error, Result};
use crate::expr::{Field, ScalarField};
use crate::table::{Interp, Profile, RidgeSum, UnivariateTable};

/// Largest number of directions handled; derivative orders stay ≤ 4.
pub const MAX_TERMS: usize = 6;

type Interval = (f64, f64);

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Unit normal to `a`, signed so that its first nonzero component is positive.
fn unit_normal(a: [f64; 2]) -> [f64; 2] {
    let r = a[0].hypot(a[1]);
    let l = [a[1] / r, -a[0] / r];
    if l[0] < 0.0 || (l[0] == 0.0 && l[1] < 0.0) {
        [-l[0], -l[1]]
    } else {
        l
    }
}

fn hull(a: Interval, b: Interval) -> Interval {
    (a.0.min(b.0), a.1.max(b.1))
}

fn scaled(iv: Interval, k: f64) -> Interval {
    let (p, q) = (iv.0 * k, iv.1 * k);
    (p.min(q), p.max(q))
}

fn padded(iv: Interval) -> Interval {
    let m = 1e-6 * (1.0 + iv.1 - iv.0);
    (iv.0 - m, iv.1 + m)
}

#[derive(Debug, Clone)]
pub struct DecompProblem {
    f: ScalarField,
    directions: Vec<[f64; 2]>,
    order: usize,
    bbox: AxisRect,
}

impl DecompProblem {
    /// `order` is the smoothness s of f; the recurrences need s ≥ n − 2.
    pub fn new(f: ScalarField, directions: Vec<[f64; 2]>, order: usize, bbox: AxisRect) -> Result<Self> {
        if f.dim() != 2 {
            return Err(Error::Dimension { expected: 2, got: f.dim() });
        }
        let n = directions.len();
        if !(2..=MAX_TERMS).contains(&n) {
            return Err(Error::Invalid(format!("need 2 to {MAX_TERMS} directions, got {n}")));
        }
        if directions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("directions must be finite".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (directions[i], directions[j]);
                if a[0] * b[1] - a[1] * b[0] == 0.0 {
                    return Err(Error::DependentDirections(i, j));
                }
            }
        }
        if order + 2 < n {
            return Err(Error::Hypothesis(format!("smoothness s = {order} is below n − 2 = {}", n - 2)));
        }
        Ok(DecompProblem { f, directions, order, bbox })
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bbox(&self) -> AxisRect {
        self.bbox
    }

    fn center(&self) -> [f64; 2] {
        [(self.bbox.x.0 + self.bbox.x.1) / 2.0, (self.bbox.y.0 + self.bbox.y.1) / 2.0]
    }

    fn size(&self) -> f64 {
        (self.bbox.x.1 - self.bbox.x.0).max(self.bbox.y.1 - self.bbox.y.0)
    }

    /// Range of a·(x − c) over the box.
    fn ridge_range(&self, a: [f64; 2], c: [f64; 2]) -> Interval {
        let (x, y) = (self.bbox.x, self.bbox.y);
        let vals = [[x.0, y.0], [x.0, y.1], [x.1, y.0], [x.1, y.1]].map(|p| dot(a, [p[0] - c[0], p[1] - c[1]]));
        (vals.iter().copied().fold(f64::INFINITY, f64::min), vals.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// The change of variables sending (aₙ₋₁,bₙ₋₁) to e₁ and (aₙ,bₙ) to e₂.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normalized {
    /// aₙ₋₁bₙ − aₙbₙ₋₁.
    pub det: f64,
    /// (ãₚ, b̃ₚ) for p = 1..n−2.
    pub tilde: Vec<[f64; 2]>,
    /// Unit lₚ ⟂ (ãₚ, b̃ₚ).
    pub normals: Vec<[f64; 2]>,
    last: [[f64; 2]; 2],
}

impl Normalized {
    /// (x, y) with f*(x', y') = f(x, y).
    pub fn pull(&self, q: [f64; 2]) -> [f64; 2] {
        let [[a1, b1], [a2, b2]] = self.last;
        [(b2 * q[0] - b1 * q[1]) / self.det, (a2 * q[0] - a1 * q[1]) / -self.det]
    }
}

pub fn normalize(problem: &DecompProblem) -> Result<Normalized> {
    let d = &problem.directions;
    let n = d.len();
    let (an1, bn1) = (d[n - 2][0], d[n - 2][1]);
    let (an, bn) = (d[n - 1][0], d[n - 1][1]);
    let det = an1 * bn - an * bn1;
    if det == 0.0 {
        return Err(Error::DependentDirections(n - 2, n - 1));
    }
    let tilde: Vec<[f64; 2]> =
        d[..n - 2].iter().map(|&[ap, bp]| [(ap * bn - an * bp) / det, (an1 * bp - ap * bn1) / det]).collect();
    let normals = tilde.iter().map(|&t| unit_normal(t)).collect();
    Ok(Normalized { det, tilde, normals, last: [d[n - 2], d[n - 1]] })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompOptions {
    /// Finite-difference step; defaults to 1e-3 times the box size for the
    /// recurrences and to an order-aware step for the cross-check.
    pub fd_step: Option<f64>,
    /// Knots per profile table (cubic).
    pub knots: usize,
    /// Verification grid points per axis.
    pub verify_grid: usize,
    /// Point where every antiderivative vanishes; the box center by default.
    pub anchor: Option<[f64; 2]>,
    /// Largest acceptable residual, relative to max(1, max|f|) on the grid.
    pub tol: f64,
}

impl Default for DecompOptions {
    fn default() -> Self {
        DecompOptions { fd_step: None, knots: 401, verify_grid: 41, anchor: None, tol: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecompMethod {
    Recurrence,
    HighOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompResult {
    pub directions: Vec<[f64; 2]>,
    /// gᵢ over the range of aᵢ·x on the box.
    pub tables: Vec<UnivariateTable<f64>>,
    /// Sup-norm of f − Σ gᵢ(aᵢ·x) on the verification grid.
    pub residual: f64,
    pub fd_step: f64,
    pub anchor: [f64; 2],
    pub method: DecompMethod,
}

impl DecompResult {
    pub fn to_ridge_sum(&self) -> Result<RidgeSum<f64>> {
        let mut s = RidgeSum::new();
        for (a, t) in self.directions.iter().zip(&self.tables) {
            s.push(a.to_vec(), Profile::Table(t.clone()))?;
        }
        Ok(s)
    }
}

impl Field for DecompResult {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.directions.iter().zip(&self.tables).map(|(a, t)| t.eval(a[0] * x[0] + a[1] * x[1])).sum()
    }
}

/// Weights of the fourth-order central first derivative, over 12h.
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// ∂^k F / ∂l₁…∂l_k at `p` by composed central stencils.
fn directional(f: &dyn Fn([f64; 2]) -> f64, dirs: &[[f64; 2]], h: f64, p: [f64; 2]) -> f64 {
    match dirs.split_first() {
        None => f(p),
        Some((l, rest)) => {
            let s: f64 = STENCIL
                .iter()
                .map(|&(k, w)| w * directional(f, rest, h, [p[0] + k * h * l[0], p[1] + k * h * l[1]]))
                .sum();
            s / (12.0 * h)
        }
    }
}

fn table(iv: Interval, knots: usize, f: impl Fn(f64) -> f64) -> Result<UnivariateTable<f64>> {
    UnivariateTable::sample(iv.0, iv.1, knots.max(4), Interp::Cubic, f)
}

/// Re-expresses a profile of a·(x − c) as a profile of a·x on `range`.
fn shift(src: &UnivariateTable<f64>, range: Interval, offset: f64, knots: usize) -> Result<UnivariateTable<f64>> {
    table((range.0 + offset, range.1 + offset), knots, |t| src.eval(t - offset))
}

fn check_finite(t: &UnivariateTable<f64>, what: &str) -> Result<()> {
    if t.values().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{what} is not finite on its range; f must be evaluable around the box")))
    }
}

fn verify(problem: &DecompProblem, res: &DecompResult, opts: &DecompOptions) -> Result<f64> {
    let m = opts.verify_grid.max(2) - 1;
    let (x, y) = (problem.bbox.x, problem.bbox.y);
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..=m {
        for j in 0..=m {
            let p = [x.0 + (x.1 - x.0) * i as f64 / m as f64, y.0 + (y.1 - y.0) * j as f64 / m as f64];
            let v = problem.f.eval(&p);
            let r = v - res.eval(&p);
            if !r.is_finite() {
                return Err(Error::Evaluation(p.to_vec()));
            }
            scale = scale.max(v.abs());
            worst = worst.max(r.abs());
        }
    }
    if worst > opts.tol * scale {
        return Err(Error::Accuracy { achieved: worst });
    }
    Ok(worst)
}

/// Decomposition by the recurrences h_{i,k}, φ_{p,k}.
pub fn decompose(problem: &DecompProblem, opts: &DecompOptions) -> Result<DecompResult> {
    let n = problem.directions.len();
    let m = n - 2;
    let norm = normalize(problem)?;
    let c = opts.anchor.unwrap_or_else(|| problem.center());
    let k = opts.knots;
    let dirs = &problem.directions;
    let ranges: Vec<Interval> = dirs.iter().map(|&a| problem.ridge_range(a, c)).collect();
    let h = opts.fd_step.unwrap_or(1e-3 * (ranges[n - 2].1 - ranges[n - 2].0).max(ranges[n - 1].1 - ranges[n - 1].0));
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Invalid("finite-difference step must be positive".into()));
    }
    let (tilde, l) = (&norm.tilde, &norm.normals);
    let nu: Vec<f64> = tilde.iter().map(|&t| dot(t, t)).collect();
    let f_star = |q: [f64; 2]| {
        let u = norm.pull(q);
        problem.f.eval(&[u[0] + c[0], u[1] + c[1]])
    };

    // Each chain lives on one interval around 0 that covers its own ridge
    // range and every argument at which later levels sample it.
    let mut iv = vec![(0.0, 0.0); m];
    for p in (0..m).rev() {
        let mut r = hull(ranges[p], (0.0, 0.0));
        for q in p + 1..m {
            r = hull(r, scaled(iv[q], dot(tilde[p], tilde[q]) / nu[q]));
        }
        iv[p] = padded(r);
    }
    let mut j1 = hull(ranges[n - 2], (0.0, 0.0));
    let mut j2 = hull(ranges[n - 1], (0.0, 0.0));
    for q in 0..m {
        j1 = hull(j1, scaled(iv[q], tilde[q][0] / nu[q]));
        j2 = hull(j2, scaled(iv[q], tilde[q][1] / nu[q]));
    }
    let (j1, j2) = (padded(j1), padded(j2));

    let d0 = |q: [f64; 2]| directional(&f_star, l, h, q);
    let base = d0([0.0, 0.0]);
    let mut h1 = vec![table(j1, k, |t| d0([t, 0.0]))?];
    let mut h2 = vec![table(j2, k, |t| d0([0.0, t]) - base)?];
    check_finite(&h1[0], "the mixed derivative")?;
    check_finite(&h2[0], "the mixed derivative")?;
    for lk in l.iter() {
        let next1 = h1.last().expect("nonempty").antiderivative(0.0, 1.0 / lk[0])?;
        let next2 = h2.last().expect("nonempty").antiderivative(0.0, 1.0 / lk[1])?;
        h1.push(next1);
        h2.push(next2);
    }

    // phi[p][k] is φ_{p+1,k+1}.
    let mut phi: Vec<Vec<UnivariateTable<f64>>> = Vec::with_capacity(m);
    for p in 0..m {
        let dp = |q: [f64; 2]| directional(&f_star, &l[p + 1..], h, q);
        let first = table(iv[p], k, |t| {
            let (x, y) = (tilde[p][0] * t / nu[p], tilde[p][1] * t / nu[p]);
            let mut v = dp([x, y]) - h1[p + 1].eval(x) - h2[p + 1].eval(y);
            for (j, chain) in phi.iter().enumerate() {
                v -= chain[p - j].eval(dot(tilde[j], tilde[p]) / nu[p] * t);
            }
            v
        })?;
        check_finite(&first, "a ridge profile")?;
        let mut chain = vec![first];
        for kk in 0..n - p - 3 {
            let next = chain[kk].antiderivative(0.0, 1.0 / dot(tilde[p], l[kk + p + 1]))?;
            chain.push(next);
        }
        phi.push(chain);
    }

    let mut tables = Vec::with_capacity(n);
    for p in 0..m {
        tables.push(shift(phi[p].last().expect("nonempty"), ranges[p], dot(dirs[p], c), k)?);
    }
    tables.push(shift(h1.last().expect("nonempty"), ranges[n - 2], dot(dirs[n - 2], c), k)?);
    tables.push(shift(h2.last().expect("nonempty"), ranges[n - 1], dot(dirs[n - 1], c), k)?);
    let mut res =
        DecompResult { directions: dirs.clone(), tables, residual: f64::NAN, fd_step: h, anchor: c, method: DecompMethod::Recurrence };
    res.residual = verify(problem, &res, opts)?;
    Ok(res)
}

/// Independent decomposition for s ≥ n − 1: the n − 1 derivatives along the
/// normals of all other directions leave a multiple of g_r^{(n−1)}, which is
/// integrated back. The polynomial of degree ≤ n − 2 left undetermined is
/// fitted on the verification grid and split into ridge polynomials.
pub fn crosscheck_highorder(problem: &DecompProblem, opts: &DecompOptions) -> Result<DecompResult> {
    let n = problem.directions.len();
    if problem.order + 1 < n {
        return Err(Error::Hypothesis(format!("the cross-check needs s ≥ n − 1 = {}, got {}", n - 1, problem.order)));
    }
    let c = opts.anchor.unwrap_or_else(|| problem.center());
    let k = opts.knots;
    let dirs = &problem.directions;
    // A fourth-order stencil composed n − 1 times balances truncation against
    // rounding near ε^{1/(n+3)}.
    let h = opts.fd_step.unwrap_or(problem.size() * 1e-3f64.max(f64::EPSILON.powf(1.0 / (n as f64 + 3.0))));
    let normals: Vec<[f64; 2]> = dirs.iter().map(|&a| unit_normal(a)).collect();
    let fhat = |u: [f64; 2]| problem.f.eval(&[u[0] + c[0], u[1] + c[1]]);
    let mut tables = Vec::with_capacity(n);
    for (r, &a) in dirs.iter().enumerate() {
        let others: Vec<[f64; 2]> = normals.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &l)| l).collect();
        let factor: f64 = others.iter().map(|&l| dot(a, l)).product();
        let a2 = dot(a, a);
        let range = problem.ridge_range(a, c);
        let mut t = table(padded(hull(range, (0.0, 0.0))), k, |s| {
            directional(&fhat, &others, h, [a[0] * s / a2, a[1] * s / a2]) / factor
        })?;
        check_finite(&t, "a high-order derivative")?;
        for _ in 0..n - 1 {
            t = t.antiderivative(0.0, 1.0)?;
        }
        tables.push(shift(&t, range, dot(a, c), k)?);
    }
    let mut res =
        DecompResult { directions: dirs.clone(), tables, residual: f64::NAN, fd_step: h, anchor: c, method: DecompMethod::HighOrder };
    correct_polynomial(problem, &mut res, n - 2, opts)?;
    res.residual = verify(problem, &res, opts)?;
    Ok(res)
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn binomial(m: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Fits P of total degree ≤ `deg` to f − Σgᵢ in scaled coordinates
/// u = (x − c)/s and adds the ridge polynomials that make up P to the tables.
fn correct_polynomial(problem: &DecompProblem, res: &mut DecompResult, deg: usize, opts: &DecompOptions) -> Result<()> {
    let c = res.anchor;
    let s = problem.size() / 2.0;
    let basis: Vec<(usize, usize)> = (0..=deg).flat_map(|m| (0..=m).map(move |j| (m, j))).collect();
    let mono = |u: [f64; 2], (m, j): (usize, usize)| u[0].powi(j as i32) * u[1].powi((m - j) as i32);
    let nb = basis.len();
    let mut ata = vec![vec![0.0; nb]; nb];
    let mut atb = vec![0.0; nb];
    let g = opts.verify_grid.max(2) - 1;
    let (bx, by) = (problem.bbox.x, problem.bbox.y);
    for i in 0..=g {
        for j in 0..=g {
            let p = [bx.0 + (bx.1 - bx.0) * i as f64 / g as f64, by.0 + (by.1 - by.0) * j as f64 / g as f64];
            let u = [(p[0] - c[0]) / s, (p[1] - c[1]) / s];
            let r = problem.f.eval(&p) - res.eval(&p);
            let row: Vec<f64> = basis.iter().map(|&b| mono(u, b)).collect();
            for a in 0..nb {
                atb[a] += row[a] * r;
                for b in 0..nb {
                    ata[a][b] += row[a] * row[b];
                }
            }
        }
    }
    let coef = solve_dense(ata, atb).ok_or(Error::Singular)?;
    // ridge[r][m]: coefficient of (aᵣ·u)^m.
    let n = res.directions.len();
    let mut ridge = vec![vec![0.0; deg + 1]; n];
    for m in 0..=deg {
        let rhs: Vec<f64> = (0..=m).map(|j| coef[basis.iter().position(|&b| b == (m, j)).expect("basis")]).collect();
        let mat: Vec<Vec<f64>> = (0..=m)
            .map(|j| {
                (0..=m)
                    .map(|r| {
                        let a = res.directions[r];
                        binomial(m, j) * a[0].powi(j as i32) * a[1].powi((m - j) as i32)
                    })
                    .collect()
            })
            .collect();
        let sol = solve_dense(mat, rhs).ok_or(Error::Singular)?;
        for (r, v) in sol.into_iter().enumerate() {
            ridge[r][m] = v;
        }
    }
    for (r, t) in res.tables.iter_mut().enumerate() {
        let off = dot(res.directions[r], c);
        let cr = &ridge[r];
        *t = t.map_values(|x, v| v + cr.iter().enumerate().map(|(m, q)| q * ((x - off) / s).powi(m as i32)).sum::<f64>());
    }
    Ok(())
}

/// Largest deviation of `ys` from its least-squares polynomial of degree
/// ≤ `degree` in `xs`; small values certify that two profiles differ by
/// such a polynomial.
pub fn polynomial_defect(xs: &[f64], ys: &[f64], degree: usize) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() <= degree {
        return Err(Error::Invalid("need more samples than coefficients".into()));
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mid, half) = ((lo + hi) / 2.0, ((hi - lo) / 2.0).max(f64::MIN_POSITIVE));
    let nb = degree + 1;
    let mut ata = vec![vec![0.0; nb]; nb];
    let mut atb = vec![0.0; nb];
    for (&x, &y) in xs.iter().zip(ys) {
        let u = (x - mid) / half;
        let row: Vec<f64> = (0..nb).map(|k| u.powi(k as i32)).collect();
        for a in 0..nb {
            atb[a] += row[a] * y;
            for b in 0..nb {
                ata[a][b] += row[a] * row[b];
            }
        }
    }
    let coef = solve_dense(ata, atb).ok_or(Error::Singular)?;
    Ok(xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let u = (x - mid) / half;
            (y - coef.iter().enumerate().map(|(k, c)| c * u.powi(k as i32)).sum::<f64>()).abs()
        })
        .fold(0.0, f64::max))
}

/// Residual of [`decompose`] for each finite-difference step.
pub fn convergence_study(problem: &DecompProblem, steps: &[f64], opts: &DecompOptions) -> Result<Vec<(f64, f64)>> {
    steps
        .iter()
        .map(|&h| {
            let o = DecompOptions { fd_step: Some(h), tol: f64::INFINITY, ..*opts };
            Ok((h, decompose(problem, &o)?.residual))
        })
        .collect()
}

/// Least-squares slope of log residual against log step.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(h, r)| (h.ln(), r.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
