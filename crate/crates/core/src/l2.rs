//! Best L₂ approximation by Σ wᵢ(x)gᵢ(aⁱ·x) over sets whose image under
//! y = Jx is a box.
//!
//! In y-coordinates ridge functions depend on one coordinate each, so the
//! best approximation is a coordinatewise averaging of f*(y) = f(J⁻¹y).
//! All integrals use tensor Gauss–Legendre rules over the box.

use serde::Serialize;

use crate::cycles::linalg::{determinant, inverse};
use crate::error::{Error, Result};
use crate::expr::{Field, ScalarField};
use crate::geometry::{dot, DirectionSet, PointConfig};
use crate::quadrature::composite_rule;
use crate::rational::{to_f64, Rational};
use crate::table::{Interp, UnivariateTable};

/// How the domain X is given.
#[derive(Debug, Clone, PartialEq)]
pub enum XDescription {
    /// X = {x : Jx ∈ box}; the box bounds are per y-coordinate.
    YBox(Vec<(Rational, Rational)>),
    /// X is the convex hull of these points.
    Vertices(PointConfig),
}

impl XDescription {
    /// The box [lo₁,hi₁]×…×[loₙ,hiₙ] in x-coordinates, as its vertices.
    pub fn x_box(bounds: &[(Rational, Rational)]) -> Result<Self> {
        let n = bounds.len();
        let pts = (0..1usize << n)
            .map(|mask| (0..n).map(|k| if mask >> k & 1 == 1 { bounds[k].1.clone() } else { bounds[k].0.clone() }).collect())
            .collect();
        Ok(XDescription::Vertices(PointConfig::new(n, pts)?))
    }
}

/// y = Jx with J's rows a¹..aʳ (the ridge directions) followed by the
/// completion, and the image box Y = Y₁×…×Yᵣ×Y₀.
#[derive(Debug, Clone, PartialEq)]
pub struct RSetTransform {
    r: usize,
    matrix: Vec<Vec<Rational>>,
    det: Rational,
    inverse_rows: Vec<Vec<Rational>>,
    ybox: Vec<(Rational, Rational)>,
}

impl RSetTransform {
    /// Number of ridge directions.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    /// Rows bⁱ of J⁻¹: xᵢ = bⁱ·y.
    pub fn inverse_rows(&self) -> &[Vec<Rational>] {
        &self.inverse_rows
    }

    pub fn ybox(&self) -> &[(Rational, Rational)] {
        &self.ybox
    }

    fn ybox_f64(&self) -> Vec<(f64, f64)> {
        self.ybox.iter().map(|(lo, hi)| (to_f64(lo), to_f64(hi))).collect()
    }

    /// |Y|, exactly.
    pub fn volume(&self) -> Rational {
        self.ybox.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// |Y⁽ʲ⁾|: the volume with the j-th side left out.
    pub fn volume_without(&self, j: usize) -> Rational {
        self.ybox.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, (lo, hi))| hi - lo).product()
    }

    pub fn to_y(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.iter().map(|row| row.iter().zip(x).map(|(a, v)| to_f64(a) * v).sum()).collect()
    }

    /// g(y) = u(J⁻¹y) for a field u on X.
    pub fn pull(&self, u: &ScalarField) -> Result<ScalarField> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: u.dim() });
        }
        let m = self.inverse_rows.iter().map(|row| row.iter().map(to_f64).collect()).collect();
        u.compose_linear(m, vec![0.0; self.dim()])
    }
}

/// Completes the directions by `completion` to a basis and computes the
/// image box of X.
pub fn build_rset(directions: &DirectionSet, completion: &[Vec<Rational>], x: &XDescription) -> Result<RSetTransform> {
    let n = directions.dim();
    let r = directions.len();
    if r == 0 {
        return Err(Error::Invalid("at least one direction".into()));
    }
    if r + completion.len() != n {
        return Err(Error::Dimension { expected: n - r.min(n), got: completion.len() });
    }
    if let Some(c) = completion.iter().find(|c| c.len() != n) {
        return Err(Error::Dimension { expected: n, got: c.len() });
    }
    let matrix: Vec<Vec<Rational>> = directions.directions().iter().chain(completion).cloned().collect();
    let det = determinant(&matrix);
    let inverse_rows = inverse(&matrix).ok_or(Error::Singular)?;
    let ybox = match x {
        XDescription::YBox(b) => {
            if b.len() != n {
                return Err(Error::Dimension { expected: n, got: b.len() });
            }
            if b.iter().any(|(lo, hi)| lo >= hi) {
                return Err(Error::Invalid("y-box needs lo < hi on every axis".into()));
            }
            b.clone()
        }
        XDescription::Vertices(pc) => image_box(&matrix, pc)?,
    };
    Ok(RSetTransform { r, matrix, det, inverse_rows, ybox })
}

/// The hull of the images is the bounding box exactly when every corner of
/// that box is itself an image.
fn image_box(matrix: &[Vec<Rational>], pc: &PointConfig) -> Result<Vec<(Rational, Rational)>> {
    let n = matrix.len();
    if pc.dim() != n {
        return Err(Error::Dimension { expected: n, got: pc.dim() });
    }
    if pc.is_empty() {
        return Err(Error::Invalid("no vertices".into()));
    }
    let images: Vec<Vec<Rational>> = pc.points().iter().map(|p| matrix.iter().map(|row| dot(row, p)).collect()).collect();
    let mut bx: Vec<(Rational, Rational)> = images[0].iter().map(|v| (v.clone(), v.clone())).collect();
    for y in &images[1..] {
        for (k, v) in y.iter().enumerate() {
            if v < &bx[k].0 {
                bx[k].0 = v.clone();
            }
            if v > &bx[k].1 {
                bx[k].1 = v.clone();
            }
        }
    }
    if bx.iter().any(|(lo, hi)| lo == hi) {
        return Err(Error::Invalid("X has empty interior".into()));
    }
    for mask in 0..1usize << n {
        let corner: Vec<&Rational> = (0..n).map(|k| if mask >> k & 1 == 1 { &bx[k].1 } else { &bx[k].0 }).collect();
        if !images.iter().any(|y| y.iter().zip(&corner).all(|(a, b)| a == *b)) {
            return Err(Error::NotAnRSet);
        }
    }
    Ok(bx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Options {
    /// Gauss–Legendre nodes per panel and axis.
    pub nodes: usize,
    pub panels: usize,
    /// Knots of each returned component table.
    pub knots: usize,
    /// Weighted case: relaxation factor of the fixed-point sweeps.
    pub damping: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for L2Options {
    fn default() -> Self {
        L2Options { nodes: 8, panels: 1, knots: 65, damping: 0.5, max_iter: 500, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Diagnostics {
    /// A = ∫_Y f*.
    pub a: f64,
    pub det_j: f64,
    /// ‖f*‖² over Y.
    pub f_star_norm2: f64,
    /// ‖fᵢ*‖² over Y, fᵢ*(yᵢ) = ∫_{Y⁽ⁱ⁾} f*.
    pub fi_norm2: Vec<f64>,
    /// |Y⁽ⁱ⁾| for i = 1..r, then |Y|.
    pub volumes: Vec<f64>,
    /// Weighted case: sweeps used and last change.
    pub iterations: Option<usize>,
    pub last_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct L2Solution {
    directions: Vec<Vec<f64>>,
    weights: Option<Vec<ScalarField>>,
    /// gᵢ⁰ tabulated on Yᵢ (local cubic interpolation).
    pub components: Vec<UnivariateTable<f64>>,
    pub error: f64,
    pub diagnostics: L2Diagnostics,
}

impl L2Solution {
    /// Σ wᵢ(x)gᵢ⁰(aⁱ·x).
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.directions
            .iter()
            .zip(&self.components)
            .enumerate()
            .map(|(i, (a, g))| {
                let w = self.weights.as_ref().map_or(1.0, |ws| ws[i].eval(x));
                w * g.eval(a.iter().zip(x).map(|(u, v)| u * v).sum())
            })
            .sum()
    }
}

impl Field for L2Solution {
    fn dim(&self) -> usize {
        self.directions.first().map_or(0, Vec::len)
    }
    fn eval(&self, x: &[f64]) -> f64 {
        L2Solution::eval(self, x)
    }
}

/// Tensor Gauss–Legendre grid over the y-box, last axis fastest.
struct NodeGrid {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
    len: usize,
}

impl NodeGrid {
    fn new(bx: &[(f64, f64)], opts: &L2Options) -> Result<Self> {
        if opts.nodes < 1 || opts.panels < 1 {
            return Err(Error::Invalid("quadrature needs nodes ≥ 1 and panels ≥ 1".into()));
        }
        let axes: Vec<_> = bx.iter().map(|&(lo, hi)| composite_rule(lo, hi, opts.nodes, opts.panels)).collect();
        let len = axes.iter().map(|a| a.0.len()).product();
        Ok(NodeGrid { axes, len })
    }

    fn size(&self, k: usize) -> usize {
        self.axes[k].0.len()
    }

    /// Multi-index of a flat index.
    fn index(&self, mut flat: usize, out: &mut [usize]) {
        for k in (0..self.axes.len()).rev() {
            out[k] = flat % self.size(k);
            flat /= self.size(k);
        }
    }

    /// Values of `u` at all nodes.
    fn sample(&self, u: &dyn Field) -> Result<Vec<f64>> {
        let n = self.axes.len();
        let mut idx = vec![0; n];
        let mut y = vec![0.0; n];
        let mut out = Vec::with_capacity(self.len);
        for flat in 0..self.len {
            self.index(flat, &mut idx);
            for k in 0..n {
                y[k] = self.axes[k].0[idx[k]];
            }
            out.push(u.try_eval(&y)?);
        }
        Ok(out)
    }

    /// Quadrature weight of every node.
    fn weights(&self) -> Vec<f64> {
        let n = self.axes.len();
        let mut idx = vec![0; n];
        (0..self.len)
            .map(|flat| {
                self.index(flat, &mut idx);
                (0..n).map(|k| self.axes[k].1[idx[k]]).product()
            })
            .collect()
    }

    /// Integrates `h(y)` over Y⁽ʲ⁾ with yⱼ = t fixed; `h` gets the point and
    /// the multi-index (whose j-th entry is meaningless).
    fn slice(&self, j: usize, t: f64, h: &mut dyn FnMut(&[f64], &[usize]) -> Result<f64>) -> Result<f64> {
        let n = self.axes.len();
        let m = self.len / self.size(j);
        let mut idx = vec![0; n];
        let mut y = vec![0.0; n];
        let mut acc = 0.0;
        for flat in 0..m {
            let mut rem = flat;
            let mut w = 1.0;
            for k in (0..n).rev() {
                if k == j {
                    idx[k] = usize::MAX;
                    y[k] = t;
                    continue;
                }
                idx[k] = rem % self.size(k);
                rem /= self.size(k);
                y[k] = self.axes[k].0[idx[k]];
                w *= self.axes[k].1[idx[k]];
            }
            acc += w * h(&y, &idx)?;
        }
        Ok(acc)
    }
}

/// Best approximation from Σ wᵢ(x)gᵢ(aⁱ·x); `weights = None` means wᵢ ≡ 1
/// and uses the closed form, otherwise the fixed-point characterization is
/// solved by damped successive sweeps.
pub fn best_l2(f: &ScalarField, t: &RSetTransform, weights: Option<&[ScalarField]>, opts: &L2Options) -> Result<L2Solution> {
    let fs = t.pull(f)?;
    let bx = t.ybox_f64();
    let grid = NodeGrid::new(&bx, opts)?;
    let r = t.r();
    let det_j = to_f64(t.det());
    let vol = to_f64(&t.volume());
    let vols: Vec<f64> = (0..r).map(|j| to_f64(&t.volume_without(j))).collect();
    let fv = grid.sample(&fs)?;
    let wq = grid.weights();
    let a: f64 = fv.iter().zip(&wq).map(|(v, w)| v * w).sum();
    let f_star_norm2: f64 = fv.iter().zip(&wq).map(|(v, w)| v * v * w).sum();
    // fⱼ* at the nodes of axis j.
    let n = t.dim();
    let mut idx = vec![0; n];
    let mut fi_nodes: Vec<Vec<f64>> = (0..r).map(|j| vec![0.0; grid.size(j)]).collect();
    for flat in 0..grid.len {
        grid.index(flat, &mut idx);
        for (j, fj) in fi_nodes.iter_mut().enumerate() {
            fj[idx[j]] += wq[flat] / grid.axes[j].1[idx[j]] * fv[flat];
        }
    }
    let fi_norm2: Vec<f64> = (0..r)
        .map(|j| vols[j] * fi_nodes[j].iter().zip(&grid.axes[j].1).map(|(v, w)| v * v * w).sum::<f64>())
        .collect();
    let mut volumes = vols.clone();
    volumes.push(vol);
    let mut diagnostics =
        L2Diagnostics { a, det_j, f_star_norm2, fi_norm2, volumes, iterations: None, last_change: None };
    let directions: Vec<Vec<f64>> = t.matrix[..r].iter().map(|row| row.iter().map(to_f64).collect()).collect();

    let Some(ws) = weights else {
        let radicand = f_star_norm2 - (0..r).map(|j| diagnostics.fi_norm2[j] / (vols[j] * vols[j])).sum::<f64>()
            + (r as f64 - 1.0) * a * a / vol;
        let error = l2_radical(radicand, f_star_norm2, det_j)?;
        let mut components = Vec::with_capacity(r);
        for j in 0..r {
            let shift = if j == 0 { (r as f64 - 1.0) * a / vol } else { 0.0 };
            let tab = sample_table(bx[j], opts.knots, |y| {
                let fj = grid.slice(j, y, &mut |p, _| fs.try_eval(p))?;
                Ok(fj / vols[j] - shift)
            })?;
            components.push(tab);
        }
        return Ok(L2Solution { directions, weights: None, components, error, diagnostics });
    };

    if ws.len() != r {
        return Err(Error::Dimension { expected: r, got: ws.len() });
    }
    let wstar: Vec<ScalarField> = ws.iter().map(|w| t.pull(w)).collect::<Result<_>>()?;
    let wv: Vec<Vec<f64>> = wstar.iter().map(|w| grid.sample(w)).collect::<Result<_>>()?;
    let mut g: Vec<Vec<f64>> = (0..r).map(|j| vec![0.0; grid.size(j)]).collect();
    let mut last = f64::INFINITY;
    let mut iters = 0;
    while iters < opts.max_iter {
        iters += 1;
        last = 0.0;
        for j in 0..r {
            let mut num = vec![0.0; grid.size(j)];
            let mut den = vec![0.0; grid.size(j)];
            for flat in 0..grid.len {
                grid.index(flat, &mut idx);
                let others: f64 = (0..r).filter(|&i| i != j).map(|i| wv[i][flat] * g[i][idx[i]]).sum();
                let w = wq[flat] / grid.axes[j].1[idx[j]];
                num[idx[j]] += w * (fv[flat] - others) * wv[j][flat];
                den[idx[j]] += w * wv[j][flat] * wv[j][flat];
            }
            for k in 0..grid.size(j) {
                if den[k] == 0.0 {
                    return Err(Error::Hypothesis(format!("weight {} vanishes on a whole slice", j + 1)));
                }
                let step = opts.damping * (num[k] / den[k] - g[j][k]);
                g[j][k] += step;
                last = last.max(step.abs());
            }
        }
        if last < opts.tol {
            break;
        }
    }
    diagnostics.iterations = Some(iters);
    diagnostics.last_change = Some(last);
    if !(last < opts.tol) {
        return Err(Error::NoConvergence { iters, residual: last });
    }
    let mut resid2 = 0.0;
    for flat in 0..grid.len {
        grid.index(flat, &mut idx);
        let s: f64 = (0..r).map(|i| wv[i][flat] * g[i][idx[i]]).sum();
        resid2 += wq[flat] * (fv[flat] - s) * (fv[flat] - s);
    }
    let error = l2_radical(resid2, f_star_norm2, det_j)?;
    // Off-node values from the fixed-point identity itself.
    let mut components = Vec::with_capacity(r);
    for j in 0..r {
        let tab = sample_table(bx[j], opts.knots, |y| {
            let num = grid.slice(j, y, &mut |p, id| {
                let others: f64 = (0..r).filter(|&i| i != j).map(|i| wstar[i].eval(p) * g[i][id[i]]).sum();
                Ok((fs.try_eval(p)? - others) * wstar[j].try_eval(p)?)
            })?;
            let den = grid.slice(j, y, &mut |p, _| Ok(wstar[j].try_eval(p)?.powi(2)))?;
            Ok(num / den)
        })?;
        components.push(tab);
    }
    Ok(L2Solution { directions, weights: Some(ws.to_vec()), components, error, diagnostics })
}

fn sample_table(range: (f64, f64), knots: usize, mut g: impl FnMut(f64) -> Result<f64>) -> Result<UnivariateTable<f64>> {
    let n = knots.max(4);
    let (lo, hi) = range;
    let mut ks = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        ks.push(y);
        vs.push(g(y)?);
    }
    UnivariateTable::with_interp(ks, vs, Interp::Cubic)
}

/// |det J|^{−1/2}·√radicand, with radicands down to −1e-12 (relative)
/// treated as 0.
fn l2_radical(radicand: f64, scale: f64, det_j: f64) -> Result<f64> {
    if radicand < -1e-12 * (1.0 + scale) || !radicand.is_finite() {
        return Err(Error::Invalid(format!("negative radicand {radicand:e}: quadrature too coarse")));
    }
    Ok((radicand.max(0.0) / det_j.abs()).sqrt())
}

/// E(f) by the closed-form radicand (unit weights).
pub fn l2_error(f: &ScalarField, t: &RSetTransform, opts: &L2Options) -> Result<f64> {
    Ok(best_l2(f, t, None, &L2Options { knots: 4, ..*opts })?.error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::quadrature::tensor_quadrature;
    use crate::rational::{frac, int};

    fn unit_box(n: usize) -> XDescription {
        XDescription::YBox(vec![(int(0), int(1)); n])
    }

    fn four_dim_system() -> (DirectionSet, Vec<Vec<Rational>>) {
        let d = DirectionSet::from_ints(4, &[&[1, 1, 1, -1], &[1, 1, -1, 1], &[1, -1, 1, 1]]).unwrap();
        (d, vec![vec![int(-1), int(1), int(1), int(1)]])
    }

    #[test]
    fn transforms() {
        let t = build_rset(&DirectionSet::coordinate(3), &[], &unit_box(3)).unwrap();
        assert_eq!(t.det(), &int(1));
        let (d, c) = four_dim_system();
        let t = build_rset(&d, &c, &unit_box(4)).unwrap();
        assert_eq!(t.det(), &int(-16));
        assert_eq!(t.inverse_rows()[0], vec![frac(1, 4), frac(1, 4), frac(1, 4), frac(-1, 4)]);
        // Skew directions: the parallelogram spanned by their dual basis.
        let skew = DirectionSet::from_ints(2, &[&[2, 1], &[1, 3]]).unwrap();
        let t = build_rset(&skew, &[], &unit_box(2)).unwrap();
        let verts = PointConfig::new(
            2,
            (0..4)
                .map(|m| {
                    let y = [int(m & 1), int(m >> 1)];
                    t.inverse_rows().iter().map(|b| dot(b, &y)).collect()
                })
                .collect(),
        )
        .unwrap();
        let t2 = build_rset(&skew, &[], &XDescription::Vertices(verts)).unwrap();
        assert_eq!(t2.ybox(), t.ybox());
        let sq = XDescription::x_box(&[(int(0), int(1)), (int(0), int(1))]).unwrap();
        assert!(matches!(build_rset(&skew, &[], &sq), Err(Error::NotAnRSet)));
        let bad = DirectionSet::from_ints(2, &[&[1, 0]]).unwrap();
        assert!(matches!(build_rset(&bad, &[vec![int(2), int(0)]], &unit_box(2)), Err(Error::Singular)));
    }

    #[test]
    fn product_on_the_square() {
        let t = build_rset(&DirectionSet::coordinate(2), &[], &unit_box(2)).unwrap();
        let f = parse_expression("x1*x2", 2).unwrap();
        let s = best_l2(&f, &t, None, &L2Options::default()).unwrap();
        assert!((s.error - 1.0 / 12.0).abs() < 1e-12);
        for y in [0.0, 0.3, 1.0] {
            assert!((s.components[0].eval(y) - (y / 2.0 - 0.25)).abs() < 1e-12);
            assert!((s.components[1].eval(y) - y / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_dimensional_example() {
        let (d, c) = four_dim_system();
        let t = build_rset(&d, &c, &unit_box(4)).unwrap();
        let f = parse_expression(
            "8*x1*x2*x3*x4 - (x1^4 + x2^4 + x3^4 + x4^4) + 2*(x1^2*x2^2 + x1^2*x3^2 + x1^2*x4^2 + x2^2*x3^2 + x2^2*x4^2 + x3^2*x4^2)",
            4,
        )
        .unwrap();
        let s = best_l2(&f, &t, None, &L2Options::default()).unwrap();
        let want = 2f64.sqrt() * 47f64.sqrt() / 576.0;
        assert!((s.error - want).abs() < 1e-12, "{}", s.error);
        let dg = &s.diagnostics;
        assert!((dg.a - 1.0 / 16.0).abs() < 1e-12);
        assert!((dg.f_star_norm2 - 1.0 / 81.0).abs() < 1e-12);
        assert!(dg.fi_norm2.iter().all(|v| (v - 1.0 / 192.0).abs() < 1e-12));
        let x = [0.2, 0.3, 0.1, 0.25];
        let ys = t.to_y(&x);
        let want = (ys[0] + ys[1] + ys[2]) / 8.0 - 0.125;
        assert!((s.eval(&x) - want).abs() < 1e-12);
    }

    #[test]
    fn ridge_sums_are_reproduced() {
        let skew = DirectionSet::from_ints(2, &[&[2, 1], &[1, 3]]).unwrap();
        let t = build_rset(&skew, &[], &unit_box(2)).unwrap();
        let f = parse_expression("exp(2*x1 + x2) + (x1 + 3*x2)^3", 2).unwrap();
        let s = best_l2(&f, &t, None, &L2Options::default()).unwrap();
        assert!(s.error < 1e-9, "{}", s.error);
        let x = [0.2, 0.1];
        assert!((s.eval(&x) - f.eval(&x)).abs() < 1e-7);
    }

    #[test]
    fn weighted_sweeps_agree_with_closed_form_for_unit_weights() {
        let (d, c) = four_dim_system();
        let t = build_rset(&d, &c, &unit_box(4)).unwrap();
        let f = parse_expression("x1*x2 + sin(x3 - x4)", 4).unwrap();
        let opts = L2Options { nodes: 5, ..L2Options::default() };
        let plain = best_l2(&f, &t, None, &opts).unwrap();
        let one = parse_expression("1", 4).unwrap();
        let w = vec![one.clone(), one.clone(), one];
        let weighted = best_l2(&f, &t, Some(&w), &opts).unwrap();
        assert!((plain.error - weighted.error).abs() < 1e-8);
        let x = [0.1, 0.2, 0.3, 0.2];
        assert!((plain.eval(&x) - weighted.eval(&x)).abs() < 1e-6);
    }

    #[test]
    fn weighted_residual_is_orthogonal() {
        let t = build_rset(&DirectionSet::coordinate(2), &[], &unit_box(2)).unwrap();
        let f = parse_expression("exp(x1*x2)", 2).unwrap();
        let w = vec![parse_expression("1 + x2", 2).unwrap(), parse_expression("2 + x1*x1", 2).unwrap()];
        let s = best_l2(&f, &t, Some(&w), &L2Options::default()).unwrap();
        for (j, h) in ["cos(3*x1)", "x2^2"].iter().enumerate() {
            let h = parse_expression(h, 2).unwrap();
            let wj = &w[j];
            let inner = crate::expr::FnField::new(2, |x: &[f64]| (f.eval(x) - s.eval(x)) * wj.eval(x) * h.eval(x));
            let v = tensor_quadrature(&inner, &[(0.0, 1.0), (0.0, 1.0)], 12).unwrap();
            assert!(v.abs() < 1e-6, "{v}");
        }
        assert!(s.diagnostics.iterations.unwrap() < 500);
    }
}
