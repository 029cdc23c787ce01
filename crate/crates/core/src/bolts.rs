//! Approximation by φ(x) + ψ(y) on polygons with axis-parallel sides.
//!
//! The rectangle functional L(f,S) and the closed-bolt functional l(f,p)
//! annihilate every sum φ(x) + ψ(y). On the V_c/U_c classes of a rectangle
//! the error is one rectangle functional with an explicit extremal sum; on
//! hexagons, octagons and stairlike polygons it is the largest |l| over a
//! short list of vertex bolts, provided f lies in M (every rectangle
//! functional inside the polygon is nonnegative). Membership is certified on
//! a grid, and a grid LP takes over when it fails.

use serde::Serialize;

use crate::cycles::{cycle_functional, minimal_cycles, CycleCertificate, Projection};
use crate::error::{Error, Result};
use crate::expr::{Field, ScalarField};
use crate::geometry::{DirectionSet, PointConfig};
use crate::oracle::grid_minimax_oracle;
use crate::rational::from_f64_exact;
use crate::table::{Interp, UnivariateTable};

pub type Point2 = [f64; 2];

/// Default number of grid intervals per axis for class and membership checks.
pub const CHECK_GRID: usize = 32;

/// Bisection steps for the level y₀ of the extremal sum.
const BISECTION_STEPS: usize = 80;

/// Largest stairlike polygon whose e-bolts are enumerated by brute force.
pub const MAX_STAIR_STEPS: usize = 8;

fn check_dim(f: &dyn Field) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: f.dim() });
    }
    Ok(())
}

fn eval(f: &dyn Field, p: Point2) -> Result<f64> {
    let v = f.eval(&p);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation(p.to_vec()))
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[0] < w[1])
}

/// [x₀,x₁]×[y₀,y₁].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl AxisRect {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if !strictly_increasing(&[x.0, x.1]) || !strictly_increasing(&[y.0, y.1]) {
            return Err(Error::Invalid("rectangle needs a₁ < b₁ and a₂ < b₂".into()));
        }
        Ok(AxisRect { x, y })
    }

    pub fn unit() -> Self {
        AxisRect { x: (0.0, 1.0), y: (0.0, 1.0) }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.x.0 <= p[0] && p[0] <= self.x.1 && self.y.0 <= p[1] && p[1] <= self.y.1
    }

    /// Corners starting at the lower left, so l(f, bolt) = L(f, self).
    pub fn corner_bolt(&self) -> ClosedBolt {
        let (x0, x1) = self.x;
        let (y0, y1) = self.y;
        ClosedBolt { points: vec![[x0, y0], [x0, y1], [x1, y1], [x1, y0]] }
    }
}

/// L(f,S) = ¼[f(x₁,y₁) + f(x₂,y₂) − f(x₁,y₂) − f(x₂,y₁)].
pub fn rect_functional(f: &dyn Field, s: &AxisRect) -> f64 {
    let (x0, x1) = s.x;
    let (y0, y1) = s.y;
    0.25 * (f.eval(&[x0, y0]) + f.eval(&[x1, y1]) - f.eval(&[x0, y1]) - f.eval(&[x1, y0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Vertical,
    Horizontal,
}

fn unit(p: Point2, q: Point2) -> Option<Unit> {
    match (p[0] == q[0], p[1] == q[1]) {
        (true, false) => Some(Unit::Vertical),
        (false, true) => Some(Unit::Horizontal),
        _ => None,
    }
}

/// p₁,…,p₂ₙ with successive points joined alternately by vertical and
/// horizontal segments, including the closing segment p₂ₙp₁.
///
/// The empty bolt only arises from [`maximize_bolt`] when every point cancels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedBolt {
    points: Vec<Point2>,
}

impl ClosedBolt {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        if n < 4 || n % 2 == 1 {
            return Err(Error::Invalid(format!("a closed bolt needs an even number ≥ 4 of points, got {n}")));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("bolt coordinates must be finite".into()));
        }
        let units = (0..n)
            .map(|i| {
                unit(points[i], points[(i + 1) % n])
                    .ok_or_else(|| Error::Invalid(format!("points {} and {} are not joined by an axis segment", i, (i + 1) % n)))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = (0..n).find(|&i| units[i] == units[(i + 1) % n]) {
            return Err(Error::Invalid(format!("segments at point {} do not alternate", (i + 1) % n)));
        }
        Ok(ClosedBolt { points })
    }

    /// The bolt (X₁,Y₁),(X₁,Y₂),(X₂,Y₂),(X₂,Y₃),…,(Xₙ,Y₁).
    pub fn from_coords(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Invalid("need as many abscissae as ordinates".into()));
        }
        let n = xs.len();
        let mut pts = Vec::with_capacity(2 * n);
        for k in 0..n {
            pts.push([xs[k], ys[k]]);
            pts.push([xs[k], ys[(k + 1) % n]]);
        }
        ClosedBolt::new(pts)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same bolt started at p₂, which flips the sign of l.
    pub fn rotated(&self) -> Self {
        let mut points = self.points.clone();
        if !points.is_empty() {
            points.rotate_left(1);
        }
        ClosedBolt { points }
    }

    /// l(f,p) = (1/2n) Σ (−1)^{k−1} f(p_k); zero for the empty bolt.
    pub fn functional(&self, f: &dyn Field) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let s: f64 = self
            .points
            .iter()
            .enumerate()
            .map(|(k, p)| if k % 2 == 0 { f.eval(p) } else { -f.eval(p) })
            .sum();
        s / self.points.len() as f64
    }
}

pub fn bolt_functional(f: &dyn Field, p: &ClosedBolt) -> f64 {
    p.functional(f)
}

/// H = R₁ ∪ R₂ with R₁ = [a₁,a₂]×[b₁,b₃], R₂ = [a₁,a₃]×[b₁,b₂].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hexagon {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl Hexagon {
    pub fn new(a: [f64; 3], b: [f64; 3]) -> Result<Self> {
        if !strictly_increasing(&a) || !strictly_increasing(&b) {
            return Err(Error::Invalid("hexagon needs a₁ < a₂ < a₃ and b₁ < b₂ < b₃".into()));
        }
        Ok(Hexagon { a, b })
    }

    pub fn r1(&self) -> AxisRect {
        AxisRect { x: (self.a[0], self.a[1]), y: (self.b[0], self.b[2]) }
    }

    pub fn r2(&self) -> AxisRect {
        AxisRect { x: (self.a[0], self.a[2]), y: (self.b[0], self.b[1]) }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.r1().contains(p) || self.r2().contains(p)
    }

    /// The six vertices from (a₁,b₁), so that l(f,h) ≥ 0 on M(H).
    pub fn vertex_bolt(&self) -> ClosedBolt {
        let [a1, a2, a3] = self.a;
        let [b1, b2, b3] = self.b;
        ClosedBolt { points: vec![[a1, b1], [a1, b3], [a2, b3], [a2, b2], [a3, b2], [a3, b1]] }
    }
}

/// a₁ < a₂ < a₃ < a₄, b₁ < b₂ < b₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Octagon {
    pub a: [f64; 4],
    pub b: [f64; 3],
}

/// A: the base [a₁,a₄]×[b₁,b₂] with [a₂,a₃]×[b₂,b₃] on top.
/// B: the same base with [a₁,a₂]×[b₂,b₃] and [a₃,a₄]×[b₂,b₃] on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OctagonVariant {
    A,
    B,
}

impl Octagon {
    pub fn new(a: [f64; 4], b: [f64; 3]) -> Result<Self> {
        if !strictly_increasing(&a) || !strictly_increasing(&b) {
            return Err(Error::Invalid("octagon needs a₁ < … < a₄ and b₁ < b₂ < b₃".into()));
        }
        Ok(Octagon { a, b })
    }
}

/// S = ∪ Pᵢ, Pᵢ = [aᵢ,aᵢ₊₁]×[b₁,b_{N+1−i}], i = 1..N−1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StairPolygon {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl StairPolygon {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.len() < 2 {
            return Err(Error::Invalid("stairlike polygon needs N ≥ 2 abscissae and ordinates".into()));
        }
        if !strictly_increasing(&a) || !strictly_increasing(&b) {
            return Err(Error::Invalid("stairlike polygon needs increasing aᵢ and bᵢ".into()));
        }
        Ok(StairPolygon { a, b })
    }

    pub fn steps(&self) -> usize {
        self.a.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AxisPolygon {
    Rect(AxisRect),
    Hexagon(Hexagon),
    Octagon(Octagon, OctagonVariant),
    Stairs(StairPolygon),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBolt {
    pub name: String,
    pub bolt: ClosedBolt,
}

fn named(name: &str, points: Vec<Point2>) -> NamedBolt {
    NamedBolt { name: name.into(), bolt: ClosedBolt { points } }
}

impl AxisPolygon {
    /// Rectangles whose union is the polygon.
    pub fn rects(&self) -> Vec<AxisRect> {
        let r = |x0, x1, y0, y1| AxisRect { x: (x0, x1), y: (y0, y1) };
        match self {
            AxisPolygon::Rect(s) => vec![*s],
            AxisPolygon::Hexagon(h) => vec![h.r1(), h.r2()],
            AxisPolygon::Octagon(o, OctagonVariant::A) => {
                let [a1, a2, a3, a4] = o.a;
                let [b1, b2, b3] = o.b;
                vec![r(a1, a4, b1, b2), r(a2, a3, b2, b3)]
            }
            AxisPolygon::Octagon(o, OctagonVariant::B) => {
                let [a1, a2, a3, a4] = o.a;
                let [b1, b2, b3] = o.b;
                vec![r(a1, a4, b1, b2), r(a1, a2, b2, b3), r(a3, a4, b2, b3)]
            }
            AxisPolygon::Stairs(s) => {
                let n = s.steps();
                (0..n - 1).map(|i| r(s.a[i], s.a[i + 1], s.b[0], s.b[n - 1 - i])).collect()
            }
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.rects().iter().any(|r| r.contains(p))
    }

    /// Distinct vertex abscissae and ordinates.
    pub fn breakpoints(&self) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in self.rects() {
            xs.extend([r.x.0, r.x.1]);
            ys.extend([r.y.0, r.y.1]);
        }
        for v in [&mut xs, &mut ys] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        (xs, ys)
    }

    pub fn bounding_box(&self) -> AxisRect {
        let (xs, ys) = self.breakpoints();
        AxisRect { x: (xs[0], xs[xs.len() - 1]), y: (ys[0], ys[ys.len() - 1]) }
    }

    /// The bolts whose |l| maxima give the error on M: the closed lists for
    /// rectangles, hexagons and octagons, and a brute-force enumeration for
    /// stairlike polygons.
    pub fn ebolts(&self) -> Result<Vec<NamedBolt>> {
        let bolts = match self {
            AxisPolygon::Rect(s) => vec![NamedBolt { name: "r".into(), bolt: s.corner_bolt() }],
            AxisPolygon::Hexagon(h) => vec![
                NamedBolt { name: "h".into(), bolt: h.vertex_bolt() },
                NamedBolt { name: "r1".into(), bolt: h.r1().corner_bolt() },
                NamedBolt { name: "r2".into(), bolt: h.r2().corner_bolt() },
            ],
            AxisPolygon::Octagon(o, OctagonVariant::A) => {
                let [a1, a2, a3, a4] = o.a;
                let [b1, b2, b3] = o.b;
                vec![
                    named("q", vec![[a1, b1], [a1, b2], [a2, b2], [a2, b3], [a3, b3], [a3, b2], [a4, b2], [a4, b1]]),
                    named("r123", vec![[a1, b1], [a1, b2], [a4, b2], [a4, b1]]),
                    named("r124", vec![[a1, b1], [a1, b2], [a2, b2], [a2, b3], [a3, b3], [a3, b1]]),
                    named("r234", vec![[a2, b1], [a2, b3], [a3, b3], [a3, b2], [a4, b2], [a4, b1]]),
                    named("r24", vec![[a2, b1], [a2, b3], [a3, b3], [a3, b1]]),
                ]
            }
            AxisPolygon::Octagon(o, OctagonVariant::B) => {
                let [a1, a2, a3, a4] = o.a;
                let [b1, b2, b3] = o.b;
                vec![
                    named("r", vec![[a1, b1], [a1, b3], [a4, b3], [a4, b1]]),
                    named("r12", vec![[a1, b1], [a1, b3], [a2, b3], [a2, b2], [a4, b2], [a4, b1]]),
                    named("r13", vec![[a1, b1], [a1, b2], [a3, b2], [a3, b3], [a4, b3], [a4, b1]]),
                ]
            }
            AxisPolygon::Stairs(s) => stair_ebolts(s)?,
        };
        Ok(bolts)
    }
}

/// Lower-left anchored staircase on the lattice {aᵢ}×{bⱼ}: heights[t] is
/// the ordinate index over (a_t, a_{t+1}), nonincreasing, 0 meaning empty.
#[derive(Debug, Clone)]
struct Staircase {
    heights: Vec<usize>,
    corners: Vec<(usize, usize)>,
}

impl Staircase {
    fn from_corners(corners: Vec<(usize, usize)>, n: usize) -> Self {
        let mut heights = vec![0; n - 1];
        let mut start = 0;
        for &(i, j) in &corners {
            for h in heights.iter_mut().take(i).skip(start) {
                *h = j;
            }
            start = i;
        }
        Staircase { heights, corners }
    }

    fn vertices(&self, s: &StairPolygon) -> Vec<Point2> {
        let (a, b) = (&s.a, &s.b);
        let mut v = vec![[a[0], b[0]]];
        let mut x = a[0];
        for &(i, j) in &self.corners {
            v.push([x, b[j]]);
            v.push([a[i], b[j]]);
            x = a[i];
        }
        v.push([x, b[0]]);
        v
    }

    fn contains(&self, other: &Staircase) -> bool {
        self.heights.iter().zip(&other.heights).all(|(a, b)| a >= b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every anchored lattice staircase whose vertex bolt lies in S, kept when no
/// strictly larger candidate has a bolt at most as long. Any polygon with
/// vertices in S sits inside the anchored staircase spanned by its
/// upper-right corners, which has no more vertices, so these are all the
/// e-bolts.
fn stair_ebolts(s: &StairPolygon) -> Result<Vec<NamedBolt>> {
    let n = s.steps();
    if n > MAX_STAIR_STEPS {
        return Err(Error::Budget(format!("e-bolt enumeration is capped at N = {MAX_STAIR_STEPS} steps, got {n}")));
    }
    let poly = AxisPolygon::Stairs(s.clone());
    let mut cands: Vec<Staircase> = Vec::new();
    for k in 1..n {
        for xi in subsets(n - 1, k) {
            for yi in subsets(n - 1, k) {
                let corners: Vec<(usize, usize)> = xi.iter().zip(yi.iter().rev()).map(|(&i, &j)| (i + 1, j + 1)).collect();
                let st = Staircase::from_corners(corners, n);
                if st.vertices(s).iter().all(|&p| poly.contains(p)) {
                    cands.push(st);
                }
            }
        }
    }
    let maximal: Vec<&Staircase> = cands
        .iter()
        .filter(|f| {
            !cands.iter().any(|g| g.heights != f.heights && g.contains(f) && g.corners.len() <= f.corners.len())
        })
        .collect();
    Ok(maximal
        .into_iter()
        .map(|st| {
            let name = st.corners.iter().map(|(i, j)| format!("a{}b{}", i + 1, j + 1)).collect::<Vec<_>>().join("-");
            NamedBolt { name, bolt: ClosedBolt { points: st.vertices(s) } }
        })
        .collect())
}

/// Grid nodes on [lo, hi] together with the exact `extra` values.
fn axis_nodes(lo: f64, hi: f64, n: usize, extra: &[f64]) -> Vec<f64> {
    let n = n.max(1);
    let mut v: Vec<(f64, bool)> = (1..n).map(|i| (lo + (hi - lo) * i as f64 / n as f64, false)).collect();
    v.extend(extra.iter().filter(|&&e| lo <= e && e <= hi).map(|&e| (e, true)));
    v.extend([(lo, true), (hi, true)]);
    v.sort_by(|p, q| p.0.total_cmp(&q.0));
    let tol = 1e-12 * (hi - lo);
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(v.len());
    for p in v {
        match out.last_mut() {
            Some(last) if p.0 - last.0 <= tol => {
                if p.1 && !last.1 {
                    *last = p;
                }
            }
            _ => out.push(p),
        }
    }
    out.into_iter().map(|p| p.0).collect()
}

/// f on a tensor grid, NaN outside the region.
struct Samples {
    xs: Vec<f64>,
    ys: Vec<f64>,
    v: Vec<Vec<f64>>,
    cell_in: Vec<Vec<bool>>,
}

impl Samples {
    fn new(f: &dyn Field, xs: Vec<f64>, ys: Vec<f64>, inside: impl Fn(Point2) -> bool) -> Result<Self> {
        let mut v = vec![vec![f64::NAN; ys.len()]; xs.len()];
        for (i, &x) in xs.iter().enumerate() {
            for (k, &y) in ys.iter().enumerate() {
                if inside([x, y]) {
                    v[i][k] = eval(f, [x, y])?;
                }
            }
        }
        let cell_in = (0..xs.len() - 1)
            .map(|i| {
                (0..ys.len() - 1)
                    .map(|k| inside([(xs[i] + xs[i + 1]) / 2.0, (ys[k] + ys[k + 1]) / 2.0]))
                    .collect()
            })
            .collect();
        Ok(Samples { xs, ys, v, cell_in })
    }

    fn l(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        0.25 * (self.v[i][k] + self.v[j][l] - self.v[i][l] - self.v[j][k])
    }

    /// Comparison tolerance for rectangle functionals: 1e-10 · max(1, max|f|).
    fn tolerance(&self) -> f64 {
        let m = self.v.iter().flatten().filter(|v| v.is_finite()).fold(1.0f64, |m, v| m.max(v.abs()));
        1e-10 * m
    }

    /// Visits every grid rectangle [xᵢ,xⱼ]×[y_k,y_l] made of inside cells.
    fn for_each_rect(&self, mut visit: impl FnMut(usize, usize, usize, usize)) {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        for i in 0..nx - 1 {
            let mut row_ok = vec![true; ny - 1];
            for j in i + 1..nx {
                for (k, ok) in row_ok.iter_mut().enumerate() {
                    *ok &= self.cell_in[j - 1][k];
                }
                for k in 0..ny - 1 {
                    for l in k + 1..ny {
                        if !row_ok[l - 1] {
                            break;
                        }
                        visit(i, j, k, l);
                    }
                }
            }
        }
    }
}

fn polygon_samples(f: &dyn Field, poly: &AxisPolygon, grid_n: usize) -> Result<Samples> {
    let (bx, by) = poly.breakpoints();
    let bb = poly.bounding_box();
    let xs = axis_nodes(bb.x.0, bb.x.1, grid_n, &bx);
    let ys = axis_nodes(bb.y.0, bb.y.1, grid_n, &by);
    Samples::new(f, xs, ys, |p| poly.contains(p))
}

/// Grid certificate for f ∈ M or −f ∈ M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub pass: bool,
    /// +1 if f ∈ M, −1 if only −f ∈ M.
    pub sign: f64,
    pub min_l: f64,
    pub max_l: f64,
    pub tolerance: f64,
}

/// Checks L(f,S) over every grid rectangle S inside the polygon.
pub fn m_check(f: &dyn Field, poly: &AxisPolygon, grid_n: usize) -> Result<Membership> {
    check_dim(f)?;
    let s = polygon_samples(f, poly, grid_n)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    s.for_each_rect(|i, j, k, l| {
        let v = s.l(i, j, k, l);
        lo = lo.min(v);
        hi = hi.max(v);
    });
    let tol = s.tolerance();
    let (pass, sign) = if lo >= -tol {
        (true, 1.0)
    } else if hi <= tol {
        (true, -1.0)
    } else {
        (false, 1.0)
    };
    Ok(Membership { pass, sign, min_l: lo, max_l: hi, tolerance: tol })
}

/// Discrete minimax error over the grid nodes inside the polygon.
pub fn grid_lp_error(f: &dyn Field, poly: &AxisPolygon, grid_n: usize) -> Result<f64> {
    check_dim(f)?;
    let (bx, by) = poly.breakpoints();
    let bb = poly.bounding_box();
    let xs = axis_nodes(bb.x.0, bb.x.1, grid_n, &bx);
    let ys = axis_nodes(bb.y.0, bb.y.1, grid_n, &by);
    let mut pts = Vec::new();
    for &x in &xs {
        for &y in &ys {
            if poly.contains([x, y]) {
                pts.push(vec![from_f64_exact(x)?, from_f64_exact(y)?]);
            }
        }
    }
    let grid = PointConfig::new(2, pts)?;
    grid_minimax_oracle(f, &DirectionSet::coordinate(2), &grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoltReport {
    /// The bolt maximum on M, the grid LP value otherwise.
    pub error: f64,
    /// max |l(f,p)| over the e-bolts; always a lower bound on the error.
    pub bolt_max: f64,
    pub argmax: NamedBolt,
    /// Signed l(f,p) for each e-bolt, in enumeration order.
    pub values: Vec<(String, f64)>,
    pub membership: Membership,
    pub lp_error: Option<f64>,
    pub warning: Option<String>,
}

/// Error of best approximation by φ(x) + ψ(y) on an axis polygon.
pub fn polygon_error(f: &dyn Field, poly: &AxisPolygon, grid_n: usize) -> Result<BoltReport> {
    check_dim(f)?;
    let membership = m_check(f, poly, grid_n)?;
    let bolts = poly.ebolts()?;
    let values: Vec<(String, f64)> = bolts.iter().map(|b| (b.name.clone(), b.bolt.functional(f))).collect();
    let best = (0..values.len()).fold(0, |m, i| if values[i].1.abs() > values[m].1.abs() { i } else { m });
    let bolt_max = values[best].1.abs();
    if !bolt_max.is_finite() {
        return Err(Error::Evaluation(bolts[best].bolt.points()[0].to_vec()));
    }
    let (error, lp_error, warning) = if membership.pass {
        (bolt_max, None, None)
    } else {
        let lp = grid_lp_error(f, poly, grid_n)?;
        let msg = format!(
            "f is not in M on the {grid_n}-grid (rectangle functionals range over [{:.3e}, {:.3e}]); error taken from the grid LP",
            membership.min_l, membership.max_l
        );
        (lp, Some(lp), Some(msg))
    };
    Ok(BoltReport { error, bolt_max, argmax: bolts[best].clone(), values, membership, lp_error, warning })
}

pub fn hexagon_error(f: &dyn Field, h: &Hexagon) -> Result<BoltReport> {
    polygon_error(f, &AxisPolygon::Hexagon(*h), CHECK_GRID)
}

pub fn octagon_error(f: &dyn Field, q: &Octagon, variant: OctagonVariant) -> Result<BoltReport> {
    polygon_error(f, &AxisPolygon::Octagon(*q, variant), CHECK_GRID)
}

pub fn stairlike_error(f: &dyn Field, s: &StairPolygon) -> Result<BoltReport> {
    polygon_error(f, &AxisPolygon::Stairs(s.clone()), CHECK_GRID)
}

/// Drops successive coincident pairs until none is left. Points carry their
/// sign through their parity, so a pair straddling the wrap-around is
/// followed by a rotation that puts a positive point first again.
fn prune(mut pts: Vec<Point2>) -> Vec<Point2> {
    'again: loop {
        let n = pts.len();
        if n < 2 {
            return Vec::new();
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if pts[i] == pts[j] {
                if j == 0 {
                    pts.pop();
                    pts.remove(0);
                    pts.rotate_right(1);
                } else {
                    pts.drain(i..=j);
                }
                continue 'again;
            }
        }
        return pts;
    }
}

/// One pass of the maximization process over closed bolts of a hexagon.
///
/// Vertical segments are pushed to the lines x = a₁, a₂, a₃ and then
/// horizontal ones to y = b₁, b₂, b₃, each in the direction that cannot
/// decrease the signed sum when f ∈ M(H); coincident neighbours are pruned
/// after each step. The input is first oriented so that l(f,p) ≥ 0.
pub fn maximize_bolt(f: &dyn Field, h: &Hexagon, p: &ClosedBolt) -> Result<ClosedBolt> {
    check_dim(f)?;
    if let Some(q) = p.points().iter().find(|&&q| !h.contains(q)) {
        return Err(Error::Invalid(format!("bolt point ({}, {}) lies outside the hexagon", q[0], q[1])));
    }
    let [a1, a2, a3] = h.a;
    let [b1, b2, b3] = h.b;
    let mut pts = if p.functional(f) < 0.0 { p.rotated().points } else { p.points.clone() };

    let n = pts.len();
    let mut q = pts.clone();
    for i in 0..n {
        let j = (i + 1) % n;
        if unit(pts[i], pts[j]) != Some(Unit::Vertical) {
            continue;
        }
        let positive_below = (i % 2 == 0) == (pts[j][1] > pts[i][1]);
        let x = if positive_below {
            a1
        } else if pts[i][1].max(pts[j][1]) > b2 {
            a2
        } else {
            a3
        };
        q[i][0] = x;
        q[j][0] = x;
    }
    pts = prune(q);

    let n = pts.len();
    let mut q = pts.clone();
    for i in 0..n {
        let j = (i + 1) % n;
        if unit(pts[i], pts[j]) != Some(Unit::Horizontal) {
            continue;
        }
        let positive_left = (i % 2 == 0) == (pts[j][0] > pts[i][0]);
        let y = if positive_left {
            b1
        } else if pts[i][0].max(pts[j][0]) == a3 {
            b2
        } else {
            b3
        };
        q[i][1] = y;
        q[j][1] = y;
    }
    let pts = prune(q);
    if pts.is_empty() {
        Ok(ClosedBolt { points: pts })
    } else {
        ClosedBolt::new(pts)
    }
}

/// ∂²f/∂x∂y by a central stencil kept inside `cell`.
fn mixed_partial(f: &dyn Field, p: Point2, cell: &AxisRect) -> f64 {
    let hx = 1e-4 * (cell.x.1 - cell.x.0);
    let hy = 1e-4 * (cell.y.1 - cell.y.0);
    let x = p[0].clamp(cell.x.0 + hx, cell.x.1 - hx);
    let y = p[1].clamp(cell.y.0 + hy, cell.y.1 - hy);
    (f.eval(&[x + hx, y + hy]) - f.eval(&[x + hx, y - hy]) - f.eval(&[x - hx, y + hy]) + f.eval(&[x - hx, y - hy]))
        / (4.0 * hx * hy)
}

fn partial_y(f: &dyn Field, x: f64, y: f64, r: &AxisRect) -> f64 {
    let h = 1e-4 * (r.y.1 - r.y.0);
    let y = y.clamp(r.y.0 + h, r.y.1 - h);
    (f.eval(&[x, y + h]) - f.eval(&[x, y - h])) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    /// L ≥ 0 left of c, L ≤ 0 right of c.
    V,
    /// L ≤ 0 left of c, L ≥ 0 right of c.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassVerdict {
    pub pass: bool,
    /// Smallest signed margin for each of the three sign conditions; a
    /// condition holds when its margin is ≥ −tolerance.
    pub margins: [f64; 3],
    pub tolerance: f64,
}

fn check_c(r: &AxisRect, c: f64, kind: ClassKind) -> Result<()> {
    let ok = match kind {
        ClassKind::V => r.x.0 < c && c <= r.x.1,
        ClassKind::U => r.x.0 <= c && c < r.x.1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("c = {c} is outside the admissible range of [{}, {}]", r.x.0, r.x.1)))
    }
}

/// Sign conditions of V_c(R) or U_c(R) on every grid sub-rectangle: the
/// parts left and right of c, and full-width strips [a₁,b₁]×[y₁,y₂].
pub fn class_check(f: &dyn Field, r: &AxisRect, c: f64, kind: ClassKind, grid_n: usize) -> Result<ClassVerdict> {
    check_dim(f)?;
    check_c(r, c, kind)?;
    let xs = axis_nodes(r.x.0, r.x.1, grid_n, &[c]);
    let ys = axis_nodes(r.y.0, r.y.1, grid_n, &[]);
    let ic = xs.iter().position(|&x| x == c).expect("c is a node");
    let last = xs.len() - 1;
    let s = Samples::new(f, xs, ys, |p| r.contains(p))?;
    let left = if kind == ClassKind::V { 1.0 } else { -1.0 };
    let mut margins = [f64::INFINITY; 3];
    s.for_each_rect(|i, j, k, l| {
        let v = s.l(i, j, k, l);
        if j <= ic {
            margins[0] = margins[0].min(left * v);
        }
        if i >= ic {
            margins[1] = margins[1].min(-left * v);
        }
        if i == 0 && j == last {
            margins[2] = margins[2].min(v);
        }
    });
    let tol = s.tolerance();
    Ok(ClassVerdict { pass: margins.iter().all(|&m| m >= -tol), margins, tolerance: tol })
}

/// The derivative form of the class conditions: the sign of ∂²f/∂x∂y on
/// each side of c and ∂f/∂y(a₁,y) ≤ ∂f/∂y(b₁,y), by finite differences at
/// grid nodes. Sufficient for membership, not necessary.
pub fn lemma_check(f: &dyn Field, r: &AxisRect, c: f64, kind: ClassKind, grid_n: usize) -> Result<bool> {
    check_dim(f)?;
    check_c(r, c, kind)?;
    let xs = axis_nodes(r.x.0, r.x.1, grid_n, &[c]);
    let ys = axis_nodes(r.y.0, r.y.1, grid_n, &[]);
    let left = if kind == ClassKind::V { 1.0 } else { -1.0 };
    let mut d = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let cell = if x <= c {
                AxisRect { x: (r.x.0, c), y: r.y }
            } else {
                AxisRect { x: (c, r.x.1), y: r.y }
            };
            let m = mixed_partial(f, [x, y], &cell);
            d.push((x, m));
        }
    }
    let scale = d.iter().fold(1.0f64, |s, (_, m)| s.max(m.abs()));
    let tol = 1e-6 * scale;
    let mixed_ok = d.iter().all(|&(x, m)| {
        let sgn = if x < c { left } else if x > c { -left } else { 0.0 };
        sgn == 0.0 || sgn * m >= -tol
    });
    let strip_ok = ys.iter().all(|&y| partial_y(f, r.x.0, y, r) <= partial_y(f, r.x.1, y, r) + tol);
    Ok(mixed_ok && strip_ok)
}

/// Extremal sum φ₀(x) + ψ₀(y) for a function of V_c(R) or U_c(R).
#[derive(Debug, Clone)]
pub struct ClassBest {
    pub rect: AxisRect,
    pub c: f64,
    pub kind: ClassKind,
    pub error: f64,
    pub y0: f64,
    f: ScalarField,
}

impl ClassBest {
    /// The side rectangle [lo, hi] in x whose functional is the error.
    fn side(&self) -> (f64, f64) {
        match self.kind {
            ClassKind::V => (self.rect.x.0, self.c),
            ClassKind::U => (self.c, self.rect.x.1),
        }
    }

    /// φ₀(x) = f(x, y₀).
    pub fn phi0(&self, x: f64) -> f64 {
        self.f.eval(&[x, self.y0])
    }

    /// ψ₀(y) = ½[f(lo,y) + f(hi,y) − f(lo,y₀) − f(hi,y₀)].
    pub fn psi0(&self, y: f64) -> f64 {
        let (lo, hi) = self.side();
        0.5 * (self.f.eval(&[lo, y]) + self.f.eval(&[hi, y]) - self.f.eval(&[lo, self.y0]) - self.f.eval(&[hi, self.y0]))
    }

    pub fn residual(&self, p: Point2) -> f64 {
        self.f.eval(&p) - self.phi0(p[0]) - self.psi0(p[1])
    }

    pub fn phi_table(&self, n: usize) -> Result<UnivariateTable<f64>> {
        UnivariateTable::sample(self.rect.x.0, self.rect.x.1, n, Interp::Linear, |x| self.phi0(x))
    }

    pub fn psi_table(&self, n: usize) -> Result<UnivariateTable<f64>> {
        UnivariateTable::sample(self.rect.y.0, self.rect.y.1, n, Interp::Linear, |y| self.psi0(y))
    }
}

impl Field for ClassBest {
    fn dim(&self) -> usize {
        2
    }

    /// φ₀(x) + ψ₀(y).
    fn eval(&self, x: &[f64]) -> f64 {
        self.phi0(x[0]) + self.psi0(x[1])
    }
}

/// Error and extremal sum for f ∈ V_c(R) (kind V) or U_c(R) (kind U).
///
/// The error is L(f,·) of the rectangle on the c-side that carries the
/// positive sign; y₀ solves L(f,Y) = ½L(f,side) with Y the part of that side
/// below y, whose left member increases in y. Bisection takes the smallest
/// root. The same error holds on any compact Q ⊂ R containing the four
/// corners of the side rectangle.
pub fn class_best(f: &ScalarField, r: &AxisRect, c: f64, kind: ClassKind) -> Result<ClassBest> {
    let verdict = class_check(f, r, c, kind, CHECK_GRID)?;
    if !verdict.pass {
        let which = if kind == ClassKind::V { "V" } else { "U" };
        return Err(Error::Hypothesis(format!(
            "f is not in {which}_c(R) on the grid (margins {:.3e}, {:.3e}, {:.3e})",
            verdict.margins[0], verdict.margins[1], verdict.margins[2]
        )));
    }
    let mut best = ClassBest { rect: *r, c, kind, error: 0.0, y0: r.y.0, f: f.clone() };
    let (lo, hi) = best.side();
    let g = |y: f64| -> Result<f64> {
        Ok(eval(f, [lo, r.y.0])? + eval(f, [hi, y])? - eval(f, [lo, y])? - eval(f, [hi, r.y.0])?)
    };
    let top = g(r.y.1)?;
    best.error = top / 4.0;
    let target = top / 2.0;
    let (mut a, mut b) = (r.y.0, r.y.1);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if g(mid)? >= target {
            b = mid;
        } else {
            a = mid;
        }
    }
    best.y0 = b;
    Ok(best)
}

pub fn vc_best(f: &ScalarField, r: &AxisRect, c: f64) -> Result<ClassBest> {
    class_best(f, r, c, ClassKind::V)
}

pub fn uc_best(f: &ScalarField, r: &AxisRect, c: f64) -> Result<ClassBest> {
    class_best(f, r, c, ClassKind::U)
}

/// Two-sided estimate for f with a continuous mixed derivative on H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpBounds {
    /// A = max |l(f,·)| over h, r₁, r₂.
    pub lower: f64,
    /// B·C + (3/2)(B|l(g,h)| − |l(f,h)|) with g = xy.
    pub upper: f64,
    /// max |∂²f/∂x∂y| over the grid.
    pub b: f64,
    /// max |l(g,·)| over h, r₁, r₂.
    pub c: f64,
    pub l_f_h: f64,
    pub l_g_h: f64,
}

pub fn sharp_bounds(f: &dyn Field, h: &Hexagon, grid_n: usize) -> Result<SharpBounds> {
    check_dim(f)?;
    let poly = AxisPolygon::Hexagon(*h);
    let bolts = poly.ebolts()?;
    let g = crate::expr::FnField::new(2, |p: &[f64]| p[0] * p[1]);
    let lf: Vec<f64> = bolts.iter().map(|b| b.bolt.functional(f)).collect();
    let lg: Vec<f64> = bolts.iter().map(|b| b.bolt.functional(&g)).collect();
    let (bx, by) = poly.breakpoints();
    let bb = poly.bounding_box();
    let rects = poly.rects();
    let mut bmax = 0.0f64;
    for x in axis_nodes(bb.x.0, bb.x.1, grid_n, &bx) {
        for y in axis_nodes(bb.y.0, bb.y.1, grid_n, &by) {
            if let Some(cell) = rects.iter().find(|r| r.contains([x, y])) {
                let m = mixed_partial(f, [x, y], cell);
                if !m.is_finite() {
                    return Err(Error::Evaluation(vec![x, y]));
                }
                bmax = bmax.max(m.abs());
            }
        }
    }
    let lower = lf.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c = lg.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let upper = bmax * c + 1.5 * (bmax * lg[0].abs() - lf[0].abs());
    Ok(SharpBounds { lower, upper, b: bmax, c, l_f_h: lf[0], l_g_h: lg[0] })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GolombBound {
    /// sup |Σλⱼf(xⱼ)| / Σ|λⱼ| over the minimal projection cycles found.
    pub value: f64,
    #[serde(skip)]
    pub cycle: Option<CycleCertificate>,
    pub cycles_examined: usize,
    /// False when the cycle search ran out of budget.
    pub complete: bool,
}

/// Lower bound on the error of approximation by Σ gᵢ(xᵢ) over a finite grid,
/// from the minimal projection cycles (coordinate projections) with at most
/// `cap` points.
pub fn golomb_lower_bound(f: &dyn Field, grid: &PointConfig, cap: usize) -> Result<GolombBound> {
    if f.dim() != grid.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: grid.dim() });
    }
    let found = minimal_cycles(grid, &Projection::coordinates(grid.dim()), cap)?;
    let mut value = 0.0;
    let mut cycle = None;
    for c in &found.cycles {
        let v = cycle_functional(c, grid, f).abs();
        if !v.is_finite() {
            return Err(Error::Evaluation(grid.point_f64(c.support[0])));
        }
        if v > value {
            value = v;
            cycle = Some(c.clone());
        }
    }
    Ok(GolombBound { value, cycle, cycles_examined: found.cycles.len(), complete: found.complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(s: &str) -> ScalarField {
        parse_expression(s, 2).unwrap()
    }

    fn hex012() -> Hexagon {
        Hexagon::new([0.0, 1.0, 2.0], [0.0, 1.0, 2.0]).unwrap()
    }

    fn random_bolt(rng: &mut ChaCha8Rng, h: &Hexagon, n: usize) -> ClosedBolt {
        loop {
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(h.a[0]..h.a[2])).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.random_range(h.b[0]..h.b[2])).collect();
            if let Ok(b) = ClosedBolt::from_coords(&xs, &ys) {
                if b.points().iter().all(|&p| h.contains(p)) {
                    return b;
                }
            }
        }
    }

    #[test]
    fn functionals() {
        let unit = AxisRect::unit();
        assert!((rect_functional(&field("x1*x2"), &unit) - 0.25).abs() < 1e-15);
        let ridge = field("exp(x1) + sin(3*x2)");
        assert!(rect_functional(&ridge, &unit).abs() < 1e-15);
        let half = AxisRect::new((0.0, 0.5), (0.0, 1.0)).unwrap();
        assert!((rect_functional(&field("x2*sin(3.141592653589793*x1)"), &half) - 0.25).abs() < 1e-15);
        let b = ClosedBolt::from_coords(&[0.1, 0.7, 0.4], &[0.2, 0.9, 0.5]).unwrap();
        assert_eq!(b.len(), 6);
        assert!(b.functional(&ridge).abs() < 1e-15);
        assert!((b.functional(&field("x1*x2")) + b.rotated().functional(&field("x1*x2"))).abs() < 1e-15);
    }

    #[test]
    fn bolt_validation() {
        assert!(ClosedBolt::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).is_err());
        assert!(ClosedBolt::new(vec![[0.0, 0.0], [0.0, 1.0], [0.0, 2.0], [1.0, 0.0]]).is_err());
        assert!(ClosedBolt::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(ClosedBolt::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_ok());
        assert!(Hexagon::new([0.0, 2.0, 1.0], [0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn class_membership() {
        let k = AxisRect::unit();
        let v = class_check(&field("x2*sin(3.141592653589793*x1)"), &k, 0.5, ClassKind::V, 32).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(lemma_check(&field("x2*sin(3.141592653589793*x1)"), &k, 0.5, ClassKind::V, 16).unwrap());
        let u = field("(x1 - 0.5)^2*x2");
        assert!(class_check(&u, &k, 0.5, ClassKind::U, 32).unwrap().pass);
        assert!(lemma_check(&u, &k, 0.5, ClassKind::U, 16).unwrap());
        assert!(!class_check(&u, &k, 0.5, ClassKind::V, 32).unwrap().pass);
        assert!(class_check(&field("x1*x2"), &k, 1.0, ClassKind::V, 32).unwrap().pass);
        assert!(class_check(&field("x1*x2"), &k, 0.0, ClassKind::V, 8).is_err());
    }

    #[test]
    fn extremal_sums_on_classes() {
        let k = AxisRect::unit();
        let f = field("x2*sin(3.141592653589793*x1)");
        let best = vc_best(&f, &k, 0.5).unwrap();
        assert!((best.error - 0.25).abs() < 1e-12);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let want = 0.5 * (std::f64::consts::PI * t).sin() + 0.5 * t - 0.25;
            assert!((best.phi0(t) + best.psi0(t) - want).abs() < 1e-12);
        }
        let u = field("(x1 - 0.5)^2*x2");
        let best = uc_best(&u, &k, 0.5).unwrap();
        assert!((best.error - 1.0 / 16.0).abs() < 1e-12);
        assert!((best.eval(&[0.2, 0.7]) - (0.5 * 0.09 + 0.7 / 8.0 - 1.0 / 16.0)).abs() < 1e-12);
        assert!(vc_best(&u, &k, 0.5).is_err());
    }

    #[test]
    fn residual_norm_matches_error() {
        let k = AxisRect::unit();
        for (s, c, kind) in [
            ("x2*sin(3.141592653589793*x1)", 0.5, ClassKind::V),
            ("(x1 - 0.5)^2*x2", 0.5, ClassKind::U),
            ("exp(x1*x2)", 1.0, ClassKind::V),
        ] {
            let best = class_best(&field(s), &k, c, kind).unwrap();
            let mut norm = 0.0f64;
            for i in 0..=200 {
                for j in 0..=200 {
                    norm = norm.max(best.residual([i as f64 / 200.0, j as f64 / 200.0]).abs());
                }
            }
            assert!((norm - best.error).abs() < 1e-9, "{s}: {norm} vs {}", best.error);
        }
    }

    #[test]
    fn error_on_subdomain_with_side_corners() {
        // Q = {0 ≤ x ≤ 2, 0 ≤ y ≤ (x−1)² + 1} holds the corners of [0,2]².
        let r = AxisRect::new((0.0, 4.0), (0.0, 2.0)).unwrap();
        for (n, m) in [(1, 1), (2, 1), (1, 2)] {
            let f = field(&format!("-(x1 - 2)^{}*x2^{}", 2 * n, m));
            let best = vc_best(&f, &r, 2.0).unwrap();
            let want = 2f64.powi(2 * (n - 1) + m);
            assert!((best.error - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn hexagon_formula() {
        let h = hex012();
        let rep = hexagon_error(&field("x1*x2"), &h).unwrap();
        assert!(rep.membership.pass);
        for (_, v) in &rep.values {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert!((rep.error - 0.5).abs() < 1e-15);
        let lp = grid_lp_error(&field("x1*x2"), &AxisPolygon::Hexagon(h), 8).unwrap();
        assert!((lp - 0.5).abs() < 1e-7);
        assert!(hexagon_error(&field("exp(x1) - x2^3"), &h).unwrap().error < 1e-14);
        assert!((hexagon_error(&field("x1*x2 + x1"), &h).unwrap().error - 0.5).abs() < 1e-14);
        // −f ∈ M gives the same error.
        assert!((hexagon_error(&field("-x1*x2"), &h).unwrap().error - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hexagon_matches_lp_on_skewed_function() {
        let h = Hexagon::new([0.0, 0.6, 1.5], [0.0, 0.8, 1.3]).unwrap();
        let f = field("exp(x1*x2) + x1^2");
        let rep = hexagon_error(&f, &h).unwrap();
        assert!(rep.membership.pass);
        let lp = grid_lp_error(&f, &AxisPolygon::Hexagon(h), 16).unwrap();
        assert!(lp <= rep.error + 1e-9 && rep.error - lp < 5e-3, "{lp} vs {}", rep.error);
    }

    #[test]
    fn outside_m_falls_back_to_lp() {
        let rep = hexagon_error(&field("sin(3*x1*x2)"), &hex012()).unwrap();
        assert!(!rep.membership.pass);
        assert!(rep.warning.is_some());
        assert_eq!(rep.lp_error, Some(rep.error));
        assert!(rep.bolt_max <= rep.error + 1e-9);
    }

    #[test]
    fn stair_ebolts() {
        let s3 = StairPolygon::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]).unwrap();
        let f = field("x1*x2 + exp(x1 + x2)");
        let a = stairlike_error(&f, &s3).unwrap();
        let b = hexagon_error(&f, &hex012()).unwrap();
        assert!((a.error - b.error).abs() < 1e-14);
        for n in 2..=7usize {
            let pts: Vec<f64> = (0..n).map(|i| i as f64).collect();
            let s = StairPolygon::new(pts.clone(), pts).unwrap();
            let got = AxisPolygon::Stairs(s).ebolts().unwrap().len();
            assert_eq!(got, (1 << (n - 1)) - 1, "N = {n}");
        }
        let big = StairPolygon::new((0..9).map(f64::from).collect(), (0..9).map(f64::from).collect()).unwrap();
        assert!(AxisPolygon::Stairs(big).ebolts().is_err());
    }

    #[test]
    fn stairs_match_lp() {
        let s = StairPolygon::new(vec![0.0, 0.5, 1.2, 2.0], vec![0.0, 0.4, 1.0, 1.8]).unwrap();
        let f = field("x1*x2 + 0.3*x1^2*x2");
        let rep = stairlike_error(&f, &s).unwrap();
        assert!(rep.membership.pass);
        let lp = grid_lp_error(&f, &AxisPolygon::Stairs(s), 24).unwrap();
        assert!((rep.error - lp).abs() < 5e-3 && lp <= rep.error + 1e-9, "{lp} vs {}", rep.error);
    }

    #[test]
    fn octagons_match_lp() {
        let q = Octagon::new([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0]).unwrap();
        let f = field("x1*x2");
        for variant in [OctagonVariant::A, OctagonVariant::B] {
            let rep = octagon_error(&f, &q, variant).unwrap();
            assert!(rep.membership.pass);
            let lp = grid_lp_error(&f, &AxisPolygon::Octagon(q, variant), 12).unwrap();
            assert!((rep.error - lp).abs() < 5e-3, "{variant:?}: {} vs {lp}", rep.error);
        }
    }

    #[test]
    fn maximization_process() {
        let h = Hexagon::new([0.0, 0.7, 1.6], [0.0, 0.5, 1.4]).unwrap();
        let f = field("x1*x2 + 0.2*exp(x1)*x2^2");
        assert!(hexagon_error(&f, &h).unwrap().membership.pass);
        let r1 = h.r1().corner_bolt();
        assert_eq!(maximize_bolt(&f, &h, &r1).unwrap(), r1);
        let lattice: Vec<Point2> = (0..3)
            .flat_map(|i| (0..3).filter(move |j| i + j <= 3).map(move |j| [h.a[i], h.b[j]]))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [2, 3, 4, 5] {
            for _ in 0..40 {
                let p = random_bolt(&mut rng, &h, n);
                let before = p.functional(&f).abs();
                let q = maximize_bolt(&f, &h, &p).unwrap();
                assert!(q.functional(&f) >= before - 1e-12);
                assert!(q.len() <= p.len());
                assert!(q.points().iter().all(|pt| lattice.contains(pt)), "{q:?}");
            }
        }
    }

    #[test]
    fn pruning_shortens() {
        // Two positive points at the bottom of vertical segments on the left
        // edge collapse onto x = a₁ and cancel their neighbours.
        let h = hex012();
        let f = field("x1*x2");
        let p = ClosedBolt::new(vec![[0.0, 0.0], [0.0, 0.5], [0.5, 0.5], [0.5, 0.0]]).unwrap();
        let q = maximize_bolt(&f, &h, &p).unwrap();
        assert!(q.len() <= p.len());
        let p = ClosedBolt::from_coords(&[0.2, 0.4, 0.6], &[0.1, 0.3, 0.5]).unwrap();
        let q = maximize_bolt(&f, &h, &p).unwrap();
        assert!(q.len() < p.len(), "{q:?}");
    }

    #[test]
    fn bolt_supremum() {
        let h = hex012();
        let f = field("x1*x2 + x1^3*x2/4");
        let e = hexagon_error(&f, &h).unwrap().error;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..200 {
            let p = random_bolt(&mut rng, &h, 2 + i % 4);
            assert!(p.functional(&f).abs() <= e + 1e-12);
        }
    }

    #[test]
    fn sharp_estimates() {
        let h = hex012();
        let b = sharp_bounds(&field("x1*x2"), &h, 16).unwrap();
        assert!((b.lower - 0.5).abs() < 1e-12 && (b.upper - 0.5).abs() < 1e-6, "{b:?}");
        let f = field("x1*x2 + x1^2*x2");
        let b = sharp_bounds(&f, &h, 16).unwrap();
        assert!((b.lower - hexagon_error(&f, &h).unwrap().error).abs() < 1e-15);
        let f = field("x1*x2 + 0.1*sin(x1)");
        let b = sharp_bounds(&f, &h, 16).unwrap();
        let lp = grid_lp_error(&f, &AxisPolygon::Hexagon(h), 12).unwrap();
        assert!(b.lower <= lp + 1e-9 && lp <= b.upper + 1e-9);
        let f = field("sin(x1*x2)");
        let b = sharp_bounds(&f, &h, 16).unwrap();
        let lp = grid_lp_error(&f, &AxisPolygon::Hexagon(h), 12).unwrap();
        assert!(b.lower <= lp + 1e-9 && lp <= b.upper + 1e-9, "{b:?} {lp}");
    }

    #[test]
    fn golomb_bound() {
        let axis: Vec<crate::Rational> = (0..5).map(|i| crate::Rational::new(i.into(), 4.into())).collect();
        let grid = PointConfig::tensor_grid(&[axis.clone(), axis]).unwrap();
        let f = field("x1*x2");
        let g = golomb_lower_bound(&f, &grid, 8).unwrap();
        assert!(g.value >= 0.25 - 1e-9);
        let oracle = grid_minimax_oracle(&f, &DirectionSet::coordinate(2), &grid).unwrap();
        assert!(g.value <= oracle + 1e-9);
        assert!(golomb_lower_bound(&field("x1^2 + cos(x2)"), &grid, 8).unwrap().value < 1e-12);
    }
}
