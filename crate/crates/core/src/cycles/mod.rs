//! Fibers, cycles and their certificates on finite point sets.
//!
//! A cycle with respect to h₁..h_r is a nonzero weight vector λ on the points
//! whose sum vanishes on every level set of every hᵢ. Cycles are exactly the
//! nonzero vectors in the nullspace of the fiber incidence matrix, and a set
//! is interpolating for sums Σgᵢ(hᵢ(x)) iff that nullspace is trivial.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expr::Field;
use crate::geometry::{dot, DirectionSet, PointConfig};
use crate::rational::Rational;

pub mod linalg;
mod paths;
mod representation;
mod tau;

pub use paths::{closed_path_search, orbits, Orbit, Path};
pub use representation::{solve_representation, Representation};
pub use tau::{tau_closure, TauTrace};

type ExactFn = dyn Fn(&[Rational]) -> Option<Rational> + Send + Sync;

/// One of the functions hᵢ: a linear form a·x or an arbitrary exact map.
#[derive(Clone)]
pub enum Projection {
    Linear(Vec<Rational>),
    /// Must return an exact rational; `None` is reported as an error.
    Function(Arc<ExactFn>),
}

impl Projection {
    pub fn function(f: impl Fn(&[Rational]) -> Option<Rational> + Send + Sync + 'static) -> Self {
        Projection::Function(Arc::new(f))
    }

    pub fn from_directions(dirs: &DirectionSet) -> Vec<Projection> {
        dirs.directions().iter().cloned().map(Projection::Linear).collect()
    }

    /// Coordinate projections x ↦ x_i, i = 0..dim.
    pub fn coordinates(dim: usize) -> Vec<Projection> {
        Self::from_directions(&DirectionSet::coordinate(dim))
    }

    fn apply(&self, x: &[Rational]) -> Option<Rational> {
        match self {
            Projection::Linear(a) => (a.len() == x.len()).then(|| dot(a, x)),
            Projection::Function(f) => f(x),
        }
    }
}

impl fmt::Debug for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projection::Linear(a) => f.debug_tuple("Linear").field(a).finish(),
            Projection::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Level-set partition of the point indices for each hᵢ.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMap {
    n_points: usize,
    /// `fibers[i][k]`: sorted point indices with the k-th smallest value of hᵢ.
    fibers: Vec<Vec<Vec<usize>>>,
    values: Vec<Vec<Rational>>,
    /// `of_point[i][j]`: fiber index of point j under hᵢ.
    of_point: Vec<Vec<usize>>,
}

impl FiberMap {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_functions(&self) -> usize {
        self.fibers.len()
    }

    pub fn fibers(&self, i: usize) -> &[Vec<usize>] {
        &self.fibers[i]
    }

    /// Exact value of hᵢ on its k-th fiber.
    pub fn value(&self, i: usize, k: usize) -> &Rational {
        &self.values[i][k]
    }

    pub fn fiber_of(&self, i: usize, point: usize) -> usize {
        self.of_point[i][point]
    }

    pub fn fiber_members(&self, i: usize, point: usize) -> &[usize] {
        &self.fibers[i][self.of_point[i][point]]
    }

    /// Rows = (i, fiber), columns = points; entry 1 on membership.
    pub fn incidence(&self) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for per_i in &self.fibers {
            for fiber in per_i {
                let mut row = vec![Rational::zero(); self.n_points];
                for &j in fiber {
                    row[j] = Rational::one();
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Incidence restricted to the columns in `subset`, dropping empty rows.
    fn incidence_on(&self, subset: &[usize]) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for i in 0..self.fibers.len() {
            let mut by_fiber: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (col, &p) in subset.iter().enumerate() {
                by_fiber.entry(self.of_point[i][p]).or_default().push(col);
            }
            for cols in by_fiber.values() {
                let mut row = vec![Rational::zero(); subset.len()];
                for &c in cols {
                    row[c] = Rational::one();
                }
                rows.push(row);
            }
        }
        rows
    }
}

pub fn fiberize(points: &PointConfig, h: &[Projection]) -> Result<FiberMap> {
    let n = points.len();
    let mut fibers = Vec::with_capacity(h.len());
    let mut values = Vec::with_capacity(h.len());
    let mut of_point = Vec::with_capacity(h.len());
    for (i, hi) in h.iter().enumerate() {
        let mut groups: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for j in 0..n {
            let v = hi.apply(points.point(j)).ok_or_else(|| {
                Error::Invalid(format!("function {i} has no exact rational value at point {j}"))
            })?;
            groups.entry(v).or_default().push(j);
        }
        let mut idx = vec![0; n];
        let mut fs = Vec::with_capacity(groups.len());
        let mut vs = Vec::with_capacity(groups.len());
        for (k, (v, members)) in groups.into_iter().enumerate() {
            for &j in &members {
                idx[j] = k;
            }
            fs.push(members);
            vs.push(v);
        }
        fibers.push(fs);
        values.push(vs);
        of_point.push(idx);
    }
    Ok(FiberMap { n_points: n, fibers, values, of_point })
}

/// Integer weights on a set of point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    /// Sorted point indices.
    pub support: Vec<usize>,
    /// Nonzero integer weights aligned with `support`; first weight positive.
    pub weights: Vec<BigInt>,
}

impl CycleCertificate {
    fn from_vector(v: &[Rational]) -> Self {
        let ints = linalg::primitive_integer(v);
        let (support, weights) = ints.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).unzip();
        CycleCertificate { support, weights }
    }

    /// Lifts a vector given on `subset` to global indices.
    fn from_subset(subset: &[usize], v: &[Rational]) -> Self {
        let local = Self::from_vector(v);
        CycleCertificate { support: local.support.iter().map(|&c| subset[c]).collect(), weights: local.weights }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Σ|λⱼ| over the support.
    pub fn l1(&self) -> BigInt {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// Dense weight vector of length `n`.
    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (&j, w) in self.support.iter().zip(&self.weights) {
            v[j] = Rational::from_integer(w.clone());
        }
        v
    }

    /// Exact check that every fiber sum vanishes.
    pub fn verify(&self, fibers: &FiberMap) -> bool {
        if self.weights.iter().any(Zero::is_zero) || self.support.is_empty() {
            return false;
        }
        for i in 0..fibers.n_functions() {
            let mut sums: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&j, w) in self.support.iter().zip(&self.weights) {
                *sums.entry(fibers.fiber_of(i, j)).or_insert_with(BigInt::zero) += w;
            }
            if sums.values().any(|s| !s.is_zero()) {
                return false;
            }
        }
        true
    }
}

/// G(f) = Σλⱼf(xⱼ) / Σ|λⱼ|.
pub fn cycle_functional(c: &CycleCertificate, points: &PointConfig, f: &dyn Field) -> f64 {
    let l1 = c.l1().to_f64().unwrap_or(f64::NAN);
    let mut acc = 0.0;
    for (&j, w) in c.support.iter().zip(&c.weights) {
        acc += w.to_f64().unwrap_or(f64::NAN) * f.eval(&points.point_f64(j));
    }
    acc / l1
}

/// Point sets up to this size enumerate their minimal cycles to build the
/// certificate; larger sets go straight to the nullspace basis.
const CERTIFICATE_ENUMERATION_LIMIT: usize = 16;

/// Whether the set carries a cycle, with a certificate if so.
///
/// The certificate has maximal support: it is nonzero exactly on the points
/// that lie in some cycle. It is built by adding the minimal cycles (ordered
/// by size, then support) with the first multiplier in 1, −1, 2, −2, … that
/// cancels no coordinate, skipping cycles already covered, then completing
/// from the nullspace basis.
pub fn has_cycle(points: &PointConfig, h: &[Projection]) -> Result<Option<CycleCertificate>> {
    let fibers = fiberize(points, h)?;
    Ok(cycle_in(&fibers))
}

pub(crate) fn cycle_in(fibers: &FiberMap) -> Option<CycleCertificate> {
    let n = fibers.n_points();
    let basis = linalg::nullspace(&fibers.incidence(), n);
    if basis.is_empty() {
        return None;
    }
    let mut generators: Vec<Vec<Rational>> = Vec::new();
    if n <= CERTIFICATE_ENUMERATION_LIMIT {
        let found = enumerate_minimal(fibers, n, 200_000);
        generators.extend(found.cycles.iter().map(|c| c.dense(n)));
    }
    generators.extend(basis);
    let mut acc = vec![Rational::zero(); n];
    for g in &generators {
        let covered = g.iter().zip(&acc).all(|(x, a)| x.is_zero() || !a.is_zero());
        if covered {
            continue;
        }
        let mut m: i64 = 1;
        loop {
            let mult = Rational::from_integer(m.into());
            let cand: Vec<Rational> = acc.iter().zip(g).map(|(a, x)| a + &mult * x).collect();
            let keeps = cand.iter().zip(acc.iter().zip(g)).all(|(c, (a, x))| {
                !c.is_zero() || (a.is_zero() && x.is_zero())
            });
            if keeps {
                acc = cand;
                break;
            }
            m = if m > 0 { -m } else { -m + 1 };
        }
    }
    Some(CycleCertificate::from_vector(&acc))
}

/// Minimal cycles found by [`minimal_cycles`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalCycles {
    /// Sorted by (support size, support).
    pub cycles: Vec<CycleCertificate>,
    /// False if the search budget ran out; the list is then partial.
    pub complete: bool,
}

/// Default number of search states visited before giving up.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// All support-minimal cycles with at most `cap` points.
pub fn minimal_cycles(points: &PointConfig, h: &[Projection], cap: usize) -> Result<MinimalCycles> {
    minimal_cycles_with_budget(points, h, cap, DEFAULT_BUDGET)
}

pub fn minimal_cycles_with_budget(
    points: &PointConfig,
    h: &[Projection],
    cap: usize,
    budget: usize,
) -> Result<MinimalCycles> {
    let fibers = fiberize(points, h)?;
    Ok(enumerate_minimal(&fibers, cap, budget))
}

/// Search over supports. Each weight in a cycle must be balanced by another
/// point of the support in the same fiber, so from the smallest index p₀ we
/// branch on how to fill the first unbalanced (point, fiber) pair. A balanced
/// set is either a circuit (nullity one, full support), contains a smaller
/// cycle (pruned), or is independent and grown through a shared fiber.
fn enumerate_minimal(fibers: &FiberMap, cap: usize, budget: usize) -> MinimalCycles {
    let n = fibers.n_points();
    let mut found: Vec<CycleCertificate> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut visited = 0usize;
    let mut complete = true;
    'outer: for p0 in 0..n {
        let mut stack = vec![vec![p0]];
        while let Some(set) = stack.pop() {
            visited += 1;
            if visited > budget {
                complete = false;
                break 'outer;
            }
            match unbalanced(fibers, &set) {
                Some((p, i)) => {
                    if set.len() == cap {
                        continue;
                    }
                    for &q in fibers.fiber_members(i, p) {
                        if q > p0 && !set.contains(&q) {
                            push_state(&mut stack, &mut seen, &set, q);
                        }
                    }
                }
                None => {
                    let ns = linalg::nullspace(&fibers.incidence_on(&set), set.len());
                    if ns.len() == 1 && ns[0].iter().all(|x| !x.is_zero()) {
                        found.push(CycleCertificate::from_subset(&set, &ns[0]));
                        continue;
                    }
                    if !ns.is_empty() || set.len() == cap {
                        continue;
                    }
                    let mut nbrs: Vec<usize> = Vec::new();
                    for &p in &set {
                        for i in 0..fibers.n_functions() {
                            nbrs.extend(fibers.fiber_members(i, p).iter().filter(|&&q| q > p0 && !set.contains(&q)));
                        }
                    }
                    nbrs.sort_unstable();
                    nbrs.dedup();
                    for q in nbrs {
                        push_state(&mut stack, &mut seen, &set, q);
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| (a.len(), &a.support).cmp(&(b.len(), &b.support)));
    found.dedup_by(|a, b| a.support == b.support);
    MinimalCycles { cycles: found, complete }
}

fn push_state(stack: &mut Vec<Vec<usize>>, seen: &mut HashSet<Vec<usize>>, set: &[usize], q: usize) {
    let mut next = set.to_vec();
    let pos = next.partition_point(|&x| x < q);
    next.insert(pos, q);
    if seen.insert(next.clone()) {
        stack.push(next);
    }
}

/// First (point, function) whose fiber inside `set` is a singleton.
fn unbalanced(fibers: &FiberMap, set: &[usize]) -> Option<(usize, usize)> {
    for &p in set {
        for i in 0..fibers.n_functions() {
            let k = fibers.fiber_of(i, p);
            if !set.iter().any(|&q| q != p && fibers.fiber_of(i, q) == k) {
                return Some((p, i));
            }
        }
    }
    None
}
