use num_traits::Zero;

use super::{cycle_in, fiberize, linalg, Projection};
use crate::error::{Error, Result};
use crate::geometry::PointConfig;
use crate::rational::Rational;

/// Values of g₁..g_r on the fibers of a cycle-free set.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    /// `tables[i]`: (hᵢ value, gᵢ value) per fiber, ascending in hᵢ.
    pub tables: Vec<Vec<(Rational, Rational)>>,
    /// Unknowns the data leave free, as (function, hᵢ value); they were set
    /// to 0.
    pub underdetermined: Vec<(usize, Rational)>,
}

impl Representation {
    pub fn value(&self, i: usize, at: &Rational) -> Option<&Rational> {
        let t = &self.tables[i];
        t.binary_search_by(|(k, _)| k.cmp(at)).ok().map(|pos| &t[pos].1)
    }
}

/// Solves Σ gᵢ(hᵢ(x)) = f(x) on every point, with gᵢ(hᵢ(x_anchor)) =
/// anchor_values[i] for i < r−1; the last function absorbs the constant.
pub fn solve_representation(
    points: &PointConfig,
    h: &[Projection],
    f: &[Rational],
    anchor: usize,
    anchor_values: &[Rational],
) -> Result<Representation> {
    let r = h.len();
    if f.len() != points.len() {
        return Err(Error::Dimension { expected: points.len(), got: f.len() });
    }
    if r == 0 {
        return Err(Error::Invalid("need at least one function".into()));
    }
    if anchor_values.len() != r - 1 {
        return Err(Error::Dimension { expected: r - 1, got: anchor_values.len() });
    }
    if !points.is_empty() && anchor >= points.len() {
        return Err(Error::Invalid(format!("anchor index {anchor} out of range")));
    }
    let fm = fiberize(points, h)?;
    if let Some(cert) = cycle_in(&fm) {
        return Err(Error::CycleExists(Box::new(cert)));
    }
    let offsets: Vec<usize> = (0..r)
        .scan(0, |acc, i| {
            let o = *acc;
            *acc += fm.fibers(i).len();
            Some(o)
        })
        .collect();
    let ncols = offsets[r - 1] + fm.fibers(r - 1).len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (j, fj) in f.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for i in 0..r {
            row[offsets[i] + fm.fiber_of(i, j)] = Rational::from_integer(1.into());
        }
        rows.push(row);
        rhs.push(fj.clone());
    }
    if !points.is_empty() {
        for (i, v) in anchor_values.iter().enumerate() {
            let mut row = vec![Rational::zero(); ncols];
            row[offsets[i] + fm.fiber_of(i, anchor)] = Rational::from_integer(1.into());
            rows.push(row);
            rhs.push(v.clone());
        }
    }
    let (x, free) = linalg::solve(&rows, &rhs, ncols).ok_or(Error::Singular)?;
    let locate = |col: usize| {
        let i = offsets.iter().rposition(|&o| o <= col).expect("offset 0");
        (i, col - offsets[i])
    };
    let underdetermined = free
        .into_iter()
        .map(|c| {
            let (i, k) = locate(c);
            (i, fm.value(i, k).clone())
        })
        .collect();
    let tables = (0..r)
        .map(|i| (0..fm.fibers(i).len()).map(|k| (fm.value(i, k).clone(), x[offsets[i] + k].clone())).collect())
        .collect();
    Ok(Representation { tables, underdetermined })
}
