//! Discrete minimax error by linear programming.
//!
//! min t subject to |f(x) − Σᵢ gᵢ(aᵢ·x)| ≤ t at every grid point, with one
//! free variable per distinct exact value of aᵢ·x. This is the brute-force
//! reference that the closed-form error formulas are checked against.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use crate::cycles::{fiberize, Projection};
use crate::error::{Error, Result};
use crate::expr::Field;
use crate::geometry::{DirectionSet, PointConfig};
use crate::rational::to_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub error: f64,
    /// Per direction: (aᵢ·x, gᵢ value) on each fiber, ascending.
    pub profiles: Vec<Vec<(f64, f64)>>,
}

pub fn grid_minimax_oracle(f: &dyn Field, directions: &DirectionSet, grid: &PointConfig) -> Result<f64> {
    Ok(grid_minimax_solution(f, directions, grid)?.error)
}

pub fn grid_minimax_solution(f: &dyn Field, directions: &DirectionSet, grid: &PointConfig) -> Result<OracleSolution> {
    if f.dim() != grid.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: grid.dim() });
    }
    if directions.dim() != grid.dim() {
        return Err(Error::Dimension { expected: grid.dim(), got: directions.dim() });
    }
    let fm = fiberize(grid, &Projection::from_directions(directions))?;
    let values: Vec<f64> = (0..grid.len())
        .map(|j| {
            let x = grid.point_f64(j);
            let v = f.eval(&x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation(x))
            }
        })
        .collect::<Result<_>>()?;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let free = (f64::NEG_INFINITY, f64::INFINITY);
    let vars: Vec<Vec<_>> = (0..directions.len())
        .map(|i| fm.fibers(i).iter().map(|_| lp.add_var(0.0, free)).collect())
        .collect();
    for (j, &v) in values.iter().enumerate() {
        // Σg + t ≥ f and Σg − t ≤ f.
        let mut upper = LinearExpr::empty();
        let mut lower = LinearExpr::empty();
        for (i, vi) in vars.iter().enumerate() {
            let var = vi[fm.fiber_of(i, j)];
            upper.add(var, 1.0);
            lower.add(var, 1.0);
        }
        upper.add(t, 1.0);
        lower.add(t, -1.0);
        lp.add_constraint(upper, ComparisonOp::Ge, v);
        lp.add_constraint(lower, ComparisonOp::Le, v);
    }
    let sol = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let profiles = vars
        .iter()
        .enumerate()
        .map(|(i, vi)| vi.iter().enumerate().map(|(k, &var)| (to_f64(fm.value(i, k)), sol[var])).collect())
        .collect();
    Ok(OracleSolution { error: sol.objective().max(0.0), profiles })
}
