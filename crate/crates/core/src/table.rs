//! Univariate tables and sums of ridge functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Field};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Linear,
    /// Local 4-point Lagrange cubic.
    Cubic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnivariateTable<T> {
    knots: Vec<T>,
    values: Vec<T>,
    interp: Interp,
}

impl<T: Real> UnivariateTable<T> {
    pub fn new(knots: Vec<T>, values: Vec<T>) -> Result<Self> {
        Self::with_interp(knots, values, Interp::Linear)
    }

    pub fn with_interp(knots: Vec<T>, values: Vec<T>, interp: Interp) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::Dimension { expected: knots.len(), got: values.len() });
        }
        if knots.is_empty() {
            return Err(Error::Invalid("empty table".into()));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Invalid("table knots must be strictly increasing".into()));
        }
        Ok(UnivariateTable { knots, values, interp })
    }

    /// Samples `f` on `n` equally spaced knots of `[lo, hi]`.
    pub fn sample(lo: T, hi: T, n: usize, interp: Interp, f: impl Fn(T) -> T) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::Invalid("sampling needs n ≥ 2 and lo < hi".into()));
        }
        let step = (hi - lo) / T::from_usize(n - 1).expect("usize");
        let knots: Vec<T> = (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + step * T::from_usize(i).expect("usize") })
            .collect();
        let values = knots.iter().map(|&t| f(t)).collect();
        Self::with_interp(knots, values, interp)
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn range(&self) -> (T, T) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn slack(&self) -> T {
        let (lo, hi) = self.range();
        T::lit(1e-12) * (T::one() + lo.abs().max(hi.abs()))
    }

    fn panel(&self, t: T) -> usize {
        let n = self.knots.len();
        match self.knots.partition_point(|&k| k <= t) {
            0 => 0,
            j => (j - 1).min(n.saturating_sub(2)),
        }
    }

    fn cubic_at(&self, i: usize, t: T) -> T {
        let n = self.knots.len();
        let start = i.saturating_sub(1).min(n - 4);
        let mut acc = T::zero();
        for a in start..start + 4 {
            let mut w = T::one();
            for b in start..start + 4 {
                if a != b {
                    w *= (t - self.knots[b]) / (self.knots[a] - self.knots[b]);
                }
            }
            acc += w * self.values[a];
        }
        acc
    }

    /// Value at `t`, or `None` outside the knot range (a relative slack of
    /// 1e-12 absorbs rounding in a·x).
    pub fn try_eval(&self, t: T) -> Option<T> {
        let (lo, hi) = self.range();
        let s = self.slack();
        if t < lo - s || t > hi + s || t.is_nan() {
            return None;
        }
        let t = t.max(lo).min(hi);
        let n = self.knots.len();
        if n == 1 {
            return Some(self.values[0]);
        }
        let i = self.panel(t);
        if self.interp == Interp::Cubic && n >= 4 {
            return Some(self.cubic_at(i, t));
        }
        let w = (t - self.knots[i]) / (self.knots[i + 1] - self.knots[i]);
        Some(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }

    /// Value at `t`; NaN outside the table.
    pub fn eval(&self, t: T) -> T {
        self.try_eval(t).unwrap_or_else(T::nan)
    }

    fn panel_integral(&self, i: usize, a: T, b: T) -> T {
        if self.interp == Interp::Cubic && self.knots.len() >= 4 {
            // Two-point Gauss is exact on the local cubic.
            let m = (a + b) / T::lit(2.0);
            let r = (b - a) / T::lit(2.0);
            let off = r / T::lit(3.0).sqrt();
            r * (self.cubic_at(i, m - off) + self.cubic_at(i, m + off))
        } else {
            let fa = self.eval(a);
            let fb = self.eval(b);
            (b - a) * (fa + fb) / T::lit(2.0)
        }
    }

    /// `t ↦ scale·∫_anchor^t g`, on the same knots and interpolation.
    pub fn antiderivative(&self, anchor: T, scale: T) -> Result<Self> {
        let n = self.knots.len();
        if n < 2 {
            return Err(Error::Invalid("antiderivative needs two knots".into()));
        }
        let (lo, hi) = self.range();
        if anchor < lo || anchor > hi {
            return Err(Error::Invalid("anchor outside table".into()));
        }
        let mut cum = Vec::with_capacity(n);
        cum.push(T::zero());
        for i in 0..n - 1 {
            let next = cum[i] + self.panel_integral(i, self.knots[i], self.knots[i + 1]);
            cum.push(next);
        }
        let i = self.panel(anchor);
        let at_anchor = cum[i] + self.panel_integral(i, self.knots[i], anchor);
        let values = cum.into_iter().map(|c| (c - at_anchor) * scale).collect();
        Self::with_interp(self.knots.clone(), values, self.interp)
    }

    pub fn map_values(&self, f: impl Fn(T, T) -> T) -> Self {
        let values = self.knots.iter().zip(&self.values).map(|(&k, &v)| f(k, v)).collect();
        UnivariateTable { knots: self.knots.clone(), values, interp: self.interp }
    }
}

/// Univariate profile of one ridge term.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<T> {
    Table(UnivariateTable<T>),
    /// Expression in `x1`, evaluated in double precision.
    Expr(Expr),
}

impl<T: Real> Profile<T> {
    pub fn eval(&self, t: T) -> T {
        match self {
            Profile::Table(tab) => tab.eval(t),
            Profile::Expr(e) => T::lit(e.eval(&[t.to_f64().unwrap_or(f64::NAN)])),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeTerm<T> {
    pub direction: Vec<T>,
    pub profile: Profile<T>,
}

/// Σ gᵢ(aᵢ·x).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RidgeSum<T> {
    terms: Vec<RidgeTerm<T>>,
}

impl<T: Real> RidgeSum<T> {
    pub fn new() -> Self {
        RidgeSum { terms: Vec::new() }
    }

    pub fn push(&mut self, direction: Vec<T>, profile: Profile<T>) -> Result<()> {
        if direction.iter().all(|v| v.is_zero()) {
            return Err(Error::Invalid("zero direction in ridge term".into()));
        }
        if let Some(first) = self.terms.first() {
            if first.direction.len() != direction.len() {
                return Err(Error::Dimension { expected: first.direction.len(), got: direction.len() });
            }
        }
        self.terms.push(RidgeTerm { direction, profile });
        Ok(())
    }

    pub fn with_term(mut self, direction: Vec<T>, profile: Profile<T>) -> Result<Self> {
        self.push(direction, profile)?;
        Ok(self)
    }

    pub fn terms(&self) -> &[RidgeTerm<T>] {
        &self.terms
    }

    pub fn eval_at(&self, x: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, term| {
            let t = term.direction.iter().zip(x).fold(T::zero(), |s, (&a, &v)| s + a * v);
            acc + term.profile.eval(t)
        })
    }
}

impl Field for RidgeSum<f64> {
    fn dim(&self) -> usize {
        self.terms.first().map_or(0, |t| t.direction.len())
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.eval_at(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_table_interpolates_and_refuses_outside() {
        let t = UnivariateTable::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(2.0), 1.0);
        assert!(t.try_eval(3.5).is_none());
        assert!(UnivariateTable::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn cubic_table_reproduces_cubics() {
        let t = UnivariateTable::sample(-1.0, 2.0, 9, Interp::Cubic, |x: f64| x * x * x - x).unwrap();
        for &x in &[-0.93, 0.1, 1.77, 2.0] {
            assert!((t.eval(x) - (x * x * x - x)).abs() < 1e-13);
        }
        let g = t.antiderivative(0.0, 1.0).unwrap();
        for &x in &[-1.0f64, 0.5, 2.0] {
            let exact = x.powi(4) / 4.0 - x * x / 2.0;
            assert!((g.eval(x) - exact).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn f32_tables_work() {
        let t = UnivariateTable::<f32>::sample(0.0, 1.0, 11, Interp::Linear, |x| 2.0 * x).unwrap();
        assert!((t.eval(0.55) - 1.1).abs() < 1e-6);
    }

    #[test]
    fn ridge_sum_adds_terms() {
        let g = UnivariateTable::sample(-2.0, 2.0, 5, Interp::Linear, |t| t).unwrap();
        let s = RidgeSum::new()
            .with_term(vec![1.0, 1.0], Profile::Table(g.clone()))
            .unwrap()
            .with_term(vec![1.0, -1.0], Profile::Table(g))
            .unwrap();
        assert_eq!(s.eval(&[0.5, 0.25]), 1.0);
    }
}
