//! The sigmoid σ(·; d, λ).
//!
//! On [(2n−1)d, 2nd] σ is an affine image aₙ + bₙuₙ of the n-th monic
//! polynomial, squeezed between h and 1; on the gaps [2nd, (2n+1)d] it is
//! blended to a constant with the C^∞ step β, and left of d it decays to 0.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::enumeration::{monic_enum, MonicPoly};
use crate::error::{Error, Result};
use crate::rational::{ln_bigint, to_f64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmoidParams {
    pub d: f64,
    pub lambda: f64,
}

impl SigmoidParams {
    pub fn new(d: f64, lambda: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Invalid("σ needs d > 0 and λ > 0".into()));
        }
        Ok(SigmoidParams { d, lambda })
    }

    /// h(x) = 1 − min(½, λ)/(1 + ln(x − d + 1)), increasing on [d, ∞).
    pub fn h(&self, x: f64) -> f64 {
        1.0 - self.lambda.min(0.5) / (1.0 + (x - self.d + 1.0).ln())
    }

    /// Mₙ = h((2n+1)d), with the logarithm of 2nd + 1 taken from the
    /// integer's leading bits when n is beyond double range.
    pub fn m_n(&self, n: &BigInt) -> f64 {
        let ln = match n.to_f64() {
            Some(nf) if nf < 9.0e15 => (2.0 * nf * self.d + 1.0).ln(),
            _ => ln_bigint(n) + (2.0 * self.d).ln(),
        };
        1.0 - self.lambda.min(0.5) / (1.0 + ln)
    }

    /// (aₙ, bₙ) for the segment polynomial `u` at position `n`.
    pub fn segment_coeffs(&self, n: &BigInt, u: &MonicPoly) -> (f64, f64) {
        if n.is_one() {
            return (0.5, self.h(3.0 * self.d) / 2.0);
        }
        let alpha = u.lower();
        let (mut b1, mut b2) = match alpha.first() {
            Some(a0) => (to_f64(a0), to_f64(a0) + 1.0),
            None => (0.0, 1.0),
        };
        for a in alpha.iter().skip(1) {
            let v = to_f64(a);
            b1 += v.min(0.0);
            b2 += v.max(0.0);
        }
        let m = self.m_n(n);
        let a = ((1.0 + 2.0 * m) * b2 - (2.0 + m) * b1) / (3.0 * (b2 - b1));
        let b = (1.0 - m) / (3.0 * (b2 - b1));
        (a, b)
    }
}

/// β̂(x) = e^{−1/x} for x > 0, else 0.
pub fn beta_hat(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step: 1 for x ≤ a, 0 for x ≥ b.
pub fn beta(a: f64, b: f64, x: f64) -> f64 {
    let l = beta_hat(b - x);
    let r = beta_hat(x - a);
    l / (l + r)
}

/// One construction segment with its position and polynomial.
#[derive(Debug, Clone)]
struct Segment {
    n: BigInt,
    u: MonicPoly,
    a: f64,
    b: f64,
}

impl Segment {
    fn new(p: &SigmoidParams, n: u64) -> Result<Self> {
        let n = BigInt::from(n);
        let u = monic_enum(&n)?;
        let (a, b) = p.segment_coeffs(&n, &u);
        Ok(Segment { n, u, a, b })
    }

    /// aₙ + bₙuₙ(x/d − 2n + 1).
    fn at(&self, p: &SigmoidParams, x: f64) -> f64 {
        let n = self.n.to_f64().expect("small segment");
        self.a + self.b * self.u.eval(x / p.d - 2.0 * n + 1.0)
    }
}

/// σ(x). Positions are formed in double precision, so x should stay well
/// below 2⁵³·d; use [`sigma_segment`] for astronomically far segments.
pub fn sigma(x: f64, p: &SigmoidParams) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Invalid("σ needs a finite argument".into()));
    }
    let d = p.d;
    let m1 = p.h(3.0 * d);
    if x < d {
        return Ok((1.0 - beta_hat(d - x)) * (1.0 + m1) / 2.0);
    }
    let k = (x / d).floor() as u64;
    if k % 2 == 1 {
        return Ok(Segment::new(p, k.div_ceil(2))?.at(p, x));
    }
    let m = k / 2;
    let left = Segment::new(p, m)?;
    let right = Segment::new(p, m + 1)?;
    let mf = m as f64;
    let (lo, hi) = (2.0 * mf * d, (2.0 * mf + 1.0) * d);
    let kmid = (left.at(p, lo) + right.at(p, hi)) / 2.0;
    if x <= lo + d / 2.0 {
        let delta = if m == 1 {
            d / 2.0
        } else {
            let eps = (1.0 - p.m_n(&left.n)) / 6.0;
            (eps * d / (left.b * left.u.derivative_bound(1.0, 1.5))).min(d / 2.0)
        };
        Ok(kmid - beta(lo, lo + delta, x) * (kmid - left.at(p, x)))
    } else {
        let eps = (1.0 - p.m_n(&right.n)) / 6.0;
        let delta = (eps * d / (right.b * right.u.derivative_bound(-0.5, 0.0))).min(d / 2.0);
        Ok(kmid - (1.0 - beta(hi - delta, hi, x)) * (kmid - right.at(p, x)))
    }
}

/// σ(d·t + (2n−1)d) = aₙ + bₙuₙ(t) for t ∈ [0, 1], exact in n.
pub fn sigma_segment(t: f64, n: &BigInt, p: &SigmoidParams) -> Result<f64> {
    let u = monic_enum(n)?;
    let (a, b) = p.segment_coeffs(n, &u);
    Ok(a + b * u.eval(t))
}
