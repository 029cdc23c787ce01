//! Two-neuron networks c₁σ(x−θ₁) + c₂σ(x−θ₂) approximating f on [a, b].
//!
//! With d = b − a, θ₁ = b − 2n·d puts x − θ₁ on the n-th construction
//! segment, where σ is aₙ + bₙuₙ((x−a)/d), and θ₂ = 2a − b puts x − θ₂ on
//! [d, 2d], where σ is the constant (1 + h(3d))/2. Choosing uₙ = p/p₀ for a
//! rational polynomial p close to f turns the network into p exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::enumeration::{monic_index, monic_index_bits, MonicPoly, MAX_INDEX_BITS};
use super::sigma::SigmoidParams;
use super::taylor::taylor;
use crate::error::{Error, Result};
use crate::expr::{Field, ScalarField};
use crate::rational::{from_f64_exact, simplest_between, to_f64, to_sci_string, Rational};

/// Highest polynomial degree tried.
pub const MAX_DEGREE: usize = 30;
/// Chebyshev interpolants are converted to monomials, which loses accuracy
/// quickly with degree; the fallback stops here.
const MAX_CHEBYSHEV_DEGREE: usize = 24;
const CHECK_POINTS: usize = 2001;
const REPORT_POINTS: usize = 1001;
/// Fraction of ε the simplified polynomial may use on the check grid; the
/// rest absorbs the network's floating-point evaluation.
const ACCEPT: f64 = 0.999;

type Samples = Vec<(f64, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyMethod {
    /// Taylor polynomial at the midpoint.
    Taylor,
    /// Chebyshev interpolant (no series available).
    Chebyshev,
}

/// Network c₁σ(x−θ₁) + c₂σ(x−θ₂) on [a, b].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub a: f64,
    pub b: f64,
    pub sigma: SigmoidParams,
    pub c1: f64,
    pub c2: f64,
    /// Segment position; θ₁ = b − 2n(b − a).
    pub n: BigInt,
    pub u: MonicPoly,
    /// Segment coefficients: σ = aₙ + bₙuₙ(t) on the n-th segment.
    pub an: f64,
    pub bn: f64,
}

impl NetworkParams {
    /// θ₁ = b − 2n(b − a), exactly.
    pub fn theta1_exact(&self) -> Rational {
        let a = from_f64_exact(self.a).expect("finite");
        let b = from_f64_exact(self.b).expect("finite");
        &b - Rational::from_integer(&self.n * 2) * (&b - &a)
    }

    /// θ₁ as a double when representable, else ±∞.
    pub fn theta1(&self) -> f64 {
        to_f64(&self.theta1_exact())
    }

    /// θ₁ in scientific notation with `digits` decimals.
    pub fn theta1_sci(&self, digits: usize) -> String {
        to_sci_string(&self.theta1_exact(), digits)
    }

    /// θ₂ = 2a − b.
    pub fn theta2(&self) -> f64 {
        let a = from_f64_exact(self.a).expect("finite");
        let b = from_f64_exact(self.b).expect("finite");
        to_f64(&(&a + &a - b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: NetworkParams,
    /// max |f − network| on 1001 equally spaced points of [a, b].
    pub achieved_error: f64,
    pub method: PolyMethod,
    /// Coefficients of p(t), t = (x − a)/(b − a), constant term first.
    pub poly: Vec<Rational>,
    /// Leading coefficient p₀ (0 only for the zero polynomial).
    pub p0: Rational,
}

/// Network value c₁(aₙ + bₙuₙ(t)) + c₂(1 + h(3d))/2, t = (x − a)/d. The
/// huge shift x − θ₁ is never formed.
pub fn eval_network(params: &NetworkParams, x: f64) -> Result<f64> {
    let d = params.b - params.a;
    let slack = 1e-12 * (1.0 + params.a.abs().max(params.b.abs()));
    if !(x >= params.a - slack && x <= params.b + slack) {
        return Err(Error::Invalid(format!("x = {x} outside [{}, {}]", params.a, params.b)));
    }
    let t = ((x - params.a) / d).clamp(0.0, 1.0);
    let s = &params.sigma;
    let first = params.an + params.bn * params.u.eval(t);
    let second = (1.0 + s.h(3.0 * s.d)) / 2.0;
    Ok(params.c1 * first + params.c2 * second)
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| i as f64 / (points - 1) as f64)
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

/// Σ cᵢ(t − ½)ⁱ rewritten in powers of t.
fn shift_to_t(c: &[f64]) -> Vec<f64> {
    let k = c.len();
    let mut out = vec![0.0; k];
    for (i, &ci) in c.iter().enumerate() {
        // (t − ½)^i = Σ_j C(i, j) t^j (−½)^{i−j}
        let mut binom = 1.0;
        for j in 0..=i {
            out[j] += ci * binom * (-0.5f64).powi((i - j) as i32);
            binom = binom * (i - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

/// Degree-k Chebyshev interpolant of g on [0, 1] in powers of t.
fn chebyshev_in_t(g: &dyn Fn(f64) -> f64, k: usize) -> Vec<f64> {
    let m = k + 1;
    let nodes: Vec<f64> =
        (0..m).map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / m as f64).cos()).collect();
    let vals: Vec<f64> = nodes.iter().map(|&y| g((y + 1.0) / 2.0)).collect();
    let mut coef = vec![0.0; m];
    for (i, c) in coef.iter_mut().enumerate() {
        let s: f64 = (0..m)
            .map(|j| vals[j] * (std::f64::consts::PI * i as f64 * (j as f64 + 0.5) / m as f64).cos())
            .sum();
        *c = 2.0 * s / m as f64;
    }
    coef[0] /= 2.0;
    // Σ coef_i T_i(y) in powers of y, then y = 2t − 1.
    let mut in_y = vec![0.0; m];
    let mut t_prev = vec![1.0];
    let mut t_cur = vec![0.0, 1.0];
    for (i, &c) in coef.iter().enumerate() {
        let ti: &Vec<f64> = match i {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                let mut next = vec![0.0; i + 1];
                for (p, &v) in t_cur.iter().enumerate() {
                    next[p + 1] += 2.0 * v;
                }
                for (p, &v) in t_prev.iter().enumerate() {
                    next[p] -= v;
                }
                t_prev = std::mem::replace(&mut t_cur, next);
                &t_cur
            }
        };
        for (p, &v) in ti.iter().enumerate() {
            in_y[p] += c * v;
        }
    }
    // y^p = (2t − 1)^p = 2^p (t − ½)^p.
    let scaled: Vec<f64> = in_y.iter().enumerate().map(|(p, &v)| v * 2f64.powi(p as i32)).collect();
    shift_to_t(&scaled)
}

/// Rounds `t_coeffs` to a rational polynomial p with Σ|pᵢ − Tᵢ| ≤ budget
/// (hence ‖p − T‖ ≤ budget on [0, 1]), each coefficient the simplest
/// rational in its window. Returns (p₀, monic part) or `None` for p = 0.
fn rationalize_poly(t_coeffs: &[f64], budget: f64) -> Result<Option<(Rational, MonicPoly)>> {
    let delta = budget / t_coeffs.len() as f64;
    let mut top = t_coeffs.len();
    while top > 0 && t_coeffs[top - 1].abs() <= delta {
        top -= 1;
    }
    if top == 0 {
        return Ok(None);
    }
    let lead = t_coeffs[top - 1];
    let p0 = simplest_between(&from_f64_exact(lead - delta)?, &from_f64_exact(lead + delta)?);
    let mut lower = Vec::with_capacity(top - 1);
    let d = from_f64_exact(delta)?;
    for &c in &t_coeffs[..top - 1] {
        let c = from_f64_exact(c)?;
        let lo = (&c - &d) / &p0;
        let hi = (&c + &d) / &p0;
        lower.push(simplest_between(&lo, &hi));
    }
    Ok(Some((p0, MonicPoly::from_lower(lower))))
}

/// max |p₀u(t) − g(t)| over the samples.
fn sample_error(samples: &[(f64, f64)], p0: f64, lower: &[Rational]) -> f64 {
    let mut c: Vec<f64> = lower.iter().map(|v| p0 * to_f64(v)).collect();
    c.push(p0);
    samples.iter().map(|&(t, v)| (horner(&c, t) - v).abs()).fold(0.0, f64::max)
}

/// Greedy shortening of the segment position: each lower coefficient is
/// replaced by the simplest rational in the widest window around it that
/// keeps the sample error within `limit` and lowers the bit count.
fn simplify(samples: &[(f64, f64)], p0: &Rational, u: &MonicPoly, limit: f64) -> Result<(MonicPoly, BigInt)> {
    let p0f = to_f64(p0);
    let mut alpha = u.lower().to_vec();
    let mut bits = monic_index_bits(u)?;
    for _ in 0..8 {
        let mut improved = false;
        for i in (0..alpha.len()).rev() {
            for j in (-40..=4).rev() {
                let w = Rational::new(BigInt::one() << (40 + j) as usize, BigInt::one() << 40usize);
                let cand = simplest_between(&(&alpha[i] - &w), &(&alpha[i] + &w));
                if cand == alpha[i] {
                    break;
                }
                let mut trial = alpha.clone();
                trial[i] = cand;
                let tb = monic_index_bits(&MonicPoly::from_lower(trial.clone()))?;
                if tb < bits && sample_error(samples, p0f, &trial) <= limit {
                    alpha = trial;
                    bits = tb;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((MonicPoly::from_lower(alpha), bits))
}

/// Polynomial approximants T with ‖T − g‖ ≤ ε/2: the lowest admissible
/// degree and the next two.
fn candidates(f: &ScalarField, a: f64, d: f64, eps: f64) -> Result<(PolyMethod, Vec<Vec<f64>>, Samples)> {
    let g = |t: f64| f.eval(&[a + d * t]);
    let samples: Vec<(f64, f64)> = grid(CHECK_POINTS).map(|t| (t, g(t))).collect();
    if let Some(&(t, _)) = samples.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Evaluation(vec![a + d * t]));
    }
    let err = |c: &[f64]| samples.iter().map(|&(t, v)| (horner(c, t) - v).abs()).fold(0.0, f64::max);
    let mut best = f64::INFINITY;
    let mut pick = |make: &dyn Fn(usize) -> Option<Vec<f64>>, max_k: usize| -> Option<Vec<Vec<f64>>> {
        let mut found: Vec<Vec<f64>> = Vec::new();
        for k in 0..=max_k {
            let Some(c) = make(k) else { break };
            let e = err(&c);
            best = best.min(e);
            if e <= eps / 2.0 {
                found.push(c);
            } else if !found.is_empty() {
                break;
            }
            if found.len() == 3 {
                break;
            }
        }
        (!found.is_empty()).then_some(found)
    };
    if let Some(expr) = f.expr() {
        let series = |k: usize| taylor(expr, a + d / 2.0, d, k).map(|c| shift_to_t(&c));
        if let Some(found) = pick(&series, MAX_DEGREE) {
            return Ok((PolyMethod::Taylor, found, samples));
        }
    }
    let cheb = |k: usize| Some(chebyshev_in_t(&g, k));
    if let Some(found) = pick(&cheb, MAX_CHEBYSHEV_DEGREE) {
        return Ok((PolyMethod::Chebyshev, found, samples));
    }
    Err(Error::Accuracy { achieved: best })
}

/// Fits c₁σ(x−θ₁) + c₂σ(x−θ₂) to f on [a, b] within ε, using σ(·; b−a, λ).
///
/// Among the admissible polynomial degrees the one whose monic part has the
/// shortest position n is used.
pub fn fit_two_neuron(f: &ScalarField, a: f64, b: f64, eps: f64, lambda: f64) -> Result<FitReport> {
    if f.dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: f.dim() });
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid("interval needs a < b".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Invalid("ε must be positive".into()));
    }
    let d = b - a;
    let sigma = SigmoidParams::new(d, lambda)?;
    let (method, cands, samples) = candidates(f, a, d, eps)?;
    let mut chosen: Option<(BigInt, Option<(Rational, MonicPoly)>)> = None;
    for c in &cands {
        let mut r = rationalize_poly(c, eps / 2.0)?;
        let bits = match &mut r {
            Some((p0, u)) => {
                let (simpler, bits) = simplify(&samples, p0, u, eps * ACCEPT)?;
                *u = simpler;
                bits
            }
            None => BigInt::one(),
        };
        if chosen.as_ref().is_none_or(|(b0, _)| &bits < b0) {
            chosen = Some((bits, r));
        }
    }
    let (bits, rounded) = chosen.expect("at least one candidate");
    if bits > BigInt::from(MAX_INDEX_BITS) {
        return Err(Error::Budget(format!("segment position would have {bits} bits")));
    }
    let (p0, u, n) = match rounded {
        Some((p0, u)) => {
            let n = monic_index(&u)?;
            (p0, u, n)
        }
        None => (Rational::zero(), MonicPoly::one(), BigInt::one()),
    };
    let (an, bn) = sigma.segment_coeffs(&n, &u);
    let p0f = to_f64(&p0);
    let c1 = p0f / bn;
    let c2 = -2.0 * p0f * an / (bn * (1.0 + sigma.h(3.0 * d)));
    let params = NetworkParams { a, b, sigma, c1, c2, n, u, an, bn };
    let mut achieved: f64 = 0.0;
    for t in grid(REPORT_POINTS) {
        let x = if t == 1.0 { b } else { a + d * t };
        let e = (f.eval(&[x]) - eval_network(&params, x)?).abs();
        achieved = achieved.max(e);
    }
    let mut poly: Vec<Rational> = params.u.lower().iter().map(|c| c * &p0).collect();
    poly.push(p0.clone());
    if p0.is_zero() {
        poly = vec![Rational::zero()];
    }
    if achieved > eps {
        return Err(Error::Accuracy { achieved });
    }
    Ok(FitReport { params, achieved_error: achieved, method, poly, p0 })
}
