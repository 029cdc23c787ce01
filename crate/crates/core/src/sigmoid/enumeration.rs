//! Enumerations of the rationals and of monic rational polynomials.
//!
//! Calkin–Wilf position ↔ continued fraction: writing n in binary and
//! dropping the leading 1, the runs of equal bits read from the least
//! significant end are the partial quotients (ones first, the last run one
//! short). Everything here works on that run structure, so indices with
//! millions of bits never require iterating the sequence.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{continued_fraction, from_continued_fraction, Rational};

/// Largest index bit-length materialized (2²⁷ bits = 16 MiB).
pub const MAX_INDEX_BITS: u64 = 1 << 27;

/// Monic polynomial tˡ + α_{l−1}t^{l−1} + … + α₀ with rational αᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    /// α₀..α_{l−1}; the leading 1 is implicit.
    coeffs: Vec<Rational>,
}

impl MonicPoly {
    pub fn one() -> Self {
        MonicPoly { coeffs: Vec::new() }
    }

    /// From the lower coefficients α₀..α_{l−1}.
    pub fn from_lower(coeffs: Vec<Rational>) -> Self {
        MonicPoly { coeffs }
    }

    /// From all coefficients, constant term first; the last must be 1.
    pub fn from_coefficients(mut all: Vec<Rational>) -> Result<Self> {
        match all.pop() {
            Some(lead) if lead.is_one() => Ok(MonicPoly { coeffs: all }),
            Some(lead) => Err(Error::Invalid(format!("polynomial is not monic (leading coefficient {lead})"))),
            None => Err(Error::Invalid("empty coefficient list".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lower(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(1.0, |acc, c| acc * t + crate::rational::to_f64(c))
    }

    /// Bound on |u′| over [lo, hi]: Σ i|cᵢ|mⁱ⁻¹ with m = max(|lo|, |hi|),
    /// the leading 1 included; 1 for constants.
    pub fn derivative_bound(&self, lo: f64, hi: f64) -> f64 {
        let m = lo.abs().max(hi.abs());
        let l = self.degree();
        let mut s = 0.0;
        for i in 1..=l {
            let c = if i == l { 1.0 } else { crate::rational::to_f64(&self.coeffs[i]).abs() };
            s += i as f64 * c * m.powi(i as i32 - 1);
        }
        if s == 0.0 {
            1.0
        } else {
            s
        }
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.degree();
        let mut out = String::new();
        for i in (0..=l).rev() {
            let c = if i == l { Rational::one() } else { self.coeffs[i].clone() };
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                out.push_str(&a.to_string());
            }
            match i {
                0 => {}
                1 if show_coeff => out.push_str("*t"),
                1 => out.push('t'),
                _ if show_coeff => out.push_str(&format!("*t^{i}")),
                _ => out.push_str(&format!("t^{i}")),
            }
        }
        f.write_str(&out)
    }
}

/// qₙ of the Calkin–Wilf sequence by iterating q_{k+1} = 1/(2⌊q_k⌋ + 1 − q_k).
/// Oracle for small n.
pub fn calkin_wilf_iter(n: u64) -> Rational {
    assert!(n >= 1, "Calkin–Wilf positions start at 1");
    let mut q = Rational::one();
    for _ in 1..n {
        let fl = q.floor();
        q = (fl.clone() + fl + Rational::one() - q).recip();
    }
    q
}

/// Partial quotients of qₙ, read off the binary expansion of n.
fn cw_terms(n: &BigUint) -> Vec<BigInt> {
    let bits = n.bits();
    let mut terms = Vec::new();
    let mut expect = true;
    let mut run = 0u64;
    for i in 0..bits.saturating_sub(1) {
        if n.bit(i) == expect {
            run += 1;
        } else {
            terms.push(BigInt::from(run));
            expect = !expect;
            run = 1;
        }
    }
    terms.push(BigInt::from(run));
    *terms.last_mut().expect("nonempty") += 1;
    terms
}

/// qₙ for n ≥ 1.
pub fn calkin_wilf(n: &BigInt) -> Result<Rational> {
    if n.sign() != Sign::Plus {
        return Err(Error::Invalid("Calkin–Wilf positions start at 1".into()));
    }
    Ok(from_continued_fraction(&cw_terms(n.magnitude())))
}

/// Bit-length of the Calkin–Wilf position of q > 0 (sum of its partial
/// quotients).
pub fn cw_index_bits(q: &Rational) -> BigInt {
    continued_fraction(q).iter().sum()
}

/// Calkin–Wilf position of q > 0.
pub fn cw_index(q: &Rational) -> Result<BigInt> {
    if !q.is_positive() {
        return Err(Error::Invalid("Calkin–Wilf positions are defined for positive rationals".into()));
    }
    index_from_terms(&continued_fraction(q))
}

fn index_from_terms(terms: &[BigInt]) -> Result<BigInt> {
    let total: BigInt = terms.iter().sum();
    let bits = total
        .to_u64()
        .filter(|&b| b <= MAX_INDEX_BITS)
        .ok_or_else(|| Error::Budget(format!("Calkin–Wilf index would have {total} bits")))?;
    let mut words = vec![0u32; (bits as usize).div_ceil(32)];
    let mut pos = 0u64;
    let last = terms.len() - 1;
    for (k, t) in terms.iter().enumerate() {
        let mut run = t.to_u64().expect("bounded by total");
        if k == last {
            run -= 1;
        }
        if k % 2 == 0 {
            for b in pos..pos + run {
                words[(b / 32) as usize] |= 1 << (b % 32);
            }
        }
        pos += run;
    }
    words[(pos / 32) as usize] |= 1 << (pos % 32);
    Ok(BigInt::from_biguint(Sign::Plus, BigUint::new(words)))
}

/// r₀ = 0, r_{2n} = qₙ, r_{2n−1} = −qₙ.
pub fn rational_enum(k: &BigInt) -> Result<Rational> {
    if k.is_negative() {
        return Err(Error::Invalid("rational positions start at 0".into()));
    }
    if k.is_zero() {
        return Ok(Rational::zero());
    }
    let (half, odd) = ((k + BigInt::one()) / 2, k.is_odd());
    let q = calkin_wilf(&half)?;
    Ok(if odd { -q } else { q })
}

/// Position k with r_k = r.
pub fn rational_index(r: &Rational) -> Result<BigInt> {
    if r.is_zero() {
        return Ok(BigInt::zero());
    }
    let n = cw_index(&r.abs())?;
    Ok(if r.is_positive() { n * 2 } else { n * 2 - 1 })
}

/// Continued fraction encoding the monic polynomial: 1 ↦ [1]; degree one ↦
/// [k₀+2]; higher degree ↦ [k₀; k₁+1, …, k_{l−2}+1, k_{l−1}+2], with kᵢ the
/// rational position of αᵢ.
fn encode(p: &MonicPoly) -> Result<Vec<BigInt>> {
    let ks: Vec<BigInt> = p.lower().iter().map(rational_index).collect::<Result<_>>()?;
    let l = ks.len();
    Ok(match l {
        0 => vec![BigInt::one()],
        1 => vec![&ks[0] + 2],
        _ => {
            let mut t = Vec::with_capacity(l);
            t.push(ks[0].clone());
            for k in &ks[1..l - 1] {
                t.push(k + 1);
            }
            t.push(&ks[l - 1] + 2);
            t
        }
    })
}

/// Bit-length of `monic_index(p)`, computed without materializing it.
pub fn monic_index_bits(p: &MonicPoly) -> Result<BigInt> {
    Ok(encode(p)?.iter().sum())
}

/// Position n with uₙ = p.
pub fn monic_index(p: &MonicPoly) -> Result<BigInt> {
    index_from_terms(&encode(p)?)
}

/// The n-th monic polynomial uₙ, n ≥ 1.
pub fn monic_enum(n: &BigInt) -> Result<MonicPoly> {
    if n.sign() != Sign::Plus {
        return Err(Error::Invalid("monic positions start at 1".into()));
    }
    if n.is_one() {
        return Ok(MonicPoly::one());
    }
    let ms = cw_terms(n.magnitude());
    let l = ms.len();
    let coeffs = if l == 1 {
        vec![rational_enum(&(&ms[0] - 2))?]
    } else {
        let mut c = Vec::with_capacity(l);
        c.push(rational_enum(&ms[0])?);
        for m in &ms[1..l - 1] {
            c.push(rational_enum(&(m - 1))?);
        }
        c.push(rational_enum(&(&ms[l - 1] - 2))?);
        c
    };
    Ok(MonicPoly { coeffs })
}
