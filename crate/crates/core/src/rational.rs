//! Exact rationals and the conversions the rest of the crate needs.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, an integer, or a decimal literal (optionally with exponent),
/// exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Invalid(format!("not a rational number: `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(bad)?;
        let q = parse_decimal(q.trim()).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{text}`")));
        }
        return Ok(p / q);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fracpart) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fracpart.is_empty() {
        return None;
    }
    if !whole.chars().chain(fracpart.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{whole}{fracpart}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - fracpart.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Exact value of a finite double.
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Only reached for magnitudes beyond f64 range.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Regular continued fraction [a0; a1, ..., ak] of a rational; every term
/// after the first is positive and the last is ≥ 2 unless k = 0.
pub fn continued_fraction(r: &Rational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut p = r.numer().clone();
    let mut q = r.denom().clone();
    while !q.is_zero() {
        let (a, rem) = p.div_mod_floor(&q);
        out.push(a);
        p = q;
        q = rem;
    }
    out
}

pub fn from_continued_fraction(terms: &[BigInt]) -> Rational {
    let mut it = terms.iter().rev();
    let mut acc = Rational::from_integer(it.next().cloned().unwrap_or_default());
    for a in it {
        acc = Rational::from_integer(a.clone()) + acc.recip();
    }
    acc
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// found from the continued-fraction convergents and semiconvergents.
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    let exact = from_f64_exact(x)?;
    if exact.denom() <= &BigInt::from(max_den) {
        return Ok(exact);
    }
    let cf = continued_fraction(&exact);
    let max_den = BigInt::from(max_den);
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (cf[0].clone(), BigInt::one());
    for a in &cf[1..] {
        let q2 = a * &q1 + &q0;
        if q2 > max_den {
            // Largest admissible semiconvergent, kept only if it beats the convergent.
            let t = (&max_den - &q0) / &q1;
            let ps = &t * &p1 + &p0;
            let qs = &t * &q1 + &q0;
            let conv = Rational::new(p1.clone(), q1.clone());
            if !qs.is_zero() && t > BigInt::zero() {
                let semi = Rational::new(ps, qs);
                if (&semi - &exact).abs() < (&conv - &exact).abs() {
                    return Ok(semi);
                }
            }
            return Ok(conv);
        }
        let p2 = a * &p1 + &p0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    Ok(Rational::new(p1, q1))
}

/// Natural logarithm of a positive big integer, accurate to double precision
/// for any size: the top 64 bits carry the mantissa, the bit length the scale.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.sign() == Sign::Plus, "logarithm of a non-positive integer");
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// log10 of |r| for a nonzero rational of any size.
pub fn log10_abs(r: &Rational) -> f64 {
    let n = r.numer().abs();
    let d = r.denom().clone();
    (ln_bigint(&n) - ln_bigint(&d)) / std::f64::consts::LN_10
}

/// Scientific-notation rendering of a huge rational, e.g. `-1.7353e442`.
pub fn to_sci_string(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let l = log10_abs(r);
    let mut e = l.floor();
    let mut m = 10f64.powf(l - e);
    let scale = 10f64.powi(digits as i32);
    m = (m * scale).round() / scale;
    if m >= 10.0 {
        m /= 10.0;
        e += 1.0;
    }
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{m:.digits$}e{e}")
}

/// The rational with the smallest denominator (then numerator) in the
/// closed interval [lo, hi]: the Stern–Brocot ancestor of the interval.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let up = &fl + Rational::one();
    if &up <= hi {
        return up;
    }
    // Same integer part: recurse on the reciprocals of the fractional parts.
    fl.clone() + simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip()).recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), frac(-1, 8));
        assert_eq!(parse_rational("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_rational("2.5e2").unwrap(), int(250));
        assert_eq!(parse_rational("1e-3").unwrap(), frac(1, 1000));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&frac(1, 5), &frac(3, 10)), frac(1, 4));
        assert_eq!(simplest_between(&frac(-3, 10), &frac(-1, 5)), frac(-1, 4));
        assert_eq!(simplest_between(&frac(-1, 5), &frac(3, 10)), int(0));
        assert_eq!(simplest_between(&frac(31, 10), &frac(41, 10)), int(4));
        assert_eq!(simplest_between(&frac(3, 1), &frac(3, 1)), int(3));
        assert_eq!(simplest_between(&frac(333, 1000), &frac(334, 1000)), frac(1, 3));
        assert_eq!(simplest_between(&frac(7, 5), &frac(7, 5)), frac(7, 5));
    }

    #[test]
    fn continued_fraction_round_trip() {
        let r = frac(17, 7);
        let cf = continued_fraction(&r);
        assert_eq!(cf, vec![BigInt::from(2), BigInt::from(2), BigInt::from(3)]);
        assert_eq!(from_continued_fraction(&cf), r);
        let neg = frac(-7, 3);
        assert_eq!(from_continued_fraction(&continued_fraction(&neg)), neg);
    }

    #[test]
    fn rationalize_finds_small_fractions() {
        assert_eq!(rationalize(1.0 / 3.0, 1000).unwrap(), frac(1, 3));
        assert_eq!(rationalize(-0.75, 10).unwrap(), frac(-3, 4));
        let pi = rationalize(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, frac(355, 113));
    }

    #[test]
    fn big_logarithms() {
        let n = num_traits::pow(BigInt::from(10), 500);
        assert!((ln_bigint(&n) - 500.0 * std::f64::consts::LN_10).abs() < 1e-10);
        assert!((ln_bigint(&BigInt::from(7)) - 7f64.ln()).abs() < 1e-15);
        let r = Rational::from_integer(-BigInt::from(17353) * num_traits::pow(BigInt::from(10), 438));
        assert_eq!(to_sci_string(&r, 4), "-1.7353e442");
    }
}
