//! Truncated power series evaluation of expressions, for Taylor
//! coefficients of analytic targets.

use crate::expr::{Expr, Func};

type Series = Vec<f64>;

fn constant(c: f64, k: usize) -> Series {
    let mut s = vec![0.0; k + 1];
    s[0] = c;
    s
}

fn mul(a: &[f64], b: &[f64]) -> Series {
    let k = a.len();
    (0..k).map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum()).collect()
}

fn div(a: &[f64], b: &[f64]) -> Option<Series> {
    if b[0] == 0.0 {
        return None;
    }
    let mut c = vec![0.0; a.len()];
    for i in 0..a.len() {
        let s: f64 = (1..=i).map(|j| b[j] * c[i - j]).sum();
        c[i] = (a[i] - s) / b[0];
    }
    Some(c)
}

fn exp(a: &[f64]) -> Series {
    let mut e = vec![0.0; a.len()];
    e[0] = a[0].exp();
    for i in 1..a.len() {
        let s: f64 = (1..=i).map(|j| j as f64 * a[j] * e[i - j]).sum();
        e[i] = s / i as f64;
    }
    e
}

fn log(a: &[f64]) -> Option<Series> {
    if a[0] <= 0.0 {
        return None;
    }
    let mut l = vec![0.0; a.len()];
    l[0] = a[0].ln();
    for i in 1..a.len() {
        let s: f64 = (1..i).map(|j| j as f64 * l[j] * a[i - j]).sum();
        l[i] = (a[i] - s / i as f64) / a[0];
    }
    Some(l)
}

fn sin_cos(a: &[f64]) -> (Series, Series) {
    let k = a.len();
    let mut s = vec![0.0; k];
    let mut c = vec![0.0; k];
    s[0] = a[0].sin();
    c[0] = a[0].cos();
    for i in 1..k {
        let (mut ss, mut cc) = (0.0, 0.0);
        for j in 1..=i {
            ss += j as f64 * a[j] * c[i - j];
            cc += j as f64 * a[j] * s[i - j];
        }
        s[i] = ss / i as f64;
        c[i] = -cc / i as f64;
    }
    (s, c)
}

fn sqrt(a: &[f64]) -> Option<Series> {
    if a[0] <= 0.0 {
        return None;
    }
    let mut r = vec![0.0; a.len()];
    r[0] = a[0].sqrt();
    for i in 1..a.len() {
        let s: f64 = (1..i).map(|j| r[j] * r[i - j]).sum();
        r[i] = (a[i] - s) / (2.0 * r[0]);
    }
    Some(r)
}

fn powi(a: &[f64], p: i64) -> Option<Series> {
    let k = a.len() - 1;
    let mut acc = constant(1.0, k);
    let mut base = a.to_vec();
    let mut e = p.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    if p < 0 {
        div(&constant(1.0, k), &acc)
    } else {
        Some(acc)
    }
}

/// Coefficients c₀..c_k of e(x₀ + s·scale) in powers of s, for a
/// one-variable expression; `None` where the expression is not analytic
/// (log or sqrt at a nonpositive value, abs at zero, division by zero).
pub fn taylor(e: &Expr, x0: f64, scale: f64, k: usize) -> Option<Vec<f64>> {
    let s = match e {
        Expr::Num(v) => constant(*v, k),
        Expr::Var(_) => {
            let mut s = constant(x0, k);
            if k >= 1 {
                s[1] = scale;
            }
            s
        }
        Expr::Neg(a) => taylor(a, x0, scale, k)?.into_iter().map(|v| -v).collect(),
        Expr::Add(a, b) => {
            let (a, b) = (taylor(a, x0, scale, k)?, taylor(b, x0, scale, k)?);
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        }
        Expr::Sub(a, b) => {
            let (a, b) = (taylor(a, x0, scale, k)?, taylor(b, x0, scale, k)?);
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        }
        Expr::Mul(a, b) => mul(&taylor(a, x0, scale, k)?, &taylor(b, x0, scale, k)?),
        Expr::Div(a, b) => div(&taylor(a, x0, scale, k)?, &taylor(b, x0, scale, k)?)?,
        Expr::Pow(a, b) => {
            let base = taylor(a, x0, scale, k)?;
            let ex = taylor(b, x0, scale, k)?;
            if ex[1..].iter().all(|&v| v == 0.0) && ex[0].fract() == 0.0 && ex[0].abs() <= 64.0 {
                powi(&base, ex[0] as i64)?
            } else {
                exp(&mul(&ex, &log(&base)?))
            }
        }
        Expr::Call(f, a) => {
            let a = taylor(a, x0, scale, k)?;
            match f {
                Func::Sin => sin_cos(&a).0,
                Func::Cos => sin_cos(&a).1,
                Func::Exp => exp(&a),
                Func::Log => log(&a)?,
                Func::Sqrt => sqrt(&a)?,
                Func::Abs => {
                    if a[0] > 0.0 {
                        a
                    } else if a[0] < 0.0 {
                        a.into_iter().map(|v| -v).collect()
                    } else {
                        return None;
                    }
                }
            }
        }
    };
    Some(s)
}
