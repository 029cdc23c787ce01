//! Gauss–Legendre rules and tensor-product integration.

use crate::error::{Error, Result};
use crate::expr::Field;
use crate::scalar::Real;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize(n).expect("usize");
    let pi = T::lit(std::f64::consts::PI);
    let tol = T::epsilon() * T::lit(4.0);
    for i in 0..n.div_ceil(2) {
        let fi = T::from_usize(i).expect("usize");
        let mut x = (pi * (fi + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and its derivative.
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::from_usize(k).expect("usize");
                let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Nudge the middle weight so the weights sum to exactly 2 in summation
    // order; constants then integrate exactly.
    let two = T::lit(2.0);
    for _ in 0..4 {
        let s = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        if s == two {
            break;
        }
        weights[n / 2] += two - s;
    }
    (nodes, weights)
}

/// Composite rule on [lo, hi]: `panels` equal panels of `n` nodes each.
pub fn composite_rule<T: Real>(lo: T, hi: T, n: usize, panels: usize) -> (Vec<T>, Vec<T>) {
    let (gx, gw) = gauss_legendre::<T>(n);
    let h = (hi - lo) / T::from_usize(panels).expect("usize");
    let half = h / T::lit(2.0);
    let mut xs = Vec::with_capacity(n * panels);
    let mut ws = Vec::with_capacity(n * panels);
    for p in 0..panels {
        let mid = lo + h * (T::from_usize(p).expect("usize") + T::lit(0.5));
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(mid + half * *x);
            ws.push(half * *w);
        }
    }
    (xs, ws)
}

pub fn integrate_1d<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, n: usize, panels: usize) -> T {
    let (xs, ws) = composite_rule(lo, hi, n, panels);
    xs.iter().zip(&ws).fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
}

/// Tensor product of per-axis rules over a box, as nested sums with the
/// last axis innermost.
pub fn tensor_integrate(f: &dyn Fn(&[f64]) -> f64, rules: &[(Vec<f64>, Vec<f64>)]) -> Result<f64> {
    fn nest(f: &dyn Fn(&[f64]) -> f64, rules: &[(Vec<f64>, Vec<f64>)], p: &mut Vec<f64>) -> Result<f64> {
        let k = p.len();
        if k == rules.len() {
            let v = f(p);
            return if v.is_finite() { Ok(v) } else { Err(Error::Evaluation(p.clone())) };
        }
        let mut acc = 0.0;
        for (&x, &w) in rules[k].0.iter().zip(&rules[k].1) {
            p.push(x);
            acc += w * nest(f, rules, p)?;
            p.pop();
        }
        Ok(acc)
    }
    nest(f, rules, &mut Vec::with_capacity(rules.len()))
}

/// ∫ f over `bx` with `nodes_per_axis` Gauss–Legendre nodes on each axis.
pub fn tensor_quadrature(f: &dyn Field, bx: &[(f64, f64)], nodes_per_axis: usize) -> Result<f64> {
    if nodes_per_axis < 2 {
        return Err(Error::Invalid("nodes_per_axis must be ≥ 2".into()));
    }
    if bx.len() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: bx.len() });
    }
    if bx.iter().any(|(lo, hi)| !(lo < hi)) {
        return Err(Error::Invalid("box needs lo < hi on every axis".into()));
    }
    let rules: Vec<_> = bx.iter().map(|&(lo, hi)| composite_rule(lo, hi, nodes_per_axis, 1)).collect();
    tensor_integrate(&|x| f.eval(x), &rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, FnField};

    #[test]
    fn rule_is_exact_to_degree_2n_minus_1() {
        for n in 1..12 {
            let (x, w) = gauss_legendre::<f64>(n);
            for deg in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn f32_rule() {
        let (x, w) = gauss_legendre::<f32>(5);
        let s: f32 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn spec_quadrature_examples() {
        let one = FnField::new(2, |_: &[f64]| 1.0);
        assert_eq!(tensor_quadrature(&one, &[(0.0, 1.0), (0.0, 1.0)], 3).unwrap(), 1.0);
        let f = parse_expression("x1*x2*x3*x4", 4).unwrap();
        let unit = [(0.0, 1.0); 4];
        assert!((tensor_quadrature(&f, &unit, 4).unwrap() - 1.0 / 16.0).abs() < 1e-12);
        let g = parse_expression("(x1*x2*x3*x4)^2", 4).unwrap();
        assert!((tensor_quadrature(&g, &unit, 4).unwrap() - 1.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn evaluation_failure_is_reported() {
        let f = parse_expression("log(x1)", 1).unwrap();
        assert!(tensor_quadrature(&f, &[(-1.0, 1.0)], 4).is_err());
    }
}
