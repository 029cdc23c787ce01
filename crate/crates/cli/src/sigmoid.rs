use std::fmt::Write as _;

use clap::Args;
use ridgekit::parse_expression;
use ridgekit::rational::from_f64_exact;
use ridgekit::sigmoid::{fit_two_neuron, sigma, SigmoidParams};
use ridgekit::Rational;
use serde_json::{json, Value};

use crate::input::{rational_json, usage, Ctx, Failure};
use crate::report::Outcome;

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    d: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
    x: Vec<f64>,
}

pub fn eval(args: &EvalArgs, _ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let p = SigmoidParams::new(args.d, args.lambda)?;
    let vals = args.x.iter().map(|&x| sigma(x, &p)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("x,sigma\n");
    for (x, v) in args.x.iter().zip(&vals) {
        let _ = writeln!(csv, "{x},{v}");
    }
    let results = match vals.as_slice() {
        [v] => json!({"sigma": v}),
        _ => json!({"x": args.x, "sigma": vals}),
    };
    Ok(Outcome::ok(results).with_csv(csv))
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2.0)]
    d: f64,
    #[arg(long, default_value_t = 0.25)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    from: f64,
    /// Exclusive upper end.
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 0.4)]
    step: f64,
    /// Column pairs (t, σ) per row; values run down the columns.
    #[arg(long, default_value_t = 5)]
    columns: usize,
}

pub fn table(args: &TableArgs, _ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let p = SigmoidParams::new(args.d, args.lambda)?;
    if !(args.step > 0.0) || !(args.to > args.from) || args.columns == 0 {
        return Err(usage("table needs step > 0, to > from and at least one column"));
    }
    let count = ((args.to - args.from) / args.step - 1e-9).ceil() as usize;
    let xs: Vec<f64> = (0..count).map(|i| args.from + args.step * i as f64).collect();
    let vals = xs.iter().map(|&x| sigma(x, &p)).collect::<Result<Vec<_>, _>>()?;
    let rows = count.div_ceil(args.columns);
    let mut csv = vec!["t,sigma"; args.columns].join(",");
    csv.push('\n');
    for r in 0..rows {
        let cells: Vec<String> = (0..args.columns)
            .filter_map(|c| {
                let i = c * rows + r;
                (i < count).then(|| format!("{:.1},{:.5}", xs[i], vals[i]))
            })
            .collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    Ok(Outcome::ok(json!({"x": xs, "sigma": vals})).with_csv(csv))
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// f(x1) on the interval.
    #[arg(long)]
    expr: String,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, required = true)]
    interval: Vec<f64>,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.25)]
    lambda: f64,
}

pub fn fit(args: &FitArgs, _ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let f = parse_expression(&args.expr, 1)?;
    let (a, b) = (args.interval[0], args.interval[1]);
    let rep = fit_two_neuron(&f, a, b, args.eps, args.lambda)?;
    let pr = &rep.params;
    let (ra, rb) = (from_f64_exact(a)?, from_f64_exact(b)?);
    let k: Rational = (&rb - &ra) * Rational::from_integer(2.into());
    let t1 = pr.theta1();
    let decimal = if t1.is_finite() && t1.abs() < 1e15 { Value::from(t1) } else { Value::from(pr.theta1_sci(6)) };
    let results = json!({
        "c1": pr.c1,
        "c2": pr.c2,
        "theta1": {"decimal": decimal, "exact": format!("{rb} - {k}*n")},
        "theta2": pr.theta2(),
        "n": pr.n.to_string(),
        "achieved_error": rep.achieved_error,
        "method": rep.method,
        "poly": rep.poly.iter().map(rational_json).collect::<Vec<_>>(),
        "d": pr.sigma.d,
        "lambda": pr.sigma.lambda,
    });
    Ok(Outcome::ok(results))
}
