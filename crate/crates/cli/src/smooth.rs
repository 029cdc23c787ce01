use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use ridgekit::bolts::AxisRect;
use ridgekit::rational::to_f64;
use ridgekit::smooth::{convergence_study, crosscheck_highorder, decompose, loglog_slope, DecompOptions, DecompProblem};
use ridgekit::{parse_expression, Field};
use serde_json::{json, Map, Value};

use crate::input::{usage, Ctx, Failure};
use crate::report::Outcome;

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// f(x1, x2), assumed to be a sum of ridge functions in the given directions.
    #[arg(long)]
    expr: String,
    /// CSV of the n directions (a, b), one per row.
    #[arg(long)]
    dirs: PathBuf,
    /// Smoothness s of f.
    #[arg(long)]
    order: usize,
    /// x0 x1 y0 y1.
    #[arg(long = "box", num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true, required = true)]
    bbox: Vec<f64>,
    /// Also run the high-order cross-check (needs s ≥ n − 1).
    #[arg(long)]
    crosscheck: bool,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long, default_value_t = 401)]
    knots: usize,
    #[arg(long, num_args = 2, value_names = ["AX", "AY"], allow_negative_numbers = true)]
    anchor: Option<Vec<f64>>,
    /// Finite-difference steps for a convergence study.
    #[arg(long, num_args = 1..)]
    convergence: Option<Vec<f64>>,
    #[arg(long, default_value_t = 41)]
    verify_grid: usize,
}

pub fn decompose_cmd(args: &DecomposeArgs, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let rows = ctx.rational_rows(&args.dirs)?;
    if rows[0].len() != 2 {
        return Err(usage("directions must have two components"));
    }
    let dirs: Vec<[f64; 2]> = rows.iter().map(|r| [to_f64(&r[0]), to_f64(&r[1])]).collect();
    let bbox = AxisRect::new((args.bbox[0], args.bbox[1]), (args.bbox[2], args.bbox[3]))?;
    let f = parse_expression(&args.expr, 2)?;
    let problem = DecompProblem::new(f.clone(), dirs, args.order, bbox)?;
    // The residual is reported, not judged.
    let opts = DecompOptions {
        fd_step: args.fd_step,
        knots: args.knots,
        verify_grid: args.verify_grid,
        anchor: args.anchor.as_ref().map(|a| [a[0], a[1]]),
        tol: f64::INFINITY,
    };
    let r = decompose(&problem, &opts)?;
    let mut csv = String::from("term,t,g\n");
    let tables: Vec<Value> = r
        .directions
        .iter()
        .zip(&r.tables)
        .enumerate()
        .map(|(i, (a, t))| {
            for (x, v) in t.knots().iter().zip(t.values()) {
                let _ = writeln!(csv, "{},{x},{v}", i + 1);
            }
            json!({"direction": a, "knots": t.knots(), "values": t.values()})
        })
        .collect();
    let mut res = Map::new();
    res.insert("g_tables".into(), tables.into());
    res.insert("residual".into(), r.residual.into());
    res.insert("fd_step".into(), r.fd_step.into());
    res.insert("anchor".into(), json!(r.anchor));
    if args.crosscheck {
        let x = crosscheck_highorder(&problem, &opts)?;
        let m = args.verify_grid.max(2) - 1;
        let mut diff = 0.0f64;
        for i in 0..=m {
            for j in 0..=m {
                let p = [
                    bbox.x.0 + (bbox.x.1 - bbox.x.0) * i as f64 / m as f64,
                    bbox.y.0 + (bbox.y.1 - bbox.y.0) * j as f64 / m as f64,
                ];
                diff = diff.max((x.eval(&p) - r.eval(&p)).abs());
            }
        }
        res.insert("crosscheck".into(), json!({"residual": x.residual, "fd_step": x.fd_step, "max_difference": diff}));
    }
    if let Some(steps) = &args.convergence {
        let pts = convergence_study(&problem, steps, &opts)?;
        res.insert("convergence_study".into(), json!({"points": pts, "slope": loglog_slope(&pts)}));
    }
    Ok(Outcome::ok(Value::Object(res)).with_csv(csv))
}
