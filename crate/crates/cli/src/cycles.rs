use std::path::PathBuf;

use clap::Args;
use num_traits::Zero;
use ridgekit::cycles::{has_cycle, minimal_cycles, orbits, solve_representation, tau_closure, CycleCertificate, Projection};
use ridgekit::{DirectionSet, PointConfig, Rational};
use serde_json::{json, Map, Value};

use crate::input::{rational_json, usage, Ctx, Failure};
use crate::report::Outcome;

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// CSV of points, one per row.
    #[arg(long)]
    points: PathBuf,
    /// CSV of directions, one per row.
    #[arg(long)]
    directions: PathBuf,
    /// List all minimal cycles instead of one certificate.
    #[arg(long)]
    minimal: bool,
    /// Largest support examined by --minimal.
    #[arg(long, default_value_t = 10)]
    cap: usize,
    /// Report the iterates of τ.
    #[arg(long)]
    tau: bool,
    /// Single-column CSV of f values at the points; solves for the ridge functions.
    #[arg(long)]
    solve: Option<PathBuf>,
    /// Index of the point where g₁..g_{r−1} are pinned to 0.
    #[arg(long, default_value_t = 0)]
    anchor: usize,
}

fn certificate_json(c: &CycleCertificate, points: &PointConfig) -> Value {
    json!({
        "support": c.support,
        "weights": c.weights.iter().map(|w| rational_json(&Rational::from_integer(w.clone()))).collect::<Vec<_>>(),
        "points": c.support.iter().map(|&i| points.point(i).iter().map(rational_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn check(args: &CheckArgs, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let pts = ctx.rational_rows(&args.points)?;
    let dirs = ctx.rational_rows(&args.directions)?;
    let dim = pts[0].len();
    if dirs[0].len() != dim {
        return Err(usage(format!("points have {dim} coordinates but directions have {}", dirs[0].len())));
    }
    let points = PointConfig::new(dim, pts)?;
    let ds = DirectionSet::new(dim, dirs)?;
    let h = Projection::from_directions(&ds);
    let cert = has_cycle(&points, &h)?;

    let mut res = Map::new();
    res.insert("n_points".into(), points.len().into());
    res.insert("has_cycle".into(), cert.is_some().into());
    let certificates: Vec<Value> = if args.minimal {
        let found = minimal_cycles(&points, &h, args.cap)?;
        res.insert("minimal_complete".into(), found.complete.into());
        found.cycles.iter().map(|c| certificate_json(c, &points)).collect()
    } else {
        cert.iter().map(|c| certificate_json(c, &points)).collect()
    };
    res.insert("certificates".into(), certificates.into());
    if args.tau {
        let trace = tau_closure(&points, &ds)?;
        res.insert("tau_trace".into(), serde_json::to_value(&trace).expect("serializable"));
    }
    if ds.len() == 2 {
        let orb = orbits(&points, &ds.directions()[0], &ds.directions()[1])?;
        res.insert("orbits".into(), serde_json::to_value(&orb).expect("serializable"));
    }
    let mut failure = cert.as_ref().map(|_| "the point set contains a cycle".to_string());
    if let Some(path) = &args.solve {
        let rows = ctx.rational_rows(path)?;
        if rows.iter().any(|r| r.len() != 1) || rows.len() != points.len() {
            return Err(usage(format!("{} must hold one value per point ({} rows)", path.display(), points.len())));
        }
        if args.anchor >= points.len() {
            return Err(usage(format!("anchor {} out of range", args.anchor)));
        }
        let f: Vec<Rational> = rows.into_iter().map(|mut r| r.remove(0)).collect();
        let zeros = vec![Rational::zero(); h.len().saturating_sub(1)];
        match solve_representation(&points, &h, &f, args.anchor, &zeros) {
            Ok(rep) => {
                let tables: Vec<Vec<[Value; 2]>> = rep
                    .tables
                    .iter()
                    .map(|t| t.iter().map(|(k, v)| [rational_json(k), rational_json(v)]).collect())
                    .collect();
                let under: Vec<Value> =
                    rep.underdetermined.iter().map(|(i, k)| json!({"function": i, "at": rational_json(k)})).collect();
                res.insert("representation".into(), json!({"tables": tables, "underdetermined": under}));
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    Ok(Outcome { results: Value::Object(res), failure, csv: None })
}
