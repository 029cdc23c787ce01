use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use ridgekit::l2::{best_l2, build_rset, L2Options, XDescription};
use ridgekit::oracle::grid_minimax_solution;
use ridgekit::rational::to_f64;
use ridgekit::uniform::{best_uniform, diliberto_straus, verify_extremal, ParallelogramDomain};
use ridgekit::{parse_expression, DirectionSet, Error, PointConfig, Rational, ScalarField};
use serde_json::{json, Value};

use crate::input::{exact, json_exact, table_json, usage, Ctx, Failure};
use crate::report::Outcome;

#[derive(Debug, Args)]
pub struct UniformArgs {
    /// f(x1, x2).
    #[arg(long)]
    expr: String,
    /// The two directions a = (a1x, a1y) and b = (b1x, b1y).
    #[arg(long, num_args = 4, value_names = ["A1X", "A1Y", "B1X", "B1Y"], allow_negative_numbers = true, required = true)]
    dirs: Vec<String>,
    /// c1 ≤ a·x ≤ d1 and c2 ≤ b·x ≤ d2.
    #[arg(long, num_args = 4, value_names = ["C1", "D1", "C2", "D2"], allow_negative_numbers = true, required = true)]
    bounds: Vec<String>,
    /// Search for an alternating closed path of the residual on the grid.
    #[arg(long)]
    verify: bool,
    /// Run this many Diliberto–Straus sweeps and report the norms.
    #[arg(long)]
    ds_iters: Option<usize>,
    /// Knots of the returned g tables.
    #[arg(long, default_value_t = 65)]
    knots: usize,
    /// Grid intervals per axis for --verify, --ds-iters and the fallback LP.
    #[arg(long, default_value_t = 40)]
    grid: usize,
}

fn pair_csv(g1: (&[f64], &[f64]), g2: (&[f64], &[f64])) -> String {
    let mut s = String::from("component,y,g\n");
    for (name, (ys, vs)) in [("g1", g1), ("g2", g2)] {
        for (y, v) in ys.iter().zip(vs) {
            let _ = writeln!(s, "{name},{y},{v}");
        }
    }
    s
}

/// The (grid+1)² lattice aligned with both directions, in exact x-coordinates.
fn aligned_grid(a: &[Rational; 2], b: &[Rational; 2], lo: [Rational; 2], hi: [Rational; 2], n: usize) -> Result<PointConfig, Failure> {
    let det = &a[0] * &b[1] - &a[1] * &b[0];
    let nn = Rational::from_integer(n.into());
    let mut pts = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let y1 = &lo[0] + (&hi[0] - &lo[0]) * Rational::from_integer(i.into()) / &nn;
        for j in 0..=n {
            let y2 = &lo[1] + (&hi[1] - &lo[1]) * Rational::from_integer(j.into()) / &nn;
            let x0 = (&b[1] * &y1 - &a[1] * &y2) / &det;
            let x1 = (&a[0] * &y2 - &b[0] * &y1) / &det;
            pts.push(vec![x0, x1]);
        }
    }
    Ok(PointConfig::new(2, pts)?)
}

pub fn uniform(args: &UniformArgs, _ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let f = parse_expression(&args.expr, 2)?;
    let d: Vec<Rational> = args.dirs.iter().map(|s| exact(s)).collect::<Result<_, _>>()?;
    let bd: Vec<Rational> = args.bounds.iter().map(|s| exact(s)).collect::<Result<_, _>>()?;
    let df: Vec<f64> = d.iter().map(to_f64).collect();
    let bf: Vec<f64> = bd.iter().map(to_f64).collect();
    let dom = ParallelogramDomain::new([df[0], df[1]], [df[2], df[3]], (bf[0], bf[1]), (bf[2], bf[3]))?;
    let mut res = serde_json::Map::new();
    res.insert("domain".into(), serde_json::to_value(dom).expect("serializable"));
    let csv;
    match best_uniform(&f, &dom) {
        Ok(pair) => {
            let (g1, g2) = (pair.g1_table(args.knots)?, pair.g2_table(args.knots)?);
            res.insert("method".into(), "closed_form".into());
            res.insert("error".into(), pair.error.into());
            res.insert("g1_table".into(), table_json(&g1));
            res.insert("g2_table".into(), table_json(&g2));
            if args.verify {
                let v = verify_extremal(&f, &pair, &dom, args.grid, 1e-9 * (1.0 + pair.error))?;
                res.insert("witness_path".into(), serde_json::to_value(&v).expect("serializable"));
            }
            csv = pair_csv((g1.knots(), g1.values()), (g2.knots(), g2.values()));
        }
        Err(Error::Hypothesis(why)) => {
            let grid = aligned_grid(&[d[0].clone(), d[1].clone()], &[d[2].clone(), d[3].clone()], [bd[0].clone(), bd[2].clone()], [bd[1].clone(), bd[3].clone()], args.grid)?;
            let dirs = DirectionSet::new(2, vec![d[..2].to_vec(), d[2..].to_vec()])?;
            let sol = grid_minimax_solution(&f, &dirs, &grid)?;
            let split = |p: &Vec<(f64, f64)>| -> (Vec<f64>, Vec<f64>) { p.iter().copied().unzip() };
            let (y1, v1) = split(&sol.profiles[0]);
            let (y2, v2) = split(&sol.profiles[1]);
            res.insert("method".into(), "numerical (no closed form)".into());
            res.insert("hypothesis".into(), why.into());
            res.insert("error".into(), sol.error.into());
            res.insert("g1_table".into(), json!({"knots": y1, "values": v1}));
            res.insert("g2_table".into(), json!({"knots": y2, "values": v2}));
            csv = pair_csv((&y1, &v1), (&y2, &v2));
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(iters) = args.ds_iters {
        let ds = diliberto_straus(&f, &dom, args.grid, iters)?;
        res.insert("ds_norms".into(), ds.norms.into());
    }
    Ok(Outcome::ok(Value::Object(res)).with_csv(csv))
}

#[derive(Debug, Args)]
pub struct L2Args {
    /// f(x1, .., xd).
    #[arg(long)]
    expr: String,
    /// CSV of the r ridge directions, one per row.
    #[arg(long)]
    dirs_file: PathBuf,
    /// CSV of d − r rows completing the directions to a basis.
    #[arg(long)]
    completion_file: Option<PathBuf>,
    /// JSON array of [lo, hi] pairs bounding y = Jx, ridge coordinates first.
    #[arg(long)]
    ybox: PathBuf,
    /// Weight functions w1..wr, one expression each.
    #[arg(long, num_args = 1..)]
    weights: Vec<String>,
    /// Gauss–Legendre nodes per panel and axis.
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    #[arg(long, default_value_t = 1)]
    panels: usize,
    /// Knots of the returned component tables.
    #[arg(long, default_value_t = 65)]
    knots: usize,
}

pub fn l2(args: &L2Args, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let dirs = ctx.rational_rows(&args.dirs_file)?;
    let dim = dirs[0].len();
    let completion = match &args.completion_file {
        Some(p) => ctx.rational_rows(p)?,
        None => Vec::new(),
    };
    let ybox = ctx.json(&args.ybox)?;
    let pairs = ybox.as_array().ok_or_else(|| usage("--ybox must be a JSON array of [lo, hi] pairs"))?;
    let bounds = pairs
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([lo, hi]) => Ok((json_exact(lo)?, json_exact(hi)?)),
            _ => Err(usage("--ybox entries must be [lo, hi] pairs")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = parse_expression(&args.expr, dim)?;
    let ds = DirectionSet::new(dim, dirs)?;
    let t = build_rset(&ds, &completion, &XDescription::YBox(bounds))?;
    let weights: Vec<ScalarField> = args.weights.iter().map(|w| parse_expression(w, dim)).collect::<Result<_, _>>()?;
    if !weights.is_empty() && weights.len() != ds.len() {
        return Err(usage(format!("{} weights for {} directions", weights.len(), ds.len())));
    }
    let opts = L2Options { nodes: args.nodes, panels: args.panels, knots: args.knots, ..L2Options::default() };
    let sol = best_l2(&f, &t, (!weights.is_empty()).then_some(weights.as_slice()), &opts)?;
    let mut csv = String::from("component,y,g\n");
    let components: Vec<Value> = sol
        .components
        .iter()
        .enumerate()
        .map(|(i, g)| {
            for (y, v) in g.knots().iter().zip(g.values()) {
                let _ = writeln!(csv, "{},{y},{v}", i + 1);
            }
            json!({"direction": ds.direction_f64(i), "knots": g.knots(), "values": g.values()})
        })
        .collect();
    let results = json!({
        "error": sol.error,
        "components": components,
        "diagnostics": sol.diagnostics,
    });
    Ok(Outcome::ok(results).with_csv(csv))
}
