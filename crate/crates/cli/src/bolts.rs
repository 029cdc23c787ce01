use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ridgekit::bolts::{
    class_best, class_check, golomb_lower_bound, grid_lp_error, polygon_error, sharp_bounds, AxisPolygon, AxisRect,
    ClassKind, Hexagon, Octagon, OctagonVariant, StairPolygon, CHECK_GRID,
};
use ridgekit::{parse_expression, PointConfig};
use serde_json::{json, Map, Value};

use crate::input::{json_numbers, table_json, usage, Ctx, Failure};
use crate::report::Outcome;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Shape {
    Rect,
    Hexagon,
    #[value(name = "octagonA")]
    OctagonA,
    #[value(name = "octagonB")]
    OctagonB,
    Stairs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassArg {
    #[value(name = "V")]
    V,
    #[value(name = "U")]
    U,
}

#[derive(Debug, Args)]
pub struct BoltsArgs {
    shape: Shape,
    /// f(x1, x2).
    #[arg(long)]
    expr: String,
    /// JSON geometry: {"x": [..], "y": [..]} for rect, {"a": [..], "b": [..]} otherwise.
    #[arg(long)]
    geom: PathBuf,
    /// Extremal element for the class V_c(R) or U_c(R) (rect only).
    #[arg(long, requires = "c")]
    class: Option<ClassArg>,
    /// The split abscissa c of the class.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Two-sided estimate from the mixed derivative (hexagon only).
    #[arg(long)]
    bounds: bool,
    /// CSV grid of points for the projection-cycle lower bound.
    #[arg(long)]
    golomb: Option<PathBuf>,
    /// Largest cycle support examined by --golomb.
    #[arg(long, default_value_t = 8)]
    cap: usize,
    /// Grid intervals per axis for the membership check and the LP.
    #[arg(long, default_value_t = CHECK_GRID)]
    grid: usize,
}

fn fixed<const N: usize>(v: Vec<f64>, key: &str) -> Result<[f64; N], Failure> {
    v.try_into().map_err(|_| usage(format!("geometry `{key}` needs {N} entries")))
}

fn polygon(shape: Shape, g: &Value) -> Result<AxisPolygon, Failure> {
    Ok(match shape {
        Shape::Rect => {
            let [x0, x1] = fixed(json_numbers(g, "x")?, "x")?;
            let [y0, y1] = fixed(json_numbers(g, "y")?, "y")?;
            AxisPolygon::Rect(AxisRect::new((x0, x1), (y0, y1))?)
        }
        Shape::Hexagon => AxisPolygon::Hexagon(Hexagon::new(fixed(json_numbers(g, "a")?, "a")?, fixed(json_numbers(g, "b")?, "b")?)?),
        Shape::OctagonA | Shape::OctagonB => {
            let o = Octagon::new(fixed(json_numbers(g, "a")?, "a")?, fixed(json_numbers(g, "b")?, "b")?)?;
            AxisPolygon::Octagon(o, if matches!(shape, Shape::OctagonA) { OctagonVariant::A } else { OctagonVariant::B })
        }
        Shape::Stairs => AxisPolygon::Stairs(StairPolygon::new(json_numbers(g, "a")?, json_numbers(g, "b")?)?),
    })
}

pub fn run(args: &BoltsArgs, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let geom = ctx.json(&args.geom)?;
    let poly = polygon(args.shape, &geom)?;
    let f = parse_expression(&args.expr, 2)?;
    let rep = polygon_error(&f, &poly, args.grid)?;
    // The e-bolt maximum is only proven to be the error on M; the LP value
    // is always shown next to it.
    let lp = match rep.lp_error {
        Some(v) => v,
        None => grid_lp_error(&f, &poly, args.grid)?,
    };
    let ebolts = poly.ebolts()?;
    let bolts: Vec<Value> = ebolts
        .iter()
        .zip(&rep.values)
        .map(|(b, (name, v))| json!({"name": name, "value": v, "points": b.bolt.points()}))
        .collect();
    let mut res = Map::new();
    res.insert("error".into(), rep.error.into());
    res.insert("bolt_max".into(), rep.bolt_max.into());
    res.insert("lp_value".into(), lp.into());
    res.insert("argmax".into(), rep.argmax.name.clone().into());
    res.insert("membership".into(), serde_json::to_value(rep.membership).expect("serializable"));
    if let Some(w) = &rep.warning {
        res.insert("warning".into(), w.clone().into());
    }
    res.insert("bolts".into(), bolts.into());

    let mut failure = None;
    if let Some(class) = args.class {
        let AxisPolygon::Rect(rect) = poly else {
            return Err(usage("--class applies to rect only"));
        };
        let c = args.c.ok_or_else(|| usage("--class needs --c"))?;
        let kind = match class {
            ClassArg::V => ClassKind::V,
            ClassArg::U => ClassKind::U,
        };
        let verdict = class_check(&f, &rect, c, kind, args.grid)?;
        let mut ext = Map::new();
        ext.insert("class".into(), serde_json::to_value(kind).expect("serializable"));
        ext.insert("verdict".into(), serde_json::to_value(verdict).expect("serializable"));
        if verdict.pass {
            let best = class_best(&f, &rect, c, kind)?;
            ext.insert("error".into(), best.error.into());
            ext.insert("y0".into(), best.y0.into());
            ext.insert("phi_table".into(), table_json(&best.phi_table(65)?));
            ext.insert("psi_table".into(), table_json(&best.psi_table(65)?));
        } else {
            failure = Some(format!("f is not in the class {class:?}_c(R) for c = {c}"));
        }
        res.insert("extremal".into(), Value::Object(ext));
    }
    if args.bounds {
        let AxisPolygon::Hexagon(h) = poly else {
            return Err(usage("--bounds applies to hexagon only"));
        };
        res.insert("bounds".into(), serde_json::to_value(sharp_bounds(&f, &h, args.grid)?).expect("serializable"));
    }
    if let Some(path) = &args.golomb {
        let pts = ctx.rational_rows(path)?;
        let grid = PointConfig::new(pts[0].len(), pts)?;
        let g = golomb_lower_bound(&f, &grid, args.cap)?;
        res.insert("golomb".into(), serde_json::to_value(g).expect("serializable"));
    }
    Ok(Outcome { results: Value::Object(res), failure, csv: None })
}
