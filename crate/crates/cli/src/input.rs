//! Input files, the inputs digest, and the error split between usage and
//! domain failures.

use std::fmt;
use std::path::Path;

use ridgekit::rational::parse_rational;
use ridgekit::{Error, Rational};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const GRAMMAR: &str = "expression grammar: numbers, variables x1..xd, + - * / ^, parentheses, \
and the functions sin cos exp log abs sqrt (e.g. \"x1*x2 + sin(3.14159*x1)\")";

#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or malformed input; exit code 2.
    Usage(String),
    /// The inputs are fine but the mathematics says no; exit code 1.
    Domain(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::UnknownIdentifier(_) | Error::Arity { .. } => {
                Failure::Usage(format!("{e}\n{GRAMMAR}"))
            }
            Error::Invalid(_) | Error::Dimension { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Reads input files and folds them, with the argument vector, into a
/// SHA-256 digest.
pub struct Ctx {
    hasher: Sha256,
}

impl Ctx {
    pub fn new(argv: &[String]) -> Self {
        let mut hasher = Sha256::new();
        for a in argv {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
        }
        Ctx { hasher }
    }

    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>, Failure> {
        let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        Ok(bytes)
    }

    /// A CSV of exact numbers: no header, `#` comments, equal row widths.
    pub fn rational_rows(&mut self, path: &Path) -> Result<Vec<Vec<Rational>>, Failure> {
        let bytes = self.read(path)?;
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(bytes.as_slice());
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let row = rec
                .iter()
                .map(|cell| parse_rational(cell).map_err(|e| usage(format!("{} row {}: {e}", path.display(), i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() || rows[0].is_empty() {
            return Err(usage(format!("{}: no data rows", path.display())));
        }
        Ok(rows)
    }

    pub fn json(&mut self, path: &Path) -> Result<Value, Failure> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// Parses decimal or `p/q` text exactly.
pub fn exact(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(Failure::from)
}

/// A JSON number or numeric string, exactly.
pub fn json_exact(v: &Value) -> Result<Rational, Failure> {
    match v {
        Value::Number(n) => exact(&n.to_string()),
        Value::String(s) => exact(s),
        other => Err(usage(format!("expected a number, got {other}"))),
    }
}

pub fn json_numbers(obj: &Value, key: &str) -> Result<Vec<f64>, Failure> {
    let arr = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| usage(format!("geometry needs an array `{key}`")))?;
    arr.iter().map(|v| Ok(ridgekit::rational::to_f64(&json_exact(v)?))).collect()
}

/// Rationals as JSON: integers that fit become numbers, the rest strings.
pub fn rational_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return Value::from(i);
        }
    }
    Value::String(r.to_string())
}

pub fn table_json(t: &ridgekit::Table) -> Value {
    serde_json::json!({ "knots": t.knots(), "values": t.values() })
}
