//! Expression language and evaluable scalar fields.
//!
//! Grammar:
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! exponent := '-'? base
//! base     := number | ident | func '(' expr ')' | '(' expr ')'
//! ident    := 'x' digit+            (x1 .. xd)
//! func     := sin | cos | exp | log | abs | sqrt
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Abs => v.abs(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Zero-based variable index (`x1` is 0).
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                let base = a.eval(x);
                let p = b.eval(x);
                if p.fract() == 0.0 && p.abs() <= 64.0 {
                    base.powi(p as i32)
                } else {
                    base.powf(p)
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(x)),
        }
    }

    /// Largest variable index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(e) | Expr::Call(_, e) => e.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_prec(f, 3)
            }
            Expr::Add(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, " + ")?;
                b.write_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, " - ")?;
                b.write_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "*")?;
                b.write_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "/")?;
                b.write_prec(f, 3)
            }
            Expr::Pow(a, b) => {
                a.write_prec(f, 5)?;
                write!(f, "^")?;
                match b.as_ref() {
                    Expr::Neg(inner) if inner.prec() == 5 => {
                        write!(f, "-")?;
                        inner.write_prec(f, 5)
                    }
                    other => other.write_prec(f, 5),
                }
            }
            Expr::Call(func, e) => {
                write!(f, "{}(", func.name())?;
                e.write_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = if self.peek() == Some(b'-') {
                self.pos += 1;
                Expr::Neg(Box::new(self.base()?))
            } else {
                self.base()?
            };
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
                p += 1;
            }
            if p < s.len() && s[p].is_ascii_digit() {
                while p < s.len() && s[p].is_ascii_digit() {
                    p += 1;
                }
                self.pos = p;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => Err(Error::Syntax { pos: start, msg: format!("malformed number `{text}`") }),
        }
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        if let Some(func) = Func::from_name(&name) {
            self.expect(b'(')?;
            let arg = self.expr()?;
            if self.peek() == Some(b',') {
                let mut got = 1;
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    self.expr()?;
                    got += 1;
                }
                return Err(Error::Arity { name, expected: 1, got });
            }
            self.expect(b')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(k) = digits.parse::<usize>() {
                    if k >= 1 && k <= self.dim {
                        return Ok(Expr::Var(k - 1));
                    }
                }
            }
        }
        Err(Error::UnknownIdentifier(name))
    }
}

pub fn parse_expr(text: &str, dim: usize) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, dim };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Anything that can be evaluated at a point of R^dim.
pub trait Field: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;

    fn try_eval(&self, x: &[f64]) -> Result<f64> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(x.to_vec()))
        }
    }
}

/// Closure-backed field.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Field for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

impl<T: Field + ?Sized> Field for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: Field + ?Sized> Field for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

/// Values on a tensor grid, multilinearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl GridField {
    /// `values` are row-major with the last axis varying fastest.
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Invalid("grid needs at least one axis".into()));
        }
        for a in &axes {
            if a.len() < 2 || a.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid("grid axes must be strictly increasing with ≥ 2 knots".into()));
            }
        }
        let n: usize = axes.iter().map(Vec::len).product();
        if n != values.len() {
            return Err(Error::Dimension { expected: n, got: values.len() });
        }
        Ok(GridField { axes, values })
    }

    pub fn sample(f: &dyn Field, axes: Vec<Vec<f64>>) -> Result<Self> {
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut p = vec![0.0; axes.len()];
        for flat in 0..total {
            let mut rem = flat;
            for k in (0..axes.len()).rev() {
                p[k] = axes[k][rem % dims[k]];
                rem /= dims[k];
            }
            values.push(f.eval(&p));
        }
        GridField::new(axes, values)
    }

    fn interp(&self, x: &[f64]) -> f64 {
        let d = self.axes.len();
        let mut cell = Vec::with_capacity(d);
        for (k, a) in self.axes.iter().enumerate() {
            let v = x[k];
            let (lo, hi) = (a[0], a[a.len() - 1]);
            if !(lo..=hi).contains(&v) {
                return f64::NAN;
            }
            let i = match a.partition_point(|&t| t <= v) {
                0 => 0,
                j => (j - 1).min(a.len() - 2),
            };
            let w = (v - a[i]) / (a[i + 1] - a[i]);
            cell.push((i, w));
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << d) {
            let mut weight = 1.0;
            let mut flat = 0;
            for k in 0..d {
                let (i, w) = cell[k];
                let up = (corner >> k) & 1 == 1;
                weight *= if up { w } else { 1.0 - w };
                flat = flat * self.axes[k].len() + i + up as usize;
            }
            if weight != 0.0 {
                acc += weight * self.values[flat];
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Expr(Expr),
    Grid(GridField),
    /// `inner(M·y + c)`: a linear change of variables.
    Linear { inner: Box<ScalarField>, matrix: Vec<Vec<f64>>, offset: Vec<f64> },
}

/// Evaluable multivariate target function.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    dim: usize,
    body: Body,
}

impl ScalarField {
    pub fn from_expr(expr: Expr, dim: usize) -> Result<Self> {
        if expr.arity() > dim {
            return Err(Error::Dimension { expected: dim, got: expr.arity() });
        }
        Ok(ScalarField { dim, body: Body::Expr(expr) })
    }

    pub fn from_grid(grid: GridField) -> Self {
        ScalarField { dim: grid.axes.len(), body: Body::Grid(grid) }
    }

    /// `y ↦ self(M·y + c)`; `matrix` has `self.dim()` rows.
    pub fn compose_linear(&self, matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        if matrix.len() != self.dim || offset.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: matrix.len() });
        }
        let dim = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(ScalarField { dim, body: Body::Linear { inner: Box::new(self.clone()), matrix, offset } })
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr(e) => Some(e),
            _ => None,
        }
    }
}

impl Field for ScalarField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match &self.body {
            Body::Expr(e) => e.eval(x),
            Body::Grid(g) => g.interp(x),
            Body::Linear { inner, matrix, offset } => {
                let z: Vec<f64> = matrix
                    .iter()
                    .zip(offset)
                    .map(|(row, c)| row.iter().zip(x).fold(*c, |acc, (m, v)| acc + m * v))
                    .collect();
                inner.eval(&z)
            }
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Expr(e) => write!(f, "{e}"),
            Body::Grid(g) => write!(f, "<grid {:?}>", g.axes.iter().map(Vec::len).collect::<Vec<_>>()),
            Body::Linear { inner, .. } => write!(f, "<pullback of {inner}>"),
        }
    }
}

pub fn parse_expression(text: &str, dim: usize) -> Result<ScalarField> {
    ScalarField::from_expr(parse_expr(text, dim)?, dim)
}
