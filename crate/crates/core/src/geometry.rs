use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Finite set of distinct points with exact coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    dim: usize,
    points: Vec<Vec<Rational>>,
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::Dimension { expected: dim, got: p.len() });
            }
        }
        let mut sorted: Vec<&Vec<Rational>> = points.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("points must be pairwise distinct".into()));
        }
        Ok(PointConfig { dim, points })
    }

    pub fn from_ints(dim: usize, points: &[&[i64]]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        PointConfig::new(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn point_f64(&self, i: usize) -> Vec<f64> {
        self.points[i].iter().map(to_f64).collect()
    }

    pub fn subset(&self, idx: &[usize]) -> PointConfig {
        PointConfig { dim: self.dim, points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// Tensor grid of the given axis values, last axis fastest.
    pub fn tensor_grid(axes: &[Vec<Rational>]) -> Result<Self> {
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let total: usize = dims.iter().product();
        let mut pts = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut p = vec![Rational::zero(); axes.len()];
            for k in (0..axes.len()).rev() {
                p[k] = axes[k][rem % dims[k]].clone();
                rem /= dims[k];
            }
            pts.push(p);
        }
        PointConfig::new(axes.len(), pts)
    }
}

/// Nonzero, pairwise linearly independent directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    directions: Vec<Vec<Rational>>,
}

impl DirectionSet {
    pub fn new(dim: usize, directions: Vec<Vec<Rational>>) -> Result<Self> {
        for d in &directions {
            if d.len() != dim {
                return Err(Error::Dimension { expected: dim, got: d.len() });
            }
            if d.iter().all(Zero::is_zero) {
                return Err(Error::Invalid("zero direction".into()));
            }
        }
        for i in 0..directions.len() {
            for j in i + 1..directions.len() {
                if proportional(&directions[i], &directions[j]) {
                    return Err(Error::DependentDirections(i, j));
                }
            }
        }
        Ok(DirectionSet { dim, directions })
    }

    pub fn from_ints(dim: usize, dirs: &[&[i64]]) -> Result<Self> {
        let ds = dirs
            .iter()
            .map(|p| p.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        DirectionSet::new(dim, ds)
    }

    /// The d coordinate directions.
    pub fn coordinate(dim: usize) -> Self {
        let ds = (0..dim)
            .map(|i| (0..dim).map(|j| Rational::from_integer(((i == j) as i64).into())).collect())
            .collect();
        DirectionSet { dim, directions: ds }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<Rational>] {
        &self.directions
    }

    pub fn direction_f64(&self, i: usize) -> Vec<f64> {
        self.directions[i].iter().map(to_f64).collect()
    }
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

pub fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).fold(Rational::zero(), |acc, (u, v)| acc + u * v)
}

pub fn dot_f64(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(u, v)| u * v).sum()
}
