//! Ridge-function approximation toolkit.
//!
//! Exact combinatorics (fibers, cycles, representation solving, Calkin–Wilf
//! indexing) run on [`Rational`]; approximation numerics run on IEEE doubles,
//! with the scalar-agnostic pieces generic over [`Real`].
//!
//! Modules:
//! - [`expr`], [`geometry`], [`table`], [`quadrature`], [`oracle`]: shared plumbing
//! - [`cycles`]: fibers, cycle certificates, τ-closure, paths, orbits, representation
//! - [`uniform`]: best uniform approximation by two ridge functions
//! - [`l2`]: closed-form best L₂ approximation over r-sets
//! - [`bolts`]: rectangle/bolt functionals and polygon error formulas
//! - [`smooth`]: constructive smooth ridge decomposition in the plane
//! - [`sigmoid`]: the universal sigmoid and the two-neuron fitter

pub mod bolts;
pub mod cycles;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod l2;
pub mod oracle;
pub mod quadrature;
pub mod rational;
pub mod scalar;
pub mod sigmoid;
pub mod smooth;
pub mod table;
pub mod uniform;

pub use error::{Error, Result};
pub use expr::{parse_expression, Expr, Field, FnField, ScalarField};
pub use geometry::{DirectionSet, PointConfig};
pub use rational::Rational;
pub use scalar::Real;

/// Piecewise-linear table over doubles.
pub type Table = table::UnivariateTable<f64>;
/// Ridge sum over doubles.
pub type RidgeSum = table::RidgeSum<f64>;
/// Single-precision table, for callers that store large sampled ridge profiles.
pub type Table32 = table::UnivariateTable<f32>;
