//! A fixed smooth sigmoid σ for which two neurons approximate any
//! continuous function on an interval, and a constructive fitter.

mod enumeration;
mod fit;
mod sigma;
mod taylor;

pub use enumeration::{
    calkin_wilf, calkin_wilf_iter, cw_index, cw_index_bits, monic_enum, monic_index, monic_index_bits,
    rational_enum, rational_index, MonicPoly, MAX_INDEX_BITS,
};
pub use fit::{eval_network, fit_two_neuron, FitReport, NetworkParams, PolyMethod, MAX_DEGREE};
pub use sigma::{beta, beta_hat, sigma, sigma_segment, SigmoidParams};
