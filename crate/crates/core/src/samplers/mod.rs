//! Exact and approximate samplers for the uniform measure on height
//! functions.
//!
//! [`enumerate`] lists a whole family and is the ground truth on tiny graphs.
//! [`TreeDp`] counts grounded functions on complete trees exactly.
//! [`mcmc_sample`] runs heat-bath Glauber dynamics for everything else.

mod enumerate;
mod io;
mod mcmc;
mod stats;
mod tree_dp;

pub use enumerate::{enumerate, EnumerationResult};
pub use io::{format_samples, parse_samples, SampleBatch};
pub use mcmc::{
    allowed_values, glauber_step, initial_state, mcmc_sample, run_chain, run_chains, transition_graph_connected,
    transition_probability, ChainState, McmcParams,
};
pub use stats::{empirical, split_rhat, tv_distance};
pub use tree_dp::{ln_big, tree_sample, tree_sample_with, uniform_below, TreeDp};
