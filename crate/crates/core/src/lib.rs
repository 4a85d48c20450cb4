//! Exact and asymptotic statistics of the optimal stopping time for the
//! full-information sequential selection problem.
//!
//! An observer sees iid draws y_1, ..., y_N from a known distribution and
//! must stop on one of them, collecting the stopped value as reward. The
//! optimal rule stops at the first index m with y_m >= v_{N-m}, where the
//! thresholds v_n come from the backward-induction recurrence
//! v_{n+1} = v_n + integral of the survival function above v_n.
//!
//! This crate computes, for a zoo of continuous families plus the geometric
//! distribution:
//!
//! - the exact threshold sequence v_1..v_N ([`value_sequence`]);
//! - closed-form large-n approximations of v_n ([`asymptotic_value`]);
//! - exact E(tau_N), E(tau_N^2), Var(tau_N) from the acceptance
//!   probabilities ([`exact_stats`]);
//! - the leading-order stopping statistics N/(lambda+1) and
//!   lambda N^2/((lambda+1)^2 (lambda+2)) ([`asymptotic_stats`]), where
//!   lambda depends only on how the upper tail decays;
//! - seeded, reproducible Monte Carlo estimates of the same ([`simulate`]).

pub mod asymptotics;
pub mod distributions;
pub mod error;
mod quadrature;
pub mod simulator;
mod special;
pub mod stopping_stats;
pub mod value_recurrence;

#[cfg(test)]
pub(crate) mod testutil;

pub use asymptotics::{
    asymptotic_stats, asymptotic_value, lambert_w, lambert_w_log_approx, AsymptoticStats,
};
pub use distributions::{DistributionSpec, TailClass};
pub use error::{Error, Result};
pub use simulator::{simulate, simulate_once, SimulationConfig, SimulationEstimate};
pub use stopping_stats::{
    exact_expectation, exact_second_moment, exact_stats, pochhammer_sum, StoppingStats,
};
pub use value_recurrence::{
    acceptance_probs, tail_integral, value_at_checkpoints, value_sequence, ValueSequence,
};
