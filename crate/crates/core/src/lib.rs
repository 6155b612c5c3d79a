//! Momentum analytics for point-by-point tennis data.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! * [`ingest`] reads and validates Grand Slam style point-by-point CSV files.
//! * [`features`] accumulates running match indicators and encodes each point
//!   as a discrete observation symbol.
//! * [`hmm`] fits a discrete hidden Markov model (Baum-Welch) and provides
//!   forward/backward smoothing and Viterbi decoding.
//! * [`momentum`] turns smoothed state posteriors into a signed momentum
//!   series in `[-2, 2]` via an exponential moving average, and detects swings.
//! * [`gbt`] is a second-order gradient-boosted tree learner with level-wise
//!   and leaf-wise growth.
//! * [`metrics`] holds the classification metrics used to compare models.
//! * [`explain`] computes exact Shapley attributions and Sobol indices.
//! * [`sim`] is a Markov-chain tennis scoring simulator used for synthetic data.
//! * [`pipeline`] wires the stages into the commands exposed by the
//!   `tennis-momentum` binary.
//!
//! The `examples/` directory of this crate has one runnable program per stage.

pub mod error;
pub mod explain;
pub mod features;
pub mod gbt;
pub mod hmm;
pub mod ingest;
pub mod metrics;
pub mod momentum;
pub mod pipeline;
pub mod sim;

pub use error::{Error, Result};
pub use ingest::{MatchPointLog, Player, PointRecord};
