//! Std companion to `ugsim-core`: circuit files, the threaded subtask pool,
//! the wall-clock ordering search, the end-to-end pipeline and the bench.

pub mod bench;
pub mod io;
pub mod pipeline;
pub mod pool;
pub mod search;

pub use pipeline::{plan_amplitude, run_amplitude, AmplitudeResult, OrderChoice, PipelineError, RunConfig};
