//! Model, ordering, fix-set selection and partitioned contraction, end to end.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use ugsim_core::elimination::EliminationError;
use ugsim_core::model::ModelError;
use ugsim_core::oracle::OracleError;
use ugsim_core::ordering::{min_fill_ordering, vertical_ordering, OrderingBudget};
use ugsim_core::partition::{select_fix_set, FixParams, FixPlan, PartitionError};
use ugsim_core::tensor::DEFAULT_MAX_RANK;
use ugsim_core::{build_model, estimate_cost, parse_bits, BuildOptions, Circuit, GraphModel, C64};

use crate::io::IoError;
use crate::pool;
use crate::search::search_ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OrderChoice {
    Vertical,
    Minfill,
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CircuitSource {
    File { path: PathBuf },
    Generated { rows: usize, cols: usize, depth: usize, seed: u64, avoid_repeats: bool },
    /// Passed in directly by a library caller.
    Inline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub circuit: CircuitSource,
    /// Output bitstring, qubit 0 first; empty means all zeros.
    pub x: String,
    pub order: OrderChoice,
    pub order_time: f64,
    pub order_seed: u64,
    pub order_restarts: Option<usize>,
    pub fix_max: usize,
    pub max_rank: usize,
    pub max_total: Option<u128>,
    pub shortlist: Option<usize>,
    pub allow_over_budget: bool,
    pub workers: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            circuit: CircuitSource::Inline,
            x: String::new(),
            order: OrderChoice::Search,
            order_time: 60.0,
            order_seed: 0,
            order_restarts: Some(200),
            fix_max: 0,
            max_rank: 27,
            max_total: None,
            shortlist: None,
            allow_over_budget: false,
            workers: 1,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn budget(&self) -> OrderingBudget {
        OrderingBudget {
            seconds: self.order_time,
            max_restarts: self.order_restarts,
            seed: self.order_seed,
            ..OrderingBudget::default()
        }
    }

    pub fn fix_params(&self) -> FixParams {
        FixParams {
            t_max: self.fix_max,
            max_rank: self.max_rank,
            max_total: self.max_total,
            shortlist: self.shortlist,
            allow_over_budget: self.allow_over_budget,
        }
    }

    /// The output bits for an `n`-qubit circuit.
    pub fn output_bits(&self, n: usize) -> Result<Vec<bool>, PipelineError> {
        if self.x.is_empty() {
            return Ok(vec![false; n]);
        }
        let bits = parse_bits(&self.x)
            .ok_or_else(|| PipelineError::Usage(format!("bitstring {:?} must contain only 0 and 1", self.x)))?;
        if bits.len() != n {
            return Err(PipelineError::Usage(format!("bitstring has {} bits, circuit has {n} qubits", bits.len())));
        }
        Ok(bits)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.workers == 0 {
            return Err(PipelineError::Usage("--workers must be at least 1".into()));
        }
        if self.order_time.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return Err(PipelineError::Usage("--order-time must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("amplitude is not finite")]
    NonFinite,
}

impl PipelineError {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Usage(_) => "usage",
            PipelineError::Io(_) => "io",
            PipelineError::Model(ModelError::OutputLength { .. }) => "usage",
            PipelineError::Model(_) => "model",
            PipelineError::Partition(PartitionError::BudgetUnreachable { .. }) => "budget_unreachable",
            PipelineError::Partition(PartitionError::Subtask { source: EliminationError::RankOverflow { .. }, .. }) => {
                "rank_overflow"
            }
            PipelineError::Partition(_) => "partition",
            PipelineError::Oracle(_) => "oracle",
            PipelineError::NonFinite => "non_finite",
        }
    }

    pub fn is_usage(&self) -> bool {
        self.kind() == "usage"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(c: C64) -> Self {
        Complex { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeResult {
    pub amplitude: Complex,
    pub num_subtasks: u64,
    /// Largest `sigma'` rank in one subtask.
    pub max_rank: usize,
    pub est_total_cost: u128,
    pub wall_ms: f64,
    pub t: usize,
    pub fix_vars: Vec<u32>,
    pub ordering: &'static str,
    pub seed: u64,
    pub config: RunConfig,
}

impl AmplitudeResult {
    pub fn value(&self) -> C64 {
        C64::new(self.amplitude.re, self.amplitude.im)
    }
}

/// Builds the model for `cfg.x` and chooses orderings and the fix set.
pub fn plan_amplitude(c: &Circuit, cfg: &RunConfig) -> Result<(GraphModel, FixPlan), PipelineError> {
    cfg.validate()?;
    let x = cfg.output_bits(c.num_qubits())?;
    let g = build_model(c, &x, BuildOptions::default())?;
    let budget = cfg.budget();
    let seed = cfg.order_seed;
    let base = match cfg.order {
        OrderChoice::Vertical => vertical_ordering(&g),
        OrderChoice::Minfill => min_fill_ordering(g.graph(), seed),
        OrderChoice::Search => search_ordering(g.graph(), &budget).0,
    };
    let plan = select_fix_set(g.graph(), &base, &cfg.fix_params(), &mut |h| match cfg.order {
        OrderChoice::Vertical => {
            let o = base.restricted_to(h);
            let e = estimate_cost(h, &o);
            (o, e)
        }
        OrderChoice::Minfill => {
            let o = min_fill_ordering(h, seed);
            let e = estimate_cost(h, &o);
            (o, e)
        }
        OrderChoice::Search => search_ordering(h, &budget),
    })?;
    Ok((g, plan))
}

/// Tensor rank cap used while contracting: the materialized product is one
/// rank above `sigma'`.
pub fn tensor_rank_cap(cfg: &RunConfig, plan: &FixPlan) -> usize {
    let r = if cfg.allow_over_budget { cfg.max_rank.max(plan.est_subtask_cost.max_rank) } else { cfg.max_rank };
    (r + 1).min(DEFAULT_MAX_RANK)
}

pub fn run_amplitude(c: &Circuit, cfg: &RunConfig) -> Result<AmplitudeResult, PipelineError> {
    let start = Instant::now();
    let (g, plan) = plan_amplitude(c, cfg)?;
    let value = pool::run_partitioned(&g, &plan, cfg.workers, tensor_rank_cap(cfg, &plan))?;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(PipelineError::NonFinite);
    }
    Ok(AmplitudeResult {
        amplitude: value.into(),
        num_subtasks: plan.num_subtasks(),
        max_rank: plan.est_subtask_cost.max_rank,
        est_total_cost: plan.est_total_cost(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        t: plan.t(),
        fix_vars: plan.fix_vars.iter().map(|v| v.0).collect(),
        ordering: plan.post_fix_ordering.source.name(),
        seed: cfg.order_seed,
        config: cfg.clone(),
    })
}
