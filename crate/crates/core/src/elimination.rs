//! Variable elimination and its cost model.
//!
//! Eliminating `v` multiplies every factor mentioning `v` into `sigma`,
//! sums `v` out to get `sigma'`, and replaces the graph neighborhood of `v`
//! by a clique. A step is charged `2^deg(v)`, the size of `sigma'`.

use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::EliminationGraph;
use crate::model::{GraphModel, VarId};
use crate::tensor::{multiply_all, TensorError, DEFAULT_MAX_RANK};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingSource {
    Vertical,
    MinFill,
    Search,
    User,
}

impl OrderingSource {
    pub fn name(self) -> &'static str {
        match self {
            OrderingSource::Vertical => "vertical",
            OrderingSource::MinFill => "minfill",
            OrderingSource::Search => "search",
            OrderingSource::User => "user",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    pub vars: Vec<VarId>,
    pub source: OrderingSource,
}

impl Ordering {
    pub fn new(vars: Vec<VarId>, source: OrderingSource) -> Self {
        Ordering { vars, source }
    }

    /// True iff the ordering is a permutation of the graph's vertices.
    pub fn is_valid_for(&self, g: &EliminationGraph) -> bool {
        if self.vars.len() != g.vertex_count() {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(g.capacity());
        self.vars.iter().all(|&v| g.contains(v) && !seen.put(v.index()))
    }

    /// This ordering with the vertices absent from `g` dropped.
    pub fn restricted_to(&self, g: &EliminationGraph) -> Ordering {
        Ordering { vars: self.vars.iter().copied().filter(|&v| g.contains(v)).collect(), source: self.source }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub var: VarId,
    pub degree: usize,
    pub cost: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostEstimate {
    pub per_step: Vec<Step>,
    pub total: u128,
    pub max_rank: usize,
}

impl CostEstimate {
    /// The cost of an empty ordering.
    pub fn empty() -> Self {
        CostEstimate { per_step: Vec::new(), total: 0, max_rank: 0 }
    }
}

pub fn step_cost(degree: usize) -> u128 {
    if degree >= 128 {
        u128::MAX
    } else {
        1u128 << degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("step {step} eliminating {var:?}: {source}")]
    RankOverflow { step: usize, var: VarId, source: TensorError },
    #[error("ordering is not a permutation of the free variables")]
    InvalidOrdering,
    #[error("variable {0:?} is not a free vertex")]
    UnknownVariable(VarId),
}

/// Simulates the graph dynamics of eliminating in `o`'s order; no tensor
/// data is touched. Vertices of `o` missing from `g` are skipped.
pub fn estimate_cost(g: &EliminationGraph, o: &Ordering) -> CostEstimate {
    let mut h = g.clone();
    let mut per_step = Vec::with_capacity(o.vars.len());
    let mut total = 0u128;
    let mut max_rank = 0;
    for &v in &o.vars {
        if !h.contains(v) {
            continue;
        }
        let degree = h.eliminate(v);
        let cost = step_cost(degree);
        total = total.saturating_add(cost);
        max_rank = max_rank.max(degree);
        per_step.push(Step { var: v, degree, cost });
    }
    CostEstimate { per_step, total, max_rank }
}

/// Only the total and max rank, without recording steps.
pub(crate) fn cost_summary(g: &EliminationGraph, vars: &[VarId]) -> (u128, usize) {
    let mut h = g.clone();
    let mut total = 0u128;
    let mut max_rank = 0;
    for &v in vars {
        if h.contains(v) {
            let d = h.eliminate(v);
            total = total.saturating_add(step_cost(d));
            max_rank = max_rank.max(d);
        }
    }
    (total, max_rank)
}

impl GraphModel {
    /// Eliminates `v` in place; returns the rank of the materialized `sigma`.
    pub fn eliminate(&mut self, v: VarId, max_rank: usize) -> Result<usize, EliminationError> {
        if !self.graph.contains(v) {
            return Err(EliminationError::UnknownVariable(v));
        }
        let (hit, rest): (Vec<_>, Vec<_>) =
            core::mem::take(&mut self.factors).into_iter().partition(|f| f.contains(v));
        self.factors = rest;
        let sigma = match multiply_all(hit, max_rank) {
            Ok(s) => s,
            Err(source) => return Err(EliminationError::RankOverflow { step: 0, var: v, source }),
        };
        let rank = sigma.rank();
        if sigma.contains(v) {
            let reduced = sigma.sum_out(v).expect("axis present");
            self.push_factor(reduced);
        } else {
            // v appears in no factor: summing the empty product gives 2
            self.scalar *= sigma.scalar_value().unwrap_or(C64::new(1.0, 0.0)) * 2.0;
        }
        self.graph.eliminate(v);
        Ok(rank)
    }
}

/// A model with `v` eliminated.
pub fn eliminate_variable(g: &GraphModel, v: VarId) -> Result<GraphModel, EliminationError> {
    let mut out = g.clone();
    out.eliminate(v, DEFAULT_MAX_RANK)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    pub value: C64,
    /// Largest `sigma` materialized over all steps.
    pub max_materialized_rank: usize,
}

/// Eliminates every free variable in order and returns the amplitude.
pub fn contract(g: &GraphModel, o: &Ordering) -> Result<C64, EliminationError> {
    contract_with(g, o, DEFAULT_MAX_RANK).map(|c| c.value)
}

pub fn contract_with(g: &GraphModel, o: &Ordering, max_rank: usize) -> Result<Contraction, EliminationError> {
    if !o.is_valid_for(&g.graph) {
        return Err(EliminationError::InvalidOrdering);
    }
    let mut m = g.clone();
    let mut max_materialized_rank = 0;
    for (step, &v) in o.vars.iter().enumerate() {
        let r = m.eliminate(v, max_rank).map_err(|e| match e {
            EliminationError::RankOverflow { var, source, .. } => {
                EliminationError::RankOverflow { step, var, source }
            }
            other => other,
        })?;
        max_materialized_rank = max_materialized_rank.max(r);
    }
    let mut value = m.scalar;
    for f in &m.factors {
        value *= f.scalar_value().expect("all variables eliminated");
    }
    Ok(Contraction { value, max_materialized_rank })
}
