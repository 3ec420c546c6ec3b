//! Splitting a contraction into `2^t` independent subtasks by fixing `t`
//! variables, chosen greedily against a single base ordering.

use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::elimination::{
    contract_with, cost_summary, estimate_cost, CostEstimate, EliminationError, Ordering,
};
use crate::graph::EliminationGraph;
use crate::model::{GraphModel, ModelError, VarId};
use crate::C64;

/// A copy of `g` with `v` sliced at `bit`.
pub fn fix_variable(g: &GraphModel, v: VarId, bit: bool) -> Result<GraphModel, ModelError> {
    let mut out = g.clone();
    out.fix(v, bit)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixParams {
    pub t_max: usize,
    /// Largest acceptable `sigma'` rank per subtask.
    pub max_rank: usize,
    /// Optional ceiling on a subtask's summed step cost.
    pub max_total: Option<u128>,
    /// Only consider this many highest-degree vertices per greedy step.
    pub shortlist: Option<usize>,
    pub allow_over_budget: bool,
}

impl Default for FixParams {
    fn default() -> Self {
        FixParams { t_max: 0, max_rank: 27, max_total: None, shortlist: None, allow_over_budget: false }
    }
}

impl FixParams {
    fn within(&self, total: u128, max_rank: usize) -> bool {
        max_rank <= self.max_rank && self.max_total.is_none_or(|m| total <= m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixPlan {
    /// In selection order; the first one is the most significant subtask bit.
    pub fix_vars: Vec<VarId>,
    pub post_fix_ordering: Ordering,
    pub est_subtask_cost: CostEstimate,
    /// Base-ordering cost of the reduced graph after each greedy step,
    /// starting with the unreduced graph.
    pub greedy_costs: Vec<u128>,
}

impl FixPlan {
    pub fn t(&self) -> usize {
        self.fix_vars.len()
    }

    pub fn num_subtasks(&self) -> u64 {
        1u64 << self.fix_vars.len()
    }

    /// Summed estimated cost over all subtasks, saturating.
    pub fn est_total_cost(&self) -> u128 {
        self.est_subtask_cost.total.saturating_mul(self.num_subtasks() as u128)
    }

    /// Bit of each fixed variable in subtask `i`.
    pub fn assignment(&self, i: u64) -> Vec<bool> {
        let t = self.t();
        (0..t).map(|j| (i >> (t - 1 - j)) & 1 == 1).collect()
    }

    /// True iff the fixed variables and the ordering partition `g`'s vertices.
    pub fn is_valid_for(&self, g: &EliminationGraph) -> bool {
        let mut h = g.clone();
        for &v in &self.fix_vars {
            if !h.contains(v) {
                return false;
            }
            h.remove_vertex(v);
        }
        self.post_fix_ordering.is_valid_for(&h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("no fix set of size <= {} meets the budget (subtask max rank {}, cost {})", plan.t(), plan.est_subtask_cost.max_rank, plan.est_subtask_cost.total)]
    BudgetUnreachable { plan: Box<FixPlan> },
    #[error("plan does not match the model")]
    InvalidPlan,
    #[error("subtask {index}: {source}")]
    Subtask { index: u64, assignment: Vec<bool>, source: EliminationError },
}

fn candidates(h: &EliminationGraph, shortlist: Option<usize>) -> Vec<VarId> {
    let mut vs: Vec<VarId> = h.vertices().collect();
    if let Some(k) = shortlist {
        vs.sort_by_key(|&v| (core::cmp::Reverse(h.degree(v)), v));
        vs.truncate(k.max(1));
        vs.sort();
    }
    vs
}

/// Greedily picks up to `t_max` variables, each minimizing the base-ordering
/// cost of the reduced graph (ties to the lower id), stopping once the
/// budget is met. `search` then orders the reduced graph; the plan keeps
/// whichever of its result and the restricted base is cheaper.
pub fn select_fix_set(
    g: &EliminationGraph,
    base: &Ordering,
    params: &FixParams,
    search: &mut dyn FnMut(&EliminationGraph) -> (Ordering, CostEstimate),
) -> Result<FixPlan, PartitionError> {
    if !base.is_valid_for(g) {
        return Err(PartitionError::InvalidPlan);
    }
    let mut h = g.clone();
    let mut fix_vars = Vec::new();
    let (mut total, mut rank) = cost_summary(&h, &base.vars);
    let mut greedy_costs = alloc::vec![total];
    while fix_vars.len() < params.t_max && !params.within(total, rank) && !h.is_empty() {
        let mut best: Option<(u128, VarId, usize)> = None;
        for v in candidates(&h, params.shortlist) {
            let mut r = h.clone();
            r.remove_vertex(v);
            let (c, mr) = cost_summary(&r, &base.vars);
            if best.is_none_or(|(bc, _, _)| c < bc) {
                best = Some((c, v, mr));
            }
        }
        let (c, v, mr) = best.expect("graph is non-empty");
        h.remove_vertex(v);
        fix_vars.push(v);
        total = c;
        rank = mr;
        greedy_costs.push(c);
    }

    let restricted = base.restricted_to(&h);
    let restricted_est = estimate_cost(&h, &restricted);
    let (found, found_est) = search(&h);
    let (post_fix_ordering, est_subtask_cost) = if found.is_valid_for(&h)
        && (found_est.total, &found.vars) < (restricted_est.total, &restricted.vars)
    {
        (found, found_est)
    } else {
        (restricted, restricted_est)
    };
    let plan = FixPlan { fix_vars, post_fix_ordering, est_subtask_cost, greedy_costs };
    if !params.allow_over_budget && !params.within(plan.est_subtask_cost.total, plan.est_subtask_cost.max_rank) {
        return Err(PartitionError::BudgetUnreachable { plan: Box::new(plan) });
    }
    Ok(plan)
}

/// Amplitude contribution of subtask `i`.
pub fn run_subtask(g: &GraphModel, plan: &FixPlan, i: u64, max_tensor_rank: usize) -> Result<C64, PartitionError> {
    let assignment = plan.assignment(i);
    let mut m = g.clone();
    for (&v, &bit) in plan.fix_vars.iter().zip(&assignment) {
        m.fix(v, bit).map_err(|_| PartitionError::InvalidPlan)?;
    }
    contract_with(&m, &plan.post_fix_ordering, max_tensor_rank)
        .map(|c| c.value)
        .map_err(|source| PartitionError::Subtask { index: i, assignment, source })
}

/// Pairwise sum with a shape that depends only on `xs.len()`.
pub fn reduce_tree(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        1 => xs[0],
        n => reduce_tree(&xs[..n / 2]) + reduce_tree(&xs[n / 2..]),
    }
}

/// Runs every subtask in index order on the current thread and reduces.
pub fn run_partitioned(g: &GraphModel, plan: &FixPlan, max_tensor_rank: usize) -> Result<C64, PartitionError> {
    if !plan.is_valid_for(g.graph()) {
        return Err(PartitionError::InvalidPlan);
    }
    let parts = (0..plan.num_subtasks())
        .map(|i| run_subtask(g, plan, i, max_tensor_rank))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reduce_tree(&parts))
}
