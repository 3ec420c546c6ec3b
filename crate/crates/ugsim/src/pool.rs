//! Bounded worker pool over subtask indices. Workers pull indices from a
//! shared counter; partial amplitudes land in per-index slots and are
//! reduced on the calling thread with the fixed tree, so the result does not
//! depend on the worker count or scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::thread;

use ugsim_core::partition::{reduce_tree, run_subtask, FixPlan, PartitionError};
use ugsim_core::{GraphModel, C64};

pub fn run_partitioned(
    g: &GraphModel,
    plan: &FixPlan,
    workers: usize,
    max_tensor_rank: usize,
) -> Result<C64, PartitionError> {
    if !plan.is_valid_for(g.graph()) {
        return Err(PartitionError::InvalidPlan);
    }
    let n = plan.num_subtasks();
    let workers = workers.clamp(1, n.min(usize::MAX as u64) as usize);
    if workers == 1 {
        return ugsim_core::partition::run_partitioned(g, plan, max_tensor_rank);
    }
    let next = AtomicU64::new(0);
    let failed = AtomicBool::new(false);
    let done: Vec<Vec<(u64, Result<C64, PartitionError>)>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    while !failed.load(AtomicOrdering::Relaxed) {
                        let i = next.fetch_add(1, AtomicOrdering::Relaxed);
                        if i >= n {
                            break;
                        }
                        let r = run_subtask(g, plan, i, max_tensor_rank);
                        if r.is_err() {
                            failed.store(true, AtomicOrdering::Relaxed);
                        }
                        out.push((i, r));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut slots = vec![C64::new(0.0, 0.0); n as usize];
    let mut first_err: Option<(u64, PartitionError)> = None;
    for (i, r) in done.into_iter().flatten() {
        match r {
            Ok(v) => slots[i as usize] = v,
            Err(e) => {
                if first_err.as_ref().is_none_or(|(j, _)| i < *j) {
                    first_err = Some((i, e));
                }
            }
        }
    }
    match first_err {
        Some((_, e)) => Err(e),
        None => Ok(reduce_tree(&slots)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ugsim_core::ordering::{min_fill_ordering, search_ordering_with, SearchConfig};
    use ugsim_core::partition::{select_fix_set, FixParams};
    use ugsim_core::{build_model, generate, BuildOptions, GenParams};

    fn setup(t: usize) -> (GraphModel, FixPlan) {
        let c = generate(&GenParams::new(4, 4, 12, 4));
        let g = build_model(&c, &[false; 16], BuildOptions::default()).unwrap();
        let base = min_fill_ordering(g.graph(), 0);
        let p = FixParams { t_max: t, max_rank: 0, allow_over_budget: true, ..FixParams::default() };
        let plan = select_fix_set(g.graph(), &base, &p, &mut |h| {
            search_ordering_with(h, &SearchConfig { restarts: Some(2), local_moves: 2, seed: 0 }, &mut || false)
        })
        .unwrap();
        (g, plan)
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let (g, plan) = setup(5);
        let one = run_partitioned(&g, &plan, 1, 30).unwrap();
        for w in [2, 3, 4, 16, 64] {
            let v = run_partitioned(&g, &plan, w, 30).unwrap();
            assert_eq!((v.re.to_bits(), v.im.to_bits()), (one.re.to_bits(), one.im.to_bits()));
        }
    }

    #[test]
    fn overflow_reports_lowest_failing_subtask() {
        let (g, plan) = setup(2);
        let err = run_partitioned(&g, &plan, 4, 1).unwrap_err();
        assert!(matches!(err, PartitionError::Subtask { index: 0, .. }));
    }
}
