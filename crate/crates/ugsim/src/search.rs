use std::time::{Duration, Instant};

use ugsim_core::ordering::{search_ordering_with, OrderingBudget};
use ugsim_core::{CostEstimate, EliminationGraph, Ordering};

/// Runs the anytime ordering search until the budget's wall-clock time or
/// restart cap runs out, whichever comes first.
pub fn search_ordering(g: &EliminationGraph, budget: &OrderingBudget) -> (Ordering, CostEstimate) {
    let deadline = Instant::now() + Duration::from_secs_f64(budget.seconds.max(0.0));
    search_ordering_with(g, &budget.search_config(), &mut || Instant::now() >= deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ugsim_core::ordering::{min_fill_ordering, vertical_ordering};
    use ugsim_core::{build_model, estimate_cost, generate, BuildOptions, GenParams};

    #[test]
    fn zero_budget_still_returns_min_fill_quality() {
        let c = generate(&GenParams::new(4, 4, 14, 2));
        let g = build_model(&c, &[false; 16], BuildOptions::default()).unwrap();
        let b = OrderingBudget { seconds: 0.0, seed: 3, ..OrderingBudget::default() };
        let (o, est) = search_ordering(g.graph(), &b);
        assert!(o.is_valid_for(g.graph()));
        assert!(est.total <= estimate_cost(g.graph(), &min_fill_ordering(g.graph(), 3)).total);
        assert!(est.total <= estimate_cost(g.graph(), &vertical_ordering(&g)).total);
    }

    #[test]
    fn restart_cap_ends_before_deadline() {
        let c = generate(&GenParams::new(3, 3, 8, 1));
        let g = build_model(&c, &[false; 9], BuildOptions::default()).unwrap();
        let b = OrderingBudget { seconds: 600.0, max_restarts: Some(3), ..OrderingBudget::default() };
        let t = Instant::now();
        search_ordering(g.graph(), &b);
        assert!(t.elapsed() < Duration::from_secs(60));
    }
}
