//! Elimination orderings: vertical, greedy min-fill / min-degree, and an
//! anytime search of randomized greedy restarts followed by hill climbing
//! over adjacent transpositions.
//!
//! The search is budgeted by a caller-supplied stop predicate so this crate
//! stays clock-free; the std crate wraps it with a wall-clock deadline.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elimination::{cost_summary, estimate_cost, step_cost, CostEstimate, Ordering, OrderingSource};
use crate::graph::EliminationGraph;
use crate::model::{GraphModel, VarId};

/// Qubit by qubit, each qubit's variables in creation order.
pub fn vertical_ordering(g: &GraphModel) -> Ordering {
    let mut vars = g.free_vars();
    vars.sort_by_key(|&v| {
        let i = g.info(v);
        (i.qubit, i.cycle, v)
    });
    Ordering::new(vars, OrderingSource::Vertical)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Greedy {
    MinFill,
    MinDegree,
}

fn greedy_ordering(g: &EliminationGraph, seed: u64, rule: Greedy) -> Vec<VarId> {
    let mut h = g.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = h.capacity();
    let mut fill = alloc::vec![0usize; cap];
    if rule == Greedy::MinFill {
        for v in h.vertices() {
            fill[v.index()] = h.fill_count(v);
        }
    }
    let mut out = Vec::with_capacity(h.vertex_count());
    let mut ties = Vec::new();
    let mut touched = fixedbitset::FixedBitSet::with_capacity(cap);
    while !h.is_empty() {
        let mut best = (usize::MAX, usize::MAX);
        ties.clear();
        for v in h.vertices() {
            let key = match rule {
                Greedy::MinFill => (fill[v.index()], h.degree(v)),
                Greedy::MinDegree => (h.degree(v), 0),
            };
            if key < best {
                best = key;
                ties.clear();
            }
            if key == best {
                ties.push(v);
            }
        }
        let v = if ties.len() == 1 { ties[0] } else { ties[rng.gen_range(0..ties.len())] };

        if rule == Greedy::MinFill {
            // Fill can only change within distance two of v.
            touched.clear();
            for u in h.neighbors(v) {
                touched.insert(u.index());
                for w in h.neighbors(u) {
                    touched.insert(w.index());
                }
            }
            touched.set(v.index(), false);
            h.eliminate(v);
            for i in touched.ones() {
                fill[i] = h.fill_count(VarId::from_index(i));
            }
            debug_assert!(h.vertices().all(|u| fill[u.index()] == h.fill_count_naive(u)));
        } else {
            h.eliminate(v);
        }
        out.push(v);
    }
    out
}

/// Repeatedly eliminates a vertex adding the fewest fill edges; ties go to
/// lower degree, then to a seeded random pick.
pub fn min_fill_ordering(g: &EliminationGraph, seed: u64) -> Ordering {
    Ordering::new(greedy_ordering(g, seed, Greedy::MinFill), OrderingSource::MinFill)
}

/// One sweep of adjacent transpositions, each accepted when it lowers the
/// summed cost of the two affected steps. Returns whether anything moved.
///
/// Swapping positions `i` and `i+1` leaves the graph before `i` and after
/// `i+1` unchanged, so only those two step costs need comparing.
fn transposition_pass(g: &EliminationGraph, vars: &mut [VarId]) -> bool {
    let mut h = g.clone();
    let mut moved = false;
    for i in 0..vars.len() {
        if i + 1 < vars.len() {
            let (a, b) = (vars[i], vars[i + 1]);
            let keep = step_cost(h.degree(a)).saturating_add(step_cost(h.degree_after_eliminating(a, b)));
            let swap = step_cost(h.degree(b)).saturating_add(step_cost(h.degree_after_eliminating(b, a)));
            if swap < keep {
                vars.swap(i, i + 1);
                moved = true;
            }
        }
        h.eliminate(vars[i]);
    }
    moved
}

/// Hill-climbs `vars` for at most `passes` sweeps.
pub fn local_search(g: &EliminationGraph, vars: &mut [VarId], passes: usize) {
    for _ in 0..passes {
        if !transposition_pass(g, vars) {
            break;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Restart cap; `None` runs until the stop predicate fires.
    pub restarts: Option<usize>,
    /// Hill-climbing sweeps after each restart.
    pub local_moves: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { restarts: Some(64), local_moves: 8, seed: 0 }
    }
}

/// Budget for the wall-clock search driver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderingBudget {
    pub seconds: f64,
    pub max_restarts: Option<usize>,
    pub local_moves: usize,
    pub seed: u64,
}

impl Default for OrderingBudget {
    fn default() -> Self {
        OrderingBudget { seconds: 60.0, max_restarts: None, local_moves: 8, seed: 0 }
    }
}

impl OrderingBudget {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig { restarts: self.max_restarts, local_moves: self.local_moves, seed: self.seed }
    }
}

fn restart_seed(seed: u64, r: usize) -> u64 {
    seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Anytime search. Restart 0 is `min_fill_ordering(g, seed)`; later restarts
/// alternate min-degree and min-fill under derived seeds. `stop` is polled
/// between restarts, after restart 0 always completes. The best result by
/// (total cost, ordering) is returned, so a longer run never does worse.
pub fn search_ordering_with(
    g: &EliminationGraph,
    cfg: &SearchConfig,
    stop: &mut dyn FnMut() -> bool,
) -> (Ordering, CostEstimate) {
    let mut best: Option<(u128, Vec<VarId>)> = None;
    let mut r = 0usize;
    loop {
        if cfg.restarts.is_some_and(|cap| r >= cap.max(1)) || (r > 0 && stop()) {
            break;
        }
        let s = restart_seed(cfg.seed, r);
        let mut vars = if r % 2 == 1 {
            greedy_ordering(g, s, Greedy::MinDegree)
        } else {
            greedy_ordering(g, if r == 0 { cfg.seed } else { s }, Greedy::MinFill)
        };
        local_search(g, &mut vars, cfg.local_moves);
        let (total, _) = cost_summary(g, &vars);
        let better = match &best {
            None => true,
            Some((bt, bv)) => (total, &vars) < (*bt, bv),
        };
        if better {
            best = Some((total, vars));
        }
        r += 1;
    }
    let vars = best.map(|(_, v)| v).unwrap_or_default();
    let o = Ordering::new(vars, OrderingSource::Search);
    let est = estimate_cost(g, &o);
    (o, est)
}
