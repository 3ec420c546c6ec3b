use alloc::vec;
use alloc::vec::Vec;

use crate::C64;

#[track_caller]
pub fn assert_close(a: C64, b: C64, tol: f64) {
    assert!((a - b).norm() <= tol, "{a} vs {b} (tol {tol})");
}

pub fn matmul(a: &[C64], b: &[C64], d: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            for k in 0..d {
                out[r * d + c] += a[r * d + k] * b[k * d + c];
            }
        }
    }
    out
}

/// The 10-vertex model graph of the example circuit, vertices `a..j` = ids `0..9`.
pub mod example {
    use super::*;
    use crate::graph::EliminationGraph;
    use crate::model::VarId;

    pub const EDGES: [&str; 12] =
        ["ab", "ae", "ah", "be", "bg", "ce", "df", "ef", "fg", "gj", "hi", "ij"];

    pub fn id(c: char) -> VarId {
        VarId(c as u32 - 'a' as u32)
    }

    pub fn edges_named(names: &[&str]) -> Vec<(VarId, VarId)> {
        let mut out: Vec<(VarId, VarId)> = names
            .iter()
            .map(|s| {
                let mut cs = s.chars();
                let (a, b) = (id(cs.next().unwrap()), id(cs.next().unwrap()));
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    pub fn example_graph() -> EliminationGraph {
        EliminationGraph::from_edges((0..10).map(VarId), &edges_named(&EDGES))
    }
}
