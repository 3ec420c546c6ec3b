//! Random supremacy-style circuits on an `m x n` grid.
//!
//! Cycle 0 is a Hadamard on every qubit. Cycle `k >= 1` holds the CZ layer of
//! configuration `((k - 1) mod 8) + 1`. From cycle 2 on, a qubit gets a
//! single-qubit gate iff it sat in a CZ in the previous cycle and is idle in
//! this one; the first such gate on a qubit is T, later ones are drawn
//! uniformly from {sqrt(X), sqrt(Y), T}.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; draws
//! happen in cycle order, then ascending qubit order, only where the gate is
//! not forced.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, GateKind};

/// One of the eight CZ layouts, numbered 1 to 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CzConfig(u8);

impl CzConfig {
    pub fn new(k: u8) -> Option<Self> {
        (1..=8).contains(&k).then_some(CzConfig(k))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Configuration used by cycle `k >= 1`.
    pub fn for_cycle(k: usize) -> Self {
        CzConfig(((k - 1) % 8) as u8 + 1)
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self.0, 1 | 2 | 5 | 6)
    }

    fn offset(self) -> usize {
        match self.0 {
            1 => 2,
            2 => 0,
            3 => 3,
            4 => 1,
            5 => 3,
            6 => 1,
            7 => 0,
            8 => 2,
            _ => unreachable!(),
        }
    }
}

/// Qubit pairs (row-major indices, lower first) coupled by `cfg`.
pub fn cz_layer(cfg: CzConfig, rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let o = cfg.offset();
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if cfg.is_horizontal() {
                if c + 1 < cols && (c + 2 * (r % 2)) % 4 == o {
                    out.push((q, q + 1));
                }
            } else if r + 1 < rows && (r + 2 * (c % 2)) % 4 == o {
                out.push((q, q + cols));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub rows: usize,
    pub cols: usize,
    pub depth: usize,
    pub seed: u64,
    /// Redraw so a qubit never gets the same random gate twice in a row.
    pub avoid_repeats: bool,
}

impl GenParams {
    pub fn new(rows: usize, cols: usize, depth: usize, seed: u64) -> Self {
        GenParams { rows, cols, depth, seed, avoid_repeats: false }
    }
}

pub fn generate(p: &GenParams) -> Circuit {
    let n = p.rows * p.cols;
    let mut c = Circuit::with_hadamard_layer(p.rows, p.cols);
    c.extend_to_depth(p.depth);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut last_single: Vec<Option<GateKind>> = vec![None; n];
    let mut prev_cz = vec![false; n];
    let choices = [GateKind::SqrtX, GateKind::SqrtY, GateKind::T];

    for k in 1..=p.depth {
        let mut in_cz = vec![false; n];
        let mut gates = Vec::new();
        for (a, b) in cz_layer(CzConfig::for_cycle(k), p.rows, p.cols) {
            in_cz[a] = true;
            in_cz[b] = true;
            gates.push(Gate::cz(a, b));
        }
        for q in 0..n {
            if !prev_cz[q] || in_cz[q] {
                continue;
            }
            let kind = match &last_single[q] {
                None => GateKind::T,
                Some(prev) if p.avoid_repeats => {
                    let others: Vec<&GateKind> = choices.iter().filter(|g| *g != prev).collect();
                    others[rng.gen_range(0..others.len())].clone()
                }
                Some(_) => choices[rng.gen_range(0..choices.len())].clone(),
            };
            last_single[q] = Some(kind.clone());
            gates.push(Gate::single(kind, q));
        }
        gates.sort_by_key(|g| g.qubits[0]);
        for g in gates {
            c.push(k, g).expect("gates in a cycle are disjoint");
        }
        prev_cz = in_cz;
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCounts {
    /// Single-qubit gates other than the identity, Hadamard layer included.
    pub single: usize,
    /// Two-qubit gates.
    pub two: usize,
}

pub fn count_gates(c: &Circuit) -> GateCounts {
    let mut out = GateCounts { single: 0, two: 0 };
    for (_, g) in c.gates() {
        if g.kind.arity() == 2 {
            out.two += 1;
        } else if g.kind.counts_as_single() {
            out.single += 1;
        }
    }
    out
}
