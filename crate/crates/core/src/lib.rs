//! Single-amplitude simulation of grid quantum circuits.
//!
//! A circuit is turned into an undirected graphical model whose vertices are
//! the binary path-integral variables that survive after merging across
//! diagonal gates. The amplitude `<x|C|0...0>` is then computed by variable
//! elimination under an explicit cost model, optionally split into `2^t`
//! independent subtasks by fixing the values of `t` chosen variables.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock budgets, threads
//! and file IO live in the `ugsim` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod dot;
pub mod elimination;
pub mod fidelity;
pub mod generator;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod ordering;
pub mod partition;
pub mod tensor;

#[cfg(test)]
pub(crate) mod testutil;

pub use num_complex::Complex64 as C64;

pub use circuit::{parse_circuit, serialize_circuit, Circuit, Cycle, Gate, GateKind};
pub use elimination::{contract, estimate_cost, CostEstimate, Ordering, OrderingSource};
pub use generator::{count_gates, generate, GenParams};
pub use graph::EliminationGraph;
pub use model::{build_model, BuildOptions, GraphModel, VarId};
pub use tensor::Tensor;

/// Parses an output bitstring such as `"0110"`; qubit 0 is the first character.
pub fn parse_bits(s: &str) -> Option<alloc::vec::Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}
