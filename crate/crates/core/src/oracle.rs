//! Dense state-vector reference simulator.
//!
//! Basis index bit `N-1-q` holds qubit `q`, so qubit 0 is the most
//! significant bit; an output bitstring `x` maps to index `sum x[q] << (N-1-q)`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, GateMatrix};
use crate::C64;

pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} qubits exceed the state-vector limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("bitstring has {got} bits, circuit has {expected} qubits")]
    BitLength { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn index_of(bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn amplitude(&self, bits: &[bool]) -> C64 {
        self.amps[Self::index_of(bits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn apply_1q(&mut self, m: &[C64; 4], q: usize) {
        let bit = self.mask(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0] * a0 + m[1] * a1;
                self.amps[i | bit] = m[2] * a0 + m[3] * a1;
            }
        }
    }

    /// Applies a 4x4 matrix with `qa` as the high bit of the local index.
    pub fn apply_2q(&mut self, m: &[C64; 16], qa: usize, qb: usize) {
        let (ba, bb) = (self.mask(qa), self.mask(qb));
        for i in 0..self.amps.len() {
            if i & (ba | bb) == 0 {
                let idx = [i, i | bb, i | ba, i | ba | bb];
                let v = idx.map(|j| self.amps[j]);
                for (r, &j) in idx.iter().enumerate() {
                    self.amps[j] = (0..4).map(|c| m[r * 4 + c] * v[c]).sum();
                }
            }
        }
    }
}

/// Runs `c` on `|0...0>`.
pub fn simulate(c: &Circuit) -> Result<StateVector, OracleError> {
    let n = c.num_qubits();
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits(n));
    }
    let mut s = StateVector::zero(n);
    for cycle in c.cycles() {
        for g in &cycle.gates {
            match g.kind.matrix() {
                GateMatrix::One(m) => s.apply_1q(&m, g.qubits[0]),
                GateMatrix::Two(m) => s.apply_2q(&m, g.qubits[0], g.qubits[1]),
            }
        }
        debug_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }
    Ok(s)
}

pub fn amplitude_of(c: &Circuit, x: &[bool]) -> Result<C64, OracleError> {
    if x.len() != c.num_qubits() {
        return Err(OracleError::BitLength { expected: c.num_qubits(), got: x.len() });
    }
    Ok(simulate(c)?.amplitude(x))
}
