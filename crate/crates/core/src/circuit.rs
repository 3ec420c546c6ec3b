//! Circuit representation, the gate catalog and the text file format.
//!
//! The text format is line oriented: a header `m n` followed by one gate per
//! line as `cycle gate q0 [q1]`. Qubits are row-major linear indices on the
//! `m x n` grid. Lines starting with `#` are comments.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt::Write;

use thiserror::Error;

use crate::C64;

/// A gate matrix in row-major order, `m[row * dim + col]`.
#[derive(Clone, Debug, PartialEq)]
pub enum GateMatrix {
    One([C64; 4]),
    Two([C64; 16]),
}

impl GateMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GateMatrix::One(_) => 2,
            GateMatrix::Two(_) => 4,
        }
    }

    pub fn entries(&self) -> &[C64] {
        match self {
            GateMatrix::One(m) => m,
            GateMatrix::Two(m) => m,
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries()[row * self.dim() + col]
    }

    /// True iff every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.entry(r, c) == C64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.entry(i, i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    T,
    SqrtX,
    SqrtY,
    Cz,
    Id,
    /// Arbitrary single-qubit unitary, only constructible programmatically.
    Unitary1(Box<[C64; 4]>),
    /// Arbitrary two-qubit unitary on `(q0, q1)` with `q0` the high bit.
    Unitary2(Box<[C64; 16]>),
}

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cz | GateKind::Unitary2(_) => 2,
            _ => 1,
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let h = FRAC_1_SQRT_2;
        match self {
            GateKind::H => GateMatrix::One([c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
            GateKind::T => GateMatrix::One([one, z, z, c(h, h)]),
            GateKind::SqrtX => GateMatrix::One([
                c(0.5, 0.5),
                c(0.5, -0.5),
                c(0.5, -0.5),
                c(0.5, 0.5),
            ]),
            GateKind::SqrtY => GateMatrix::One([
                c(0.5, 0.5),
                c(-0.5, -0.5),
                c(0.5, 0.5),
                c(0.5, 0.5),
            ]),
            GateKind::Id => GateMatrix::One([one, z, z, one]),
            GateKind::Cz => {
                let mut m = [z; 16];
                m[0] = one;
                m[5] = one;
                m[10] = one;
                m[15] = c(-1.0, 0.0);
                GateMatrix::Two(m)
            }
            GateKind::Unitary1(m) => GateMatrix::One(**m),
            GateKind::Unitary2(m) => GateMatrix::Two(**m),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match self {
            GateKind::T | GateKind::Cz | GateKind::Id => true,
            GateKind::H | GateKind::SqrtX | GateKind::SqrtY => false,
            GateKind::Unitary1(_) | GateKind::Unitary2(_) => self.matrix().is_diagonal(),
        }
    }

    /// Token used by the text format, `None` for custom unitaries.
    pub fn token(&self) -> Option<&'static str> {
        Some(match self {
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::SqrtX => "x_1_2",
            GateKind::SqrtY => "y_1_2",
            GateKind::Cz => "cz",
            GateKind::Id => "id",
            GateKind::Unitary1(_) | GateKind::Unitary2(_) => return None,
        })
    }

    pub fn from_token(tok: &str) -> Option<GateKind> {
        Some(match tok {
            "h" => GateKind::H,
            "t" => GateKind::T,
            "x_1_2" => GateKind::SqrtX,
            "y_1_2" => GateKind::SqrtY,
            "cz" => GateKind::Cz,
            "id" => GateKind::Id,
            _ => return None,
        })
    }

    /// Single-qubit gates other than the identity count towards `g1`.
    pub fn counts_as_single(&self) -> bool {
        self.arity() == 1 && *self != GateKind::Id
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn single(kind: GateKind, q: usize) -> Self {
        Gate { kind, qubits: vec![q] }
    }

    pub fn two(kind: GateKind, q0: usize, q1: usize) -> Self {
        Gate { kind, qubits: vec![q0, q1] }
    }

    pub fn cz(q0: usize, q1: usize) -> Self {
        Gate::two(GateKind::Cz, q0, q1)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Cycle {
    pub gates: Vec<Gate>,
}

impl Cycle {
    pub fn touches(&self, q: usize) -> bool {
        self.gates.iter().any(|g| g.qubits.contains(&q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} is outside the {rows}x{cols} grid")]
    OutOfBounds { qubit: usize, rows: usize, cols: usize },
    #[error("qubit {qubit} is used twice in cycle {cycle}")]
    Conflict { qubit: usize, cycle: usize },
    #[error("gate expects {expected} qubit(s), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("custom unitaries have no text form")]
    NotSerializable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A circuit on an `rows x cols` grid. `cycles[0]` is normally the Hadamard
/// layer; `depth()` counts the cycles after it.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    rows: usize,
    cols: usize,
    cycles: Vec<Cycle>,
}

impl Circuit {
    /// An empty circuit with a single (empty) cycle 0.
    pub fn new(rows: usize, cols: usize) -> Self {
        Circuit { rows, cols, cycles: vec![Cycle::default()] }
    }

    /// The circuit's Hadamard layer on every qubit, as cycle 0.
    pub fn with_hadamard_layer(rows: usize, cols: usize) -> Self {
        let mut c = Circuit::new(rows, cols);
        c.cycles[0].gates = (0..rows * cols).map(|q| Gate::single(GateKind::H, q)).collect();
        c
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_qubits(&self) -> usize {
        self.rows * self.cols
    }

    /// Number of cycles after cycle 0.
    pub fn depth(&self) -> usize {
        self.cycles.len() - 1
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn gates(&self) -> impl Iterator<Item = (usize, &Gate)> {
        self.cycles
            .iter()
            .enumerate()
            .flat_map(|(k, cy)| cy.gates.iter().map(move |g| (k, g)))
    }

    /// Adds a gate to `cycle`, growing the cycle list as needed.
    pub fn push(&mut self, cycle: usize, gate: Gate) -> Result<(), CircuitError> {
        if gate.qubits.len() != gate.kind.arity() {
            return Err(CircuitError::Arity { expected: gate.kind.arity(), got: gate.qubits.len() });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.num_qubits() {
                return Err(CircuitError::OutOfBounds { qubit: q, rows: self.rows, cols: self.cols });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(CircuitError::Conflict { qubit: q, cycle });
            }
        }
        if self.cycles.len() <= cycle {
            self.cycles.resize_with(cycle + 1, Cycle::default);
        }
        if let Some(&q) = gate.qubits.iter().find(|&&q| self.cycles[cycle].touches(q)) {
            return Err(CircuitError::Conflict { qubit: q, cycle });
        }
        self.cycles[cycle].gates.push(gate);
        Ok(())
    }

    /// Ensures the circuit has at least `depth` cycles after cycle 0.
    pub fn extend_to_depth(&mut self, depth: usize) {
        if self.cycles.len() <= depth {
            self.cycles.resize_with(depth + 1, Cycle::default);
        }
    }

    /// True iff cycle 0 holds exactly one H on every qubit.
    pub fn has_hadamard_layer(&self) -> bool {
        let c0 = &self.cycles[0];
        c0.gates.len() == self.num_qubits()
            && c0.gates.iter().all(|g| g.kind == GateKind::H)
            && (0..self.num_qubits()).all(|q| c0.touches(q))
    }

    /// Canonical form: gates sorted by first qubit, trailing empty cycles dropped.
    pub fn canonicalize(&self) -> Circuit {
        let mut out = self.clone();
        for cy in &mut out.cycles {
            cy.gates.sort_by_key(|g| g.qubits[0]);
        }
        while out.cycles.len() > 1 && out.cycles.last().is_some_and(|c| c.gates.is_empty()) {
            out.cycles.pop();
        }
        out
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = |msg: &str| ParseError { line, kind: ParseErrorKind::Malformed(msg.into()) };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let Some(c) = circuit.as_mut() else {
            let [m, n] = fields[..] else {
                return Err(malformed("expected header `rows cols`"));
            };
            let rows: usize = m.parse().map_err(|_| malformed("bad row count"))?;
            let cols: usize = n.parse().map_err(|_| malformed("bad column count"))?;
            if rows == 0 || cols == 0 {
                return Err(malformed("grid dimensions must be positive"));
            }
            circuit = Some(Circuit::new(rows, cols));
            continue;
        };
        if fields.len() < 3 {
            return Err(malformed("expected `cycle gate q0 [q1]`"));
        }
        let cycle: usize = fields[0].parse().map_err(|_| malformed("bad cycle index"))?;
        let kind = GateKind::from_token(fields[1]).ok_or_else(|| malformed("unknown gate"))?;
        let qubits = fields[2..]
            .iter()
            .map(|f| f.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| malformed("bad qubit index"))?;
        if qubits.len() != kind.arity() {
            return Err(malformed("wrong number of qubits for gate"));
        }
        c.push(cycle, Gate { kind, qubits })
            .map_err(|e| ParseError { line, kind: ParseErrorKind::Circuit(e) })?;
    }
    circuit.ok_or(ParseError { line: 1, kind: ParseErrorKind::Malformed("missing header".into()) })
}

pub fn serialize_circuit(c: &Circuit) -> Result<String, CircuitError> {
    let canon = c.canonicalize();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", c.rows, c.cols);
    for (k, cy) in canon.cycles.iter().enumerate() {
        for g in &cy.gates {
            let tok = g.kind.token().ok_or(CircuitError::NotSerializable)?;
            let _ = write!(out, "{k} {tok}");
            for q in &g.qubits {
                let _ = write!(out, " {q}");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// The 4-qubit, 8-cycle example circuit used throughout the tests, on a 1x4 grid.
pub fn example_circuit() -> Circuit {
    use GateKind::*;
    let mut c = Circuit::with_hadamard_layer(1, 4);
    let layers: [&[Gate]; 7] = [
        &[Gate::cz(0, 1), Gate::single(SqrtX, 2), Gate::single(SqrtY, 3)],
        &[Gate::single(T, 0), Gate::single(T, 1), Gate::cz(2, 3)],
        &[Gate::cz(0, 2), Gate::single(Id, 1), Gate::single(SqrtX, 3)],
        &[Gate::cz(1, 3), Gate::single(Id, 2), Gate::single(SqrtX, 0)],
        &[Gate::cz(1, 2), Gate::single(SqrtY, 0), Gate::single(SqrtY, 3)],
        &[Gate::cz(0, 3), Gate::single(Id, 1), Gate::single(Id, 2)],
        &[Gate::single(H, 0), Gate::single(H, 1), Gate::single(H, 2), Gate::single(H, 3)],
    ];
    for (k, layer) in layers.iter().enumerate() {
        for g in layer.iter() {
            c.push(k + 1, g.clone()).expect("example circuit is valid");
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{assert_close, matmul};
    use alloc::string::ToString;

    const ALL: [GateKind; 6] =
        [GateKind::H, GateKind::T, GateKind::SqrtX, GateKind::SqrtY, GateKind::Cz, GateKind::Id];

    #[test]
    fn catalog_is_unitary() {
        for g in ALL {
            let m = g.matrix();
            let d = m.dim();
            for r in 0..d {
                for col in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..d {
                        acc += m.entry(k, r).conj() * m.entry(k, col);
                    }
                    let want = if r == col { 1.0 } else { 0.0 };
                    assert_close(acc, C64::new(want, 0.0), 1e-12);
                }
            }
        }
    }

    #[test]
    fn diagonal_flag_matches_scan() {
        for g in ALL {
            assert_eq!(g.is_diagonal(), g.matrix().is_diagonal(), "{g:?}");
        }
        assert!(GateKind::T.is_diagonal() && GateKind::Cz.is_diagonal() && GateKind::Id.is_diagonal());
        assert!(!GateKind::H.is_diagonal());
    }

    #[test]
    fn identity_matrix() {
        let m = GateKind::Id.matrix();
        assert_eq!(m.entries(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn t_squared_is_phase_gate() {
        let t = GateKind::T.matrix();
        let tt = matmul(t.entries(), t.entries(), 2);
        let want = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)];
        for (a, b) in tt.iter().zip(want) {
            assert_close(*a, b, 1e-12);
        }
    }

    #[test]
    fn square_roots_square_to_paulis() {
        let x = GateKind::SqrtX.matrix();
        let xx = matmul(x.entries(), x.entries(), 2);
        let px = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        for (a, b) in xx.iter().zip(px) {
            assert_close(*a, b, 1e-12);
        }
        let y = GateKind::SqrtY.matrix();
        let yy = matmul(y.entries(), y.entries(), 2);
        let py = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        for (a, b) in yy.iter().zip(py) {
            assert_close(*a, b, 1e-12);
        }
    }

    #[test]
    fn parse_smallest() {
        let c = parse_circuit("1 1\n0 h 0\n").unwrap();
        assert_eq!((c.rows(), c.cols(), c.depth()), (1, 1, 0));
        assert_eq!(c.cycles()[0].gates, vec![Gate::single(GateKind::H, 0)]);
        assert_eq!(serialize_circuit(&c).unwrap(), "1 1\n0 h 0\n");
    }

    #[test]
    fn parse_errors() {
        let e = parse_circuit("2 2\n0 h 0\n0 h 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::Circuit(CircuitError::Conflict { qubit: 0, .. })));

        let e = parse_circuit("2 2\n0 h 4\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Circuit(CircuitError::OutOfBounds { .. })));

        let e = parse_circuit("2 2\n# comment\n\n0 foo 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::Malformed(_)));

        assert!(parse_circuit("2 2\n1 cz 0\n").is_err());
        assert!(parse_circuit("2 2\n1 cz 0 0\n").is_err());
        assert!(parse_circuit("").is_err());
        assert!(e.to_string().starts_with("line 4"));
    }

    #[test]
    fn serialize_sorts_gates() {
        let c = parse_circuit("# x\n1 3\n1 t 2\n0 h 2\n0 h 0\n1 cz 0 1\n0 h 1\n").unwrap();
        assert_eq!(serialize_circuit(&c).unwrap(), "1 3\n0 h 0\n0 h 1\n0 h 2\n1 cz 0 1\n1 t 2\n");
    }

    #[test]
    fn example_circuit_text() {
        let text = serialize_circuit(&example_circuit()).unwrap();
        let cz: Vec<&str> = text.lines().filter(|l| l.contains("cz")).collect();
        assert_eq!(
            cz,
            ["1 cz 0 1", "2 cz 2 3", "3 cz 0 2", "4 cz 1 3", "5 cz 1 2", "6 cz 0 3"]
        );
        let c = parse_circuit(&text).unwrap();
        assert_eq!(c.cycles().len(), 8);
        assert_eq!(c, example_circuit().canonicalize());
    }

    #[test]
    fn custom_gates_do_not_serialize() {
        let mut c = Circuit::new(1, 1);
        c.push(0, Gate::single(GateKind::Unitary1(Box::new(GateKind::H.matrix().entries().try_into().unwrap())), 0))
            .unwrap();
        assert_eq!(serialize_circuit(&c), Err(CircuitError::NotSerializable));
    }
}
