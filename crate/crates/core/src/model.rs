//! The undirected graphical model of a circuit.
//!
//! Every qubit carries a current wire variable. Diagonal gates attach factors
//! to the current variables; non-diagonal gates open new variables. The
//! output projection `<x|` (and, by default, the `|0>` input) is applied by
//! slicing, so those boundary variables never appear as vertices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, GateMatrix};
use crate::graph::EliminationGraph;
use crate::tensor::Tensor;
use crate::C64;

/// Handle of a binary variable. Ids are compact: surviving vertices of a
/// freshly built model are numbered `0..n` in creation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        VarId(i as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRole {
    /// The `|0>` value of a qubit before any gate.
    Input,
    /// Opened by a non-diagonal gate in `cycle`.
    Gate,
}

/// Debug identity of a variable: which wire and when it was created.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub qubit: usize,
    pub cycle: usize,
    pub role: VarRole,
}

impl core::fmt::Display for VarInfo {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.role {
            VarRole::Input => write!(f, "q{}_in", self.qubit),
            VarRole::Gate => write!(f, "q{}_c{}", self.qubit, self.cycle),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Keep the `|0>` input variables as degree-1 vertices with a `[1, 0]`
    /// factor instead of slicing them away.
    pub keep_input_vertices: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("output bitstring has {got} bits, circuit has {expected} qubits")]
    OutputLength { expected: usize, got: usize },
    #[error("{0} free variables exceed the brute-force cap of {1}")]
    TooManyVariables(usize, usize),
    #[error("variable {0:?} is not a free vertex of the model")]
    UnknownVariable(VarId),
}

#[derive(Clone, Debug)]
pub struct GraphModel {
    pub(crate) info: Vec<VarInfo>,
    pub(crate) graph: EliminationGraph,
    pub(crate) factors: Vec<Tensor>,
    pub(crate) scalar: C64,
    pub(crate) fixed: BTreeMap<VarId, bool>,
}

pub const BRUTE_FORCE_CAP: usize = 24;

impl GraphModel {
    pub fn graph(&self) -> &EliminationGraph {
        &self.graph
    }

    pub fn factors(&self) -> &[Tensor] {
        &self.factors
    }

    /// Product of the rank-0 factors already folded out of the factor list.
    pub fn scalar(&self) -> C64 {
        self.scalar
    }

    pub fn fixed(&self) -> &BTreeMap<VarId, bool> {
        &self.fixed
    }

    pub fn info(&self, v: VarId) -> VarInfo {
        self.info[v.index()]
    }

    /// Free (unfixed, not yet eliminated) variables in id order.
    pub fn free_vars(&self) -> Vec<VarId> {
        self.graph.vertices().collect()
    }

    pub fn num_free(&self) -> usize {
        self.graph.vertex_count()
    }

    pub(crate) fn push_factor(&mut self, t: Tensor) {
        match t.scalar_value() {
            Some(s) => self.scalar *= s,
            None => self.factors.push(t),
        }
    }

    /// Slices every factor containing `v` at `bit` and removes `v` with its
    /// edges. No factor is created.
    pub fn fix(&mut self, v: VarId, bit: bool) -> Result<(), ModelError> {
        if !self.graph.contains(v) {
            return Err(ModelError::UnknownVariable(v));
        }
        let factors = core::mem::take(&mut self.factors);
        for f in factors {
            if f.contains(v) {
                let s = f.slice(v, bit).expect("axis present");
                self.push_factor(s);
            } else {
                self.factors.push(f);
            }
        }
        self.graph.remove_vertex(v);
        self.fixed.insert(v, bit);
        Ok(())
    }
}

/// Builds the model of `<x|C|0...0>`, with `output[q]` the bit of qubit `q`.
pub fn build_model(c: &Circuit, output: &[bool], opts: BuildOptions) -> Result<GraphModel, ModelError> {
    let n = c.num_qubits();
    if output.len() != n {
        return Err(ModelError::OutputLength { expected: n, got: output.len() });
    }
    let mut info: Vec<VarInfo> = Vec::new();
    let mut new_var = |qubit: usize, cycle: usize, role: VarRole| {
        info.push(VarInfo { qubit, cycle, role });
        VarId::from_index(info.len() - 1)
    };
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);

    let inputs: Vec<VarId> = (0..n).map(|q| new_var(q, 0, VarRole::Input)).collect();
    let mut wire = inputs.clone();
    let mut factors: Vec<Tensor> =
        inputs.iter().map(|&v| Tensor::new(vec![v], vec![one, zero]).unwrap()).collect();

    for (k, g) in c.gates() {
        let m = g.kind.matrix();
        let diagonal = m.is_diagonal();
        let t = match (&m, diagonal) {
            (GateMatrix::One(_), true) => Tensor::new(vec![wire[g.qubits[0]]], m.diagonal()),
            (GateMatrix::Two(_), true) => {
                Tensor::new(vec![wire[g.qubits[0]], wire[g.qubits[1]]], m.diagonal())
            }
            (GateMatrix::One(e), false) => {
                let q = g.qubits[0];
                let old = wire[q];
                wire[q] = new_var(q, k, VarRole::Gate);
                Tensor::new(vec![wire[q], old], e.to_vec())
            }
            (GateMatrix::Two(e), false) => {
                let (qa, qb) = (g.qubits[0], g.qubits[1]);
                let (oa, ob) = (wire[qa], wire[qb]);
                wire[qa] = new_var(qa, k, VarRole::Gate);
                wire[qb] = new_var(qb, k, VarRole::Gate);
                Tensor::new(vec![wire[qa], wire[qb], oa, ob], e.to_vec())
            }
        };
        factors.push(t.expect("gate tensor shape"));
    }

    // Boundary assignment: outputs to x, inputs to 0 unless kept. A wire with
    // no non-diagonal gate has input == output; it is fixed once at x[q],
    // and its [1, 0] factor then yields the required delta(x[q], 0).
    let mut assign: BTreeMap<VarId, bool> = BTreeMap::new();
    for q in 0..n {
        assign.insert(wire[q], output[q]);
    }
    if !opts.keep_input_vertices {
        for &v in &inputs {
            assign.entry(v).or_insert(false);
        }
    }

    // Renumber: survivors first in creation order, then boundary variables.
    let total = info.len();
    let mut remap = vec![VarId(0); total];
    let mut next = 0usize;
    for (i, slot) in remap.iter_mut().enumerate() {
        if !assign.contains_key(&VarId::from_index(i)) {
            *slot = VarId::from_index(next);
            next += 1;
        }
    }
    for (i, slot) in remap.iter_mut().enumerate() {
        if assign.contains_key(&VarId::from_index(i)) {
            *slot = VarId::from_index(next);
            next += 1;
        }
    }
    let mut new_info = vec![info[0]; total];
    for (i, &r) in remap.iter().enumerate() {
        new_info[r.index()] = info[i];
    }

    let mut model = GraphModel {
        info: new_info,
        graph: EliminationGraph::new(),
        factors: Vec::new(),
        scalar: one,
        fixed: BTreeMap::new(),
    };
    for v in 0..total {
        model.graph.add_vertex(VarId::from_index(v));
    }
    for f in factors {
        let axes = f.axes().iter().map(|a| remap[a.index()]).collect();
        let t = Tensor::new(axes, f.data().to_vec()).unwrap();
        for (i, &a) in t.axes().iter().enumerate() {
            for &b in &t.axes()[i + 1..] {
                model.graph.add_edge(a, b);
            }
        }
        model.push_factor(t);
    }
    for (v, bit) in assign {
        model.fix(remap[v.index()], bit).expect("boundary variable present");
    }
    Ok(model)
}

/// Sums the product of all factors over every assignment of the free
/// variables. Reference semantics for every other evaluation path.
pub fn model_value_bruteforce(g: &GraphModel) -> Result<C64, ModelError> {
    let vars = g.free_vars();
    if vars.len() > BRUTE_FORCE_CAP {
        return Err(ModelError::TooManyVariables(vars.len(), BRUTE_FORCE_CAP));
    }
    let mut pos = vec![usize::MAX; g.graph.capacity()];
    for (i, v) in vars.iter().enumerate() {
        pos[v.index()] = i;
    }
    let mut total = C64::new(0.0, 0.0);
    for a in 0u64..(1u64 << vars.len()) {
        let mut term = g.scalar;
        for f in &g.factors {
            term *= f.value_at(|v| (a >> pos[v.index()]) & 1 == 1);
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{example_circuit, Gate, GateKind};
    use crate::testutil::assert_close;
    use crate::testutil::example::{edges_named, EDGES};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn example_circuit_matches_example_graph() {
        for x in 0..16u32 {
            let bits: Vec<bool> = (0..4).map(|q| (x >> (3 - q)) & 1 == 1).collect();
            let g = build_model(&example_circuit(), &bits, BuildOptions::default()).unwrap();
            assert_eq!(g.num_free(), 10);
            assert_eq!(g.graph().edges(), edges_named(&EDGES));
        }
    }

    #[test]
    fn example_circuit_letters_follow_wires() {
        let g = build_model(&example_circuit(), &[false; 4], BuildOptions::default()).unwrap();
        // a..d after the Hadamard layer, then e,f (cycle 1), g (3), h (4), i,j (5)
        let want = [(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 3), (0, 4), (0, 5), (3, 5)];
        for (i, (q, k)) in want.into_iter().enumerate() {
            let inf = g.info(VarId(i as u32));
            assert_eq!((inf.qubit, inf.cycle, inf.role), (q, k, VarRole::Gate));
        }
    }

    #[test]
    fn single_hadamard_keeping_input() {
        let c = Circuit::with_hadamard_layer(1, 1);
        let g = build_model(&c, &[false], BuildOptions { keep_input_vertices: true }).unwrap();
        assert_eq!(g.free_vars(), vec![VarId(0)]);
        assert_eq!(g.info(VarId(0)).role, VarRole::Input);
        let h = FRAC_1_SQRT_2;
        let mut datas: Vec<Vec<C64>> = g.factors().iter().map(|f| f.data().to_vec()).collect();
        datas.sort_by(|a, b| a[0].re.partial_cmp(&b[0].re).unwrap());
        assert_eq!(datas, vec![vec![C64::new(h, 0.0), C64::new(h, 0.0)], vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]);
        assert_close(model_value_bruteforce(&g).unwrap(), C64::new(h, 0.0), 1e-15);
    }

    #[test]
    fn single_hadamard_default_has_no_vertices() {
        let c = Circuit::with_hadamard_layer(1, 1);
        let g = build_model(&c, &[true], BuildOptions::default()).unwrap();
        assert_eq!(g.num_free(), 0);
        assert!(g.factors().is_empty());
        assert_close(g.scalar(), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15);
    }

    #[test]
    fn diagonal_only_wire_enforces_input_value() {
        let mut c = Circuit::new(1, 1);
        c.push(0, Gate::single(GateKind::T, 0)).unwrap();
        for opts in [BuildOptions::default(), BuildOptions { keep_input_vertices: true }] {
            let g0 = build_model(&c, &[false], opts).unwrap();
            let g1 = build_model(&c, &[true], opts).unwrap();
            assert_close(model_value_bruteforce(&g0).unwrap(), C64::new(1.0, 0.0), 1e-15);
            assert_close(model_value_bruteforce(&g1).unwrap(), C64::new(0.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn wrong_output_length() {
        let err = build_model(&example_circuit(), &[false; 3], BuildOptions::default()).unwrap_err();
        assert_eq!(err, ModelError::OutputLength { expected: 4, got: 3 });
    }

    #[test]
    fn fix_unknown_variable() {
        let mut g = build_model(&example_circuit(), &[false; 4], BuildOptions::default()).unwrap();
        g.fix(VarId(0), true).unwrap();
        assert_eq!(g.fix(VarId(0), true), Err(ModelError::UnknownVariable(VarId(0))));
    }

    #[test]
    fn bruteforce_cap() {
        let mut c = Circuit::with_hadamard_layer(5, 5);
        for q in 0..25 {
            c.push(1, Gate::single(GateKind::SqrtX, q)).unwrap();
        }
        let g = build_model(&c, &[false; 25], BuildOptions::default()).unwrap();
        assert_eq!(g.num_free(), 25);
        assert_eq!(model_value_bruteforce(&g), Err(ModelError::TooManyVariables(25, 24)));
    }

    #[test]
    fn empty_model_is_product_of_scalars() {
        let c = Circuit::with_hadamard_layer(1, 2);
        let g = build_model(&c, &[false, true], BuildOptions::default()).unwrap();
        assert_eq!(g.num_free(), 0);
        assert_close(model_value_bruteforce(&g).unwrap(), C64::new(0.5, 0.0), 1e-15);
    }
}
