//! Undirected graph over variables with the two mutations the planner needs:
//! elimination (clique fill-in, then removal) and plain vertex removal.

use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::model::VarId;

/// Adjacency-bitset graph. Vertex ids index directly into the rows, so the
/// id space should be compact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationGraph {
    present: FixedBitSet,
    adj: Vec<FixedBitSet>,
    degree: Vec<u32>,
    len: usize,
}

impl EliminationGraph {
    pub fn new() -> Self {
        EliminationGraph { present: FixedBitSet::new(), adj: Vec::new(), degree: Vec::new(), len: 0 }
    }

    fn grow(&mut self, n: usize) {
        if n <= self.adj.len() {
            return;
        }
        self.present.grow(n);
        for row in &mut self.adj {
            row.grow(n);
        }
        self.adj.resize(n, FixedBitSet::with_capacity(n));
        self.degree.resize(n, 0);
    }

    pub fn add_vertex(&mut self, v: VarId) {
        let i = v.index();
        self.grow(i + 1);
        if !self.present.put(i) {
            self.len += 1;
        }
    }

    pub fn add_edge(&mut self, u: VarId, v: VarId) {
        if u == v {
            return;
        }
        self.add_vertex(u);
        self.add_vertex(v);
        let (a, b) = (u.index(), v.index());
        if !self.adj[a].put(b) {
            self.adj[b].insert(a);
            self.degree[a] += 1;
            self.degree[b] += 1;
        }
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.present.contains(v.index())
    }

    pub fn has_edge(&self, u: VarId, v: VarId) -> bool {
        self.contains(u) && self.adj[u.index()].contains(v.index())
    }

    pub fn vertex_count(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn edge_count(&self) -> usize {
        self.present.ones().map(|i| self.degree[i] as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VarId) -> usize {
        self.degree[v.index()] as usize
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VarId> + '_ {
        self.present.ones().map(VarId::from_index)
    }

    pub fn neighbors(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        self.adj[v.index()].ones().map(VarId::from_index)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VarId, VarId)> {
        let mut out = Vec::new();
        for u in self.present.ones() {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.push((VarId::from_index(u), VarId::from_index(v)));
            }
        }
        out
    }

    /// Number of missing edges among the neighbors of `v`.
    pub fn fill_count(&self, v: VarId) -> usize {
        let row = &self.adj[v.index()];
        let d = self.degree(v);
        let mut missing = 0;
        for u in row.ones() {
            missing += d - 1 - row.intersection_count(&self.adj[u]);
        }
        missing / 2
    }

    /// Degree `w` would have after eliminating `v`.
    pub fn degree_after_eliminating(&self, v: VarId, w: VarId) -> usize {
        let (vi, wi) = (v.index(), w.index());
        if !self.adj[vi].contains(wi) {
            return self.degree(w);
        }
        self.adj[vi].union_count(&self.adj[wi]) - 2
    }

    /// Removes `v` and its edges without adding fill.
    pub fn remove_vertex(&mut self, v: VarId) {
        let i = v.index();
        if !self.present.contains(i) {
            return;
        }
        let n = self.adj.len();
        let row = core::mem::replace(&mut self.adj[i], FixedBitSet::with_capacity(n));
        for u in row.ones() {
            self.adj[u].set(i, false);
            self.degree[u] -= 1;
        }
        self.degree[i] = 0;
        self.present.set(i, false);
        self.len -= 1;
    }

    /// Connects all neighbors of `v` pairwise, then removes `v`. Returns the
    /// degree of `v` at elimination time.
    pub fn eliminate(&mut self, v: VarId) -> usize {
        let nbrs: Vec<usize> = self.adj[v.index()].ones().collect();
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                if !self.adj[a].put(b) {
                    self.adj[b].insert(a);
                    self.degree[a] += 1;
                    self.degree[b] += 1;
                }
            }
        }
        self.remove_vertex(v);
        nbrs.len()
    }

    /// The graph induced on the present vertices, as an edge list keyed by id.
    pub fn from_edges(vertices: impl IntoIterator<Item = VarId>, edges: &[(VarId, VarId)]) -> Self {
        let mut g = EliminationGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Id capacity; every vertex id is below this.
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    /// Fill count computed by enumerating neighbor pairs.
    pub fn fill_count_naive(&self, v: VarId) -> usize {
        let nbrs: Vec<VarId> = self.neighbors(v).collect();
        let mut n = 0;
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                if !self.has_edge(a, b) {
                    n += 1;
                }
            }
        }
        n
    }
}

impl Default for EliminationGraph {
    fn default() -> Self {
        EliminationGraph::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::example::{edges_named, example_graph, id};

    #[test]
    fn example_basic_shape() {
        let g = example_graph();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.degree(id('e')), 4);
        assert_eq!(g.degree(id('c')), 1);
    }

    #[test]
    fn eliminate_e_adds_clique() {
        let mut g = example_graph();
        let d = g.eliminate(id('e'));
        assert_eq!(d, 4);
        let mut want = edges_named(&["ab", "ah", "bg", "df", "fg", "gj", "hi", "ij"]);
        want.extend(edges_named(&["ac", "af", "bc", "bf", "cf"]));
        want.sort();
        assert_eq!(g.edges(), want);
    }

    #[test]
    fn fill_counts_agree_with_naive() {
        let mut g = example_graph();
        for step in ['e', 'a', 'g'] {
            for v in g.vertices().collect::<Vec<_>>() {
                assert_eq!(g.fill_count(v), g.fill_count_naive(v));
            }
            g.eliminate(id(step));
        }
    }

    #[test]
    fn degree_after_elimination_preview() {
        let g = example_graph();
        for v in g.vertices() {
            for w in g.vertices().filter(|&w| w != v) {
                let mut h = g.clone();
                h.eliminate(v);
                assert_eq!(g.degree_after_eliminating(v, w), h.degree(w));
            }
        }
    }

    #[test]
    fn remove_vertex_drops_edges_only() {
        let mut g = example_graph();
        g.remove_vertex(id('e'));
        assert_eq!(g.edge_count(), 8);
        assert!(!g.has_edge(id('a'), id('c')));
    }
}
