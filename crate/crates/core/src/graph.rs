//! Vertex-weighted multigraphs and their structural invariants.
//!
//! A [`WeightedMultigraph`] is immutable once built. Vertices are addressed by
//! their index in declaration order; names are opaque strings whose
//! lexicographic order is used wherever a deterministic choice is needed
//! (see [`WeightedMultigraph::base_vertex`]).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::divisor::Divisor;
use crate::error::{Error, Result};

/// Index of a vertex in declaration order.
pub type Vertex = usize;

/// A subset of the vertices of a fixed graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: vec![true; n],
        }
    }

    pub fn singleton(n: usize, v: Vertex) -> Self {
        let mut s = Self::empty(n);
        s.members[v] = true;
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexIndex(v));
            }
            s.members[v] = true;
        }
        Ok(s)
    }

    /// Subset encoded by the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        VertexSet {
            members: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members[v]
    }

    pub fn insert(&mut self, v: Vertex) {
        self.members[v] = true;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            members: self.members.iter().map(|b| !b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

/// Classification of every non-loop edge as bridge or non-bridge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    /// Edge indices whose removal disconnects the graph.
    pub bridges: Vec<usize>,
    /// All remaining edge indices, loops included.
    pub non_bridges: Vec<usize>,
}

impl EdgeCut {
    pub fn is_bridge(&self, edge: usize) -> bool {
        self.bridges.binary_search(&edge).is_ok()
    }
}

/// Result of contracting every non-bridge edge.
#[derive(Debug, Clone)]
pub struct BridgeTree {
    /// One vertex per 2-edge-connected component; all weights are zero.
    pub tree: WeightedMultigraph,
    /// Maps each vertex of the original graph to its tree vertex.
    pub vertex_map: Vec<Vertex>,
}

/// The weightless, loopless model of a graph.
#[derive(Debug, Clone)]
pub struct BulletModel {
    pub graph: WeightedMultigraph,
    /// Original vertex `v` sits at `embed[v]` in the model.
    pub embed: Vec<Vertex>,
}

impl BulletModel {
    /// Pushes a divisor forward, placing zero on the new vertices.
    pub fn embed_divisor(&self, d: &Divisor) -> Divisor {
        let mut values = vec![0; self.graph.vertex_count()];
        for (v, &x) in d.values().iter().enumerate() {
            values[self.embed[v]] = x;
        }
        Divisor::new(values)
    }
}

/// Stability predicates; only meaningful for genus at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stability {
    pub semistable: bool,
    pub stable: bool,
    /// False when the genus is below 2; both predicates are then reported false.
    pub applicable: bool,
}

/// A connected multigraph with nonnegative integer vertex weights.
#[derive(Clone)]
pub struct WeightedMultigraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    weights: Vec<i64>,
    /// Normalized so that `a <= b`; `a == b` is a loop.
    edges: Vec<(Vertex, Vertex)>,
    /// Off-diagonal edge multiplicities; diagonal is zero.
    mult: Vec<Vec<i64>>,
    loops: Vec<i64>,
    /// Non-loop incidences as `(neighbor, edge index)`.
    adjacency: Vec<Vec<(Vertex, usize)>>,
    lex_order: Vec<Vertex>,
}

impl fmt::Debug for WeightedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedMultigraph")
            .field("vertices", &self.names)
            .field("weights", &self.weights)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Accumulates vertices and edges by name; validation happens in [`GraphBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, name: impl Into<String>, weight: u32) -> Self {
        self.add_vertex(name, weight);
        self
    }

    pub fn edge(self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.edges_between(a, b, 1)
    }

    pub fn edges_between(mut self, a: impl Into<String>, b: impl Into<String>, count: usize) -> Self {
        self.add_edges(a, b, count);
        self
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, weight: u32) {
        self.vertices.push((name.into(), weight));
    }

    pub fn add_edges(&mut self, a: impl Into<String>, b: impl Into<String>, count: usize) {
        let (a, b) = (a.into(), b.into());
        for _ in 0..count {
            self.edges.push((a.clone(), b.clone()));
        }
    }

    pub fn build(self) -> Result<WeightedMultigraph> {
        let mut index = HashMap::new();
        for (i, (name, _)) in self.vertices.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (a, b) in &self.edges {
            let a = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let b = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            edges.push((a, b));
        }
        let names = self.vertices.iter().map(|(n, _)| n.clone()).collect();
        let weights = self.vertices.iter().map(|&(_, w)| i64::from(w)).collect();
        WeightedMultigraph::from_parts(names, weights, edges)
    }
}

impl WeightedMultigraph {
    /// Builds a graph from vertex names, weights and endpoint index pairs.
    pub fn from_parts(names: Vec<String>, weights: Vec<i64>, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NoVertices);
        }
        assert_eq!(weights.len(), n, "one weight per vertex");
        if let Some(v) = weights.iter().position(|&w| w < 0) {
            return Err(Error::NegativeArgument(weights[v]));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut mult = vec![vec![0i64; n]; n];
        let mut loops = vec![0i64; n];
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a >= n {
                return Err(Error::VertexIndex(a));
            }
            if b >= n {
                return Err(Error::VertexIndex(b));
            }
            let (a, b) = (a.min(b), a.max(b));
            normalized.push((a, b));
            if a == b {
                loops[a] += 1;
            } else {
                mult[a][b] += 1;
                mult[b][a] += 1;
                adjacency[a].push((b, id));
                adjacency[b].push((a, id));
            }
        }
        let mut lex_order: Vec<Vertex> = (0..n).collect();
        lex_order.sort_by(|&x, &y| names[x].cmp(&names[y]));
        let g = WeightedMultigraph {
            names,
            index,
            weights,
            edges: normalized,
            mult,
            loops,
            adjacency,
            lex_order,
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let start = self.base_vertex();
        let reach = self.reachable_from(start, |_| true);
        match reach.iter().position(|&r| !r) {
            Some(v) => Err(Error::Disconnected(
                self.names[v].clone(),
                self.names[start].clone(),
            )),
            None => Ok(()),
        }
    }

    /// Vertices reachable from `start` using only edges accepted by `keep`.
    fn reachable_from(&self, start: Vertex, keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &self.adjacency[v] {
                if !seen[w] && keep(e) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    pub fn weight(&self, v: Vertex) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Edge endpoints, normalized so the smaller index comes first.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn loops_at(&self, v: Vertex) -> i64 {
        self.loops[v]
    }

    /// Number of edges joining two distinct vertices; zero on the diagonal.
    pub fn multiplicity(&self, a: Vertex, b: Vertex) -> i64 {
        self.mult[a][b]
    }

    /// Distinct neighbors of `v` (loops excluded) with their edge multiplicities.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, i64)> + '_ {
        self.mult[v]
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0)
            .map(|(w, &m)| (w, m))
    }

    /// Number of edges from `v` into `set` (loops never count).
    pub fn edges_into(&self, v: Vertex, set: &VertexSet) -> i64 {
        self.neighbors(v)
            .filter(|&(w, _)| set.contains(w))
            .map(|(_, m)| m)
            .sum()
    }

    /// Number of edges crossing between `set` and its complement.
    pub fn cut_size(&self, set: &VertexSet) -> i64 {
        set.iter()
            .map(|v| self.neighbors(v).filter(|&(w, _)| !set.contains(w)).map(|(_, m)| m).sum::<i64>())
            .sum()
    }

    /// Vertices sorted by name.
    pub fn lex_order(&self) -> &[Vertex] {
        &self.lex_order
    }

    /// The lexicographically smallest vertex, used as the default base point.
    pub fn base_vertex(&self) -> Vertex {
        self.lex_order[0]
    }

    pub fn is_weightless(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    pub fn is_loopless(&self) -> bool {
        self.loops.iter().all(|&l| l == 0)
    }

    /// `|E| - |V| + 1 + total weight`.
    pub fn genus(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1 + self.weights.iter().sum::<i64>()
    }

    /// Edge endpoints at `v`, a loop contributing two.
    pub fn valence(&self, v: Vertex) -> i64 {
        self.mult[v].iter().sum::<i64>() + 2 * self.loops[v]
    }

    pub fn valence_of(&self, name: &str) -> Result<i64> {
        Ok(self.valence(self.vertex(name)?))
    }

    /// `k(v) = 2 w(v) - 2 + val(v)`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor::new(
            self.vertices()
                .map(|v| 2 * self.weights[v] - 2 + self.valence(v))
                .collect(),
        )
    }

    pub fn stability(&self) -> Stability {
        if self.genus() < 2 {
            return Stability {
                semistable: false,
                stable: false,
                applicable: false,
            };
        }
        let weightless_valences = || {
            self.vertices()
                .filter(|&v| self.weights[v] == 0)
                .map(|v| self.valence(v))
        };
        Stability {
            semistable: weightless_valences().all(|val| val >= 2),
            stable: weightless_valences().all(|val| val >= 3),
            applicable: true,
        }
    }

    pub fn is_semistable(&self) -> bool {
        self.stability().semistable
    }

    pub fn is_stable(&self) -> bool {
        self.stability().stable
    }

    /// Bridge classification by a low-link depth-first search keyed on edge
    /// identity, so parallel edges are never bridges.
    pub fn bridges(&self) -> EdgeCut {
        let n = self.vertex_count();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_bridge = vec![false; self.edge_count()];
        let mut clock = 0usize;
        // (vertex, edge used to enter it, next adjacency position)
        let mut stack: Vec<(Vertex, Option<usize>, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = clock;
            low[root] = clock;
            clock += 1;
            stack.push((root, None, 0));
            while let Some(&mut (v, parent_edge, ref mut pos)) = stack.last_mut() {
                if let Some(&(w, e)) = self.adjacency[v].get(*pos) {
                    *pos += 1;
                    if Some(e) == parent_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        stack.push((w, Some(e), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(e), Some(&(parent, _, _))) = (parent_edge, stack.last()) {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > disc[parent] {
                            is_bridge[e] = true;
                        }
                    }
                }
            }
        }
        let (bridges, non_bridges) = (0..self.edge_count()).partition(|&e| is_bridge[e]);
        EdgeCut {
            bridges,
            non_bridges,
        }
    }

    /// Contracts every non-bridge edge, yielding the tree of 2-edge-connected
    /// components. Tree vertices are named by joining member names with `+`.
    pub fn contract_non_bridges(&self) -> BridgeTree {
        let cut = self.bridges();
        let n = self.vertex_count();
        let mut component = vec![usize::MAX; n];
        let mut members: Vec<Vec<Vertex>> = Vec::new();
        for v in 0..n {
            if component[v] != usize::MAX {
                continue;
            }
            let reach = self.reachable_from(v, |e| !cut.is_bridge(e));
            let id = members.len();
            let mut group = Vec::new();
            for w in (0..n).filter(|&w| reach[w]) {
                component[w] = id;
                group.push(w);
            }
            members.push(group);
        }
        let names = members
            .iter()
            .map(|group| {
                let mut parts: Vec<&str> = group.iter().map(|&v| self.name(v)).collect();
                parts.sort_unstable();
                parts.join("+")
            })
            .collect();
        let tree_edges = cut
            .bridges
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                (component[a], component[b])
            })
            .collect();
        let tree = WeightedMultigraph::from_parts(names, vec![0; members.len()], tree_edges)
            .expect("contraction of a connected graph is connected");
        BridgeTree {
            tree,
            vertex_map: component,
        }
    }

    /// True iff the bridge tree is a path.
    pub fn is_chain_of_2ec(&self) -> bool {
        let tree = self.contract_non_bridges().tree;
        tree.vertices().all(|v| tree.valence(v) <= 2)
    }

    /// Replaces every unit of weight and every loop at `v` by a new vertex
    /// joined to `v` by two parallel edges. Original vertices keep their
    /// indices, so `embed` is the identity on them.
    pub fn bullet_model(&self) -> BulletModel {
        let n = self.vertex_count();
        let embed: Vec<Vertex> = (0..n).collect();
        if self.is_weightless() && self.is_loopless() {
            return BulletModel {
                graph: self.clone(),
                embed,
            };
        }
        let taken: BTreeSet<&str> = self.names.iter().map(String::as_str).collect();
        let fresh = |base: String| {
            let mut candidate = base.clone();
            let mut k = 0;
            while taken.contains(candidate.as_str()) {
                k += 1;
                candidate = format!("{base}'{k}");
            }
            candidate
        };
        let mut names = self.names.clone();
        let mut weights = vec![0i64; n];
        let mut edges: Vec<(Vertex, Vertex)> = self.edges.iter().copied().filter(|&(a, b)| a != b).collect();
        for v in 0..n {
            let satellites = (0..self.weights[v])
                .map(|i| format!("{}#w{}", self.names[v], i))
                .chain((0..self.loops[v]).map(|i| format!("{}#l{}", self.names[v], i)));
            for label in satellites {
                let s = names.len();
                names.push(fresh(label));
                weights.push(0);
                edges.push((v, s));
                edges.push((v, s));
            }
        }
        let graph = WeightedMultigraph::from_parts(names, weights, edges)
            .expect("bullet model of a connected graph is connected");
        BulletModel { graph, embed }
    }
}
