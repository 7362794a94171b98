//! Mixed graphs over named nodes: undirected edges, directed edges, DAG and
//! PDAG refinements, Markov-blanket reading, orientation closure, and the
//! structural Hamming distance used for benchmarking.
//!
//! Node identity is by name. Indices are an internal detail; they follow
//! insertion order and drive deterministic iteration everywhere.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Edge mark as seen from its stored (from, to) orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Undirected,
    /// from → to
    Directed,
}

/// Edge as reported by listing APIs and consumed by serializers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub mark: Mark,
}

/// Internal per-pair state, keyed by (lo, hi) node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairState {
    Undirected,
    /// lo → hi
    Forward,
    /// hi → lo
    Backward,
}

/// Graph over named nodes with at most one edge (undirected or directed)
/// per node pair and no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeMap<(usize, usize), PairState>,
}

impl LabelledGraph {
    pub fn new(nodes: &[&str]) -> Result<Self> {
        let mut g = LabelledGraph { names: Vec::new(), index: BTreeMap::new(), edges: BTreeMap::new() };
        for n in nodes {
            g.add_node(n)?;
        }
        Ok(g)
    }

    /// Complete undirected graph; the starting point of constraint-based
    /// structure search.
    pub fn complete(nodes: &[&str]) -> Result<Self> {
        let mut g = Self::new(nodes)?;
        for a in 0..g.names.len() {
            for b in a + 1..g.names.len() {
                g.edges.insert((a, b), PairState::Undirected);
            }
        }
        Ok(g)
    }

    pub fn add_node(&mut self, name: &str) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::InvalidArgument(format!("duplicate node name {name:?}")));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        Ok(())
    }

    pub fn nodes(&self) -> &[String] {
        &self.names
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub(crate) fn idx(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    fn key(a: usize, b: usize) -> (usize, usize) {
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn insert_pair(&mut self, a: usize, b: usize, state: PairState) -> Result<()> {
        if a == b {
            return Err(Error::GraphStructure(format!(
                "self-loop on {:?} rejected",
                self.names[a]
            )));
        }
        let key = Self::key(a, b);
        if self.edges.contains_key(&key) {
            return Err(Error::GraphStructure(format!(
                "edge between {:?} and {:?} already present",
                self.names[key.0], self.names[key.1]
            )));
        }
        self.edges.insert(key, state);
        Ok(())
    }

    pub fn add_undirected(&mut self, a: &str, b: &str) -> Result<()> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        self.insert_pair(ia, ib, PairState::Undirected)
    }

    pub fn add_directed(&mut self, from: &str, to: &str) -> Result<()> {
        let (ia, ib) = (self.idx(from)?, self.idx(to)?);
        let state = if ia < ib { PairState::Forward } else { PairState::Backward };
        self.insert_pair(ia, ib, state)
    }

    pub fn remove_edge(&mut self, a: &str, b: &str) -> Result<()> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        self.remove_edge_idx(ia, ib)
    }

    pub(crate) fn remove_edge_idx(&mut self, a: usize, b: usize) -> Result<()> {
        self.edges.remove(&Self::key(a, b)).map(|_| ()).ok_or_else(|| {
            Error::GraphStructure(format!(
                "no edge between {:?} and {:?}",
                self.names[a], self.names[b]
            ))
        })
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.idx(a), self.idx(b)) {
            (Ok(ia), Ok(ib)) if ia != ib => self.edges.contains_key(&Self::key(ia, ib)),
            _ => false,
        }
    }

    pub(crate) fn has_edge_idx(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains_key(&Self::key(a, b))
    }

    pub fn has_directed(&self, from: &str, to: &str) -> bool {
        match (self.idx(from), self.idx(to)) {
            (Ok(ia), Ok(ib)) => self.directed_idx(ia, ib),
            _ => false,
        }
    }

    fn directed_idx(&self, from: usize, to: usize) -> bool {
        if from == to {
            return false;
        }
        match self.edges.get(&Self::key(from, to)) {
            Some(PairState::Forward) => from < to,
            Some(PairState::Backward) => from > to,
            _ => false,
        }
    }

    fn undirected_idx(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.get(&Self::key(a, b)) == Some(&PairState::Undirected)
    }

    pub fn has_undirected(&self, a: &str, b: &str) -> bool {
        match (self.idx(a), self.idx(b)) {
            (Ok(ia), Ok(ib)) => self.undirected_idx(ia, ib),
            _ => false,
        }
    }

    /// All nodes sharing any edge with `name`, in insertion order.
    pub fn adjacent(&self, name: &str) -> Result<Vec<String>> {
        let i = self.idx(name)?;
        Ok(self.adjacent_idx(i).into_iter().map(|j| self.names[j].clone()).collect())
    }

    pub(crate) fn adjacent_idx(&self, i: usize) -> Vec<usize> {
        (0..self.names.len()).filter(|&j| self.has_edge_idx(i, j)).collect()
    }

    pub(crate) fn parents_idx(&self, i: usize) -> Vec<usize> {
        (0..self.names.len()).filter(|&j| self.directed_idx(j, i)).collect()
    }

    pub(crate) fn children_idx(&self, i: usize) -> Vec<usize> {
        (0..self.names.len()).filter(|&j| self.directed_idx(i, j)).collect()
    }

    pub(crate) fn undirected_neighbors_idx(&self, i: usize) -> Vec<usize> {
        (0..self.names.len()).filter(|&j| self.undirected_idx(i, j)).collect()
    }

    /// Edges in deterministic order (sorted by canonical index pair); each
    /// directed edge is reported tail first.
    pub fn edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|(&(a, b), state)| match state {
                PairState::Undirected => Edge {
                    from: self.names[a].clone(),
                    to: self.names[b].clone(),
                    mark: Mark::Undirected,
                },
                PairState::Forward => Edge {
                    from: self.names[a].clone(),
                    to: self.names[b].clone(),
                    mark: Mark::Directed,
                },
                PairState::Backward => Edge {
                    from: self.names[b].clone(),
                    to: self.names[a].clone(),
                    mark: Mark::Directed,
                },
            })
            .collect()
    }

    /// True when a directed path from → … → to exists (directed edges only).
    fn reachable_directed(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for v in self.children_idx(u) {
                if v == to {
                    return true;
                }
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    fn directed_part_acyclic(&self) -> bool {
        // Kahn's algorithm over the directed subgraph.
        let n = self.names.len();
        let mut indeg = vec![0usize; n];
        for (&(a, b), s) in &self.edges {
            match s {
                PairState::Forward => indeg[b] += 1,
                PairState::Backward => indeg[a] += 1,
                PairState::Undirected => {}
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(u) = queue.pop() {
            removed += 1;
            for v in self.children_idx(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        removed == n
    }
}

/// Directed acyclic graph. Every mutation re-checks acyclicity and rejects
/// the offending edge atomically.
#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    g: LabelledGraph,
}

impl Dag {
    pub fn new(nodes: &[&str]) -> Result<Self> {
        Ok(Dag { g: LabelledGraph::new(nodes)? })
    }

    /// Wrap an existing graph, verifying every edge is directed and the
    /// result is acyclic.
    pub fn from_graph(g: LabelledGraph) -> Result<Self> {
        if g.edges.values().any(|s| *s == PairState::Undirected) {
            return Err(Error::GraphStructure("DAG cannot hold undirected edges".into()));
        }
        if !g.directed_part_acyclic() {
            return Err(Error::Cycle("directed cycle in DAG candidate".into()));
        }
        Ok(Dag { g })
    }

    pub fn as_graph(&self) -> &LabelledGraph {
        &self.g
    }

    pub fn into_graph(self) -> LabelledGraph {
        self.g
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<()> {
        let (ia, ib) = (self.g.idx(from)?, self.g.idx(to)?);
        if ia == ib {
            return Err(Error::GraphStructure(format!("self-loop on {from:?} rejected")));
        }
        if self.g.reachable_directed(ib, ia) {
            return Err(Error::Cycle(format!("edge {from:?}→{to:?} would close a directed cycle")));
        }
        self.g.add_directed(from, to)
    }

    pub fn remove_edge(&mut self, from: &str, to: &str) -> Result<()> {
        if !self.g.has_directed(from, to) {
            return Err(Error::GraphStructure(format!("no edge {from:?}→{to:?}")));
        }
        self.g.remove_edge(from, to)
    }

    pub fn parents(&self, node: &str) -> Result<Vec<String>> {
        let i = self.g.idx(node)?;
        Ok(self.g.parents_idx(i).into_iter().map(|j| self.g.names[j].clone()).collect())
    }

    pub fn children(&self, node: &str) -> Result<Vec<String>> {
        let i = self.g.idx(node)?;
        Ok(self.g.children_idx(i).into_iter().map(|j| self.g.names[j].clone()).collect())
    }

    /// Parents, children, and co-parents of `target`'s children, with the
    /// target itself excluded. Returned in node insertion order.
    pub fn markov_blanket(&self, target: &str) -> Result<Vec<String>> {
        let t = self.g.idx(target)?;
        let mut blanket = BTreeSet::new();
        for p in self.g.parents_idx(t) {
            blanket.insert(p);
        }
        for c in self.g.children_idx(t) {
            blanket.insert(c);
            for spouse in self.g.parents_idx(c) {
                blanket.insert(spouse);
            }
        }
        blanket.remove(&t);
        Ok(blanket.into_iter().map(|j| self.g.names[j].clone()).collect())
    }

    /// Nodes in a topological order (parents before children), stable with
    /// respect to insertion order among incomparable nodes.
    pub fn topological_order(&self) -> Vec<String> {
        let n = self.g.names.len();
        let mut indeg: Vec<usize> = (0..n).map(|i| self.g.parents_idx(i).len()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(&u) = ready.iter().next() {
            ready.remove(&u);
            out.push(self.g.names[u].clone());
            for v in self.g.children_idx(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        debug_assert_eq!(out.len(), n, "DAG invariant guarantees a complete order");
        out
    }

    /// The completed partially directed graph of this DAG's equivalence
    /// class: skeleton plus colliders, closed under the orientation rules.
    pub fn to_cpdag(&self) -> Pdag {
        let names: Vec<&str> = self.g.names.iter().map(|s| s.as_str()).collect();
        let mut skeleton = LabelledGraph::new(&names).expect("names already unique");
        for (&(a, b), _) in &self.g.edges {
            skeleton.edges.insert((a, b), PairState::Undirected);
        }
        let mut colliders = Vec::new();
        for c in 0..self.g.names.len() {
            let parents = self.g.parents_idx(c);
            for (u, &p1) in parents.iter().enumerate() {
                for &p2 in &parents[u + 1..] {
                    if !self.g.has_edge_idx(p1, p2) {
                        colliders.push((
                            self.g.names[p1].clone(),
                            self.g.names[c].clone(),
                            self.g.names[p2].clone(),
                        ));
                    }
                }
            }
        }
        let refs: Vec<(&str, &str, &str)> =
            colliders.iter().map(|(a, c, b)| (a.as_str(), c.as_str(), b.as_str())).collect();
        orient_cpdag(&skeleton, &refs).expect("colliders read off a DAG are consistent")
    }
}

/// Partially directed graph whose directed subgraph is acyclic.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdag {
    g: LabelledGraph,
}

impl Pdag {
    pub fn from_graph(g: LabelledGraph) -> Result<Self> {
        if !g.directed_part_acyclic() {
            return Err(Error::Cycle("directed part of PDAG candidate is cyclic".into()));
        }
        Ok(Pdag { g })
    }

    pub fn as_graph(&self) -> &LabelledGraph {
        &self.g
    }

    pub fn into_graph(self) -> LabelledGraph {
        self.g
    }
}

/// Orient `v_structures` (each (a, c, b) gives a→c←b) in `skeleton`, then
/// close under the three propagation rules until nothing changes.
///
/// The skeleton may already carry directed edges; they are kept and treated
/// as constraints. A collider demanding the reverse of an existing
/// orientation aborts with an error rather than overwriting.
pub fn orient_cpdag(skeleton: &LabelledGraph, v_structures: &[(&str, &str, &str)]) -> Result<Pdag> {
    let mut g = skeleton.clone();

    fn orient(g: &mut LabelledGraph, from: usize, to: usize, why: &str) -> Result<bool> {
        if g.directed_idx(to, from) {
            return Err(Error::ContradictoryColliders(format!(
                "{why}: {:?}→{:?} demanded but {:?}→{:?} already oriented",
                g.names[from], g.names[to], g.names[to], g.names[from]
            )));
        }
        if g.directed_idx(from, to) {
            return Ok(false);
        }
        let key = LabelledGraph::key(from, to);
        if g.edges.get(&key) != Some(&PairState::Undirected) {
            return Err(Error::GraphStructure(format!(
                "{why}: no edge between {:?} and {:?}",
                g.names[from], g.names[to]
            )));
        }
        let state = if from < to { PairState::Forward } else { PairState::Backward };
        g.edges.insert(key, state);
        Ok(true)
    }

    for (a, c, b) in v_structures {
        let (ia, ic, ib) = (g.idx(a)?, g.idx(c)?, g.idx(b)?);
        if !g.has_edge_idx(ia, ic) || !g.has_edge_idx(ib, ic) {
            return Err(Error::GraphStructure(format!(
                "collider ({a}, {c}, {b}) names a missing skeleton edge"
            )));
        }
        orient(&mut g, ia, ic, "collider")?;
        orient(&mut g, ib, ic, "collider")?;
    }

    // Propagation rules, rerun until a full sweep changes nothing:
    //   R1: a→b, b−c, a and c nonadjacent        => b→c
    //   R2: a→b→c with a−c                       => a→c
    //   R3: a−b, a−c, a−d, c→b, d→b, c,d nonadj  => a→b
    let n = g.names.len();
    let mut changed = true;
    while changed {
        changed = false;
        for b in 0..n {
            for c in g.undirected_neighbors_idx(b) {
                for a in g.parents_idx(b) {
                    if a != c && !g.has_edge_idx(a, c) {
                        changed |= orient(&mut g, b, c, "rule 1")?;
                    }
                }
            }
        }
        for a in 0..n {
            for c in g.undirected_neighbors_idx(a) {
                let via_chain =
                    g.children_idx(a).iter().any(|&b| g.directed_idx(b, c));
                if via_chain {
                    changed |= orient(&mut g, a, c, "rule 2")?;
                }
            }
        }
        for a in 0..n {
            let und = g.undirected_neighbors_idx(a);
            for &b in &und {
                for (u, &c) in und.iter().enumerate() {
                    if c == b || !g.directed_idx(c, b) {
                        continue;
                    }
                    for &d in &und[u + 1..] {
                        if d != b && g.directed_idx(d, b) && !g.has_edge_idx(c, d) {
                            changed |= orient(&mut g, a, b, "rule 3")?;
                        }
                    }
                }
            }
        }
    }

    Pdag::from_graph(g)
}

/// Per-pair edge state keyed by lexicographic name pair, for cross-graph
/// comparison where insertion orders may differ.
fn edge_states(g: &LabelledGraph) -> BTreeMap<(String, String), u8> {
    let mut out = BTreeMap::new();
    for e in g.edges() {
        let (lo, hi, state) = if e.mark == Mark::Undirected {
            let (lo, hi) =
                if e.from <= e.to { (&e.from, &e.to) } else { (&e.to, &e.from) };
            (lo.clone(), hi.clone(), 0)
        } else if e.from <= e.to {
            (e.from.clone(), e.to.clone(), 1)
        } else {
            (e.to.clone(), e.from.clone(), 2)
        };
        out.insert((lo, hi), state);
    }
    out
}

/// Structural Hamming distance: the number of edge insertions, deletions,
/// and mark changes separating the two graphs. A reversal counts as one
/// mark change.
pub fn shd(g1: &LabelledGraph, g2: &LabelledGraph) -> Result<u64> {
    let s1: BTreeSet<&String> = g1.names.iter().collect();
    let s2: BTreeSet<&String> = g2.names.iter().collect();
    if s1 != s2 {
        return Err(Error::GraphStructure("node sets differ".into()));
    }
    let e1 = edge_states(g1);
    let e2 = edge_states(g2);
    let mut d = 0;
    for (pair, state) in &e1 {
        match e2.get(pair) {
            None => d += 1,
            Some(s) if s != state => d += 1,
            _ => {}
        }
    }
    for pair in e2.keys() {
        if !e1.contains_key(pair) {
            d += 1;
        }
    }
    Ok(d)
}
