//! Deterministic minimax (bottleneck) path oracles.
//!
//! All oracles minimise the largest edge weight along a source→target path.
//! Weights may be negative; `max` never decreases when a path is extended, so
//! a label-setting search stays exact.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Path};

/// Default limit on the number of simple paths an enumeration may produce.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("target {to} is unreachable from source {from}")]
    Unreachable { from: usize, to: usize },
    #[error("source and target are both vertex {0}")]
    SameEndpoints(usize),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("weight vector has {got} entries for {expected} edges")]
    WeightLength { got: usize, expected: usize },
    #[error("the spanning-tree oracle needs an undirected graph")]
    DirectedGraph,
    #[error("more than {cap} simple paths between source and target")]
    PathCapExceeded { cap: usize },
    #[error("path search gave up after {expansions} expansions")]
    SearchBudgetExceeded { expansions: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub path: Path,
    /// Largest weight on `path`.
    pub bottleneck_value: f64,
    /// First edge along `path` attaining `bottleneck_value`.
    pub bottleneck_edge: usize,
}

impl OracleResult {
    fn from_path(path: Path, weights: &[f64]) -> Self {
        let mut bottleneck_edge = path.edges[0];
        for &e in &path.edges {
            if weights[e] > weights[bottleneck_edge] {
                bottleneck_edge = e;
            }
        }
        Self { bottleneck_value: weights[bottleneck_edge], bottleneck_edge, path }
    }
}

fn check_query(graph: &Graph, weights: Option<&[f64]>, source: usize, target: usize) -> Result<(), OracleError> {
    let count = graph.vertex_count();
    for vertex in [source, target] {
        if vertex >= count {
            return Err(OracleError::VertexOutOfRange { vertex, count });
        }
    }
    if source == target {
        return Err(OracleError::SameEndpoints(source));
    }
    if let Some(w) = weights {
        if w.len() != graph.edge_count() {
            return Err(OracleError::WeightLength { got: w.len(), expected: graph.edge_count() });
        }
    }
    Ok(())
}

/// Runs the spanning-tree oracle on undirected graphs and the Dijkstra variant otherwise.
pub fn minimax(graph: &Graph, weights: &[f64], source: usize, target: usize) -> Result<OracleResult, OracleError> {
    if graph.is_directed() {
        minimax_dijkstra(graph, weights, source, target)
    } else {
        minimax_mst(graph, weights, source, target)
    }
}

#[derive(PartialEq)]
struct Label {
    value: f64,
    vertex: usize,
}

impl Eq for Label {}

impl Ord for Label {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.value.total_cmp(&self.value).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra with `max` in place of `+`: a vertex's label is the smallest
/// achievable bottleneck from `source`, final once the vertex is popped.
pub fn minimax_dijkstra(
    graph: &Graph,
    weights: &[f64],
    source: usize,
    target: usize,
) -> Result<OracleResult, OracleError> {
    check_query(graph, Some(weights), source, target)?;
    let n = graph.vertex_count();
    let mut label = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    label[source] = f64::NEG_INFINITY;
    heap.push(Label { value: f64::NEG_INFINITY, vertex: source });

    while let Some(Label { value, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == target {
            break;
        }
        for &e in graph.out_edges(u) {
            let Some(v) = graph.traverse(e, u) else { continue };
            if settled[v] {
                continue;
            }
            let candidate = value.max(weights[e]);
            if candidate < label[v] {
                label[v] = candidate;
                pred[v] = Some(e);
                heap.push(Label { value: candidate, vertex: v });
            }
        }
    }

    if !settled[target] {
        return Err(OracleError::Unreachable { from: source, to: target });
    }
    let mut edges = Vec::new();
    let mut v = target;
    while let Some(e) = pred[v] {
        edges.push(e);
        let edge = graph.edge(e);
        v = if edge.head == v { edge.tail } else { edge.head };
    }
    edges.reverse();
    Ok(OracleResult::from_path(Path::new(source, target, edges), weights))
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Edge indices of a minimum spanning forest (Kruskal, ties by edge index).
pub fn minimum_spanning_forest(graph: &Graph, weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let mut sets = DisjointSets::new(graph.vertex_count());
    let mut forest = Vec::with_capacity(graph.vertex_count().saturating_sub(1));
    for e in order {
        let edge = graph.edge(e);
        if sets.union(edge.tail, edge.head) {
            forest.push(e);
        }
    }
    forest
}

/// Minimax path on an undirected graph via its minimum spanning tree: the
/// unique tree path between the endpoints is a minimax path.
pub fn minimax_mst(graph: &Graph, weights: &[f64], source: usize, target: usize) -> Result<OracleResult, OracleError> {
    if graph.is_directed() {
        return Err(OracleError::DirectedGraph);
    }
    check_query(graph, Some(weights), source, target)?;
    let n = graph.vertex_count();
    let mut tree = vec![Vec::new(); n];
    for e in minimum_spanning_forest(graph, weights) {
        let edge = graph.edge(e);
        tree[edge.tail].push(e);
        tree[edge.head].push(e);
    }

    // parent pointers rooted at the source
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &e in &tree[u] {
            let edge = graph.edge(e);
            let v = if edge.tail == u { edge.head } else { edge.tail };
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(e);
                queue.push_back(v);
            }
        }
    }
    if !seen[target] {
        return Err(OracleError::Unreachable { from: source, to: target });
    }
    let mut edges = Vec::new();
    let mut v = target;
    while let Some(e) = parent[v] {
        edges.push(e);
        let edge = graph.edge(e);
        v = if edge.head == v { edge.tail } else { edge.head };
    }
    edges.reverse();
    Ok(OracleResult::from_path(Path::new(source, target, edges), weights))
}

/// Visits every simple source→target path in lexicographic edge-index order.
/// Fails once more than `cap` paths have been found.
pub fn for_each_simple_path(
    graph: &Graph,
    source: usize,
    target: usize,
    cap: usize,
    visit: impl FnMut(&[usize]),
) -> Result<usize, OracleError> {
    for_each_simple_path_within(graph, source, target, cap, usize::MAX, visit)
}

/// [`for_each_simple_path`] that also gives up after `max_expansions`
/// partial paths have been extended.
pub fn for_each_simple_path_within(
    graph: &Graph,
    source: usize,
    target: usize,
    cap: usize,
    max_expansions: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<usize, OracleError> {
    check_query(graph, None, source, target)?;
    let useful = graph.reaching(target);
    let mut expansions = 0usize;
    let mut on_path = vec![false; graph.vertex_count()];
    let mut edges = Vec::new();
    let mut found = 0usize;
    // (vertex, position in its adjacency list)
    let mut stack = vec![(source, 0usize)];
    on_path[source] = true;
    while let Some(top) = stack.last_mut() {
        let u = top.0;
        let out = graph.out_edges(u);
        if top.1 == out.len() {
            on_path[u] = false;
            stack.pop();
            edges.pop();
            continue;
        }
        let e = out[top.1];
        top.1 += 1;
        let Some(v) = graph.traverse(e, u) else { continue };
        if on_path[v] {
            continue;
        }
        edges.push(e);
        if v == target {
            found += 1;
            if found > cap {
                return Err(OracleError::PathCapExceeded { cap });
            }
            visit(&edges);
            edges.pop();
        } else if useful[v] {
            expansions += 1;
            if expansions > max_expansions {
                return Err(OracleError::SearchBudgetExceeded { expansions: max_expansions });
            }
            on_path[v] = true;
            stack.push((v, 0));
        } else {
            edges.pop();
        }
    }
    Ok(found)
}

/// All simple source→target paths, lexicographically ordered by edge indices.
pub fn enumerate_paths(graph: &Graph, source: usize, target: usize, cap: usize) -> Result<Vec<Path>, OracleError> {
    let mut paths = Vec::new();
    for_each_simple_path(graph, source, target, cap, |edges| {
        paths.push(Path::new(source, target, edges.to_vec()));
    })?;
    Ok(paths)
}

/// Literal minimisation over every simple path. Ties keep the
/// lexicographically smallest edge sequence.
pub fn brute_force_minimax(
    graph: &Graph,
    weights: &[f64],
    source: usize,
    target: usize,
    cap: usize,
) -> Result<OracleResult, OracleError> {
    check_query(graph, Some(weights), source, target)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_simple_path(graph, source, target, cap, |edges| {
        let value = edges.iter().map(|&e| weights[e]).fold(f64::NEG_INFINITY, f64::max);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, edges.to_vec()));
        }
    })?;
    let (_, edges) = best.ok_or(OracleError::Unreachable { from: source, to: target })?;
    Ok(OracleResult::from_path(Path::new(source, target, edges), weights))
}
