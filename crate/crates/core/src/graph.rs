//! Graph representation and path validity.
//!
//! Edges are the base arms of the bandit problem, so their indices are dense
//! (`0..edge_count`) and never change once assigned. Undirected edges are
//! stored once and appear in the adjacency list of both endpoints.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(directed: bool, vertex_count: usize) -> Self {
        Self { directed, vertex_count, edges: Vec::new(), adjacency: vec![Vec::new(); vertex_count] }
    }

    /// Builds a graph from an edge list; edge `i` of the input becomes edge index `i`.
    pub fn from_edges(
        directed: bool,
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut graph = Self::new(directed, vertex_count);
        for (tail, head) in edges {
            graph.add_edge(tail, head)?;
        }
        Ok(graph)
    }

    /// Appends an edge and returns its index. Parallel edges are allowed.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> Result<usize, GraphError> {
        for v in [tail, head] {
            if v >= self.vertex_count {
                return Err(GraphError::VertexOutOfRange { vertex: v, count: self.vertex_count });
            }
        }
        if tail == head {
            return Err(GraphError::SelfLoop(tail));
        }
        let index = self.edges.len();
        self.edges.push(Edge { tail, head });
        self.adjacency[tail].push(index);
        if !self.directed {
            self.adjacency[head].push(index);
        }
        Ok(index)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices leaving `vertex`, in increasing index order.
    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.adjacency[vertex]
    }

    /// The vertex reached by traversing `edge` from `from`, if that traversal is allowed.
    pub fn traverse(&self, edge: usize, from: usize) -> Option<usize> {
        let Edge { tail, head } = self.edges[edge];
        if tail == from {
            Some(head)
        } else if !self.directed && head == from {
            Some(tail)
        } else {
            None
        }
    }

    pub fn average_degree(&self) -> f64 {
        if self.vertex_count == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.vertex_count as f64
    }

    /// Vertices reachable from `source` (including `source`).
    pub fn reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let v = self.traverse(e, u).expect("adjacency entry is traversable");
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Vertices from which `target` is reachable (including `target`).
    pub fn reaching(&self, target: usize) -> Vec<bool> {
        if !self.directed {
            return self.reachable_from(target);
        }
        let mut incoming = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            incoming[e.head].push(e.tail);
        }
        let mut seen = vec![false; self.vertex_count];
        seen[target] = true;
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &u in &incoming[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Fewest-edges path from `from` to `to` avoiding vertices marked in `blocked`.
    ///
    /// Returns the edge sequence (empty when `from == to`), or `None` when no
    /// such path exists. Ties resolve towards smaller edge indices.
    pub fn bfs_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        if blocked[from] || blocked[to] {
            return None;
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &e in self.out_edges(u) {
                let v = self.traverse(e, u).expect("adjacency entry is traversable");
                if !seen[v] && !blocked[v] {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while let Some(e) = parent[v] {
            path.push(e);
            let Edge { tail, head } = self.edges[e];
            v = if head == v { tail } else { head };
        }
        path.reverse();
        Some(path)
    }
}

/// A super arm: an ordered, simple sequence of edges from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn new(source: usize, target: usize, edges: Vec<usize>) -> Self {
        Self { source, target, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertex sequence visited by the path, or `None` if consecutive edges do not connect.
    pub fn vertices(&self, graph: &Graph) -> Option<Vec<usize>> {
        let mut vertices = Vec::with_capacity(self.edges.len() + 1);
        let mut at = self.source;
        if at >= graph.vertex_count() {
            return None;
        }
        vertices.push(at);
        for &e in &self.edges {
            if e >= graph.edge_count() {
                return None;
            }
            at = graph.traverse(e, at)?;
            vertices.push(at);
        }
        Some(vertices)
    }

    /// Largest entry of `weights` over the path's edges.
    pub fn max_weight(&self, weights: &[f64]) -> f64 {
        self.edges.iter().map(|&e| weights[e]).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.edges {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// True iff `path` is a nonempty simple source→target path in `graph`.
pub fn validate_path(graph: &Graph, path: &Path) -> bool {
    if path.edges.is_empty() || path.source == path.target {
        return false;
    }
    let Some(vertices) = path.vertices(graph) else {
        return false;
    };
    if *vertices.last().unwrap() != path.target {
        return false;
    }
    let mut seen = vec![false; graph.vertex_count()];
    for v in vertices {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    true
}
