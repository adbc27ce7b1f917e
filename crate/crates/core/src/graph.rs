//! Simple undirected graphs and exact unweighted distances.

use std::collections::VecDeque;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Vertex identifier. Vertex ids are dense: `0..vertex_count`.
pub type Vertex = u32;

/// Unweighted distance. Graph diameters handled here are tiny.
pub type Dist = u16;

/// Marks an unreachable pair. Never used in arithmetic.
pub const UNREACHABLE: Dist = Dist::MAX;

/// An undirected edge stored with `0 <= lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    /// Builds the canonical `(min, max)` form.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("endpoint {vertex} out of range for {vertex_count} vertices")]
    OutOfRange { vertex: Vertex, vertex_count: usize },
}

/// Immutable simple undirected graph.
///
/// The edge list is sorted lexicographically by `(lo, hi)`, so an edge's
/// position in [`Graph::edges`] is deterministic for a given edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut canonical = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v as usize >= vertex_count {
                    return Err(GraphError::OutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            canonical.push(Edge::new(a, b));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }

        let mut adjacency = vec![Vec::new(); vertex_count];
        for &Edge(a, b) in &canonical {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            edges: canonical,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.vertex_count() as Vertex
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        (a as usize) < self.vertex_count() && self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Position of `e` in the canonical edge list.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        bfs(self, 0).iter().all(|&d| d != UNREACHABLE)
    }

    /// Shortest-path distances from `source`, [`UNREACHABLE`] where no path exists.
    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<Dist>, GraphError> {
        if source as usize >= self.vertex_count() {
            return Err(GraphError::OutOfRange {
                vertex: source,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(bfs(self, source))
    }

    pub fn path(k: usize) -> Self {
        Graph::new(k, (1..k as Vertex).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        Graph::new(k, (0..k as Vertex).map(|v| (v, (v + 1) % k as Vertex))).expect("cycle is simple")
    }

    pub fn complete(k: usize) -> Self {
        let k = k as Vertex;
        Graph::new(k as usize, (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b)))).expect("complete graph is simple")
    }

    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves as Vertex).map(|v| (0, v))).expect("star is simple")
    }

    /// The 3-cube with vertices labelled by their binary corner coordinates.
    pub fn cube() -> Self {
        Graph::new(8, cube_edges(0)).expect("cube is simple")
    }

    /// Random connected graph: a random spanning tree plus each remaining
    /// pair added with probability `extra_edge_prob`.
    pub fn random_connected<R: Rng + ?Sized>(vertex_count: usize, extra_edge_prob: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for v in 1..vertex_count as Vertex {
            let parent = rng.random_range(0..v);
            edges.push(Edge::new(parent, v));
        }
        for a in 0..vertex_count as Vertex {
            for b in a + 1..vertex_count as Vertex {
                let e = Edge(a, b);
                if !edges.contains(&e) && rng.random_bool(extra_edge_prob) {
                    edges.push(e);
                }
            }
        }
        Graph::new(vertex_count, edges.into_iter().map(|e| (e.0, e.1))).expect("generated graph is simple")
    }
}

/// The 12 edges of a 3-cube occupying vertex ids `base..base + 8`, local
/// ids adjacent iff their binary coordinates differ in one bit.
pub fn cube_edges(base: Vertex) -> impl Iterator<Item = (Vertex, Vertex)> {
    (0..8u32).flat_map(move |u| {
        (0..3).filter_map(move |bit| {
            let w = u ^ (1 << bit);
            (u < w).then_some((base + u, base + w))
        })
    })
}

fn bfs(g: &Graph, source: Vertex) -> Vec<Dist> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Distance rows for a set of source vertices.
///
/// Built either for every vertex ([`DistanceOracle::all_pairs`]) or only for
/// the vertices that will be queried, typically a landmark set
/// ([`DistanceOracle::from_sources`]). A lookup `d(u, v)` succeeds when
/// either endpoint is a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceOracle {
    vertex_count: usize,
    /// Row slot for each vertex, `usize::MAX` when it is not a source.
    slot: Vec<usize>,
    rows: Vec<Dist>,
}

impl DistanceOracle {
    pub fn all_pairs(g: &Graph) -> Self {
        let sources: Vec<Vertex> = g.vertices().collect();
        Self::from_sources(g, &sources).expect("all vertices are in range")
    }

    pub fn from_sources(g: &Graph, sources: &[Vertex]) -> Result<Self, GraphError> {
        let n = g.vertex_count();
        let mut slot = vec![usize::MAX; n];
        let mut unique = Vec::with_capacity(sources.len());
        for &s in sources {
            if s as usize >= n {
                return Err(GraphError::OutOfRange {
                    vertex: s,
                    vertex_count: n,
                });
            }
            if slot[s as usize] == usize::MAX {
                slot[s as usize] = unique.len();
                unique.push(s);
            }
        }
        // Each row is computed independently; collect() keeps source order.
        let per_source: Vec<Vec<Dist>> = unique.par_iter().map(|&s| bfs(g, s)).collect();
        Ok(DistanceOracle {
            vertex_count: n,
            slot,
            rows: per_source.concat(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_complete(&self) -> bool {
        self.slot.iter().all(|&s| s != usize::MAX)
    }

    pub fn has_row(&self, v: Vertex) -> bool {
        self.slot.get(v as usize).is_some_and(|&s| s != usize::MAX)
    }

    /// Distance row of a source vertex.
    pub fn row(&self, v: Vertex) -> Option<&[Dist]> {
        let s = *self.slot.get(v as usize)?;
        (s != usize::MAX).then(|| &self.rows[s * self.vertex_count..(s + 1) * self.vertex_count])
    }

    pub fn try_distance(&self, u: Vertex, v: Vertex) -> Option<Dist> {
        if let Some(row) = self.row(u) {
            return row.get(v as usize).copied();
        }
        self.row(v).and_then(|row| row.get(u as usize).copied())
    }

    /// # Panics
    /// Panics if neither `u` nor `v` is a source of this oracle.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Dist {
        self.try_distance(u, v)
            .unwrap_or_else(|| panic!("no distance row for {u} or {v}"))
    }

    /// `d(e, h) = min(d(a, h), d(b, h))` for `e = (a, b)`.
    pub fn edge_vertex_distance(&self, e: Edge, h: Vertex) -> Dist {
        match self.row(h) {
            Some(row) => row[e.0 as usize].min(row[e.1 as usize]),
            None => self.distance(e.0, h).min(self.distance(e.1, h)),
        }
    }
}
