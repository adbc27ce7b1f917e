//! Crystal cubic carbon graphs CCS(n).
//!
//! CCS(1) is a single cube. CCS(n) is obtained from CCS(n-1) by attaching a
//! fresh cube, through one bridge edge, to every vertex of degree 3. Every
//! cube occupies 8 consecutive vertex ids (`cube_id * 8 + local`), local ids
//! are binary corner coordinates, and a child cube is attached at local 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{cube_edges, Edge, Graph, Vertex};
use crate::resolve::LandmarkSet;

/// Largest level generated unless the caller raises the guard.
pub const DEFAULT_MAX_LEVEL: u32 = 6;

/// Local index of the attachment vertex inside every non-central cube.
pub const ATTACHMENT_LOCAL: u32 = 0;

/// Local indices of the two landmarks taken from each outermost cube. Both
/// are neighbors of the attachment vertex.
pub const LANDMARK_LOCALS: [u32; 2] = [1, 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CcsError {
    #[error("CCS(n) needs n >= 1")]
    ZeroLevel,
    #[error("level {n} exceeds the generation guard ({max}); raise it explicitly")]
    ExceedsGuard { n: u32, max: u32 },
    #[error("count overflow at level {0}")]
    Overflow(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CubeRole {
    Central,
    Intermediate,
    Outermost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeRecord {
    pub cube_id: u32,
    /// 1 for the central cube.
    pub level: u32,
    pub role: CubeRole,
    /// Vertex `c` of this cube joined to the parent by the bridge edge.
    pub attachment_vertex: Option<Vertex>,
    pub parent_cube: Option<u32>,
    pub bridge_edge: Option<Edge>,
}

impl CubeRecord {
    pub fn first_vertex(&self) -> Vertex {
        self.cube_id * 8
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        self.first_vertex()..self.first_vertex() + 8
    }

    /// The 12 edges internal to this cube, in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = cube_edges(self.first_vertex()).map(|(a, b)| Edge::new(a, b)).collect();
        edges.sort_unstable();
        edges
    }
}

/// Closed-form or measured size figures of CCS(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub cubes: u64,
    pub vertices: u64,
    pub edges: u64,
    pub bridge_edges: u64,
    pub outermost_cubes: u64,
    pub degree3_vertices: u64,
}

impl CountReport {
    pub fn is_consistent(&self, n: u32) -> bool {
        let degree3 = if n == 1 { 8 } else { 7 * self.outermost_cubes };
        self.vertices == 8 * self.cubes
            && self.bridge_edges + 1 == self.cubes
            && self.edges == 12 * self.cubes + self.bridge_edges
            && self.degree3_vertices == degree3
    }
}

/// Counts of CCS(n) from the recurrences, without building the graph.
pub fn expected_counts(n: u32) -> Result<CountReport, CcsError> {
    if n == 0 {
        return Err(CcsError::ZeroLevel);
    }
    let overflow = || CcsError::Overflow(n);
    let mut cubes: u64 = 1;
    let mut outermost: u64 = 1;
    for level in 2..=n {
        // 8 * 7^(level - 2) new cubes
        outermost = 7u64
            .checked_pow(level - 2)
            .and_then(|p| p.checked_mul(8))
            .ok_or_else(overflow)?;
        cubes = cubes.checked_add(outermost).ok_or_else(overflow)?;
    }
    let vertices = cubes.checked_mul(8).ok_or_else(overflow)?;
    let edges = cubes.checked_mul(13).ok_or_else(overflow)? - 1;
    let degree3_vertices = if n == 1 { 8 } else { 7 * outermost };
    Ok(CountReport {
        cubes,
        vertices,
        edges,
        bridge_edges: cubes - 1,
        outermost_cubes: outermost,
        degree3_vertices,
    })
}

/// Size of the landmark set built by [`canonical_landmarks`]:
/// 3 for n = 1, otherwise `16 * 7^(n-2)`.
pub fn landmark_count(n: u32) -> Result<u64, CcsError> {
    match n {
        0 => Err(CcsError::ZeroLevel),
        1 => Ok(3),
        _ => Ok(expected_counts(n)?.outermost_cubes * 2),
    }
}

#[derive(Debug, Clone)]
pub struct CcsGraph {
    n: u32,
    graph: Graph,
    cubes: Vec<CubeRecord>,
    children: Vec<Vec<u32>>,
}

pub fn generate_ccs(n: u32) -> Result<CcsGraph, CcsError> {
    generate_ccs_guarded(n, DEFAULT_MAX_LEVEL)
}

pub fn generate_ccs_guarded(n: u32, max_level: u32) -> Result<CcsGraph, CcsError> {
    if n == 0 {
        return Err(CcsError::ZeroLevel);
    }
    if n > max_level {
        return Err(CcsError::ExceedsGuard { n, max: max_level });
    }
    let expected = expected_counts(n)?;

    let mut cubes = vec![CubeRecord {
        cube_id: 0,
        level: 1,
        // Central even for n = 1, where it is also the only (outermost) cube.
        role: CubeRole::Central,
        attachment_vertex: None,
        parent_cube: None,
        bridge_edge: None,
    }];
    let mut children: Vec<Vec<u32>> = vec![Vec::new()];
    let mut edges: Vec<(Vertex, Vertex)> = cube_edges(0).collect();

    let mut frontier = vec![0u32];
    for level in 2..=n {
        let mut next = Vec::with_capacity(frontier.len() * 8);
        for &parent in &frontier {
            let base = parent * 8;
            let hosts = if parent == 0 { 0..8 } else { 1..8 };
            for local in hosts {
                let host = base + local;
                let cube_id = cubes.len() as u32;
                let attachment = cube_id * 8 + ATTACHMENT_LOCAL;
                let bridge = Edge::new(host, attachment);
                cubes.push(CubeRecord {
                    cube_id,
                    level,
                    role: if level == n {
                        CubeRole::Outermost
                    } else {
                        CubeRole::Intermediate
                    },
                    attachment_vertex: Some(attachment),
                    parent_cube: Some(parent),
                    bridge_edge: Some(bridge),
                });
                children.push(Vec::new());
                children[parent as usize].push(cube_id);
                edges.extend(cube_edges(cube_id * 8));
                edges.push((bridge.0, bridge.1));
                next.push(cube_id);
            }
        }
        frontier = next;
    }
    debug_assert_eq!(cubes.len() as u64, expected.cubes);

    let graph = Graph::new(cubes.len() * 8, edges).expect("CCS construction yields a simple graph");
    Ok(CcsGraph {
        n,
        graph,
        cubes,
        children,
    })
}

impl CcsGraph {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cubes(&self) -> &[CubeRecord] {
        &self.cubes
    }

    pub fn cube(&self, cube_id: u32) -> &CubeRecord {
        &self.cubes[cube_id as usize]
    }

    /// Child cubes in bridge order.
    pub fn children(&self, cube_id: u32) -> &[u32] {
        &self.children[cube_id as usize]
    }

    /// `(cube_id, local index)` of a vertex.
    pub fn locate(&self, v: Vertex) -> (u32, u32) {
        (v / 8, v % 8)
    }

    /// Cubes of the last level. For n = 1 this is the central cube.
    pub fn outermost_cubes(&self) -> impl Iterator<Item = &CubeRecord> + '_ {
        let n = self.n;
        self.cubes.iter().filter(move |c| c.level == n)
    }

    pub fn bridge_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.cubes.iter().filter_map(|c| c.bridge_edge)
    }

    /// Counts measured on the generated graph.
    pub fn counts(&self) -> CountReport {
        let g = &self.graph;
        CountReport {
            cubes: self.cubes.len() as u64,
            vertices: g.vertex_count() as u64,
            edges: g.edge_count() as u64,
            bridge_edges: self.bridge_edges().count() as u64,
            outermost_cubes: self.outermost_cubes().count() as u64,
            degree3_vertices: g.vertices().filter(|&v| g.degree(v) == 3).count() as u64,
        }
    }

    /// Degree histogram indexed by degree.
    pub fn degree_histogram(&self) -> Vec<u64> {
        let g = &self.graph;
        let max = g.vertices().map(|v| g.degree(v)).max().unwrap_or(0);
        let mut hist = vec![0u64; max + 1];
        for v in g.vertices() {
            hist[g.degree(v)] += 1;
        }
        hist
    }
}

/// Landmarks certifying the upper bound on the edge metric dimension.
///
/// n = 1: `{r1, r2, r3}` of [`UnitCubeLabeling`]. n >= 2: locals 1 and 2 of
/// every outermost cube, in cube order.
pub fn canonical_landmarks(ccs: &CcsGraph) -> LandmarkSet {
    let ids: Vec<Vertex> = if ccs.n() == 1 {
        let l = UnitCubeLabeling::new();
        vec![l.r(1), l.r(2), l.r(3)]
    } else {
        ccs.outermost_cubes()
            .flat_map(|c| LANDMARK_LOCALS.map(|local| c.first_vertex() + local))
            .collect()
    };
    LandmarkSet::new(ids, ccs.graph().vertex_count()).expect("canonical landmarks are distinct and in range")
}

/// Named vertices `r1..r8` and edges `e1..e12` of the unit cube, matching the
/// representation table for the landmarks `{r1, r2, r3}`.
///
/// Bottom cycle r1 r2 r3 r4, top cycle r5 r6 r7 r8 with r(i+4) above r(i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitCubeLabeling {
    r: [Vertex; 8],
    e: [Edge; 12],
}

impl Default for UnitCubeLabeling {
    fn default() -> Self {
        Self::new()
    }
}

impl UnitCubeLabeling {
    pub fn new() -> Self {
        // r1..r8 as binary corner coordinates
        let r: [Vertex; 8] = [0b000, 0b001, 0b011, 0b010, 0b100, 0b101, 0b111, 0b110];
        let pair = |i: usize, j: usize| Edge::new(r[i - 1], r[j - 1]);
        let e = [
            pair(1, 2), // e1
            pair(2, 3), // e2
            pair(3, 4), // e3
            pair(4, 1), // e4
            pair(4, 8), // e5
            pair(5, 8), // e6
            pair(1, 5), // e7
            pair(5, 6), // e8
            pair(7, 8), // e9
            pair(2, 6), // e10
            pair(3, 7), // e11
            pair(6, 7), // e12
        ];
        UnitCubeLabeling { r, e }
    }

    /// Vertex id of `r_i`, 1-based.
    pub fn r(&self, i: usize) -> Vertex {
        self.r[i - 1]
    }

    /// Edge `e_i`, 1-based.
    pub fn e(&self, i: usize) -> Edge {
        self.e[i - 1]
    }

    pub fn edges(&self) -> &[Edge; 12] {
        &self.e
    }

    /// 1-based label of an edge.
    pub fn edge_label(&self, edge: Edge) -> Option<usize> {
        self.e.iter().position(|&x| x == edge).map(|i| i + 1)
    }

    /// 1-based label of a vertex.
    pub fn vertex_label(&self, v: Vertex) -> Option<usize> {
        self.r.iter().position(|&x| x == v).map(|i| i + 1)
    }

    /// The corner opposite `v` across the cube's main diagonal.
    pub fn antipode(v: Vertex) -> Vertex {
        v ^ 0b111
    }

    pub fn graph() -> Graph {
        Graph::cube()
    }
}
