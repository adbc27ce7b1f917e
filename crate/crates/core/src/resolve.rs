//! Distance representations with respect to a landmark set, and resolvability checks.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dist, DistanceOracle, Edge, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    InvalidVertex { vertex: Vertex, vertex_count: usize },
    #[error("landmark {0} listed more than once")]
    DuplicateLandmark(Vertex),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("distance oracle has no row for landmark {0}")]
    MissingRow(Vertex),
}

/// Ordered set of distinct landmark vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LandmarkSet(Vec<Vertex>);

impl LandmarkSet {
    pub fn new(ids: Vec<Vertex>, vertex_count: usize) -> Result<Self, ResolveError> {
        let mut seen = vec![false; vertex_count];
        for &v in &ids {
            let slot = seen.get_mut(v as usize).ok_or(ResolveError::InvalidVertex {
                vertex: v,
                vertex_count,
            })?;
            if *slot {
                return Err(ResolveError::DuplicateLandmark(v));
            }
            *slot = true;
        }
        Ok(LandmarkSet(ids))
    }

    pub fn empty() -> Self {
        LandmarkSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// Same vertices in ascending order.
    pub fn sorted(&self) -> LandmarkSet {
        let mut ids = self.0.clone();
        ids.sort_unstable();
        LandmarkSet(ids)
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl fmt::Display for LandmarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Distance vector `r(x | K)` of a vertex or edge.
pub type Representation = Vec<Dist>;

/// A vertex or an edge whose representation is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Item {
    Vertex(Vertex),
    Edge(Edge),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Vertex(v) => write!(f, "{v}"),
            Item::Edge(e) => write!(f, "{e}"),
        }
    }
}

/// Which objects a landmark set must tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Vertex,
    Edge,
}

impl Variant {
    /// The items of `g` this variant compares, in canonical order.
    pub fn items(self, g: &Graph) -> Vec<Item> {
        match self {
            Variant::Vertex => g.vertices().map(Item::Vertex).collect(),
            Variant::Edge => g.edges().iter().copied().map(Item::Edge).collect(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Vertex => "vertex",
            Variant::Edge => "edge",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveVerdict {
    pub resolving: bool,
    /// Lexicographically smallest pair of items with equal representations.
    pub witness: Option<(Item, Item)>,
    /// The representation the witness pair shares.
    pub shared: Option<Representation>,
}

/// Distance from an item to landmark `h`. The oracle must hold a row for `h`.
pub fn item_distance(oracle: &DistanceOracle, item: Item, h: Vertex) -> Dist {
    match item {
        Item::Vertex(v) => oracle.distance(v, h),
        Item::Edge(e) => oracle.edge_vertex_distance(e, h),
    }
}

fn check_landmarks(oracle: &DistanceOracle, landmarks: &LandmarkSet) -> Result<(), ResolveError> {
    for &h in landmarks.as_slice() {
        if h as usize >= oracle.vertex_count() {
            return Err(ResolveError::InvalidVertex {
                vertex: h,
                vertex_count: oracle.vertex_count(),
            });
        }
    }
    Ok(())
}

fn check_vertex(oracle: &DistanceOracle, v: Vertex) -> Result<(), ResolveError> {
    if (v as usize) < oracle.vertex_count() {
        Ok(())
    } else {
        Err(ResolveError::InvalidVertex {
            vertex: v,
            vertex_count: oracle.vertex_count(),
        })
    }
}

pub fn vertex_representation(
    oracle: &DistanceOracle,
    u: Vertex,
    landmarks: &LandmarkSet,
) -> Result<Representation, ResolveError> {
    check_vertex(oracle, u)?;
    check_landmarks(oracle, landmarks)?;
    representation_table(oracle, &[Item::Vertex(u)], landmarks)
}

pub fn edge_representation(
    g: &Graph,
    oracle: &DistanceOracle,
    e: Edge,
    landmarks: &LandmarkSet,
) -> Result<Representation, ResolveError> {
    if !g.has_edge(e.0, e.1) {
        return Err(ResolveError::NotAnEdge(e));
    }
    check_landmarks(oracle, landmarks)?;
    representation_table(oracle, &[Item::Edge(e)], landmarks)
}

/// Representations of `items`, row-major, `landmarks.len()` entries per item.
///
/// A landmark without its own oracle row is answered through the rows of the
/// item endpoints.
fn representation_table(
    oracle: &DistanceOracle,
    items: &[Item],
    landmarks: &LandmarkSet,
) -> Result<Vec<Dist>, ResolveError> {
    let k = landmarks.len();
    let mut table = vec![0; items.len() * k];
    for (j, &h) in landmarks.as_slice().iter().enumerate() {
        match oracle.row(h) {
            Some(row) => {
                for (i, &item) in items.iter().enumerate() {
                    table[i * k + j] = match item {
                        Item::Vertex(v) => row[v as usize],
                        Item::Edge(e) => row[e.0 as usize].min(row[e.1 as usize]),
                    };
                }
            }
            None => {
                for (i, &item) in items.iter().enumerate() {
                    let d = match item {
                        Item::Vertex(v) => oracle.try_distance(v, h),
                        Item::Edge(e) => oracle
                            .try_distance(e.0, h)
                            .zip(oracle.try_distance(e.1, h))
                            .map(|(a, b)| a.min(b)),
                    };
                    table[i * k + j] = d.ok_or(ResolveError::MissingRow(h))?;
                }
            }
        }
    }
    Ok(table)
}

/// Indices of items sharing a representation, groups of size >= 2 only,
/// ascending within a group, groups ordered by their first index.
fn group_indices(table: &[Dist], k: usize, count: usize) -> Vec<Vec<usize>> {
    let rep = |i: usize| &table[i * k..(i + 1) * k];
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| rep(a).cmp(rep(b)).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = order
        .chunk_by(|&a, &b| rep(a) == rep(b))
        .filter(|g| g.len() >= 2)
        .map(|g| g.to_vec())
        .collect();
    groups.sort_by_key(|g| g[0]);
    groups
}

fn verdict_for(
    oracle: &DistanceOracle,
    items: &[Item],
    landmarks: &LandmarkSet,
) -> Result<ResolveVerdict, ResolveError> {
    let k = landmarks.len();
    let table = representation_table(oracle, items, landmarks)?;
    let groups = group_indices(&table, k, items.len());
    // Groups are ordered by first index, so the first one holds the smallest pair.
    Ok(match groups.first() {
        None => ResolveVerdict {
            resolving: true,
            witness: None,
            shared: None,
        },
        Some(g) => ResolveVerdict {
            resolving: false,
            witness: Some((items[g[0]], items[g[1]])),
            shared: Some(table[g[0] * k..(g[0] + 1) * k].to_vec()),
        },
    })
}

/// Whether every vertex of the oracle's graph has a distinct representation.
pub fn is_vertex_resolving(oracle: &DistanceOracle, landmarks: &LandmarkSet) -> Result<ResolveVerdict, ResolveError> {
    check_landmarks(oracle, landmarks)?;
    let items: Vec<Item> = (0..oracle.vertex_count() as Vertex).map(Item::Vertex).collect();
    verdict_for(oracle, &items, landmarks)
}

/// Whether every edge in `edges` has a distinct representation. All pairs
/// are compared, via grouping by representation.
pub fn is_edge_resolving(
    oracle: &DistanceOracle,
    edges: &[Edge],
    landmarks: &LandmarkSet,
) -> Result<ResolveVerdict, ResolveError> {
    check_landmarks(oracle, landmarks)?;
    for e in edges {
        check_vertex(oracle, e.1)?;
    }
    let items: Vec<Item> = edges.iter().copied().map(Item::Edge).collect();
    verdict_for(oracle, &items, landmarks)
}

pub fn is_resolving(
    g: &Graph,
    oracle: &DistanceOracle,
    variant: Variant,
    landmarks: &LandmarkSet,
) -> Result<ResolveVerdict, ResolveError> {
    match variant {
        Variant::Vertex => is_vertex_resolving(oracle, landmarks),
        Variant::Edge => is_edge_resolving(oracle, g.edges(), landmarks),
    }
}

/// All groups of at least two items sharing a representation.
pub fn collision_groups(
    oracle: &DistanceOracle,
    items: &[Item],
    landmarks: &LandmarkSet,
) -> Result<Vec<Vec<Item>>, ResolveError> {
    check_landmarks(oracle, landmarks)?;
    for &item in items {
        match item {
            Item::Vertex(v) => check_vertex(oracle, v)?,
            Item::Edge(e) => check_vertex(oracle, e.1)?,
        }
    }
    let table = representation_table(oracle, items, landmarks)?;
    Ok(group_indices(&table, landmarks.len(), items.len())
        .into_iter()
        .map(|g| g.into_iter().map(|i| items[i]).collect())
        .collect())
}
