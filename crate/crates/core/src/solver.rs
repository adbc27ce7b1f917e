//! Minimum resolving sets as minimum hitting sets.
//!
//! Every unordered pair of items (vertices or edges) becomes a row whose set
//! bits are the vertices that tell the two items apart. A landmark set
//! resolves the graph iff it hits every row.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceOracle, Graph, Vertex};
use crate::resolve::{self, Item, LandmarkSet, ResolveError, Variant};

/// Largest candidate count accepted by [`solve_exact`].
pub const DEFAULT_EXACT_MAX_CANDIDATES: usize = 64;

/// Largest vertex count accepted by [`brute_force_min`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no vertex distinguishes {0} and {1}; the graph has no resolving set")]
    Unresolvable(Item, Item),
    #[error("{candidates} candidate vertices exceed the limit of {limit}")]
    TooLarge { candidates: usize, limit: usize },
    #[error("distance oracle must cover every vertex")]
    PartialOracle,
    #[error("solution {0} failed verification")]
    Unverified(LandmarkSet),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

/// Pairs of items against candidate vertices, one bitset per pair.
#[derive(Debug, Clone)]
pub struct DistinguishingMatrix {
    variant: Variant,
    items: Vec<Item>,
    columns: usize,
    words: usize,
    pairs: Vec<(u32, u32)>,
    bits: Vec<u64>,
}

pub fn build_matrix(oracle: &DistanceOracle, g: &Graph, variant: Variant) -> Result<DistinguishingMatrix, SolveError> {
    if !oracle.is_complete() || oracle.vertex_count() != g.vertex_count() {
        return Err(SolveError::PartialOracle);
    }
    let items = variant.items(g);
    let columns = g.vertex_count();
    let words = columns.div_ceil(64).max(1);

    // Profile of each item against every vertex, item-major.
    let profile: Vec<Vec<u16>> = items
        .iter()
        .map(|&item| g.vertices().map(|h| resolve::item_distance(oracle, item, h)).collect())
        .collect();

    let count = items.len();
    let mut pairs = Vec::with_capacity(count * count.saturating_sub(1) / 2);
    let mut bits = Vec::with_capacity(pairs.capacity() * words);
    for a in 0..count {
        for b in a + 1..count {
            pairs.push((a as u32, b as u32));
            let start = bits.len();
            bits.resize(start + words, 0);
            for (h, (da, db)) in profile[a].iter().zip(&profile[b]).enumerate() {
                if da != db {
                    bits[start + h / 64] |= 1 << (h % 64);
                }
            }
        }
    }
    Ok(DistinguishingMatrix {
        variant,
        items,
        columns,
        words,
        pairs,
        bits,
    })
}

impl DistinguishingMatrix {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn row_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns
    }

    /// The item pair behind row `r`.
    pub fn pair(&self, r: usize) -> (Item, Item) {
        let (a, b) = self.pairs[r];
        (self.items[a as usize], self.items[b as usize])
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn distinguishes(&self, r: usize, v: Vertex) -> bool {
        self.row(r)[v as usize / 64] >> (v % 64) & 1 == 1
    }

    /// Vertices distinguishing row `r`, ascending.
    pub fn row_vertices(&self, r: usize) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.columns as Vertex).filter(move |&v| self.distinguishes(r, v))
    }

    /// Pairs no vertex can tell apart (twin items).
    pub fn unresolvable_pairs(&self) -> Vec<(Item, Item)> {
        (0..self.row_count())
            .filter(|&r| self.row(r).iter().all(|&w| w == 0))
            .map(|r| self.pair(r))
            .collect()
    }

    fn check_resolvable(&self) -> Result<(), SolveError> {
        match self.unresolvable_pairs().first() {
            Some(&(a, b)) => Err(SolveError::Unresolvable(a, b)),
            None => Ok(()),
        }
    }

    /// Whether `landmarks` hits every row.
    pub fn is_hitting(&self, landmarks: &LandmarkSet) -> bool {
        let mut mask = vec![0u64; self.words];
        for &v in landmarks.as_slice() {
            mask[v as usize / 64] |= 1 << (v % 64);
        }
        (0..self.row_count()).all(|r| self.row(r).iter().zip(&mask).any(|(a, b)| a & b != 0))
    }

    /// Set-cover text export: `p hittingset <pairs> <vertices>` followed by
    /// one line per pair listing its distinguishing vertex ids.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p hittingset {} {}\n", self.row_count(), self.columns);
        for r in 0..self.row_count() {
            let mut first = true;
            for v in self.row_vertices(r) {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Greedy set cover: repeatedly take the vertex hitting the most unhit rows,
/// lowest id on ties.
pub fn solve_greedy(matrix: &DistinguishingMatrix) -> Result<LandmarkSet, SolveError> {
    matrix.check_resolvable()?;
    let mut uncovered: Vec<usize> = (0..matrix.row_count()).collect();
    let mut chosen = Vec::new();
    let mut counts = vec![0usize; matrix.columns];
    while !uncovered.is_empty() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &r in &uncovered {
            for (w, &word) in matrix.row(r).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    counts[w * 64 + bits.trailing_zeros() as usize] += 1;
                    bits &= bits - 1;
                }
            }
        }
        let best = (0..matrix.columns)
            .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
            .expect("rows exist so columns exist") as Vertex;
        chosen.push(best);
        uncovered.retain(|&r| !matrix.distinguishes(r, best));
    }
    if chosen.is_empty() && matrix.columns > 0 {
        chosen.push(0);
    }
    Ok(LandmarkSet::new(chosen, matrix.columns)?)
}

/// Limits on the exact search. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub max_candidates: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            node_limit: None,
            time_limit: None,
            max_candidates: DEFAULT_EXACT_MAX_CANDIDATES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub landmarks: LandmarkSet,
    /// True only when the search space was exhausted.
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(serialize_with = "serialize_millis", rename = "elapsed_ms")]
    pub elapsed: Duration,
    pub variant: Variant,
}

fn serialize_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

struct Search<'a> {
    rows: &'a [u64],
    full: u64,
    nodes: u64,
    started: Instant,
    budget: Budget,
    aborted: bool,
    best: u64,
    best_size: u32,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.budget.node_limit {
            if self.nodes > limit {
                self.aborted = true;
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() > limit {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    /// Rows not hit by `chosen`, or `None` when some row can no longer be
    /// hit using `allowed` columns.
    fn open_rows(&self, chosen: u64, allowed: u64) -> Option<Vec<u64>> {
        let mut open = Vec::new();
        for &row in self.rows {
            if row & chosen == 0 {
                let options = row & allowed;
                if options == 0 {
                    return None;
                }
                open.push(options);
            }
        }
        Some(open)
    }

    /// Vertices still needed: a greedily built family of pairwise disjoint
    /// open rows needs one distinct vertex each.
    fn lower_bound(open: &[u64]) -> u32 {
        let mut sorted: Vec<u64> = open.to_vec();
        sorted.sort_by_key(|r| r.count_ones());
        let mut used = 0u64;
        let mut count = 0;
        for row in sorted {
            if row & used == 0 {
                used |= row;
                count += 1;
            }
        }
        count
    }

    /// Branching row (fewest options) and its options ordered by descending
    /// coverage of the open rows, then ascending id.
    fn branch_options(open: &[u64]) -> Vec<u32> {
        let row = *open.iter().min_by_key(|r| r.count_ones()).expect("open rows exist");
        let mut options: Vec<(usize, u32)> = ones(row)
            .map(|v| (open.iter().filter(|&&r| r >> v & 1 == 1).count(), v))
            .collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        options.into_iter().map(|(_, v)| v).collect()
    }

    fn minimize(&mut self, chosen: u64, allowed: u64) {
        if !self.tick() {
            return;
        }
        let size = chosen.count_ones();
        let Some(open) = self.open_rows(chosen, allowed) else {
            return;
        };
        if open.is_empty() {
            if size < self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        if size + Self::lower_bound(&open) >= self.best_size {
            return;
        }
        let mut allowed = allowed;
        for v in Self::branch_options(&open) {
            self.minimize(chosen | 1 << v, allowed);
            if self.aborted {
                return;
            }
            // later siblings never revisit v
            allowed &= !(1 << v);
        }
    }

    /// A cover extending `chosen` with at most `extra` vertices from `allowed`.
    fn extend(&mut self, chosen: u64, extra: u32, allowed: u64) -> Option<u64> {
        if !self.tick() {
            return None;
        }
        let open = self.open_rows(chosen, allowed)?;
        if open.is_empty() {
            return Some(chosen);
        }
        if Self::lower_bound(&open) > extra {
            return None;
        }
        let mut allowed = allowed;
        for v in Self::branch_options(&open) {
            if let Some(found) = self.extend(chosen | 1 << v, extra - 1, allowed) {
                return Some(found);
            }
            if self.aborted {
                return None;
            }
            allowed &= !(1 << v);
        }
        None
    }

    /// Lexicographically smallest cover of exactly `size` vertices, if the
    /// budget allows finding it.
    fn lex_smallest(&mut self, size: u32) -> Option<u64> {
        let columns = 64 - self.full.leading_zeros();
        let mut chosen = 0u64;
        let mut next = 0u32;
        for placed in 0..size {
            let mut picked = None;
            for v in next..columns {
                let above = if v + 1 >= 64 {
                    0
                } else {
                    self.full & !((1u64 << (v + 1)) - 1)
                };
                let remaining = size - placed - 1;
                match self.extend(chosen | 1 << v, remaining, above) {
                    // `size` is the optimum, so any cover found has exactly `size` vertices
                    Some(_) => {
                        picked = Some(v);
                        break;
                    }
                    None if self.aborted => return None,
                    None => {}
                }
            }
            let v = picked?;
            chosen |= 1 << v;
            next = v + 1;
        }
        Some(chosen)
    }
}

fn ones(mut bits: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (bits != 0).then(|| {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            v
        })
    })
}

fn mask_to_set(mask: u64, columns: usize) -> LandmarkSet {
    LandmarkSet::new(ones(mask).collect(), columns).expect("mask bits are distinct columns")
}

/// Rows with superset-dominated rows removed: hitting a row also hits every
/// row containing it.
fn reduce_rows(matrix: &DistinguishingMatrix) -> Vec<u64> {
    let mut rows: Vec<u64> = (0..matrix.row_count()).map(|r| matrix.row(r)[0]).collect();
    rows.sort_unstable_by_key(|r| (r.count_ones(), *r));
    rows.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for row in rows {
        if !kept.iter().any(|&k| k & !row == 0) {
            kept.push(row);
        }
    }
    kept
}

/// Minimum hitting set by branch and bound.
///
/// Returns the lexicographically smallest minimum set (the one
/// [`brute_force_min`] finds) when the search completes. With an exhausted
/// budget, returns the best set found with `optimal = false`.
pub fn solve_exact(matrix: &DistinguishingMatrix, budget: &Budget) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let limit = budget.max_candidates.min(64);
    if matrix.columns > limit {
        return Err(SolveError::TooLarge {
            candidates: matrix.columns,
            limit,
        });
    }
    matrix.check_resolvable()?;
    let variant = matrix.variant;
    if matrix.columns == 0 {
        return Ok(SolveResult {
            landmarks: LandmarkSet::empty(),
            optimal: true,
            nodes_explored: 0,
            elapsed: started.elapsed(),
            variant,
        });
    }

    let rows = reduce_rows(matrix);
    let full = if matrix.columns == 64 {
        u64::MAX
    } else {
        (1u64 << matrix.columns) - 1
    };
    let greedy = solve_greedy(matrix)?;
    let greedy_mask = greedy.as_slice().iter().fold(0u64, |m, &v| m | 1 << v);

    let mut search = Search {
        rows: &rows,
        full,
        nodes: 0,
        started,
        budget: *budget,
        aborted: false,
        best: greedy_mask,
        best_size: greedy_mask.count_ones(),
    };
    search.minimize(0, full);
    let optimal = !search.aborted;

    let mut best = search.best;
    if optimal {
        // Resolving sets are non-empty.
        let size = search.best_size.max(1);
        if let Some(canonical) = search.lex_smallest(size) {
            best = canonical;
        }
        if best == 0 {
            best = 1;
        }
    }

    let landmarks = mask_to_set(best, matrix.columns);
    if !matrix.is_hitting(&landmarks) {
        return Err(SolveError::Unverified(landmarks));
    }
    Ok(SolveResult {
        landmarks,
        optimal,
        nodes_explored: search.nodes,
        elapsed: started.elapsed(),
        variant,
    })
}

/// Which solver [`solve`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Greedy,
}

/// Builds the matrix, solves it, and re-checks the answer directly against
/// representations.
pub fn solve(
    g: &Graph,
    oracle: &DistanceOracle,
    variant: Variant,
    method: Method,
    budget: &Budget,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    if method == Method::Exact {
        let limit = budget.max_candidates.min(64);
        if g.vertex_count() > limit {
            return Err(SolveError::TooLarge {
                candidates: g.vertex_count(),
                limit,
            });
        }
    }
    let matrix = build_matrix(oracle, g, variant)?;
    let mut result = match method {
        Method::Exact => solve_exact(&matrix, budget)?,
        Method::Greedy => SolveResult {
            landmarks: solve_greedy(&matrix)?,
            optimal: false,
            nodes_explored: 0,
            elapsed: Duration::ZERO,
            variant,
        },
    };
    if !resolve::is_resolving(g, oracle, variant, &result.landmarks)?.resolving {
        return Err(SolveError::Unverified(result.landmarks));
    }
    result.elapsed = started.elapsed();
    Ok(result)
}

/// Smallest resolving set by exhaustive enumeration: subsets in increasing
/// size, lexicographic within a size; the first resolving one is returned.
/// Checks candidates directly through representations, not the matrix.
pub fn brute_force_min(oracle: &DistanceOracle, g: &Graph, variant: Variant) -> Result<LandmarkSet, SolveError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(SolveError::TooLarge {
            candidates: n,
            limit: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    for size in 1..=n {
        let mut combo: Vec<Vertex> = (0..size as Vertex).collect();
        loop {
            let set = LandmarkSet::new(combo.clone(), n)?;
            if resolve::is_resolving(g, oracle, variant, &set)?.resolving {
                return Ok(set);
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| combo[i] < (n - size + i) as Vertex) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    let verdict = resolve::is_resolving(g, oracle, variant, &LandmarkSet::new(g.vertices().collect(), n)?)?;
    match verdict.witness {
        Some((a, b)) => Err(SolveError::Unresolvable(a, b)),
        // only reachable for the empty graph
        None => Ok(LandmarkSet::empty()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::UnitCubeLabeling;

    fn setup(g: &Graph) -> DistanceOracle {
        DistanceOracle::all_pairs(g)
    }

    #[test]
    fn k2_vertex_matrix() {
        let g = Graph::path(2);
        let m = build_matrix(&setup(&g), &g, Variant::Vertex).unwrap();
        assert_eq!(m.row_count(), 1);
        assert_eq!(m.row_vertices(0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(solve_greedy(&m).unwrap().len(), 1);
    }

    #[test]
    fn p3_edge_matrix() {
        let g = Graph::path(3);
        let m = build_matrix(&setup(&g), &g, Variant::Edge).unwrap();
        assert_eq!(m.row_count(), 1);
        assert_eq!(m.row_vertices(0).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn cube_edge_matrix() {
        let g = Graph::cube();
        let l = UnitCubeLabeling::new();
        let m = build_matrix(&setup(&g), &g, Variant::Edge).unwrap();
        assert_eq!(m.row_count(), 66);
        assert_eq!(m.column_count(), 8);
        let r = (0..m.row_count())
            .find(|&r| {
                let (a, b) = m.pair(r);
                [a, b].contains(&Item::Edge(l.e(4))) && [a, b].contains(&Item::Edge(l.e(5)))
            })
            .unwrap();
        let r3 = l.r(3);
        assert!(!m.distinguishes(r, r3));
        assert!(!m.distinguishes(r, UnitCubeLabeling::antipode(r3)));
    }

    #[test]
    fn dimacs_export() {
        let g = Graph::path(3);
        let m = build_matrix(&setup(&g), &g, Variant::Edge).unwrap();
        assert_eq!(m.to_dimacs(), "p hittingset 1 3\n0 2\n");
    }

    #[test]
    fn partial_oracle_rejected() {
        let g = Graph::path(3);
        let o = DistanceOracle::from_sources(&g, &[0]).unwrap();
        assert_eq!(
            build_matrix(&o, &g, Variant::Edge).unwrap_err(),
            SolveError::PartialOracle
        );
    }

    #[test]
    fn twin_rows_are_unresolvable() {
        let g = Graph::cycle(5);
        let o = setup(&g);
        for variant in [Variant::Vertex, Variant::Edge] {
            let mut m = build_matrix(&o, &g, variant).unwrap();
            // every pair contains a vertex of its own that tells it apart
            assert!(m.unresolvable_pairs().is_empty());
            let words = m.words;
            m.bits[..words].iter_mut().for_each(|w| *w = 0);
            let (a, b) = m.pair(0);
            assert_eq!(m.unresolvable_pairs(), vec![(a, b)]);
            assert_eq!(solve_greedy(&m).unwrap_err(), SolveError::Unresolvable(a, b));
            assert_eq!(
                solve_exact(&m, &Budget::default()).unwrap_err(),
                SolveError::Unresolvable(a, b)
            );
        }
    }

    #[test]
    fn star_vertex_variant() {
        let g = Graph::star(3);
        let o = setup(&g);
        let m = build_matrix(&o, &g, Variant::Vertex).unwrap();
        let greedy = solve_greedy(&m).unwrap();
        assert_eq!(greedy.len(), 2);
        assert!(greedy.as_slice().iter().all(|&v| v != 0));
        assert_eq!(brute_force_min(&o, &g, Variant::Vertex).unwrap().as_slice(), &[1, 2]);
    }

    #[test]
    fn cube_both_variants() {
        let g = Graph::cube();
        let o = setup(&g);
        for variant in [Variant::Edge, Variant::Vertex] {
            let m = build_matrix(&o, &g, variant).unwrap();
            let exact = solve_exact(&m, &Budget::default()).unwrap();
            assert!(exact.optimal);
            assert_eq!(exact.landmarks.len(), 3);
            assert_eq!(exact.landmarks, brute_force_min(&o, &g, variant).unwrap());
            let greedy = solve_greedy(&m).unwrap();
            assert!(greedy.len() <= 4);
            assert!(resolve::is_resolving(&g, &o, variant, &greedy).unwrap().resolving);
        }
    }

    #[test]
    fn small_known_values() {
        let cases = [
            (Graph::cycle(6), Variant::Edge, 2),
            (Graph::complete(4), Variant::Vertex, 3),
            (Graph::path(4), Variant::Edge, 1),
            (Graph::path(2), Variant::Edge, 1),
            (Graph::path(1), Variant::Vertex, 1),
        ];
        for (g, variant, expected) in cases {
            let o = setup(&g);
            let brute = brute_force_min(&o, &g, variant).unwrap();
            assert_eq!(brute.len(), expected);
            let exact = solve(&g, &o, variant, Method::Exact, &Budget::default()).unwrap();
            assert_eq!(exact.landmarks, brute);
            assert!(exact.optimal);
        }
        let p4 = Graph::path(4);
        assert_eq!(
            brute_force_min(&setup(&p4), &p4, Variant::Edge).unwrap().as_slice(),
            &[0]
        );
    }

    #[test]
    fn node_budget_yields_best_found() {
        let g = Graph::cube();
        let m = build_matrix(&setup(&g), &g, Variant::Edge).unwrap();
        let budget = Budget {
            node_limit: Some(1),
            ..Budget::default()
        };
        let r = solve_exact(&m, &budget).unwrap();
        assert!(!r.optimal);
        assert!(m.is_hitting(&r.landmarks));
    }

    #[test]
    fn guards() {
        let g = Graph::path(65);
        let o = setup(&g);
        assert!(matches!(
            solve(&g, &o, Variant::Edge, Method::Exact, &Budget::default()),
            Err(SolveError::TooLarge {
                candidates: 65,
                limit: 64
            })
        ));
        let g = Graph::path(17);
        assert!(matches!(
            brute_force_min(&setup(&g), &g, Variant::Edge),
            Err(SolveError::TooLarge {
                candidates: 17,
                limit: 16
            })
        ));
        // greedy has no candidate guard
        assert_eq!(
            solve(&Graph::path(65), &o, Variant::Edge, Method::Greedy, &Budget::default())
                .unwrap()
                .landmarks
                .len(),
            1
        );
    }
}
