//! Machine checks of the dimension results for CCS(n).
//!
//! Each certification produces a [`CertReport`] made of named sub-checks.
//! JSON output is deterministic: runtimes only appear in the text rendering.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ccs::{self, CcsError, CcsGraph, CubeRecord, UnitCubeLabeling};
use crate::graph::{Dist, DistanceOracle, Edge, Vertex};
use crate::resolve::{self, Item, LandmarkSet, Variant};
use crate::solver::{self, Budget, Method};

/// Version of the report layout, bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

/// The twelve rows `r(e_i | {r1, r2, r3})` of the unit cube, i = 1..12.
pub const UNIT_CUBE_TABLE: [[Dist; 3]; 12] = [
    [0, 0, 1],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 1],
    [1, 2, 1],
    [1, 2, 2],
    [0, 1, 2],
    [1, 1, 2],
    [2, 2, 1],
    [1, 0, 1],
    [2, 1, 0],
    [2, 1, 1],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip)]
    pub runtime: Duration,
}

impl CertReport {
    fn new(claim: &str, n: Option<u32>) -> Self {
        CertReport {
            claim: claim.to_string(),
            n,
            status: Status::Pass,
            checks: Vec::new(),
            data: Value::Null,
            runtime: Duration::ZERO,
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn finish(mut self, started: Instant) -> Self {
        self.status = if self.checks.iter().all(|c| c.passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        self.runtime = started.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn edge_pair(a: Item, b: Item) -> Value {
    json!([a, b])
}

fn as_edge(item: Item) -> Edge {
    match item {
        Item::Edge(e) => e,
        Item::Vertex(_) => unreachable!("edge variant yields edges"),
    }
}

/// The single-cube case: the representation table, every landmark set of
/// size one or two failing, and a minimum of 3 in both variants.
pub fn certify_theorem1() -> CertReport {
    let started = Instant::now();
    let mut report = CertReport::new("theorem1", Some(1));
    let ccs = ccs::generate_ccs(1).expect("level 1 is within the guard");
    let g = ccs.graph();
    let oracle = DistanceOracle::all_pairs(g);
    let l = UnitCubeLabeling::new();
    let set = |ids: &[Vertex]| LandmarkSet::new(ids.to_vec(), 8).expect("cube vertices");

    // (a) representation table
    let base = set(&[l.r(1), l.r(2), l.r(3)]);
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (i, expected) in UNIT_CUBE_TABLE.iter().enumerate() {
        let e = l.e(i + 1);
        let got = resolve::edge_representation(g, &oracle, e, &base).expect("labelled edges exist");
        if got != expected {
            mismatches.push(format!("e{}", i + 1));
        }
        rows.push(json!({ "label": format!("e{}", i + 1), "edge": e, "expected": expected, "computed": got }));
    }
    report.check(
        "representation_table",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "all 12 rows match".to_string()
        } else {
            format!("mismatch at {}", mismatches.join(", "))
        },
    );
    let verdict = resolve::is_edge_resolving(&oracle, g.edges(), &base).expect("valid landmarks");
    report.check(
        "three_landmarks_resolve",
        verdict.resolving,
        format!("{{r1,r2,r3}} = {base}"),
    );

    // (b) every set of size 1 or 2 fails
    let mut small_failures = Vec::new();
    let mut resolving_small = Vec::new();
    for a in 0..8 {
        for b in a..8 {
            let ids: Vec<Vertex> = if a == b { vec![a] } else { vec![a, b] };
            let k = set(&ids);
            let v = resolve::is_edge_resolving(&oracle, g.edges(), &k).expect("valid landmarks");
            match v.witness {
                Some((x, y)) => {
                    small_failures.push(json!({ "landmarks": k, "witness": edge_pair(x, y), "shared": v.shared }))
                }
                None => resolving_small.push(k.to_string()),
            }
        }
    }
    report.check(
        "no_set_of_size_1_or_2_resolves",
        resolving_small.is_empty() && small_failures.len() == 36,
        format!("{} of 36 sets fail (8 singletons, 28 pairs)", small_failures.len()),
    );

    // the three collisions exhibited for pairs of landmarks
    let antipode = UnitCubeLabeling::antipode(l.r(3));
    let cases = [
        ("face_diagonal", [l.r(1), l.r(3)], [1, 4], [0, 1]),
        ("face_edge", [l.r(2), l.r(3)], [4, 12], [1, 1]),
        ("main_diagonal", [l.r(3), antipode], [4, 5], [1, 1]),
    ];
    let mut printed_cases = Vec::new();
    for (name, landmarks, [i, j], shared) in cases {
        let k = set(&landmarks);
        let ei = resolve::edge_representation(g, &oracle, l.e(i), &k).expect("edge");
        let ej = resolve::edge_representation(g, &oracle, l.e(j), &k).expect("edge");
        let ok = ei == shared && ej == shared;
        report.check(
            format!("collision_{name}"),
            ok,
            format!("landmarks {k}: e{i} {:?}, e{j} {:?}, expected {:?}", ei, ej, shared),
        );
        printed_cases.push(json!({ "case": name, "landmarks": k, "edges": [l.e(i), l.e(j)], "shared": ei }));
    }

    // (c) exact minimum in both variants
    let mut minima = serde_json::Map::new();
    for variant in [Variant::Edge, Variant::Vertex] {
        let result = solver::solve(g, &oracle, variant, Method::Exact, &Budget::default());
        let (ok, detail) = match &result {
            Ok(r) => (
                r.optimal && r.landmarks.len() == 3,
                format!("optimal {} of size {}", r.landmarks, r.landmarks.len()),
            ),
            Err(e) => (false, e.to_string()),
        };
        report.check(format!("{variant}_minimum_is_3"), ok, detail);
        if let Ok(r) = result {
            minima.insert(
                variant.to_string(),
                json!({ "size": r.landmarks.len(), "landmarks": r.landmarks }),
            );
        }
    }

    report.data = json!({
        "table": rows,
        "printed_collisions": printed_cases,
        "small_set_witnesses": small_failures,
        "minima": minima,
    });
    report.finish(started)
}

/// Options for [`certify_upper_bound_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpperBoundOptions {
    /// Remove the landmark at this position before checking. Diagnostic
    /// mode: the report is expected to fail.
    pub drop_landmark: Option<usize>,
    pub max_level: Option<u32>,
}

/// The canonical landmark set of CCS(n) has the claimed size and resolves
/// every edge and every vertex.
pub fn certify_upper_bound(n: u32) -> Result<CertReport, CcsError> {
    certify_upper_bound_with(n, UpperBoundOptions::default())
}

pub fn certify_upper_bound_with(n: u32, options: UpperBoundOptions) -> Result<CertReport, CcsError> {
    let started = Instant::now();
    let ccs = ccs::generate_ccs_guarded(n, options.max_level.unwrap_or(ccs::DEFAULT_MAX_LEVEL))?;
    let mut report = CertReport::new("upper_bound", Some(n));
    let g = ccs.graph();
    let expected = ccs::landmark_count(n)?;

    let mut landmarks = ccs::canonical_landmarks(&ccs).into_vec();
    if let Some(i) = options.drop_landmark {
        if i < landmarks.len() {
            landmarks.remove(i);
        }
    }
    let landmarks = LandmarkSet::new(landmarks, g.vertex_count()).expect("subset of canonical landmarks");
    report.check(
        "landmark_count",
        landmarks.len() as u64 == expected,
        format!("{} landmarks, formula gives {expected}", landmarks.len()),
    );

    let oracle = DistanceOracle::from_sources(g, landmarks.as_slice()).expect("landmarks in range");
    let edges = g.edges();
    let edge_verdict = resolve::is_edge_resolving(&oracle, edges, &landmarks).expect("landmark rows present");
    let pairs = edges.len() * edges.len().saturating_sub(1) / 2;
    report.check(
        "edges_resolved",
        edge_verdict.resolving,
        match edge_verdict.witness {
            None => format!("{} edges, {pairs} pairs all distinct", edges.len()),
            Some((a, b)) => format!(
                "{a} and {b} share {:?}",
                edge_verdict.shared.clone().unwrap_or_default()
            ),
        },
    );
    let vertex_verdict = resolve::is_vertex_resolving(&oracle, &landmarks).expect("landmark rows present");
    report.check(
        "vertices_resolved",
        vertex_verdict.resolving,
        match vertex_verdict.witness {
            None => format!("{} vertices all distinct", g.vertex_count()),
            Some((a, b)) => format!(
                "{a} and {b} share {:?}",
                vertex_verdict.shared.clone().unwrap_or_default()
            ),
        },
    );

    report.data = json!({
        "vertices": g.vertex_count(),
        "edges": edges.len(),
        "edge_pairs_compared": pairs,
        "landmarks": landmarks,
        "edge_witness": edge_verdict.witness.map(|(a, b)| edge_pair(a, b)),
        "vertex_witness": vertex_verdict.witness.map(|(a, b)| json!([a, b])),
    });
    Ok(report.finish(started))
}

/// Outcome of one superset test in [`certify_lower_bound`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupersetCheck {
    pub cube_id: u32,
    /// Local index of the one cube vertex kept as a landmark, if any.
    pub kept_local: Option<u32>,
    /// Smallest pair of cube edges sharing a representation.
    pub witness: Option<(Edge, Edge)>,
}

/// Every edge metric generator takes at least two vertices from each
/// outermost cube.
///
/// For each outermost cube `C` and each choice of at most one kept vertex
/// `v` of `C`, the landmark set `W = V - (C - {v})` must fail, shown by two
/// edges of `C` with equal representations. Any set with at most one vertex
/// in `C` is contained in such a `W`, so it fails too.
pub fn certify_lower_bound(n: u32) -> Result<CertReport, CcsError> {
    certify_lower_bound_guarded(n, ccs::DEFAULT_MAX_LEVEL)
}

pub fn certify_lower_bound_guarded(n: u32, max_level: u32) -> Result<CertReport, CcsError> {
    let started = Instant::now();
    if n == 0 {
        return Err(CcsError::ZeroLevel);
    }
    if n == 1 {
        let mut report = CertReport::new("lower_bound", Some(n));
        report.check("applicable", false, "the outermost-cube bound needs n >= 2");
        return Ok(report.finish(started));
    }
    let ccs = ccs::generate_ccs_guarded(n, max_level)?;
    let outer: Vec<&CubeRecord> = ccs.outermost_cubes().collect();

    let checks: Vec<SupersetCheck> = outer
        .par_iter()
        .flat_map_iter(|cube| superset_checks(&ccs, cube))
        .collect();

    let mut report = CertReport::new("lower_bound", Some(n));
    let failing = checks.iter().filter(|c| c.witness.is_some()).count();
    report.check(
        "supersets_fail",
        failing == checks.len() && checks.len() == outer.len() * 9,
        format!(
            "{failing} of {} supersets fail ({} cubes x 9 choices)",
            checks.len(),
            outer.len()
        ),
    );

    // With nothing kept, all outside landmarks see the cube through its
    // attachment vertex, so the edges at that vertex collide.
    let pattern_ok = checks.iter().filter(|c| c.kept_local.is_none()).all(|c| {
        let attach = ccs.cube(c.cube_id).attachment_vertex.expect("outermost cube of n >= 2");
        c.witness.is_some_and(|(a, b)| a.contains(attach) && b.contains(attach))
    });
    report.check(
        "empty_choice_witness_at_attachment",
        pattern_ok,
        "witness edges share the attachment vertex",
    );

    let bound = 2 * outer.len() as u64;
    let expected = ccs::landmark_count(n)?;
    report.check(
        "bound_matches_formula",
        bound == expected,
        format!("2 x {} outermost cubes = {bound}, formula {expected}", outer.len()),
    );

    // Witness pattern per kept local index, from the first cube (all outermost
    // cubes are isomorphic).
    let catalog: Vec<Value> = checks
        .iter()
        .filter(|c| c.cube_id == outer[0].cube_id)
        .map(|c| {
            let base = ccs.cube(c.cube_id).first_vertex();
            json!({
                "kept_local": c.kept_local,
                "witness_local": c.witness.map(|(a, b)| [[a.0 - base, a.1 - base], [b.0 - base, b.1 - base]]),
            })
        })
        .collect();
    report.data = json!({
        "outermost_cubes": outer.len(),
        "supersets_checked": checks.len(),
        "lower_bound": bound,
        "local_witness_catalog": catalog,
        "checks": checks,
    });
    Ok(report.finish(started))
}

fn superset_checks(ccs: &CcsGraph, cube: &CubeRecord) -> Vec<SupersetCheck> {
    let g = ccs.graph();
    let cube_vertices: Vec<Vertex> = cube.vertices().collect();
    // Rows for the cube's own vertices answer every landmark query below.
    let oracle = DistanceOracle::from_sources(g, &cube_vertices).expect("cube vertices in range");
    let items: Vec<Item> = cube.edges().into_iter().map(Item::Edge).collect();
    let outside: Vec<Vertex> = g.vertices().filter(|v| !cube.vertices().contains(v)).collect();

    std::iter::once(None)
        .chain((0..8).map(Some))
        .map(|kept_local| {
            let mut ids = outside.clone();
            if let Some(local) = kept_local {
                ids.push(cube.first_vertex() + local);
            }
            let w = LandmarkSet::new(ids, g.vertex_count()).expect("distinct vertices");
            let groups = resolve::collision_groups(&oracle, &items, &w).expect("cube rows answer all queries");
            let witness = groups.first().map(|grp| (as_edge(grp[0]), as_edge(grp[1])));
            SupersetCheck {
                cube_id: cube.cube_id,
                kept_local,
                witness,
            }
        })
        .collect()
}

/// Generated sizes against the closed forms, and the degree histogram
/// against the cube roles.
pub fn certify_counts(n: u32) -> Result<CertReport, CcsError> {
    certify_counts_guarded(n, ccs::DEFAULT_MAX_LEVEL)
}

pub fn certify_counts_guarded(n: u32, max_level: u32) -> Result<CertReport, CcsError> {
    let started = Instant::now();
    let ccs = ccs::generate_ccs_guarded(n, max_level)?;
    let expected = ccs::expected_counts(n)?;
    let measured = ccs.counts();
    let mut report = CertReport::new("counts", Some(n));

    let fields = [
        ("cubes", measured.cubes, expected.cubes),
        ("vertices", measured.vertices, expected.vertices),
        ("edges", measured.edges, expected.edges),
        ("bridge_edges", measured.bridge_edges, expected.bridge_edges),
        ("outermost_cubes", measured.outermost_cubes, expected.outermost_cubes),
        ("degree3_vertices", measured.degree3_vertices, expected.degree3_vertices),
    ];
    for (name, got, want) in fields {
        report.check(name, got == want, format!("generated {got}, closed form {want}"));
    }
    report.check(
        "closed_form_consistent",
        expected.is_consistent(n),
        "vertices = 8 cubes, bridges = cubes - 1",
    );

    let hist = ccs.degree_histogram();
    let predicted: Vec<u64> = if n == 1 {
        vec![0, 0, 0, 8]
    } else {
        vec![
            0,
            0,
            0,
            7 * expected.outermost_cubes,
            expected.vertices - 7 * expected.outermost_cubes,
        ]
    };
    report.check(
        "degree_histogram",
        hist == predicted,
        format!("generated {hist:?}, predicted {predicted:?}"),
    );

    report.data = json!({ "generated": measured, "closed_form": expected, "degree_histogram": hist });
    Ok(report.finish(started))
}

/// Every certification for n = 1..=n_max: the single-cube case, counts for
/// each level, and both bounds for each n >= 2.
pub fn certify_all(n_max: u32) -> Result<Vec<CertReport>, CcsError> {
    certify_all_guarded(n_max, ccs::DEFAULT_MAX_LEVEL)
}

pub fn certify_all_guarded(n_max: u32, max_level: u32) -> Result<Vec<CertReport>, CcsError> {
    if n_max == 0 {
        return Err(CcsError::ZeroLevel);
    }
    if n_max > max_level {
        return Err(CcsError::ExceedsGuard {
            n: n_max,
            max: max_level,
        });
    }
    let mut reports = vec![certify_theorem1()];
    for n in 1..=n_max {
        reports.push(certify_counts_guarded(n, max_level)?);
    }
    for n in 2..=n_max {
        reports.push(certify_upper_bound_with(
            n,
            UpperBoundOptions {
                max_level: Some(max_level),
                ..Default::default()
            },
        )?);
        reports.push(certify_lower_bound_guarded(n, max_level)?);
    }
    Ok(reports)
}

#[derive(Serialize)]
struct ReportBundle<'a> {
    schema_version: u32,
    all_passed: bool,
    reports: &'a [CertReport],
}

/// Deterministic JSON for a set of reports.
pub fn to_json(reports: &[CertReport]) -> String {
    let bundle = ReportBundle {
        schema_version: SCHEMA_VERSION,
        all_passed: reports.iter().all(CertReport::passed),
        reports,
    };
    let mut out = serde_json::to_string_pretty(&bundle).expect("reports serialize");
    out.push('\n');
    out
}

/// Summary table followed by the failing checks, if any.
pub fn to_text(reports: &[CertReport]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<14} {:>3}  {:<6} {:>6}  {:>10}",
        "claim", "n", "status", "checks", "time"
    )
    .unwrap();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let passed = r.checks.iter().filter(|c| c.passed).count();
        writeln!(
            out,
            "{:<14} {:>3}  {:<6} {:>3}/{:<2}  {:>8.1}ms",
            r.claim,
            r.n.map_or("-".to_string(), |n| n.to_string()),
            status,
            passed,
            r.checks.len(),
            r.runtime.as_secs_f64() * 1e3
        )
        .unwrap();
    }
    for r in reports {
        for c in r.failed_checks() {
            let n = r.n.map(|n| format!(" n={n}")).unwrap_or_default();
            writeln!(out, "FAILED {}{n} {}: {}", r.claim, c.name, c.detail).unwrap();
        }
    }
    out
}
