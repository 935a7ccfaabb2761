//! Point samplers and per-order statistics of computed mosaics, written as
//! CSV for external plotting.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Rational};
use crate::hull::convex_hull_vertices;
use crate::orderk::{binomial, clusters, clusters_are_connected, compute_up_to_order, Mosaic, OrderKResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    MomentCurve,
    Torus,
    UnitBall,
    Polytope,
}

impl SampleKind {
    pub const ALL: [SampleKind; 4] = [
        SampleKind::MomentCurve,
        SampleKind::Torus,
        SampleKind::UnitBall,
        SampleKind::Polytope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleKind::MomentCurve => "moment_curve",
            SampleKind::Torus => "torus",
            SampleKind::UnitBall => "unit_ball",
            SampleKind::Polytope => "polytope",
        }
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown sample kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// Decimal digits kept from each random coordinate.
    pub digits: u32,
}

impl SampleSpec {
    pub fn new(kind: SampleKind, n: usize, d: usize, seed: u64) -> Self {
        SampleSpec {
            kind,
            n,
            d,
            seed,
            digits: 6,
        }
    }
}

/// Truncates toward zero to `digits` decimals.
fn truncate(x: f64, digits: u32) -> Rational {
    let scale = 10i64.pow(digits);
    Rational::new(BigInt::from((x * scale as f64).trunc() as i64), BigInt::from(scale))
}

fn ball_point(rng: &mut ChaCha8Rng, d: usize, digits: u32) -> Point {
    let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let radius = rng.random::<f64>().powf(1.0 / d as f64);
    Point::new(dir.iter().map(|x| truncate(x / norm * radius, digits)).collect())
}

fn torus_point(rng: &mut ChaCha8Rng, digits: u32) -> Point {
    const BIG: f64 = 1.0;
    const SMALL: f64 = 0.5;
    // area element is proportional to BIG + SMALL cos(phi)
    let phi = loop {
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        if rng.random::<f64>() * (BIG + SMALL) <= BIG + SMALL * phi.cos() {
            break phi;
        }
    };
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let ring = BIG + SMALL * phi.cos();
    Point::new(vec![
        truncate(ring * theta.cos(), digits),
        truncate(ring * theta.sin(), digits),
        truncate(SMALL * phi.sin(), digits),
    ])
}

/// Draws `n` distinct points.
fn distinct(n: usize, mut draw: impl FnMut() -> Point) -> PointSet {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = draw();
        if seen.insert(p.coords().to_vec()) {
            out.push(p);
        }
    }
    PointSet::new(out).expect("distinct points of one dimension")
}

/// Generates the point set of a spec; deterministic in the seed.
pub fn sample(spec: &SampleSpec) -> Result<PointSet> {
    let SampleSpec { kind, n, d, seed, digits } = *spec;
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidSpec(format!("need d >= 1 and n >= d + 1, got n = {n}, d = {d}")));
    }
    if digits > 15 {
        return Err(Error::InvalidSpec("at most 15 digits".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        SampleKind::MomentCurve => PointSet::new(
            (1..=n as i64)
                .map(|t| Point::new((1..=d as u32).map(|e| Rational::from_integer(BigInt::from(t).pow(e))).collect()))
                .collect(),
        )?,
        SampleKind::Torus => {
            if d != 3 {
                return Err(Error::InvalidSpec("the torus lives in R^3".into()));
            }
            distinct(n, || torus_point(&mut rng, digits))
        }
        SampleKind::UnitBall => distinct(n, || ball_point(&mut rng, d, digits)),
        SampleKind::Polytope => {
            let mut pool = 10 * n;
            loop {
                let cloud = distinct(pool, || ball_point(&mut rng, d, digits));
                let coords: Vec<Vec<Rational>> = cloud.points().iter().map(|p| p.coords().to_vec()).collect();
                let mut hull = convex_hull_vertices(&coords)?;
                if hull.len() >= n {
                    hull.shuffle(&mut rng);
                    hull.truncate(n);
                    hull.sort_unstable();
                    break PointSet::new(hull.into_iter().map(|i| cloud.point(i).clone()).collect())?;
                }
                pool *= 2;
            }
        }
    })
}

/// Statistics of one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatRow {
    pub k: usize,
    pub vertices: usize,
    pub cells: usize,
    /// Cell counts for generations `1..=d`.
    pub generations: Vec<usize>,
    /// Number of vertices incident to each number of d-cells.
    pub degrees: BTreeMap<usize, usize>,
    /// Number of clusters of each size.
    pub cluster_sizes: BTreeMap<usize, usize>,
}

pub fn stat_row(m: &Mosaic, d: usize) -> StatRow {
    let mut generations = vec![0; d];
    for (g, c) in m.generation_counts() {
        if (1..=d).contains(&g) {
            generations[g - 1] = c;
        }
    }
    let mut incidence = vec![0usize; m.vertices.len()];
    for c in &m.cells {
        for r in m.vertex_refs(c) {
            incidence[r] += 1;
        }
    }
    let mut degrees = BTreeMap::new();
    for deg in incidence {
        *degrees.entry(deg).or_default() += 1;
    }
    let mut cluster_sizes = BTreeMap::new();
    for cl in clusters(m) {
        *cluster_sizes.entry(cl.len()).or_default() += 1;
    }
    StatRow {
        k: m.order,
        vertices: m.vertices.len(),
        cells: m.cells.len(),
        generations,
        degrees,
        cluster_sizes,
    }
}

pub fn collect_stats(result: &OrderKResult) -> Vec<StatRow> {
    let d = result.points.dim();
    result.mosaics.iter().map(|m| stat_row(m, d)).collect()
}

/// Structural checks on a computed family of mosaics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invariants {
    /// `1 + sum_k V_k` equals `sum_{i <= d+1} C(n, i)`; `None` unless every
    /// order up to `n` was computed.
    pub vertex_identity: Option<bool>,
    /// Every cell of generation `g` is a `d`-cell with `C(d+1, g)` vertices,
    /// all present in its mosaic.
    pub slice_cardinality: bool,
    /// For `2 <= k <= n-1`, every vertex lies on a cell of generation `>= 2`.
    pub vertex_coverage: bool,
    /// No first-generation cells once `k > n - d`.
    pub first_generation_extinction: bool,
    /// Grouping by anchor and facet connectivity agree at every order.
    pub clusters_connected: bool,
}

impl Invariants {
    pub fn all_hold(&self) -> bool {
        self.vertex_identity != Some(false)
            && self.slice_cardinality
            && self.vertex_coverage
            && self.first_generation_extinction
            && self.clusters_connected
    }
}

pub fn check_invariants(result: &OrderKResult) -> Invariants {
    let n = result.points.len();
    let d = result.points.dim();
    let orders: Vec<usize> = result.mosaics.iter().map(|m| m.order).collect();
    let vertex_identity = (orders == (1..=n).collect::<Vec<_>>()).then(|| {
        let total: u64 = 1 + result.mosaics.iter().map(|m| m.vertices.len() as u64).sum::<u64>();
        total == (0..=d + 1).map(|i| binomial(n, i)).sum::<u64>()
    });
    let slice_cardinality = result.mosaics.iter().all(|m| {
        m.cells.iter().all(|c| {
            let vs = c.vertices();
            c.rhomboid().dimension() == d + 1
                && vs.len() as u64 == binomial(d + 1, c.generation())
                && vs.iter().all(|v| m.vertex_index(v).is_some())
        })
    });
    let vertex_coverage = result
        .mosaics
        .iter()
        .filter(|m| (2..n).contains(&m.order))
        .all(|m| {
            let mut covered = vec![false; m.vertices.len()];
            for c in m.cells.iter().filter(|c| c.generation() >= 2) {
                for r in c.vertices().iter().filter_map(|v| m.vertex_index(v)) {
                    covered[r] = true;
                }
            }
            covered.into_iter().all(|x| x)
        });
    let first_generation_extinction = result
        .mosaics
        .iter()
        .filter(|m| m.order + d > n)
        .all(|m| m.first_generation().next().is_none());
    let clusters_connected = result.mosaics.iter().all(clusters_are_connected);
    Invariants {
        vertex_identity,
        slice_cardinality,
        vertex_coverage,
        first_generation_extinction,
        clusters_connected,
    }
}

/// Statistics of one seeded sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub rows: Vec<StatRow>,
    pub invariants: Invariants,
}

/// Samples `trials` sets with seeds `seed, seed + 1, ...` and computes all
/// orders up to `max_order` (or `n`) for each. Trials run in parallel; the
/// result is in seed order.
pub fn run_trials(spec: &SampleSpec, trials: usize, max_order: Option<usize>) -> Result<Vec<Trial>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let spec = SampleSpec {
                seed: spec.seed + t,
                ..spec.clone()
            };
            let points = sample(&spec)?;
            let result = compute_up_to_order(&points, max_order.unwrap_or(spec.n).min(spec.n))?;
            Ok(Trial {
                seed: spec.seed,
                rows: collect_stats(&result),
                invariants: check_invariants(&result),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
}

impl Summary {
    /// Population standard deviation.
    pub fn of(values: &[usize]) -> Summary {
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<usize>() as f64 / n;
        let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
        Summary {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().min().unwrap_or(0),
            max: values.iter().copied().max().unwrap_or(0),
        }
    }
}

/// Per-order summaries of vertex and cell counts across trials.
pub fn aggregate(trials: &[Trial]) -> Vec<(usize, Summary, Summary)> {
    let mut by_k: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for t in trials {
        for r in &t.rows {
            let e = by_k.entry(r.k).or_default();
            e.0.push(r.vertices);
            e.1.push(r.cells);
        }
    }
    by_k.into_iter()
        .map(|(k, (v, c))| (k, Summary::of(&v), Summary::of(&c)))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// `kind,n,d,seed,k,vertices,cells,gen1,...,genD`
pub fn write_main_csv(w: impl Write, spec: &SampleSpec, trials: &[Trial]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["kind", "n", "d", "seed", "k", "vertices", "cells"].map(String::from).to_vec();
    header.extend((1..=spec.d).map(|g| format!("gen{g}")));
    out.write_record(&header).map_err(csv_error)?;
    for t in trials {
        for r in &t.rows {
            let mut rec = vec![
                spec.kind.to_string(),
                spec.n.to_string(),
                spec.d.to_string(),
                t.seed.to_string(),
                r.k.to_string(),
                r.vertices.to_string(),
                r.cells.to_string(),
            ];
            rec.extend(r.generations.iter().map(usize::to_string));
            out.write_record(&rec).map_err(csv_error)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn write_long(
    w: impl Write,
    spec: &SampleSpec,
    trials: &[Trial],
    column: &str,
    pick: impl Fn(&StatRow) -> &BTreeMap<usize, usize>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["kind", "n", "d", "seed", "k", column, "count"])
        .map_err(csv_error)?;
    for t in trials {
        for r in &t.rows {
            for (value, count) in pick(r) {
                out.write_record([
                    spec.kind.to_string(),
                    spec.n.to_string(),
                    spec.d.to_string(),
                    t.seed.to_string(),
                    r.k.to_string(),
                    value.to_string(),
                    count.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// `kind,n,d,seed,k,degree,count`
pub fn write_degree_csv(w: impl Write, spec: &SampleSpec, trials: &[Trial]) -> Result<()> {
    write_long(w, spec, trials, "degree", |r| &r.degrees)
}

/// `kind,n,d,seed,k,size,count`
pub fn write_cluster_csv(w: impl Write, spec: &SampleSpec, trials: &[Trial]) -> Result<()> {
    write_long(w, spec, trials, "size", |r| &r.cluster_sizes)
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    kind: &'a str,
    n: usize,
    d: usize,
    k: usize,
    trials: usize,
    vertices_mean: f64,
    vertices_std: f64,
    vertices_min: usize,
    vertices_max: usize,
    cells_mean: f64,
    cells_std: f64,
    cells_min: usize,
    cells_max: usize,
}

/// One row per order with mean, standard deviation, minimum and maximum.
pub fn write_summary_csv(w: impl Write, spec: &SampleSpec, trials: &[Trial]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (k, v, c) in aggregate(trials) {
        out.serialize(SummaryRecord {
            kind: spec.kind.name(),
            n: spec.n,
            d: spec.d,
            k,
            trials: trials.len(),
            vertices_mean: v.mean,
            vertices_std: v.std,
            vertices_min: v.min,
            vertices_max: v.max,
            cells_mean: c.mean,
            cells_std: c.std,
            cells_min: c.min,
            cells_max: c.max,
        })
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}
