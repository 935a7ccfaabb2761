//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when a required check fails. Pass criterion numbers as
//! arguments to run a subset.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use orderk::experiments::{
    check_invariants, collect_stats, run_trials, sample, write_main_csv, SampleKind, SampleSpec, Trial,
};
use orderk::geom::PointSet;
use orderk::oracle::{brute_orderk, brute_radius, brute_tiling, mosaics_equal, Oracle};
use orderk::orderk::{binomial, clusters, compute_up_to_order, facet_components, OrderKResult};
use orderk::radius::{alpha_complex, compute_radius_function, filtration};
use orderk::tiling::{build_tiling, RhomboidTiling};

struct Input {
    label: String,
    points: PointSet,
    result: OrderKResult,
    tiling: RhomboidTiling,
}

/// Verdict of one criterion. `required` failures fail the run; a criterion
/// can still be reported red while its required part holds.
struct Verdict {
    pass: bool,
    required: bool,
    detail: String,
}

impl Verdict {
    fn strict(pass: bool, detail: String) -> Self {
        Verdict {
            pass,
            required: pass,
            detail,
        }
    }
}

/// The 25 shared inputs: n in 6..=10, d in {2, 3}, mostly ball samples.
fn inputs() -> Vec<Input> {
    (0..25u64)
        .map(|i| {
            let d = 2 + (i % 2) as usize;
            let n = 6 + ((i / 2) % 5) as usize;
            let kind = match (i % 5, d) {
                (2, _) => SampleKind::Polytope,
                (4, 2) => SampleKind::MomentCurve,
                (4, _) => SampleKind::Torus,
                _ => SampleKind::UnitBall,
            };
            let spec = SampleSpec::new(kind, n, d, 1000 + i);
            let points = sample(&spec).expect("valid spec");
            let result = compute_up_to_order(&points, n).expect("general position");
            let tiling = build_tiling(&result.rhomboids, n);
            Input {
                label: format!("{kind} n={n} d={d} seed={}", spec.seed),
                points,
                result,
                tiling,
            }
        })
        .collect()
}

fn oracle_equivalence(inputs: &[Input]) -> Verdict {
    let mut compared = 0;
    for inp in inputs {
        let n = inp.points.len();
        for k in 1..n {
            let expected = brute_orderk(&inp.points, k).expect("oracle runs");
            let cmp = mosaics_equal(inp.result.mosaic(k).expect("computed"), &expected);
            if !cmp.equal {
                return Verdict::strict(false, format!("{} k={k}: {}", inp.label, cmp.report));
            }
            compared += 1;
        }
    }
    Verdict::strict(true, format!("{compared} mosaics equal on {} inputs", inputs.len()))
}

fn vertex_count_identity(inputs: &[Input]) -> Verdict {
    for inp in inputs {
        let (n, d) = (inp.points.len(), inp.points.dim());
        let expected: u64 = (0..=d + 1).map(|i| binomial(n, i)).sum();
        let counted: u64 = inp.tiling.vertex_count_by_depth().values().map(|&c| c as u64).sum();
        let from_mosaics = 1 + inp.result.mosaics.iter().map(|m| m.vertices.len() as u64).sum::<u64>();
        let brute = brute_tiling(&inp.points).expect("oracle runs");
        let brute_count: u64 = brute.vertex_count_by_depth().values().map(|&c| c as u64).sum();
        if counted != expected || from_mosaics != expected || brute_count != expected {
            return Verdict::strict(
                false,
                format!("{}: expected {expected}, tiling {counted}, mosaics {from_mosaics}, oracle {brute_count}", inp.label),
            );
        }
    }
    let mut examples = Vec::new();
    for (d, want) in [(2, 93), (3, 163)] {
        let points = sample(&SampleSpec::new(SampleKind::UnitBall, 8, d, 5)).unwrap();
        let r = compute_up_to_order(&points, 8).unwrap();
        let got: usize = build_tiling(&r.rhomboids, 8).vertex_count_by_depth().values().sum();
        if got != want {
            return Verdict::strict(false, format!("n=8 d={d}: {got} vertices, expected {want}"));
        }
        examples.push(got.to_string());
    }
    Verdict::strict(true, format!("all inputs; n=8 gives {} for d=2,3", examples.join("/")))
}

fn slice_cardinality(inputs: &[Input]) -> Verdict {
    let mut cells = 0;
    for inp in inputs {
        let d = inp.points.dim();
        for m in &inp.result.mosaics {
            for c in &m.cells {
                let refs = m.vertex_refs(c);
                let distinct: BTreeSet<usize> = refs.iter().copied().collect();
                if c.rhomboid().dimension() != d + 1
                    || distinct.len() as u64 != binomial(d + 1, c.generation())
                {
                    return Verdict::strict(false, format!("{} k={}: cell {:?}", inp.label, m.order, c.rhomboid()));
                }
                cells += 1;
            }
        }
    }
    Verdict::strict(true, format!("{cells} cells, all with C(d+1,g) vertices"))
}

fn vertex_coverage(inputs: &[Input]) -> Verdict {
    let mut checked = 0;
    for inp in inputs {
        let n = inp.points.len();
        for k in 2..n {
            let oracle = brute_orderk(&inp.points, k).expect("oracle runs");
            let m = inp.result.mosaic(k).expect("computed");
            let covered: BTreeSet<_> = m
                .cells
                .iter()
                .filter(|c| c.generation() >= 2)
                .flat_map(|c| c.vertices())
                .collect();
            if let Some(v) = oracle.vertices.iter().find(|v| !covered.contains(*v)) {
                return Verdict::strict(false, format!("{} k={k}: vertex {v:?} on no later-generation cell", inp.label));
            }
            checked += oracle.vertices.len();
        }
    }
    Verdict::strict(true, format!("{checked} oracle vertices covered"))
}

fn extinction_and_clusters(inputs: &[Input]) -> Verdict {
    let mut extinct = true;
    let mut refines = true;
    let mut split = Vec::new();
    let mut mosaics = 0;
    for inp in inputs.iter().filter(|i| i.points.dim() == 3) {
        let n = inp.points.len();
        for m in &inp.result.mosaics {
            mosaics += 1;
            if m.order + 3 > n && m.first_generation().next().is_some() {
                extinct = false;
            }
            let mut by_anchor = clusters(m);
            by_anchor.sort();
            let components = facet_components(m);
            // every facet-connected component stays inside one anchor group
            refines &= components
                .iter()
                .all(|comp| by_anchor.iter().any(|g| comp.iter().all(|c| g.contains(c))));
            if by_anchor != components {
                split.push(format!("{} k={}", inp.label, m.order));
            }
        }
    }
    let detail = format!(
        "extinction {}; anchor groups vs facet components: {}/{} mosaics differ{}",
        if extinct { "holds" } else { "VIOLATED" },
        split.len(),
        mosaics,
        split.first().map(|s| format!(", first {s}")).unwrap_or_default()
    );
    Verdict {
        pass: extinct && split.is_empty(),
        required: extinct && refines,
        detail,
    }
}

fn radius_correctness(inputs: &[Input]) -> Verdict {
    let start = Instant::now();
    let mut rhomboids = 0;
    for inp in inputs.iter().filter(|i| i.points.len() <= 8) {
        let t = &inp.tiling;
        let radii = compute_radius_function(t, &inp.points).expect("radius function");
        let brute = brute_radius(t, &inp.points).expect("oracle runs");
        if let Some(i) = (0..t.len()).find(|&i| radii.values[i] != brute.values[i]) {
            return Verdict::strict(
                false,
                format!("{}: {:?} has {} vs oracle {}", inp.label, t.rhomboids()[i], radii.values[i], brute.values[i]),
            );
        }
        rhomboids += t.len();
        for iv in &radii.intervals {
            let lower = orderk::orderk::Rhomboid::new(iv.lower.members().to_vec(), vec![]).unwrap();
            if !t.contains(&lower) || radii.value(t, &lower) != Some(&iv.value) {
                return Verdict::strict(false, format!("{}: interval lower bound {:?} is not a vertex", inp.label, iv.lower));
            }
        }
        for k in 1..inp.points.len() {
            let entries = filtration(k, t, &radii).expect("filtration");
            let mut prev = 0;
            for e in &entries {
                let c = alpha_complex(k, &e.value, t, &radii).expect("alpha complex");
                if !c.is_closed() || c.cells.len() < prev || !c.cells.iter().all(|x| x.value <= e.value) {
                    return Verdict::strict(false, format!("{} k={k}: alpha complex at {} not closed or not monotone", inp.label, e.value));
                }
                prev = c.cells.len();
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::strict(secs < 300.0, format!("{rhomboids} rhomboids equal to the oracle, {secs:.1}s"))
}

fn classic_alpha(_: &[Input]) -> Verdict {
    for seed in 0..10 {
        let points = sample(&SampleSpec::new(SampleKind::UnitBall, 8, 2, 500 + seed)).unwrap();
        let r = compute_up_to_order(&points, 2).expect("general position");
        let t = build_tiling(&r.rhomboids, 2);
        let radii = compute_radius_function(&t, &points).expect("radius function");
        let ours: BTreeMap<Vec<u32>, _> = filtration(1, &t, &radii)
            .expect("filtration")
            .into_iter()
            .map(|e| {
                let mut key: Vec<u32> = e.cell.rhomboid().a_in().iter().chain(e.cell.rhomboid().a_on()).copied().collect();
                key.sort_unstable();
                (key, e.value)
            })
            .collect();
        let classic = Oracle::default().classic_alpha(&points).expect("oracle runs");
        if ours != classic {
            let first = classic.iter().find(|(k, v)| ours.get(*k) != Some(*v));
            return Verdict::strict(false, format!("seed {}: first difference at {first:?}", 500 + seed));
        }
    }
    Verdict::strict(true, "10 planar sets agree".into())
}

fn experiments_harness(_: &[Input]) -> Verdict {
    let spec = SampleSpec::new(SampleKind::UnitBall, 50, 3, 2024);
    let start = Instant::now();
    let trials = run_trials(&spec, 30, None).expect("trials run");
    let secs = start.elapsed().as_secs_f64();
    let broken: Vec<&Trial> = trials
        .iter()
        .filter(|t| {
            let i = &t.invariants;
            i.vertex_identity != Some(true) || !i.slice_cardinality || !i.vertex_coverage || !i.first_generation_extinction
        })
        .collect();
    let split = trials.iter().filter(|t| !t.invariants.clusters_connected).count();

    // rerun one seed and compare its rows and CSV
    let probe = &trials[trials.len() / 2];
    let again = compute_up_to_order(&sample(&SampleSpec { seed: probe.seed, ..spec.clone() }).unwrap(), 50).unwrap();
    let rerun = Trial {
        seed: probe.seed,
        rows: collect_stats(&again),
        invariants: check_invariants(&again),
    };
    let csv = |t: &Trial| {
        let mut out = Vec::new();
        write_main_csv(&mut out, &spec, std::slice::from_ref(t)).unwrap();
        out
    };
    let deterministic = &rerun == probe && csv(&rerun) == csv(probe);

    let required = broken.is_empty() && deterministic && trials.len() == 30;
    Verdict {
        pass: required && split == 0,
        required,
        detail: format!(
            "30 trials in {secs:.0}s; criteria 2-4 and extinction hold in {}/30; anchor groups split in {split}/30; deterministic: {deterministic}",
            30 - broken.len()
        ),
    }
}

type Criterion = (u32, &'static str, fn(&[Input]) -> Verdict);

const CRITERIA: [Criterion; 8] = [
    (1, "oracle equivalence", oracle_equivalence),
    (2, "tiling vertex count", vertex_count_identity),
    (3, "slice cardinality", slice_cardinality),
    (4, "vertex coverage", vertex_coverage),
    (5, "first-generation extinction and clusters", extinction_and_clusters),
    (6, "radius function", radius_correctness),
    (7, "classic alpha at k=1", classic_alpha),
    (8, "experiments harness", experiments_harness),
];

fn main() -> ExitCode {
    let wanted: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let needs_inputs = CRITERIA.iter().any(|(i, _, _)| (wanted.is_empty() || wanted.contains(i)) && *i <= 6);
    let shared = if needs_inputs { inputs() } else { Vec::new() };
    let mut ok = true;
    for (i, name, run) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&i) {
            continue;
        }
        let start = Instant::now();
        let v = run(&shared);
        println!(
            "criterion {i} ({name}): {} [{:.1}s] {}",
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
        ok &= v.required;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
