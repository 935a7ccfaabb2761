//! Command-line front end: point file parsing, commands and output schemas.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    run_trials, sample, write_cluster_csv, write_degree_csv, write_main_csv, write_summary_csv, SampleKind, SampleSpec,
};
use crate::geom::{format_rational, parse_rational, Point, PointSet, Rational};
use crate::oracle::{mosaics_equal, Oracle};
use crate::orderk::{compute_with_options, Mosaic, Options, OrderKResult, Perturbation};
use crate::radius::{alpha_complex, compute_radius_function, filtration, Extended, FiltrationEntry};
use crate::tiling::{build_tiling, RhomboidTiling};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// Environment variable naming the worker thread count.
pub const THREADS_VAR: &str = "ORDERK_THREADS";

/// Parses one point per line, whitespace-separated decimals or `p/q`
/// rationals. Blank lines and lines starting with `#` are skipped.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    let mut dim = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let coords = body
            .split_whitespace()
            .map(|tok| {
                parse_rational(tok).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<Rational>>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {d} coordinates, found {}", coords.len()),
                })
            }
            _ => {}
        }
        points.push(Point::new(coords));
        lines.push(line);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no points".into(),
        });
    }
    PointSet::new(points).map_err(|e| match e {
        Error::DuplicatePoint { first, second } => Error::Parse {
            line: lines[second],
            message: format!("duplicate of the point on line {}", lines[first]),
        },
        e => e,
    })
}

/// Writes points in the format [`parse_points`] reads.
pub fn format_points(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.points() {
        let row: Vec<String> = p.coords().iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct CellJson {
    anchor: Vec<u32>,
    a_on: Vec<u32>,
    generation: usize,
    vertex_refs: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct MosaicJson {
    order: usize,
    vertices: Vec<Vec<u32>>,
    cells: Vec<CellJson>,
}

fn mosaic_record(m: &Mosaic) -> MosaicJson {
    MosaicJson {
        order: m.order,
        vertices: m.vertices.iter().map(|v| v.members().to_vec()).collect(),
        cells: m
            .cells
            .iter()
            .map(|c| CellJson {
                anchor: c.rhomboid().a_in().to_vec(),
                a_on: c.rhomboid().a_on().to_vec(),
                generation: c.generation(),
                vertex_refs: m.vertex_refs(c),
            })
            .collect(),
    }
}

/// `{order, vertices, cells: [{anchor, a_on, generation, vertex_refs}]}`.
pub fn mosaic_json(m: &Mosaic) -> String {
    to_json(&mosaic_record(m))
}

#[derive(Debug, Serialize)]
struct RhomboidJson {
    a_in: Vec<u32>,
    a_on: Vec<u32>,
    dimension: usize,
}

#[derive(Debug, Serialize)]
struct TilingJson {
    depth_limit: usize,
    rhomboids: Vec<RhomboidJson>,
}

/// `{depth_limit, rhomboids: [{a_in, a_on, dimension}]}` in tiling order.
pub fn tiling_json(t: &RhomboidTiling) -> String {
    to_json(&TilingJson {
        depth_limit: t.depth_limit(),
        rhomboids: t
            .rhomboids()
            .iter()
            .map(|r| RhomboidJson {
                a_in: r.a_in().to_vec(),
                a_on: r.a_on().to_vec(),
                dimension: r.dimension(),
            })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
struct EntryJson {
    anchor: Vec<u32>,
    a_on: Vec<u32>,
    dimension: usize,
    value: String,
}

#[derive(Debug, Serialize)]
struct FiltrationJson {
    order: usize,
    threshold: Option<String>,
    cells: Vec<EntryJson>,
}

/// `{order, threshold, cells: [{anchor, a_on, dimension, value}]}`; values
/// are `"p/q"`, `"-inf"` or `"inf"` strings.
pub fn filtration_json(order: usize, threshold: Option<&Extended>, entries: &[FiltrationEntry]) -> String {
    to_json(&FiltrationJson {
        order,
        threshold: threshold.map(Extended::to_string),
        cells: entries
            .iter()
            .map(|e| EntryJson {
                anchor: e.cell.rhomboid().a_in().to_vec(),
                a_on: e.cell.rhomboid().a_on().to_vec(),
                dimension: e.dimension,
                value: e.value.to_string(),
            })
            .collect(),
    })
}

/// `order,dimension,anchor,a_on,value` with space-separated index lists.
pub fn filtration_csv(order: usize, entries: &[FiltrationEntry]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["order", "dimension", "anchor", "a_on", "value"]).map_err(err)?;
    let join = |s: &[u32]| s.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    for e in entries {
        w.write_record([
            order.to_string(),
            e.dimension.to_string(),
            join(e.cell.rhomboid().a_in()),
            join(e.cell.rhomboid().a_on()),
            e.value.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Parser)]
#[command(name = "orderk", version, about = "Order-k Delaunay mosaics, rhomboid tilings and order-k alpha complexes")]
pub struct Cli {
    /// Run single-threaded.
    #[arg(long, global = true)]
    pub deterministic: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the mosaics of orders 1..=K as JSON.
    Mosaic {
        #[command(flatten)]
        input: InputArgs,
        /// Highest order; defaults to the number of points.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        perturb: PerturbArgs,
        /// Directory for one `del_<k>.json` per order; a JSON array on stdout otherwise.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write the rhomboid tiling as JSON.
    Tiling {
        #[command(flatten)]
        input: InputArgs,
        /// Keep rhomboids anchored below this depth; defaults to the number of points.
        #[arg(long)]
        depth_limit: Option<usize>,
        #[command(flatten)]
        perturb: PerturbArgs,
        /// Output file; stdout otherwise.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write the radius filtration of one order, or its alpha complex.
    Alpha {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        /// Squared radius threshold (`inf` allowed); the whole filtration otherwise.
        #[arg(long, value_parser = parse_extended)]
        alpha_sq: Option<Extended>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        perturb: PerturbArgs,
        /// Output file; stdout otherwise.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sample seeded point sets and write per-order statistics as CSV.
    Stats {
        #[arg(long, value_parser = parse_kind, default_value = "unit_ball")]
        kind: SampleKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        digits: u32,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        max_order: Option<usize>,
        /// Allow `n > 50` or more than 30 trials.
        #[arg(long)]
        large: bool,
        /// Directory for `stats.csv`, `degrees.csv`, `clusters.csv` and `summary.csv`.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Write a seeded sample as a point file.
    Sample {
        #[arg(long, value_parser = parse_kind, default_value = "unit_ball")]
        kind: SampleKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        digits: u32,
        /// Output file; stdout otherwise.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compare the pipeline against the brute-force oracles; exit 0 iff equal.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Highest order compared; defaults to `n - 1`.
        #[arg(long)]
        max_order: Option<usize>,
        /// Raise the oracle size limit.
        #[arg(long)]
        oracle_limit: Option<usize>,
        /// Also compare the radius function.
        #[arg(long)]
        radius: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A point file or a sample spec; exactly one.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Point file, one point per line.
    #[arg(long, short, conflicts_with_all = ["kind", "n", "d", "seed", "digits"])]
    pub input: Option<PathBuf>,
    /// Sampler used without `--input`: unit_ball (default), moment_curve, torus or polytope.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<SampleKind>,
    /// Number of sampled points.
    #[arg(long, requires = "d")]
    pub n: Option<usize>,
    /// Dimension of the sample.
    #[arg(long, requires = "n")]
    pub d: Option<usize>,
    /// Sampler seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Decimal digits kept per sampled coordinate (default 6).
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// Perturb the input with this seed before computing.
    #[arg(long)]
    pub perturb: Option<u64>,
    /// Largest coordinate displacement of the perturbation.
    #[arg(long, value_parser = parse_positive, default_value = "1/1000000")]
    pub perturb_magnitude: Rational,
}

impl PerturbArgs {
    fn options(&self) -> Options {
        Options {
            perturbation: self.perturb.map(|seed| Perturbation {
                seed,
                magnitude: self.perturb_magnitude.clone(),
            }),
            keep_triangulation: false,
        }
    }
}

fn parse_kind(s: &str) -> std::result::Result<SampleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_extended(s: &str) -> std::result::Result<Extended, String> {
    s.parse().map_err(|_| format!("not a squared radius: {s:?}"))
}

fn parse_positive(s: &str) -> std::result::Result<Rational, String> {
    match parse_rational(s) {
        Some(x) if x > Rational::from_integer(0.into()) => Ok(x),
        _ => Err(format!("not a positive number: {s:?}")),
    }
}

impl InputArgs {
    fn load(&self) -> Result<PointSet> {
        match (&self.input, self.n, self.d) {
            (Some(path), None, None) => {
                let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_points(&text)
            }
            (None, Some(n), Some(d)) => {
                let mut spec = SampleSpec::new(self.kind.unwrap_or(SampleKind::UnitBall), n, d, self.seed.unwrap_or(0));
                if let Some(digits) = self.digits {
                    spec.digits = digits;
                }
                sample(&spec)
            }
            _ => Err(Error::InvalidSpec("give either --input or --n and --d".into())),
        }
    }
}

/// Exit code of a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Degenerate { .. } | Error::AffinelyDependent | Error::VerticalDegenerate => EXIT_DEGENERATE,
        Error::InvalidSpec(_) | Error::OutOfRange { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Sets up the thread pool from `--deterministic` or [`THREADS_VAR`].
pub fn configure_threads(deterministic: bool) -> Result<()> {
    let threads = if deterministic {
        Some(1)
    } else {
        match std::env::var(THREADS_VAR) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&t| t > 0)
                    .ok_or_else(|| Error::InvalidSpec(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?,
            ),
            Err(_) => None,
        }
    };
    if let Some(t) = threads {
        // Fails only if a pool already exists, as in repeated calls from tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

fn compute(points: &PointSet, k: usize, perturb: &PerturbArgs) -> Result<OrderKResult> {
    let result = compute_with_options(points, k, &perturb.options())?;
    if result.perturbed {
        eprintln!(
            "note: input perturbed with seed {} and magnitude {}",
            perturb.perturb.unwrap_or_default(),
            format_rational(&perturb.perturb_magnitude)
        );
    }
    Ok(result)
}

/// Runs a parsed command and returns the process exit code. Messages go to
/// stderr.
pub fn run(cli: Cli) -> i32 {
    if let Err(e) = configure_threads(cli.deterministic) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Degenerate { .. }) {
                eprintln!("hint: rerun with --perturb <seed>");
            }
            exit_code(&e)
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Mosaic {
            input,
            k,
            perturb,
            output,
        } => {
            let points = input.load()?;
            let result = compute(&points, k.unwrap_or(points.len()), &perturb)?;
            match output {
                Some(dir) => {
                    create_dir(&dir)?;
                    for m in &result.mosaics {
                        emit(Some(&dir.join(format!("del_{}.json", m.order))), &mosaic_json(m))?;
                    }
                }
                None => {
                    let all: Vec<MosaicJson> = result.mosaics.iter().map(mosaic_record).collect();
                    emit(None, &to_json(&all))?;
                }
            }
        }
        Command::Tiling {
            input,
            depth_limit,
            perturb,
            output,
        } => {
            let points = input.load()?;
            let n = points.len();
            let limit = depth_limit.unwrap_or(n);
            if !(1..=n).contains(&limit) {
                return Err(Error::OutOfRange {
                    what: "depth limit",
                    value: limit as i64,
                    min: 1,
                    max: n as i64,
                });
            }
            let result = compute(&points, limit, &perturb)?;
            emit(output.as_deref(), &tiling_json(&build_tiling(&result.rhomboids, limit)))?;
        }
        Command::Alpha {
            input,
            k,
            alpha_sq,
            format,
            perturb,
            output,
        } => {
            let points = input.load()?;
            if !(1..=points.len()).contains(&k) {
                return Err(Error::OutOfRange {
                    what: "order",
                    value: k as i64,
                    min: 1,
                    max: points.len() as i64,
                });
            }
            // The slice at depth k needs rhomboids anchored up to depth k.
            let limit = (k + 1).min(points.len());
            let result = compute(&points, limit, &perturb)?;
            let tiling = build_tiling(&result.rhomboids, limit);
            let radii = compute_radius_function(&tiling, &result.points)?;
            let entries = match &alpha_sq {
                Some(t) => alpha_complex(k, t, &tiling, &radii)?.cells,
                None => filtration(k, &tiling, &radii)?,
            };
            let text = match format {
                Format::Json => filtration_json(k, alpha_sq.as_ref(), &entries),
                Format::Csv => filtration_csv(k, &entries)?,
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Stats {
            kind,
            n,
            d,
            seed,
            digits,
            trials,
            max_order,
            large,
            output,
        } => {
            if !large && (n > 50 || trials > 30) {
                return Err(Error::InvalidSpec("n > 50 or more than 30 trials needs --large".into()));
            }
            let spec = SampleSpec {
                digits,
                ..SampleSpec::new(kind, n, d, seed)
            };
            let results = run_trials(&spec, trials, max_order)?;
            create_dir(&output)?;
            let file = |name: &str| {
                let path = output.join(name);
                fs::File::create(&path)
                    .map(io::BufWriter::new)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
            };
            write_main_csv(file("stats.csv")?, &spec, &results)?;
            write_degree_csv(file("degrees.csv")?, &spec, &results)?;
            write_cluster_csv(file("clusters.csv")?, &spec, &results)?;
            write_summary_csv(file("summary.csv")?, &spec, &results)?;
            for t in &results {
                if !t.invariants.all_hold() {
                    eprintln!("warning: seed {}: invariant check failed: {:?}", t.seed, t.invariants);
                }
            }
        }
        Command::Sample {
            kind,
            n,
            d,
            seed,
            digits,
            output,
        } => {
            let spec = SampleSpec {
                digits,
                ..SampleSpec::new(kind, n, d, seed)
            };
            emit(output.as_deref(), &format_points(&sample(&spec)?))?;
        }
        Command::Verify {
            input,
            max_order,
            oracle_limit,
            radius,
        } => {
            let points = input.load()?;
            return verify(&points, max_order, oracle_limit, radius);
        }
    }
    Ok(EXIT_OK)
}

fn verify(points: &PointSet, max_order: Option<usize>, oracle_limit: Option<usize>, radius: bool) -> Result<i32> {
    let n = points.len();
    let oracle = oracle_limit.map_or_else(Oracle::default, Oracle::with_limit);
    let top = max_order.unwrap_or(n.saturating_sub(1)).clamp(1, n);
    let result = compute_with_options(points, n, &Options::default())?;
    let mut ok = true;
    for k in 1..=top {
        let expected = oracle.orderk(points, k)?;
        let cmp = mosaics_equal(result.mosaic(k).expect("computed"), &expected);
        if cmp.equal {
            println!("order {k}: equal");
        } else {
            ok = false;
            println!("order {k}: MISMATCH\n{}", cmp.report);
        }
    }
    let tiling = build_tiling(&result.rhomboids, n);
    let brute = oracle.tiling(points)?;
    if tiling.rhomboids() == brute.rhomboids() {
        println!("tiling: equal ({} rhomboids)", tiling.len());
    } else {
        ok = false;
        println!("tiling: MISMATCH ({} vs {} rhomboids)", tiling.len(), brute.len());
    }
    if radius {
        let fast = compute_radius_function(&tiling, points)?;
        let slow = oracle.radius(&tiling, points)?;
        let bad = fast.values.iter().zip(&slow.values).filter(|(a, b)| a != b).count();
        if bad == 0 {
            println!("radius: equal");
        } else {
            ok = false;
            println!("radius: MISMATCH on {bad} rhomboids");
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio;

    #[test]
    fn parses_points() {
        let a = parse_points("0 0\n1 0\n0 1").unwrap();
        assert_eq!((a.len(), a.dim()), (3, 2));
        let b = parse_points("1/3 2/3\n").unwrap();
        assert_eq!(b.point(0).coords(), &[ratio(1, 3), ratio(2, 3)]);
        let c = parse_points("# header\n\n0.5 -2e-1\n").unwrap();
        assert_eq!(c.point(0).coords(), &[ratio(1, 2), ratio(-1, 5)]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let line = |text: &str| match parse_points(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(line("1 2\n3"), 2);
        assert_eq!(line("1 2\n3 x"), 2);
        assert_eq!(line("1 2\n\n3 4\n1 2"), 4);
        assert_eq!(line(""), 0);
    }

    #[test]
    fn points_round_trip() {
        let a = parse_points("1/3 2\n-7/2 0.25\n").unwrap();
        assert_eq!(parse_points(&format_points(&a)).unwrap(), a);
    }

    #[test]
    fn triangle_mosaic_json() {
        let a = parse_points("0 0\n1 0\n0 1").unwrap();
        let r = compute_with_options(&a, 2, &Options::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&mosaic_json(&r.mosaics[1])).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["vertices"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));
        assert_eq!(v["cells"].as_array().unwrap().len(), 1);
        assert_eq!(v["cells"][0]["generation"], 2);
        assert_eq!(v["cells"][0]["vertex_refs"], serde_json::json!([0, 1, 2]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Degenerate { subset: vec![0, 1] }), EXIT_DEGENERATE);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Infeasible), EXIT_FAILURE);
    }
}
