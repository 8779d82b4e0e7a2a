use std::fs;
use std::path::Path;

use hyperlat::exactlat::{count_ball, BallSpec, CountMethod, CountRecord, RadiusSq, RealMatrix, DEFAULT_TOL};
use hyperlat::expopt::{baselines, optimize_theorem1, optimize_theorem2, small_rank_delta};
use hyperlat::mainterm::{fit_error_exponent, main_constant, DEFAULT_PRECISION_BITS};
use hyperlat::spectrum::{enumerate_types, TypeRecord};
use hyperlat::sphtrans::{
    calibrated_kappa, chi_transform_contour, chi_transform_direct, chi_transform_residues, lemma3_envelope,
    ContourSpec, Regime, SpectralParameter,
};
use hyperlat::Execution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{cache_key, Cache};
use crate::{numeric, CliError, Command, Manifest, Parameters};

/// Default residue depth for TRANSFORM.
const DEFAULT_DEPTH: usize = 40;
/// Default regime exponent for the envelope.
const DEFAULT_KAPPA: f64 = 0.1;
/// Denominator used to turn geometric-grid radii into exact rationals.
const GRID_DENOMINATOR: u64 = 1_000_000;

/// One exact count; the CSV and JSON-lines schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub radius_sq: String,
    pub count: u64,
    pub method: String,
    pub borderline: u64,
    pub seconds: f64,
}

impl From<&CountRecord> for CountRow {
    fn from(r: &CountRecord) -> Self {
        Self {
            n: r.spec.n(),
            radius_sq: r.spec.radius_sq().to_string(),
            count: r.count,
            method: r.method.to_string(),
            borderline: r.borderline,
            seconds: r.wall_time_seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformRow {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub mu: Vec<[f64; 2]>,
    pub method: String,
    pub value: [f64; 2],
    pub tail_bound: f64,
}

/// What a run produced: text for stdout and the files written.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<std::path::PathBuf>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Manifest(msg.into())
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| bad(format!("parameter `{name}` is required")))
}

fn dimension(p: &Parameters) -> Result<usize, CliError> {
    let n = require(p.n, "n")?;
    if n < 2 {
        return Err(bad(format!("n must be at least 2, got {n}")));
    }
    Ok(n)
}

/// `"re,im;re,im;…"` into pairs.
pub fn parse_mu(s: &str) -> Result<Vec<(f64, f64)>, CliError> {
    s.split(';')
        .map(|pair| {
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| bad(format!("mu entry {pair:?} is not \"re,im\"")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("mu entry {pair:?} is not numeric")))
            };
            Ok((parse(re)?, parse(im)?))
        })
        .collect()
}

/// `T²` on a geometric grid from `t_min` to `t_max`, rounded to exact rationals
/// with denominator `10⁶`.
pub fn geometric_radii(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<String>, CliError> {
    if !(t_min > 0.0 && t_max >= t_min && t_max.is_finite()) || steps == 0 {
        return Err(bad(format!(
            "need 0 < t_min <= t_max and t_steps >= 1, got {t_min}, {t_max}, {steps}"
        )));
    }
    let ratio = t_max / t_min;
    Ok((0..steps)
        .map(|k| {
            let t = if steps == 1 {
                t_min
            } else {
                t_min * ratio.powf(k as f64 / (steps - 1) as f64)
            };
            let scaled = (t * t * GRID_DENOMINATOR as f64).round() as u64;
            let q: RadiusSq = format!("{scaled}/{GRID_DENOMINATOR}").parse().expect("grid radius parses");
            q.to_string()
        })
        .collect())
}

struct CountPlan {
    specs: Vec<BallSpec>,
    method: CountMethod,
    tol: f64,
}

fn count_plan(p: &Parameters, radii: &[String]) -> Result<CountPlan, CliError> {
    let n = dimension(p)?;
    let tol = p.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(bad(format!("tol must be positive, got {tol}")));
    }
    let base = match (&p.z, &p.w) {
        (None, None) => None,
        (Some(z), Some(w)) => {
            let z = RealMatrix::from_rows(z, 1e-12).map_err(|e| bad(e.to_string()))?;
            let w = RealMatrix::from_rows(w, 1e-12).map_err(|e| bad(e.to_string()))?;
            if z.n != n {
                return Err(bad(format!("base points are {}x{}, expected n = {n}", z.n, z.n)));
            }
            Some((z, w))
        }
        _ => return Err(bad("z and w must be given together")),
    };
    let method = match &p.method {
        Some(m) => m.parse::<CountMethod>().map_err(|e| bad(e.to_string()))?,
        None if base.is_some() => CountMethod::GenericForm,
        None => CountMethod::RowRecursive,
    };
    if method == CountMethod::RowRecursive && base.is_some() {
        return Err(bad("method row_recursive needs identity base points"));
    }
    let specs = radii
        .iter()
        .map(|r| {
            let r: RadiusSq = r.parse().map_err(|e: hyperlat::exactlat::ExactLatError| bad(e.to_string()))?;
            match &base {
                None => BallSpec::identity(n, r),
                Some((z, w)) => BallSpec::general(r, z.clone(), w.clone()),
            }
            .map_err(|e| bad(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CountPlan { specs, method, tol })
}

fn count_one(spec: &BallSpec, method: CountMethod, tol: f64, cache: Option<&Cache>) -> Result<CountRow, CliError> {
    let key = cache_key(spec, method, tol);
    if let Some(cache) = cache {
        if let Some(row) = cache.get(&key)? {
            return Ok(row);
        }
    }
    let record = count_ball(spec, method, tol, Execution::Parallel).map_err(numeric)?;
    let row = CountRow::from(&record);
    if let Some(cache) = cache {
        cache.put(&key, &row)?;
    }
    Ok(row)
}

/// Runs every count of the plan, fanned out over `workers` threads; rows come
/// back in plan order whatever the worker count.
fn count_rows(plan: &CountPlan, workers: usize, cache: Option<&Cache>) -> Result<Vec<CountRow>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(numeric)?;
    pool.install(|| {
        plan.specs
            .par_iter()
            .map(|s| count_one(s, plan.method, plan.tol, cache))
            .collect()
    })
}

fn scan_radii(p: &Parameters) -> Result<Vec<String>, CliError> {
    match &p.radii_sq {
        Some(r) if r.is_empty() => Err(bad("radii_sq is empty")),
        Some(r) => Ok(r.clone()),
        None => geometric_radii(
            require(p.t_min, "t_min")?,
            require(p.t_max, "t_max")?,
            require(p.t_steps, "t_steps")?,
        ),
    }
}

fn workers(p: &Parameters) -> Result<usize, CliError> {
    match p.workers {
        Some(0) => Err(bad("workers must be at least 1")),
        Some(k) => Ok(k),
        None => Ok(std::thread::available_parallelism().map_or(1, |k| k.get())),
    }
}

fn csv_text(rows: &[CountRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(numeric)?;
    }
    let bytes = w.into_inner().map_err(numeric)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn jsonl_text<T: Serialize>(rows: &[T]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
        .collect()
}

fn write_file(dir: &Path, name: &str, text: &str, out: &mut Outcome) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(CliError::io(&path))?;
    out.files.push(path);
    Ok(())
}

fn transform(p: &Parameters) -> Result<TransformRow, CliError> {
    let pairs = parse_mu(p.mu.as_deref().ok_or_else(|| bad("parameter `mu` is required"))?)?;
    if let Some(n) = p.n {
        if n != pairs.len() {
            return Err(bad(format!("n = {n} but mu has {} entries", pairs.len())));
        }
    }
    let mu = SpectralParameter::from_pairs(&pairs).map_err(|e| bad(e.to_string()))?;
    let t = require(p.t, "t")?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(bad(format!("t must be positive, got {t}")));
    }
    let method = p.method.as_deref().unwrap_or("contour").to_ascii_lowercase();
    let (value, tail_bound) = match method.as_str() {
        "contour" => {
            let v = chi_transform_contour(t, &mu, &ContourSpec::default()).map_err(numeric)?;
            (v.value, v.tail_bound)
        }
        "residues" => {
            let v = chi_transform_residues(t, &mu, p.depth.unwrap_or(DEFAULT_DEPTH)).map_err(numeric)?;
            (v.value, v.tail_bound)
        }
        "direct" => {
            let kappa = calibrated_kappa(mu.n()).map_err(numeric)?;
            let v = chi_transform_direct(t, &mu).map_err(numeric)?;
            (v.value * kappa, v.tail_bound * kappa)
        }
        "envelope" => {
            let kappa = p.kappa.unwrap_or(DEFAULT_KAPPA);
            let e = lemma3_envelope(t, &mu, kappa, Regime::General).map_err(numeric)?;
            (e.into(), 0.0)
        }
        other => return Err(bad(format!("unknown transform method {other:?}"))),
    };
    Ok(TransformRow {
        n: mu.n(),
        t,
        mu: pairs.iter().map(|&(a, b)| [a, b]).collect(),
        method,
        value: [value.re, value.im],
        tail_bound,
    })
}

fn optimize(p: &Parameters) -> Result<serde_json::Value, CliError> {
    let n = dimension(p)?;
    let value = match p.theorem.unwrap_or(1) {
        1 if n <= 2 => return Err(bad("theorem 1 needs n >= 3")),
        1 if n <= 4 => serde_json::to_value(small_rank_delta(n).map_err(numeric)?),
        1 => serde_json::to_value(optimize_theorem1(n).map_err(numeric)?),
        2 if n < 3 => return Err(bad("theorem 2 needs n >= 3")),
        2 => serde_json::to_value(optimize_theorem2(n).map_err(numeric)?),
        k => return Err(bad(format!("theorem must be 1 or 2, got {k}"))),
    };
    Ok(value.expect("results serialize"))
}

/// Executes a manifest. Rows are printed to `Outcome::stdout` and, when the
/// manifest names an output directory, written there with a copy of the
/// manifest and the tool version.
pub fn run(manifest: &Manifest) -> Result<Outcome, CliError> {
    let p = &manifest.parameters;
    let cache = manifest.cache_dir.as_ref().map(Cache::open).transpose()?;
    let mut out = Outcome::default();
    // (file name, text) pairs to write when an output directory is set
    let mut artifacts: Vec<(&str, String)> = Vec::new();
    match manifest.command {
        Command::Count | Command::Scan => {
            let (radii, k) = if manifest.command == Command::Count {
                (vec![p.radius_sq.clone().ok_or_else(|| bad("parameter `radius_sq` is required"))?], 1)
            } else {
                (scan_radii(p)?, workers(p)?)
            };
            let plan = count_plan(p, &radii)?;
            let rows = count_rows(&plan, k, cache.as_ref())?;
            out.stdout = csv_text(&rows)?;
            artifacts.push(("counts.csv", out.stdout.clone()));
            artifacts.push(("counts.jsonl", jsonl_text(&rows)));
        }
        Command::Fit => {
            let radii = scan_radii(p)?;
            let plan = count_plan(p, &radii)?;
            let rows = count_rows(&plan, workers(p)?, cache.as_ref())?;
            let mut records: Vec<CountRecord> = plan
                .specs
                .iter()
                .zip(&rows)
                .map(|(spec, r)| CountRecord {
                    spec: spec.clone(),
                    count: r.count,
                    method: plan.method,
                    borderline: r.borderline,
                    wall_time_seconds: r.seconds,
                })
                .collect();
            records.sort_by(|a, b| a.spec.radius_sq().value().cmp(b.spec.radius_sq().value()));
            let report = fit_error_exponent(&records).map_err(numeric)?;
            out.stdout = jsonl_text(&[report]);
            artifacts.push(("fit.jsonl", out.stdout.clone()));
        }
        Command::Constant => {
            let n = dimension(p)?;
            let bits = p.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
            let c = main_constant(n, bits).map_err(|e| bad(e.to_string()))?;
            let row = serde_json::json!({
                "n": n,
                "precision_bits": bits,
                "value": c.value.to_decimal(),
                "value_f64": c.to_f64(),
            });
            out.stdout = jsonl_text(&[row]);
            artifacts.push(("constant.jsonl", out.stdout.clone()));
        }
        Command::Transform => {
            out.stdout = jsonl_text(&[transform(p)?]);
            artifacts.push(("transform.jsonl", out.stdout.clone()));
        }
        Command::Spectrum => {
            let n = dimension(p)?;
            let types = enumerate_types(n, false).map_err(numeric)?;
            let rows: Vec<TypeRecord> = types.iter().map(TypeRecord::from).collect();
            out.stdout = jsonl_text(&rows);
            artifacts.push(("spectrum.jsonl", out.stdout.clone()));
        }
        Command::Optimize => {
            out.stdout = jsonl_text(&[optimize(p)?]);
            artifacts.push(("optimize.jsonl", out.stdout.clone()));
        }
        Command::Baselines => {
            let lo = dimension(p)?;
            let hi = p.n_max.unwrap_or(lo);
            if hi < lo {
                return Err(bad(format!("n_max = {hi} is below n = {lo}")));
            }
            let rows = (lo..=hi)
                .map(|n| baselines(n).map_err(numeric))
                .collect::<Result<Vec<_>, _>>()?;
            out.stdout = jsonl_text(&rows);
            artifacts.push(("baselines.jsonl", out.stdout.clone()));
        }
    }
    if let Some(dir) = &manifest.output_path {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        for (name, text) in &artifacts {
            write_file(dir, name, text, &mut out)?;
        }
        let record = serde_json::json!({
            "manifest": manifest,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let text = serde_json::to_string_pretty(&record).expect("manifest serializes") + "\n";
        write_file(dir, "manifest.json", &text, &mut out)?;
    }
    Ok(out)
}
