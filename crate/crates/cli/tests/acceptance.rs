//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL` line;
//! run with `--nocapture` to see them.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use hyperlat::exactlat::{count_identity_ball, naive_count, BallSpec, CountRecord, RadiusSq, DEFAULT_TOL};
use hyperlat::expopt::{baselines, optimize_theorem1, optimize_theorem2, small_rank_delta, theorem2_alpha};
use hyperlat::mainterm::{fit_error_exponent, main_constant};
use hyperlat::spectrum::{enumerate_types, instantiate, re_bound, BlockParams, SpectralType};
use hyperlat::sphtrans::{
    calibrated_kappa, chi_transform_contour, chi_transform_direct, chi_transform_residues, lemma3_envelope,
    ContourSpec, Regime, SpectralParameter,
};
use hyperlat::Execution;
use hyperlat_cli::{run, Command, Manifest, Parameters};
use num_rational::Rational64;

type Check = Result<String, String>;

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn identity_count(n: usize, r2: u64) -> CountRecord {
    let spec = BallSpec::identity(n, RadiusSq::from_integer(r2)).unwrap();
    count_identity_ball(&spec, Execution::Parallel).unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn exact_counts() -> Check {
    let start = Instant::now();
    for (r2, want) in [(2, 4), (4, 20)] {
        let got = identity_count(2, r2).count;
        ensure(got == want, format!("N(T^2 = {r2}) = {got}, expected {want}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    for r2 in [2, 4] {
        let spec = BallSpec::identity(2, RadiusSq::from_integer(r2)).unwrap();
        let naive = naive_count(&spec, DEFAULT_TOL).unwrap().count;
        ensure(naive == identity_count(2, r2).count, format!("naive scan disagrees at T^2 = {r2}"))?;
    }
    Ok("N = 4, 20; naive scans agree".into())
}

fn selberg_main_term() -> Check {
    let start = Instant::now();
    let mut records = Vec::new();
    let mut worst: f64 = 0.0;
    for t in [20u64, 40, 60, 80, 100] {
        let r = identity_count(2, t * t);
        let main = 6.0 * (t * t) as f64;
        let rel = (r.count as f64 - main).abs() / main;
        ensure(rel <= 0.05, format!("T = {t}: relative error {rel:.4}"))?;
        worst = worst.max(rel);
        records.push(r);
    }
    let fit = fit_error_exponent(&records).map_err(|e| e.to_string())?;
    ensure(
        fit.fitted_error_exponent <= 1.6,
        format!("fitted exponent {:.4}", fit.fitted_error_exponent),
    )?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "max rel {worst:.4}, exponent {:.4}",
        fit.fitted_error_exponent
    ))
}

fn n3_main_term() -> Check {
    let c128 = main_constant(3, 128).map_err(|e| e.to_string())?.to_f64();
    let c256 = main_constant(3, 256).map_err(|e| e.to_string())?.to_f64();
    ensure(
        ((c128 - c256) / c256).abs() <= 1e-12,
        format!("c3 at 128 bits {c128} vs 256 bits {c256}"),
    )?;
    let ratios: Vec<f64> = [4u64, 6, 8, 10]
        .iter()
        .map(|&t| identity_count(3, t * t).count as f64 / (c128 * (t as f64).powi(6)))
        .collect();
    let last = *ratios.last().unwrap();
    ensure((last - 1.0).abs() <= 0.20, format!("ratio at T = 10 is {last:.4}"))?;
    let gaps: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    let inversions = gaps.windows(2).filter(|w| w[1] > w[0]).count();
    ensure(inversions <= 1, format!("ratios {ratios:?} have {inversions} inversions"))?;
    Ok(format!("ratios {ratios:.4?}, {inversions} inversion(s)"))
}

fn transform_agreement() -> Check {
    let kappa = calibrated_kappa(2).map_err(|e| e.to_string())?;
    let (mut res_err, mut dir_err): (f64, f64) = (0.0, 0.0);
    for tau in [1.0, 5.0, 10.0] {
        let mu = SpectralParameter::tempered(&[tau, -tau]).unwrap();
        for t in [10.0, 100.0] {
            let c = chi_transform_contour(t, &mu, &ContourSpec::default())
                .map_err(|e| e.to_string())?
                .value;
            let r = chi_transform_residues(t, &mu, 40).map_err(|e| e.to_string())?.value;
            let d = chi_transform_direct(t, &mu).map_err(|e| e.to_string())?.value * kappa;
            let rel = |x: num_complex::Complex64| (x - c).norm() / c.norm();
            res_err = res_err.max(rel(r));
            dir_err = dir_err.max(rel(d));
        }
    }
    ensure(res_err <= 1e-6, format!("contour vs residues {res_err:.2e}"))?;
    ensure(dir_err <= 1e-4, format!("contour vs direct {dir_err:.2e}"))?;
    let rho = SpectralParameter::rho(2);
    let (a, b) = (50.0, 80.0);
    let va = chi_transform_residues(a, &rho, 3).map_err(|e| e.to_string())?.value.re;
    let vb = chi_transform_residues(b, &rho, 3).map_err(|e| e.to_string())?.value.re;
    let lead = (vb - va) / (b * b - a * a);
    ensure((lead - PI / 2.0).abs() <= 1e-6, format!("leading coefficient {lead}"))?;
    Ok(format!(
        "residues {res_err:.1e}, direct {dir_err:.1e}, lead - pi/2 = {:.1e}",
        lead - PI / 2.0
    ))
}

fn envelope_constant(t: f64) -> Result<f64, String> {
    let mut c: f64 = 0.0;
    for k in 0..=100 {
        let mu = SpectralParameter::tempered(&[0.5 * k as f64, -0.5 * k as f64]).unwrap();
        let v = chi_transform_contour(t, &mu, &ContourSpec::default()).map_err(|e| e.to_string())?;
        let env = lemma3_envelope(t, &mu, 0.1, Regime::Bounded).map_err(|e| e.to_string())?;
        c = c.max(v.value.norm() / env);
    }
    Ok(c)
}

fn envelope_stability() -> Check {
    let (c10, c20) = (envelope_constant(10.0)?, envelope_constant(20.0)?);
    let r = c20 / c10;
    ensure((0.5..=2.0).contains(&r), format!("C(10) = {c10:.4}, C(20) = {c20:.4}"))?;
    Ok(format!("C(20)/C(10) = {r:.4}"))
}

fn spectrum_combinatorics() -> Check {
    for (n, want) in [(2, 2), (3, 4), (4, 10)] {
        let got = enumerate_types(n, false).map_err(|e| e.to_string())?.len();
        ensure(got == want, format!("n = {n}: {got} types, expected {want}"))?;
    }
    for (n, want) in [(3usize, q(1, 2)), (4, q(1, 1))] {
        let epstein = SpectralType::from_pairs(&[(n as u32 - 1, 1), (1, 1)]).map_err(|e| e.to_string())?;
        let got = re_bound(&epstein);
        ensure(got == want, format!("n = {n} Epstein re_bound {got}, expected {want}"))?;
    }
    for n in 2..=6 {
        let p = instantiate(&SpectralType::constant(n), &[BlockParams::shift(0.0)]).map_err(|e| e.to_string())?;
        ensure(p.assembled == SpectralParameter::rho(n), format!("constant type at n = {n} is not rho"))?;
    }
    Ok("types 2/4/10, re_bound 1/2 and 1, constant -> rho".into())
}

fn optimizers() -> Check {
    let start = Instant::now();
    for (n, want) in [(3, q(1, 1)), (4, q(6, 5))] {
        let got = small_rank_delta(n).map_err(|e| e.to_string())?.exact.map(|e| e.delta);
        ensure(got == Some(want), format!("delta_{n} = {got:?}, expected {want}"))?;
    }
    let p5 = optimize_theorem1(5).map_err(|e| e.to_string())?;
    let s77 = 77f64.sqrt();
    ensure((p5.closed_form.alpha_star - 5.0 / s77).abs() <= 1e-8, "alpha*(5)")?;
    ensure((p5.closed_form.delta - 5.0 * (9.0 - s77) / 4.0).abs() <= 1e-8, "delta_5")?;
    ensure(
        p5.alpha_discrepancy <= 1e-6 && p5.exponent_discrepancy <= 1e-6,
        format!("n = 5 discrepancy {:.1e}", p5.alpha_discrepancy),
    )?;
    let mut worst: f64 = 0.0;
    for n in [6, 8, 16, 32, 64, 128, 256] {
        let p = optimize_theorem1(n).map_err(|e| e.to_string())?;
        let d = p.alpha_discrepancy.max(p.exponent_discrepancy);
        ensure(d <= 1e-6, format!("theorem 1 at n = {n}: discrepancy {d:.1e}"))?;
        worst = worst.max(d);
        if n == 256 {
            let a = p.closed_form.alpha_star;
            let limit = 1.0 + 1.0 / 2f64.sqrt();
            ensure((a - limit).abs() <= 10.0 / 256.0, format!("alpha0(256) = {a}"))?;
        }
    }
    for n in 10..=64usize {
        let p = optimize_theorem2(n).map_err(|e| e.to_string())?;
        let ni = n as i64;
        ensure(
            theorem2_alpha(n) == q(2 * (ni * ni - 2 * ni), ni * ni + 3 * ni - 2),
            format!("theorem 2 closed form at n = {n}"),
        )?;
        let d = p.alpha_discrepancy.max(p.exponent_discrepancy);
        ensure(d <= 1e-6, format!("theorem 2 at n = {n}: discrepancy {d:.1e}"))?;
        worst = worst.max(d);
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("delta_3 = 1, delta_4 = 6/5, max discrepancy {worst:.1e}"))
}

fn literature_baselines() -> Check {
    let b3 = baselines(3).map_err(|e| e.to_string())?;
    let b4 = baselines(4).map_err(|e| e.to_string())?;
    let b2 = baselines(2).map_err(|e| e.to_string())?;
    ensure(b3.gny == q(1, 4), format!("GNY(3) = {}", b3.gny))?;
    ensure(b4.gny == q(3, 10), format!("GNY(4) = {}", b4.gny))?;
    ensure(b2.heuristic == q(2, 3), format!("heuristic(2) = {}", b2.heuristic))?;
    Ok("GNY 1/4, 3/10; heuristic 2/3".into())
}

fn scan(n: usize, radii: &[&str], workers: usize, cache: Option<&std::path::Path>) -> Result<String, String> {
    let mut m = Manifest::new(
        Command::Scan,
        Parameters {
            n: Some(n),
            radii_sq: Some(radii.iter().map(|s| s.to_string()).collect()),
            workers: Some(workers),
            ..Parameters::default()
        },
    );
    m.cache_dir = cache.map(Into::into);
    run(&m).map(|o| o.stdout).map_err(|e| e.to_string())
}

/// Drops the wall-clock column, the only field a fresh computation cannot
/// reproduce.
fn counts_only(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').map_or(l, |p| p.0).to_string()).collect()
}

fn determinism() -> Check {
    let grids: [(usize, &[&str]); 2] = [(2, &["100", "2500", "10000", "40000"]), (3, &["9", "16", "49/2", "36"])];
    for (n, radii) in grids {
        let base = scan(n, radii, 1, None)?;
        for k in [1, 2, 4, 8] {
            let again = scan(n, radii, k, None)?;
            ensure(counts_only(&again) == counts_only(&base), format!("n = {n}: rows differ with {k} workers"))?;
        }
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let seeded = scan(n, radii, 1, Some(dir.path()))?;
        for k in [1, 3, 8] {
            ensure(
                scan(n, radii, k, Some(dir.path()))? == seeded,
                format!("n = {n}: cached re-run with {k} workers is not byte-identical"),
            )?;
        }
    }
    Ok("fresh runs agree for 1-8 workers; cached re-runs byte-identical".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("exact-count oracles", exact_counts),
        ("n = 2 main term", selberg_main_term),
        ("n = 3 main term", n3_main_term),
        ("transform three-way agreement", transform_agreement),
        ("envelope stability", envelope_stability),
        ("spectrum combinatorics", spectrum_combinatorics),
        ("optimizers", optimizers),
        ("baselines", literature_baselines),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match &result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
