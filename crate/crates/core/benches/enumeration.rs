use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperlat::exactlat::{count_general_ball, count_identity_ball, BallSpec, RadiusSq, RealMatrix, DEFAULT_TOL};
use hyperlat::sphtrans::{chi_transform_contour_batch, ContourSpec, SpectralParameter};
use hyperlat::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn identity_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity_ball");
    g.sample_size(10);
    for (n, r2) in [(2usize, 40_000u64), (3, 49)] {
        let spec = BallSpec::identity(n, RadiusSq::from_integer(r2)).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("n{n}_r{r2}")), &spec, |b, s| {
                b.iter(|| count_identity_ball(black_box(s), exec).unwrap().count)
            });
        }
    }
    g.finish();
}

fn general_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("general_ball");
    g.sample_size(10);
    let z = RealMatrix::diag(&[2.0, 0.5]);
    let w = RealMatrix::from_rows(&[vec![1.0, 0.3], vec![0.0, 1.0]], 1e-12).unwrap();
    let spec = BallSpec::general(RadiusSq::from_integer(2_000), z, w).unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "n2_r2000"), |b| {
            b.iter(|| count_general_ball(black_box(&spec), DEFAULT_TOL, exec).unwrap().count)
        });
    }
    g.finish();
}

fn transform_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("contour_grid");
    g.sample_size(10);
    let mus: Vec<_> = (0..64)
        .map(|k| SpectralParameter::tempered(&[0.5 * k as f64, -0.5 * k as f64]).unwrap())
        .collect();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "n2_t20_64mu"), |b| {
            b.iter(|| chi_transform_contour_batch(20.0, black_box(&mus), &ContourSpec::default(), exec).len())
        });
    }
    g.finish();
}

criterion_group!(benches, identity_counts, general_counts, transform_grid);
criterion_main!(benches);
