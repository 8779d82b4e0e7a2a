use std::collections::BTreeSet;

use hyperlat::spectrum::*;
use hyperlat::sphtrans::SpectralParameter;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn t(pairs: &[(u32, u32)]) -> SpectralType {
    SpectralType::from_pairs(pairs).unwrap()
}

/// Number of multisets of (d, f) blocks with Σd = n, from the generating
/// function ∏_d (1 − x^d)^{−τ(d)}.
fn type_count_oracle(n: usize) -> usize {
    let mut c = vec![0usize; n + 1];
    c[0] = 1;
    for d in 1..=n {
        let tau = (1..=d).filter(|f| d % f == 0).count();
        // each of the τ(d) block kinds of size d is an independent part
        for _ in 0..tau {
            for m in d..=n {
                c[m] += c[m - d];
            }
        }
    }
    c[n]
}

#[test]
fn type_counts() {
    for (n, want) in [(2, 2), (3, 4), (4, 10)] {
        assert_eq!(enumerate_types(n, false).unwrap().len(), want, "n = {n}");
        assert_eq!(enumerate_types(n, true).unwrap().len(), want + 1);
    }
    for n in 2..=9 {
        assert_eq!(enumerate_types(n, true).unwrap().len(), type_count_oracle(n), "n = {n}");
    }
    assert!(enumerate_types(1, true).is_err());
}

#[test]
fn n2_listing() {
    let got: BTreeSet<_> = enumerate_types(2, false).unwrap().into_iter().collect();
    let want: BTreeSet<_> = [t(&[(2, 2)]), t(&[(1, 1), (1, 1)])].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn case_labels_cover_every_type_once() {
    for n in [3, 4] {
        let labels = case_labels(n).unwrap();
        let listed: BTreeSet<_> = labels.iter().map(|c| c.ty.clone()).collect();
        let all: BTreeSet<_> = enumerate_types(n, false).unwrap().into_iter().collect();
        assert_eq!(listed, all);
        // every label lands in exactly one group
        let table = case_table(n).unwrap();
        let mut seen = Vec::new();
        for g in &table.groups {
            seen.extend(g.labels.iter().copied());
        }
        seen.sort();
        let mut names: Vec<_> = labels.iter().map(|c| c.label).collect();
        names.sort();
        assert_eq!(seen, names, "n = {n}");
    }
    assert!(case_labels(5).is_err());
    assert!(case_table(2).is_err());
}

#[test]
fn case_groups() {
    let t3 = case_table(3).unwrap();
    assert_eq!(t3.groups[0].labels, vec!["1a", "2a", "4"]);
    assert_eq!(t3.groups[1].labels, vec!["1b", "2b", "3"]);
    assert_eq!(t3.groups[0].worst_case(), (q(3, 1), q(-2, 1)));
    assert_eq!(t3.groups[1].worst_case(), (q(9, 2), q(-1, 2)));
    assert_eq!(t3.smoothing, (q(6, 1), q(1, 1)));
    let t4 = case_table(4).unwrap();
    assert_eq!(t4.groups[0].labels, vec!["1a", "3a", "5a", "6a", "8a", "10"]);
    assert_eq!(t4.groups[0].worst_case(), (q(6, 1), q(-4, 1)));
    assert_eq!(t4.groups[1].t_exp.eval(q(1, 4)), q(7, 1));
    assert_eq!(t4.groups[1].worst_case(), (q(8, 1), q(-9, 4)));
    assert_eq!(t4.groups[3].worst_case(), (q(10, 1), q(0, 1)));
    assert_eq!(t4.smoothing, (q(12, 1), q(1, 1)));
}

#[test]
fn group_t_exponents_follow_re_bound() {
    // T exponent is n(n−1)/2 + n·‖Re μ‖ at the group's worst member; cusp
    // blocks (f ≥ 2) are capped at ‖Re μ‖ ≤ 1/2, pure-shift types use re_bound
    for n in [3usize, 4] {
        let labels = case_labels(n).unwrap();
        let table = case_table(n).unwrap();
        let base = q((n * (n - 1)) as i64, 2);
        for g in &table.groups {
            let worst_re = g
                .labels
                .iter()
                .map(|l| {
                    let c = labels.iter().find(|c| c.label == *l).unwrap();
                    match c.tempered {
                        Some(true) => q(0, 1),
                        _ if c.ty.blocks().iter().any(|b| b.f >= 2) => re_bound(&c.ty).min(q(1, 2)),
                        _ => re_bound(&c.ty),
                    }
                })
                .max()
                .unwrap();
            assert_eq!(g.worst_case().0, base + worst_re * n as i64, "{}", g.name);
        }
    }
}

#[test]
fn re_bound_examples() {
    assert_eq!(re_bound(&t(&[(2, 1), (1, 1)])), q(1, 2));
    assert_eq!(re_bound(&t(&[(3, 1), (1, 1)])), q(1, 1));
    for n in 2..=7 {
        assert_eq!(re_bound(&SpectralType::constant(n)), q(n as i64 - 1, 2));
    }
}

#[test]
fn profile_examples() {
    let cusp4 = SpectralType::cuspidal(4);
    let speh = t(&[(4, 2)]);
    assert_eq!(coincidence_count(&cusp4), q(0, 1));
    assert_eq!(coincidence_count(&speh), q(2, 1));
    assert_eq!(supnorm_exponent(&cusp4), q(6, 1));
    assert_eq!(supnorm_exponent(&speh), q(4, 1));
    assert_eq!(avg_supnorm_exponent(&cusp4), q(6, 1));
    assert_eq!(avg_supnorm_exponent(&speh), q(1, 1));
    assert_eq!(avg_supnorm_exponent(&t(&[(1, 1), (1, 1), (1, 1)])), q(0, 1));
    assert_eq!(cover_exponent(&t(&[(1, 1), (1, 1), (1, 1)])), 2);
    for n in 2..=6 {
        let c = SpectralType::constant(n);
        let nn = (n * (n - 1)) as i64;
        assert_eq!(coincidence_count(&c), q(nn, 2));
        assert_eq!(supnorm_exponent(&c), q(0, 1));
        assert_eq!(cover_exponent(&c), 0);
        assert_eq!(cover_exponent(&SpectralType::cuspidal(n)), n as i64 - 1);
    }
    assert!(cusp4.tags().contains(&TypeTag::Cuspidal));
    assert!(SpectralType::constant(3).tags().contains(&TypeTag::Constant));
    assert!(speh.tags().contains(&TypeTag::Speh));
}

#[test]
fn identities_over_all_types() {
    for n in 2..=7 {
        let nn = q((n * (n - 1)) as i64, 2);
        for ty in enumerate_types(n, true).unwrap() {
            let p = profile(&ty);
            assert_eq!(p.supnorm_exp + p.coincidence, nn, "{ty}");
            assert!(p.re_max >= q(0, 1) && p.coincidence >= q(0, 1) && p.avg_supnorm_exp >= q(0, 1));
            assert!(p.cover_exp >= 0);
            let fsum: i64 = ty.blocks().iter().map(|b| b.f as i64).sum();
            assert_eq!(p.cover_exp, fsum - 1);
        }
        let c = SpectralType::cuspidal(n);
        assert_eq!(avg_supnorm_exponent(&c), nn);
        assert_eq!(supnorm_exponent(&c), nn);
    }
}

#[test]
fn instantiate_examples() {
    let minimal = t(&[(1, 1), (1, 1), (1, 1)]);
    let p = instantiate(&minimal, &[BlockParams::shift(1.0), BlockParams::shift(2.0), BlockParams::shift(-3.0)]).unwrap();
    let want = [1.0, 2.0, -3.0].map(|s| Complex64::new(0.0, s));
    assert_eq!(p.assembled.mu(), &want);
    for n in 2..=6 {
        let p = instantiate(&SpectralType::constant(n), &[BlockParams::shift(0.0)]).unwrap();
        assert_eq!(p.assembled, SpectralParameter::rho(n));
    }
    let nu = Complex64::new(0.0, 1.7);
    let p = instantiate(&t(&[(4, 2)]), &[BlockParams::cusp(vec![nu, -nu], 0.0)]).unwrap();
    let h = Complex64::new(0.5, 0.0);
    assert_eq!(p.assembled.mu(), &[nu + h, -nu + h, nu - h, -nu - h]);
}

#[test]
fn instantiate_rejects_bad_shapes() {
    let ty = t(&[(2, 2), (1, 1)]);
    assert!(matches!(
        instantiate(&ty, &[BlockParams::shift(0.0)]),
        Err(SpectrumError::ParamCount { .. })
    ));
    let nu = Complex64::new(0.0, 1.0);
    assert!(matches!(
        instantiate(&ty, &[BlockParams::cusp(vec![nu], 0.0), BlockParams::shift(0.0)]),
        Err(SpectrumError::ParamShape { .. })
    ));
    assert!(matches!(
        instantiate(&ty, &[BlockParams::cusp(vec![nu, nu], 0.0), BlockParams::shift(0.0)]),
        Err(SpectrumError::ParamSum { .. })
    ));
    assert!(matches!(
        instantiate(&ty, &[BlockParams::cusp(vec![nu, -nu], 1.0), BlockParams::shift(1.0)]),
        Err(SpectrumError::ShiftSum(_))
    ));
    assert!(instantiate(&ty, &[BlockParams::cusp(vec![nu, -nu], 1.0), BlockParams::shift(-2.0)]).is_ok());
    assert!(SpectralType::from_pairs(&[(3, 2)]).is_err());
}

#[test]
fn supnorm_envelope_examples() {
    assert_eq!(supnorm_envelope(&SpectralParameter::tempered(&[0.0, 0.0, 0.0]).unwrap()), 1.0);
    for s in [0.0, 1.5, -4.0] {
        let mu = SpectralParameter::tempered(&[s, -s]).unwrap();
        assert!((supnorm_envelope(&mu) - (1.0 + 2.0 * f64::abs(s))).abs() < 1e-14);
    }
    let mu = SpectralParameter::tempered(&[3.0, -1.0, -2.0]).unwrap();
    let v = supnorm_envelope(&mu);
    for perm in [[1, 0, 2], [2, 0, 1]] {
        assert!((supnorm_envelope(&mu.permuted(&perm)) - v).abs() < 1e-12);
    }
}

#[test]
fn type_record_serializes() {
    let r = TypeRecord::from(&t(&[(4, 2)]));
    let j = serde_json::to_value(&r).unwrap();
    assert_eq!(j["blocks"], serde_json::json!([[4, 2]]));
    assert_eq!(j["coincidence"], "2");
    assert_eq!(j["tags"], serde_json::json!(["SPEH"]));
}

/// A cusp parameter on GL(f) closed under −conj with Jacquet–Shalika bounded
/// real parts: `pairs` entries `(β ± ...)` and tempered singletons.
fn cusp_param(f: usize, betas: &[f64], ims: &[f64]) -> Vec<Complex64> {
    let pairs = betas.len().min(f / 2);
    let mut out = Vec::with_capacity(f);
    let mut sum = 0.0;
    for k in 0..pairs {
        let ti = if pairs * 2 == f && k + 1 == pairs { -sum / 2.0 } else { ims[k] };
        out.push(Complex64::new(betas[k], ti));
        out.push(Complex64::new(-betas[k], ti));
        sum += 2.0 * ti;
    }
    let singles = f - 2 * pairs;
    for l in 0..singles {
        let ti = if l + 1 == singles { -sum } else { ims[pairs + l] };
        out.push(Complex64::new(0.0, ti));
        sum += ti;
    }
    out
}

proptest! {
    #[test]
    fn instantiations_respect_re_bound(
        n in 2usize..=5,
        pick in 0usize..64,
        betas in prop::collection::vec(0.0f64..0.5, 3),
        ims in prop::collection::vec(-20.0f64..20.0, 6),
        shifts in prop::collection::vec(-20.0f64..20.0, 5),
    ) {
        let types = enumerate_types(n, true).unwrap();
        let ty = &types[pick % types.len()];
        let mut params = Vec::new();
        let mut acc = 0.0;
        let r = ty.blocks().len();
        for (j, b) in ty.blocks().iter().enumerate() {
            let s = if j + 1 == r { -acc / b.d as f64 } else { shifts[j] };
            acc += b.d as f64 * s;
            let mu = if b.f >= 2 { cusp_param(b.f as usize, &betas, &ims) } else { Vec::new() };
            params.push(BlockParams::cusp(mu, s));
        }
        let p = instantiate(ty, &params).unwrap();
        let mu = p.assembled.mu();
        prop_assert_eq!(mu.len(), n);
        let sum: Complex64 = mu.iter().sum();
        prop_assert!(sum.norm() < 1e-9);
        let bound = *re_bound(ty).numer() as f64 / *re_bound(ty).denom() as f64;
        prop_assert!(p.assembled.re_norm() <= bound + 1e-12, "{} > {}", p.assembled.re_norm(), bound);
    }
}
