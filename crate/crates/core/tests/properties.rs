//! Randomized invariants. The perturbation inequalities are theorems, so
//! any violation beyond round-off slack is a library bug; the remaining
//! properties pin algebraic identities the modules promise.

use proptest::prelude::*;

use corrspec::estimators::{
    act_estimate, act_threshold_only, bai_ng_from_spectrum, broken_stick_thresholds, bs_rule,
    varah_gap_diagnostic, BaiNgPenalty,
};
use corrspec::hp::{hp_filter, second_difference, TimeSeries};
use corrspec::linalg::{
    check_additive_perturbation, check_mult_perturbation, check_weyl, sym_eigvals, DenseMatrix,
    Spectrum, SpectrumKind,
};
use corrspec::sample_stats::{sample_matrices, Centering};

fn entry() -> impl Strategy<Value = f64> {
    // bounded away from exact zero so no generated column can be
    // identically zero
    prop::num::f64::NORMAL
        .prop_map(|v| v % 8.0)
        .prop_map(|v| if v.abs() < 1e-3 { 0.25 } else { v })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    prop::collection::vec(entry(), rows * cols)
        .prop_map(move |e| DenseMatrix::new(rows, cols, e).unwrap())
}

fn symmetric(order: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    matrix(order, order).prop_map(|m| {
        DenseMatrix::from_fn(m.rows(), m.rows(), |i, j| (m.get(i, j) + m.get(j, i)) / 2.0).unwrap()
    })
}

fn dims() -> impl Strategy<Value = usize> {
    2usize..=8
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplicative_singular_value_bounds_hold(
        (a, b) in (dims(), dims(), dims()).prop_flat_map(|(m, k, n)| (matrix(m, k), matrix(k, n)))
    ) {
        let report = check_mult_perturbation(&a, &b).unwrap();
        prop_assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn additive_singular_value_bounds_hold(
        (a, b) in (dims(), dims()).prop_flat_map(|(m, n)| (matrix(m, n), matrix(m, n)))
    ) {
        let report = check_additive_perturbation(&a, &b).unwrap();
        prop_assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn weyl_eigenvalue_bounds_hold(
        (n, h) in dims().prop_flat_map(|d| (symmetric(d), symmetric(d)))
    ) {
        let report = check_weyl(&n, &h).unwrap();
        prop_assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn varah_bound_never_exceeds_the_smallest_factor_eigenvalue(
        l in (4usize..=24, 2usize..=4)
            .prop_flat_map(|(p, k)| matrix(p, k))
    ) {
        let k = l.cols();
        let report = varah_gap_diagnostic(&l, 0.0).unwrap();
        let gram = DenseMatrix::from_fn(k, k, |a, b| {
            (0..l.rows()).map(|i| l.get(i, a) * l.get(i, b)).sum::<f64>()
        })
        .unwrap();
        let lambda_k = *sym_eigvals(&gram).unwrap().values().last().unwrap();
        prop_assert!(
            report.lower_bound <= lambda_k + 1e-9 * (1.0 + lambda_k.abs()),
            "bound {} vs lambda_k {lambda_k}",
            report.lower_bound
        );
    }

    #[test]
    fn broken_stick_thresholds_sum_to_p(p in 1usize..=2000) {
        let t = broken_stick_thresholds::<f64>(p).unwrap();
        let total: f64 = {
            // Kahan, matching the promise that the identity holds to
            // 1e-10 even for large p
            let (mut acc, mut comp) = (0.0f64, 0.0f64);
            for &v in t.values() {
                let term = v - comp;
                let next = acc + term;
                comp = (next - acc) - term;
                acc = next;
            }
            acc
        };
        prop_assert!((total - p as f64).abs() <= 1e-10, "sum {total} at p = {p}");
        prop_assert!(t.values().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn estimator_counts_stay_in_range(
        (values, extra) in (2usize..=40).prop_flat_map(|p| {
            (prop::collection::vec(1e-6f64..50.0, p), 0usize..=5)
        })
    ) {
        let p = values.len() + extra;
        let n = 4 * p;
        let mut sorted = values;
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let eigs = Spectrum::new(sorted, SpectrumKind::EigenvaluesSymmetric, p, p).unwrap();
        prop_assert!(bs_rule(&eigs, p).unwrap() <= p);
        prop_assert!(act_estimate(&eigs, p, n).unwrap() < p);
        prop_assert!(act_threshold_only(&eigs, p, n).unwrap() <= eigs.len());
        let k_max = (p.min(n) / 2).max(1);
        let k = bai_ng_from_spectrum(&eigs, p, n, k_max, BaiNgPenalty::ICp2).unwrap();
        prop_assert!(k <= k_max);
    }

    #[test]
    fn correlation_is_affine_invariant(
        (x, scales, shifts) in (2usize..=6, 10usize..=24).prop_flat_map(|(p, n)| {
            (
                matrix(p, n),
                prop::collection::vec(0.1f64..10.0, p),
                prop::collection::vec(-5.0f64..5.0, p),
            )
        })
    ) {
        let p = x.rows();
        let n = x.cols();
        let base = match sample_matrices(&x, Centering::Data) {
            Ok(m) => m.corr,
            // a generated column can still be constant; skip those draws
            Err(_) => return Ok(()),
        };
        let mapped = DenseMatrix::from_fn(p, n, |i, j| scales[i] * x.get(i, j) + shifts[i]).unwrap();
        let transformed = sample_matrices(&mapped, Centering::Data).unwrap().corr;
        for i in 0..p {
            for j in 0..p {
                prop_assert!(
                    (base.get(i, j) - transformed.get(i, j)).abs() <= 1e-9,
                    "entry ({i}, {j}): {} vs {}",
                    base.get(i, j),
                    transformed.get(i, j)
                );
            }
        }
    }

    #[test]
    fn correlation_spectrum_traces_p(
        x in (3usize..=10, 12usize..=30).prop_flat_map(|(p, n)| matrix(p, n))
    ) {
        let p = x.rows();
        let corr = match sample_matrices(&x, Centering::Data) {
            Ok(m) => m.corr,
            Err(_) => return Ok(()),
        };
        let eigs = sym_eigvals(&corr).unwrap();
        let total: f64 = eigs.values().iter().sum();
        prop_assert!((total - p as f64).abs() <= 1e-8, "trace {total} vs {p}");
    }

    #[test]
    fn hp_trend_curvature_is_monotone_in_lambda(
        values in prop::collection::vec(-5.0f64..5.0, 8..=60)
    ) {
        let y = TimeSeries::new(values, "y").unwrap();
        let mut prev = f64::INFINITY;
        for lambda in [1.0, 100.0, 1e4] {
            let trend = hp_filter(&y, lambda).unwrap().trend;
            let curv: f64 = second_difference(&trend)
                .values()
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt();
            prop_assert!(
                curv <= prev + 1e-9 * (1.0 + prev),
                "curvature rose from {prev} at lambda {lambda}"
            );
            prev = curv;
        }
    }

    #[test]
    fn hp_decomposition_reconstructs_the_input(
        (values, lambda) in (
            prop::collection::vec(-5.0f64..5.0, 3..=50),
            prop_oneof![Just(0.0), Just(10.0), Just(1600.0), Just(1e6)],
        )
    ) {
        let y = TimeSeries::new(values.clone(), "y").unwrap();
        let dec = hp_filter(&y, lambda).unwrap();
        for (t, &want) in values.iter().enumerate() {
            let rebuilt = dec.trend.values()[t] + dec.cycle.values()[t];
            prop_assert!(
                (rebuilt - want).abs() <= 1e-9 * (1.0 + want.abs()),
                "t = {t}: {rebuilt} vs {want}"
            );
        }
    }
}
