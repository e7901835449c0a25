//! Cross-module properties on small random inputs.

use proptest::prelude::*;

use multcorr::arith;
use multcorr::charsum::restricted_identity_check;
use multcorr::linsys::{correlation_sum, ConvexBody, LinearSystem};
use multcorr::majorant::{domination_scan, FlatForm, Majorant, MajorantParams};
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};
use multcorr::wtrick::{exact_smooth_partition, make_wcontext, WOverrides};

fn catalogue() -> Vec<MultiplicativeFunction> {
    vec![
        MultiplicativeFunction::two_squares(),
        MultiplicativeFunction::delta_omega(0.5).unwrap(),
        MultiplicativeFunction::divisor_d(),
        MultiplicativeFunction::abs_lambda_delta(5000).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_total_is_the_correlation_sum(
        rows in prop::collection::vec((0i64..4, 0i64..4, 1i64..5), 1..4),
        t in 20u64..120,
        fi in 0usize..4,
    ) {
        let matrix: Vec<Vec<i64>> = rows.iter().map(|&(a, b, _)| vec![a, b]).collect();
        prop_assume!(matrix.iter().all(|r| r.iter().any(|&c| c != 0)));
        let consts: Vec<i64> = rows.iter().map(|r| r.2).collect();
        let sys = LinearSystem::from_matrix_allowing_dependence(&matrix, &consts).unwrap();
        let body = ConvexBody::unit_box(2).unwrap();
        let top = (7 * t + 5) as u64;
        let tbl = build_sieve(&catalogue()[fi], top).unwrap();
        let tbls = vec![&tbl; sys.len()];
        let wctx = make_wcontext(t.max(16), &WOverrides::default()).unwrap();
        let part = exact_smooth_partition(&tbls, &sys, &body, t, &wctx).unwrap();
        let corr = correlation_sum(&tbls, &sys, &body, t).unwrap();
        let counts: u64 = part.groups.values().map(|g| g.count).sum();
        prop_assert_eq!(counts, corr.lattice_count);
        prop_assert!((part.total - corr.raw_sum).abs() <= 1e-9 * corr.raw_sum.abs().max(1.0));
        // Each group key is the W-smooth part of the form values.
        let primes = wctx.small_primes();
        for key in part.groups.keys() {
            prop_assert!(key.iter().all(|&w| arith::smooth_part(w, *primes.last().unwrap()) == w));
        }
    }

    #[test]
    fn identity_is_exact_for_catalogue(
        fi in 0usize..4,
        q0 in 1u64..8,
        wi in 0usize..3,
        a_seed in 0u64..1000,
        y in 50u64..5000,
    ) {
        let w = [2u64, 4, 6][wi];
        let q = q0 * w;
        let units: Vec<u64> = (1..=q).filter(|&a| arith::gcd(a, q) == 1).collect();
        let a = units[(a_seed as usize) % units.len()];
        let tbl = build_sieve(&catalogue()[fi], 5000).unwrap();
        let c = restricted_identity_check(&tbl, y, q0, w, a).unwrap();
        prop_assert!(c.residual <= 1e-9 * c.scale.max(1.0), "{:?}", c);
        if c.compatible {
            prop_assert!(c.correction.abs() <= 1e-9 * c.scale.max(1.0));
        }
    }

    #[test]
    fn prime_power_majorant_dominates(t in 16u64..4000, fi in 0usize..2) {
        let f = &catalogue()[fi];
        let m = Majorant::new(f, t, MajorantParams::default().with_flat_form(FlatForm::PrimePowers)).unwrap();
        let d = domination_scan(&m).unwrap();
        prop_assert_eq!(d.uncovered, 0);
        prop_assert!(d.max_ratio <= 1.0 + 1e-12, "{:?}", d);
    }
}
