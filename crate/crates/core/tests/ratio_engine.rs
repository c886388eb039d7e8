mod common;

use cdf_bounds::marcum::{self, GammaParams};
use cdf_bounds::kummer_ratios::{pairwise_ordering, Trend};
use cdf_bounds::ratio_engine::*;
use cdf_bounds::Error;
use cdf_bounds_oracle as oracle;
use common::*;
use proptest::prelude::*;

/// `g1 = 1`, `g2 = (k+1) t^k` on `(0, 1)`: `G1 = t`, `G2 = t^{k+1}`.
fn power_pair(k: f64) -> DensityPair {
    DensityPair::new(|_| Ok(1.0), move |t: f64| Ok((k + 1.0) * t.powf(k)), Direction::Increasing, (0.0, 1.0))
}

#[test]
fn synthetic_crossings() {
    let c = cfg();
    assert!((crossing_point(&power_pair(1.0), &c).unwrap() - 0.5).abs() < 1e-12);
    let dec = DensityPair::new(|t: f64| Ok(2.0 * t), |_| Ok(1.0), Direction::Decreasing, (0.0, 1.0));
    assert!((crossing_point(&dec, &c).unwrap() - 0.5).abs() < 1e-12);
    let flat = DensityPair::new(|_| Ok(1.0), |_| Ok(0.5), Direction::Increasing, (0.0, 1.0));
    assert!(matches!(crossing_point(&flat, &c), Err(Error::NoCrossing { .. })));
}

#[test]
fn synthetic_ratio_and_difference_bounds() {
    let c = cfg();
    let p = power_pair(1.0);
    let (up, _) = ratio_bound(&p, 0.25).unwrap();
    assert_eq!(up.value, 0.5);
    assert!(up.holds(0.25, 1e-14));
    let (up, _) = ratio_bound(&p, 0.75).unwrap();
    assert_eq!(up.value, 1.0);

    let d = difference_bounds(&p, 0.25 - 0.0625, 0.25, &c).unwrap();
    assert!((d.g1_upper.value - 0.375).abs() < 1e-15);
    assert!(d.g1_upper.valid && d.g1_upper.holds(0.25, 1e-14));
    let d = difference_bounds(&p, 0.75 - 0.5625, 0.75, &c).unwrap();
    assert!((d.g1bar_upper.value - 0.375).abs() < 1e-15);
    assert!(d.g1bar_upper.valid && !d.g1_upper.valid && d.g1bar_upper.holds(0.25, 1e-14));
    assert!(matches!(difference_bounds(&p, 0.25, 0.5, &c), Err(Error::SingularDenominator { .. })));
}

#[test]
fn marcum_examples() {
    let c = cfg();
    // c-ratio bound on P3/P2 at (x, y) = (3, 1)
    let pair = marcum::recurrence_pair(2.0, 3.0, &c);
    let (up, lo) = ratio_bound(&pair, 1.0).unwrap();
    let (p2, q2) = oracle::marcum_pq(2.0, 3.0, 1.0, 1e-14);
    let (p3, q3) = oracle::marcum_pq(3.0, 3.0, 1.0, 1e-14);
    assert!(up.value > p3 / p2 && up.value < 1.0);
    assert!(lo.value <= q3 / q2 && lo.holds(q3 / q2, 1e-12));

    // difference bound with diff = g2 at mu = 1, x = 2, y = 0.5
    let pair = marcum::recurrence_pair(1.0, 2.0, &c);
    let diff = marcum::marcum_density(&GammaParams::new(2.0, 2.0, 0.5).unwrap(), &c).unwrap();
    let d = difference_bounds(&pair, diff, 0.5, &c).unwrap();
    let (p1, _) = oracle::marcum_pq(1.0, 2.0, 0.5, 1e-14);
    assert!(d.g1_upper.valid && d.g1_upper.value > p1);
}

#[test]
fn marcum_crossing_golden() {
    let c = cfg();
    let y0 = crossing_point(&marcum::recurrence_pair(1.0, 1.0, &c), &c).unwrap();
    assert_rel(y0, MARCUM_CROSSING_MU1_X1, 1e-12);
    assert_rel(marcum::c_ratio(1.0, 1.0, y0, &c).unwrap(), 1.0, 1e-12);
}

#[test]
fn difference_bounds_sharp_at_ends() {
    let c = cfg();
    for k in [0.5, 1.0, 3.0] {
        let p = power_pair(k);
        let x: f64 = 1e-6;
        let d = difference_bounds(&p, x - x.powf(k + 1.0), x, &c).unwrap();
        assert!((x / d.g1_upper.value - 1.0).abs() <= 1e-3, "k = {k}: lower end");
        let x: f64 = 1.0 - 1e-6;
        let d = difference_bounds(&p, x - x.powf(k + 1.0), x, &c).unwrap();
        assert!(((1.0 - x) / d.g1bar_upper.value - 1.0).abs() <= 1e-3, "k = {k}: upper end");
    }
    // Marcum pair near y = 0: P1 against U1 with diff = g2
    let y = 1e-6;
    let d = marcum::recurrence_difference_bounds(&GammaParams::new(1.0, 1.0, y).unwrap(), &c).unwrap();
    let (p1, _) = oracle::marcum_pq(1.0, 1.0, y, 1e-14);
    assert!((p1 / d.p_upper.value - 1.0).abs() <= 1e-3);
}

#[test]
fn ratio_of_integrals_inherits_monotonicity() {
    // G2/G1 = P_{mu+1}/P_mu is increasing in y like c_mu
    for (mu, x) in [(1.0, 1.0), (2.5, 5.0)] {
        let ys: Vec<f64> = (1..=50).map(|i| 0.2 * i as f64).collect();
        let h: Vec<f64> = ys
            .iter()
            .map(|&y| oracle::marcum_pq(mu + 1.0, x, y, 1e-13).0 / oracle::marcum_pq(mu, x, y, 1e-13).0)
            .collect();
        assert!(pairwise_ordering(&h, Trend::Increasing).passes(1e-10));
    }
    let h: Vec<f64> = (1..=50).map(|i| (i as f64 / 51.0).powi(2)).collect();
    assert!(pairwise_ordering(&h, Trend::Increasing).passes(1e-10));
}

#[test]
fn crossing_cache_is_consistent() {
    let cache = CrossingCache::new();
    let a = cache.get_or_compute([1.0, 2.0, 3.0], || Ok(0.5)).unwrap();
    let b = cache.get_or_compute([1.0, 2.0, 3.0], || Ok(9.0)).unwrap();
    assert_eq!(a, b);
    assert_eq!(cache.len(), 1);
}

proptest! {
    #[test]
    fn u2_is_r_times_u1(k in 0.2f64..6.0, x in 0.01f64..0.99) {
        let c = cfg();
        let p = power_pair(k);
        let x0 = crossing_point(&p, &c).unwrap();
        prop_assume!((x - x0).abs() > 1e-3);
        let d = difference_bounds_at(&p, x - x.powf(k + 1.0), x, x0).unwrap();
        let r = (k + 1.0) * x.powf(k);
        prop_assert!((d.g2_upper.value - r * d.g1_upper.value).abs() <= 1e-14 * d.g2_upper.value.abs());
        prop_assert!((d.g2bar_upper.value - r * d.g1bar_upper.value).abs() <= 1e-14 * d.g2bar_upper.value.abs());
    }

    #[test]
    fn valid_difference_bounds_hold(k in 0.2f64..6.0, x in 0.01f64..0.99) {
        let c = cfg();
        let p = power_pair(k);
        let x0 = crossing_point(&p, &c).unwrap();
        prop_assume!((x - x0).abs() > 1e-3);
        let (g1, g2) = (x, x.powf(k + 1.0));
        let d = difference_bounds_at(&p, g1 - g2, x, x0).unwrap();
        if x < x0 {
            prop_assert!(d.g1_upper.valid && d.g1_upper.holds(g1, 1e-14) && d.g2_upper.holds(g2, 1e-14));
        } else {
            prop_assert!(d.g1bar_upper.valid && d.g1bar_upper.holds(1.0 - g1, 1e-14) && d.g2bar_upper.holds(1.0 - g2, 1e-14));
        }
        let (up, lo) = ratio_bound(&p, x).unwrap();
        prop_assert!(up.holds(g2 / g1, 1e-14) && lo.holds((1.0 - g2) / (1.0 - g1), 1e-12));
    }
}
