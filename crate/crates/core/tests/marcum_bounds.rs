mod common;

use std::f64::consts::PI;

use cdf_bounds::marcum::*;
use cdf_bounds::specfun::reg_gamma_tails;
use cdf_bounds::{Error, ValidityMode};
use cdf_bounds_oracle as oracle;
use common::*;

fn gp(mu: f64, x: f64, y: f64) -> GammaParams {
    GammaParams::new(mu, x, y).unwrap()
}

fn erfc(u: f64) -> f64 {
    2.0 / PI.sqrt() * oracle::integrate(|t: f64| (-t * t).exp(), u, u.max(0.0) + 40.0, 1e-15)
}

#[test]
fn pq_endpoints_and_limits() {
    let c = cfg();
    let t = marcum_pq(&gp(1.7, 3.0, 0.0), &c).unwrap();
    assert_eq!((t.lower, t.upper), (0.0, 1.0));
    for nu in [0.6, 1.0, 3.5] {
        for y in [0.2, 2.0, 9.0] {
            let want = reg_gamma_tails(nu, y, &c).unwrap().lower;
            assert_rel(marcum_pq(&gp(nu, 0.0, y), &c).unwrap().lower, want, 1e-15);
            assert_rel(marcum_pq(&gp(nu, 1e-10, y), &c).unwrap().lower, want, 1e-9);
        }
    }
}

#[test]
fn pq_golden_and_quadrature() {
    let c = cfg();
    let t = marcum_pq(&gp(1.0, 1.0, 1.0), &c).unwrap();
    assert_rel(t.lower, MARCUM_P_1_1_1, 1e-13);
    assert_rel(t.upper, MARCUM_Q_1_1_1, 1e-13);
    let t = marcum_pq(&gp(2.0, 3.0, 4.0), &c).unwrap();
    assert_rel(t.lower, MARCUM_P_2_3_4, 1e-13);
    assert_rel(t.upper, MARCUM_Q_2_3_4, 1e-13);
    let (p, q) = oracle::marcum_pq(2.0, 3.0, 4.0, 1e-14);
    assert_rel(t.lower, p, 1e-11);
    assert_rel(t.upper, q, 1e-11);
}

#[test]
fn density_cases() {
    let c = cfg();
    for y in [0.1, 1.0, 7.0] {
        assert_rel(marcum_density(&gp(1.0, 0.0, y), &c).unwrap(), (-y).exp(), 1e-15);
        let (x, t) = (2.0, 2.0 * (2.0 * y as f64).sqrt());
        let half = (y / x).powf(-0.25) * (-x - y).exp() * (2.0 / (PI * t)).sqrt() * t.cosh();
        assert_rel(marcum_density(&gp(0.5, x, y), &c).unwrap(), half, 1e-13);
    }
    assert_rel(marcum_density(&gp(3.0, 2.0, 5.0), &c).unwrap(), MARCUM_DENSITY_3_2_5, 1e-13);
    assert_rel(marcum_density(&gp(3.0, 2.0, 5.0), &c).unwrap(), oracle::marcum_density(3.0, 2.0, 5.0), 1e-12);
}

#[test]
fn c_ratio_cases() {
    let c = cfg();
    for mu in [0.7, 2.0, 6.0] {
        let y = 1e-8;
        assert_rel(c_ratio(mu, 3.0, y, &c).unwrap(), y / mu, 1e-6);
    }
    let want = oracle::bessel_i(1.0, 8.0) / oracle::bessel_i(0.0, 8.0);
    let got = c_ratio(1.0, 4.0, 4.0, &c).unwrap();
    assert_rel(got, want, 1e-13);
    assert!(got < 1.0);

    assert_rel(c_ratio(2.0, 3.0, 1.0, &c).unwrap(), C_RATIO_2_3_1, 1e-13);
    let (up, lo) = ratio_bound_c(&gp(2.0, 3.0, 1.0), &c).unwrap();
    let (p2, q2) = oracle::marcum_pq(2.0, 3.0, 1.0, 1e-14);
    let (p3, q3) = oracle::marcum_pq(3.0, 3.0, 1.0, 1e-14);
    assert!(p3 / p2 < up.value);
    assert!(q3 / q2 > lo.value);
}

#[test]
fn recurrence_bounds_cases() {
    let c = cfg();
    let r = recurrence_difference_bounds(&gp(1.0, 1.0, 0.1), &c).unwrap();
    let (p1, _) = oracle::marcum_pq(1.0, 1.0, 0.1, 1e-14);
    assert!(r.p_upper.valid && r.p_upper.value >= p1);
    let r = recurrence_difference_bounds(&gp(1.0, 1.0, 1e-4), &c).unwrap();
    let (p1, _) = oracle::marcum_pq(1.0, 1.0, 1e-4, 1e-14);
    assert!(p1 / r.p_upper.value > 1.0 - 5e-3 && p1 / r.p_upper.value <= 1.0);

    let r = recurrence_difference_bounds(&gp(1.0, 1.0, 10.0), &c).unwrap();
    let (_, q1) = oracle::marcum_pq(1.0, 1.0, 10.0, 1e-14);
    assert!(r.q_upper.valid && !r.p_upper.valid);
    assert!(r.q_upper.value >= q1);

    let y0 = recurrence_crossing(1.0, 1.0, &c).unwrap();
    assert_rel(y0, MARCUM_CROSSING_MU1_X1, 1e-12);
    assert!(matches!(
        recurrence_difference_bounds(&gp(1.0, 1.0, y0), &c),
        Err(Error::SingularDenominator { .. })
    ));
}

#[test]
fn order_shift_cases() {
    let c = cfg();
    let base = gp(1.5, 2.0, 3.0);
    let (up, lo) = order_shift_bound(1.5, 1.5, &base, &c).unwrap();
    let t = marcum_pq(&base, &c).unwrap();
    assert_rel(up.value, t.lower, 1e-14);
    assert_rel(lo.value, t.upper, 1e-14);

    let (up, lo) = order_shift_bound(2.0, 1.0, &gp(1.0, 1.0, 2.0), &c).unwrap();
    let (p2, q2) = oracle::marcum_pq(2.0, 1.0, 2.0, 1e-14);
    assert!(up.value > p2 && lo.value < q2);

    // half-integer base order only in conjectured mode
    let half = gp(0.5, 1.0, 2.0);
    assert!(matches!(order_shift_bound(1.0, 0.5, &half, &c), Err(Error::Domain(_))));
    let conj = c.with_validity_mode(ValidityMode::Conjectured);
    let (up, lo) = order_shift_bound(1.0, 0.5, &half, &conj).unwrap();
    let (p1, q1) = oracle::marcum_pq(1.0, 1.0, 2.0, 1e-14);
    assert!(!up.valid && !up.validity_note.is_empty());
    assert!(up.value > p1 && lo.value < q1);
}

#[test]
fn order_shift_consistent_with_c_ratio() {
    let c = cfg();
    for (mu, x, y) in [(1.0, 1.0, 0.5), (2.0, 3.0, 4.0), (4.0, 10.0, 30.0)] {
        let p = gp(mu, x, y);
        let (up, lo) = order_shift_bound(mu + 1.0, mu, &p, &c).unwrap();
        let (cu, cl) = ratio_bound_c(&p, &c).unwrap();
        let (pm, qm) = oracle::marcum_pq(mu, x, y, 1e-14);
        let (pn, qn) = oracle::marcum_pq(mu + 1.0, x, y, 1e-14);
        assert!(up.holds(pn, 1e-12) && lo.holds(qn, 1e-12));
        assert!(cu.holds(pn / pm, 1e-12) && cl.holds(qn / qm, 1e-12));
    }
}

#[test]
fn erf_bound_cases() {
    let c = cfg();
    let p = GammaParams::from_ab(1.0, 1.0, 2.0).unwrap();
    let s = erf_bounds(1.0, &p, &c).unwrap();
    let (_, q) = oracle::marcum_pq(1.0, 0.5, 2.0, 1e-14);
    assert!(s.b1.value <= q && s.b2.value <= q);
    assert!(!s.l1.valid && !s.l2.valid);

    let p = GammaParams::from_ab(2.0, 1.0, 1.0).unwrap();
    let s = erf_bounds(2.0, &p, &c).unwrap();
    let (_, q) = oracle::marcum_pq(2.0, 0.5, 0.5, 1e-14);
    assert!(s.l1.valid && s.l2.valid);
    assert!(s.l1.value <= q && s.l2.value <= q);
    assert!(s.l1.value > s.b1.value, "L1 improves on B1 here");
}

#[test]
fn erfc_bessel_margin_cases() {
    let c = cfg();
    // order -1/2: the Bessel factor cancels and the margin is half an erfc difference
    for (a, b) in [(1.0, 2.0), (3.0, 0.5)] {
        let want = 0.5 * (erfc((a - b) / 2f64.sqrt()) - erfc((a + b) / 2f64.sqrt()));
        assert_rel(erfc_bessel_inequality_margin(-0.5, a, b, &c).unwrap(), want, 1e-10);
    }
    assert!(erfc_bessel_inequality_margin(0.0, 1.0, 1.0, &c).unwrap() > 0.0);
    for nu in [0.0, 1.0, 4.0] {
        assert!(erfc_bessel_inequality_margin(nu, 1.0, 20.0, &c).unwrap() > 0.0);
    }
}

#[test]
fn incgamma_bound_cases() {
    let c = cfg();
    for nu in [1.0, 2.0, 4.5] {
        let y = 3.0;
        let (b1, _) = incgamma_bounds(nu, &gp(nu, 1e-8, y), 0.0, &c).unwrap();
        assert_rel(b1.value, reg_gamma_tails(nu, y, &c).unwrap().lower, 1e-6);
    }
    let (_, b2) = incgamma_bounds(2.0, &gp(2.0, 1.0, 3.0), 0.0, &c).unwrap();
    let (p, q) = oracle::marcum_pq(2.0, 1.0, 3.0, 1e-14);
    assert!(b2.value <= q);
    let (up, lo) = incgamma_bounds(2.0, &gp(2.0, 1.0, 3.0), 0.5, &c).unwrap();
    assert!(up.value >= p && lo.value <= q);
    assert!(matches!(incgamma_bounds(0.5, &gp(0.5, 1.0, 3.0), 0.0, &c), Err(Error::Domain(_))));
}

#[test]
fn curious_gamma_margin_cases() {
    let c = cfg();
    assert!(curious_gamma_inequality_margin(0.0, 1.0, 1.0, &c).unwrap() > 0.0);
    assert!(curious_gamma_inequality_margin(3.0, 10.0, 0.5, &c).unwrap() > 0.0);
    // y -> 0: margin -> 1 - Gamma(nu+1) I_nu(2 sqrt(xy)) / (e^x (xy)^{nu/2}) -> 1 - e^{-x}
    let (nu, x) = (1.5, 2.0);
    let m = curious_gamma_inequality_margin(nu, x, 1e-12, &c).unwrap();
    assert!((m - (1.0 - (-x as f64).exp())).abs() < 1e-9);
}

#[test]
fn series_bound_cases() {
    let c = cfg();
    let p = gp(1.0, 1.0, 1.0);
    let one = series_lower_bound_p(&p, 1, &c).unwrap();
    assert_rel(one.value, marcum_density(&gp(2.0, 1.0, 1.0), &c).unwrap(), 1e-15);
    let (p1, q1) = oracle::marcum_pq(1.0, 1.0, 1.0, 1e-14);
    let n5 = series_lower_bound_p(&p, 5, &c).unwrap().value;
    let n10 = series_lower_bound_p(&p, 10, &c).unwrap().value;
    let n50 = series_lower_bound_p(&p, 50, &c).unwrap().value;
    assert!(one.value < n5 && n5 < n10 && n10 < p1);
    assert!((n50 - p1).abs() <= 1e-10);
    assert!(series_lower_bound_q(&p, &c).unwrap().value < q1);
    assert!(!series_lower_bound_q(&gp(0.6, 0.1, 0.01), &c).unwrap().valid);
}

#[test]
fn bessel_ratio_monotone_lemmas() {
    use cdf_bounds::kummer_ratios::{pairwise_ordering, Trend};
    let c = cfg();
    let ts: Vec<f64> = (1..=60).map(|i| 0.05 * 1.12f64.powi(i)).collect();
    for (alpha, mu) in [(0.3, 0.2), (1.0, -1.0), (1.0, -0.5), (2.0, 4.0)] {
        let v: Vec<f64> = ts.iter().map(|&t| bessel_power_ratio(alpha, mu, t, &c).unwrap()).collect();
        assert!(pairwise_ordering(&v, Trend::Increasing).passes(1e-11), "alpha {alpha} mu {mu}");
    }
}

#[test]
fn cached_bounds_match_uncached_across_threads() {
    use cdf_bounds::ratio_engine::CrossingCache;
    let c = cfg();
    let cache = CrossingCache::new();
    let cells: Vec<GammaParams> = [0.3, 0.9, 2.0, 6.0].iter().map(|&y| gp(2.0, 3.0, y)).collect();
    std::thread::scope(|s| {
        for p in &cells {
            let cache = &cache;
            s.spawn(move || {
                let a = recurrence_difference_bounds_cached(p, &c, Some(cache)).unwrap();
                let b = recurrence_difference_bounds(p, &c).unwrap();
                assert_eq!(a, b);
            });
        }
    });
    assert_eq!(cache.len(), 1);
}
