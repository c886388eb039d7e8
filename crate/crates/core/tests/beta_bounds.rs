mod common;

use cdf_bounds::beta::*;
use cdf_bounds::specfun::{central_beta, ln_beta};
use cdf_bounds::Error;
use cdf_bounds_oracle as oracle;
use common::*;

fn bp(a: f64, b: f64, x: f64, y: f64) -> BetaParams {
    BetaParams::new(a, b, x, y).unwrap()
}

fn lead(a: f64, b: f64, y: f64) -> f64 {
    (a * y.ln() + b * (1.0 - y).ln() - ln_beta(a, b)).exp() / a
}

#[test]
fn cdf_cases() {
    let c = cfg();
    for (a, b, y) in [(0.7, 2.0, 0.3), (3.0, 1.5, 0.8)] {
        assert_eq!(beta_nc_cdf(&bp(a, b, 0.0, y), &c).unwrap().lower, central_beta(a, b, y, &c).unwrap());
    }
    assert_rel(beta_nc_cdf(&bp(1.0, 1.0, 0.0, 0.3), &c).unwrap().lower, 0.3, 1e-15);
    let t = beta_nc_cdf(&bp(2.0, 3.0, 4.0, 0.5), &c).unwrap();
    assert_rel(t.lower, BETA_NC_2_3_4_0P5, 1e-13);
    assert_rel(t.upper, BETA_NC_BAR_2_3_4_0P5, 1e-13);
    let (lo, up) = oracle::beta_nc_cdf(2.0, 3.0, 4.0, 0.5, 1e-14);
    assert_rel(t.lower, lo, 1e-11);
    assert_rel(t.upper, up, 1e-11);
}

#[test]
fn density_cases() {
    let c = cfg();
    assert_rel(beta_nc_density(&bp(1.0, 1.0, 0.0, 0.42), &c).unwrap(), 1.0, 1e-15);
    let (x, y) = (3.0, 0.6);
    let want = (-x / 2.0f64).exp() * oracle::kummer_m(2.0, 1.0, x * y / 2.0);
    assert_rel(beta_nc_density(&bp(1.0, 1.0, x, y), &c).unwrap(), want, 1e-13);
    assert_rel(beta_nc_density(&bp(2.5, 1.5, 3.0, 0.6), &c).unwrap(), BETA_DENSITY_2P5_1P5_3_0P6, 1e-13);
    assert_rel(beta_nc_density(&bp(2.5, 1.5, 3.0, 0.6), &c).unwrap(), oracle::beta_nc_density(2.5, 1.5, 3.0, 0.6), 1e-12);
}

#[test]
fn shift_identities() {
    let c = cfg();
    let s = recurrence_shift(&bp(2.0, 3.0, 0.0, 0.4), ShiftKind::AUp, &c).unwrap();
    assert_rel(s.term, lead(2.0, 3.0, 0.4), 1e-14);

    let p = bp(2.0, 3.0, 1.0, 0.4);
    let s = recurrence_shift(&p, ShiftKind::AUp, &c).unwrap();
    let (b23, _) = oracle::beta_nc_cdf(2.0, 3.0, 1.0, 0.4, 1e-14);
    let (b33, _) = oracle::beta_nc_cdf(3.0, 3.0, 1.0, 0.4, 1e-14);
    assert!((b23 - b33 - s.term).abs() <= 1e-10 * b23);

    for kind in [ShiftKind::AUp, ShiftKind::BUp, ShiftKind::ADownBUp] {
        let s = recurrence_shift(&p, kind, &c).unwrap();
        assert!(s.term >= 0.0 && s.prefactor >= 0.0);
        let q = s.shifted_params(&p).unwrap();
        let (lo, up) = oracle::beta_nc_cdf(p.a, p.b, p.x, p.y, 1e-14);
        let (slo, sup) = oracle::beta_nc_cdf(q.a, q.b, q.x, q.y, 1e-14);
        assert!((s.apply(slo) - lo).abs() <= 1e-10 * lo, "{kind:?}");
        assert!((s.apply_complement(sup) - up).abs() <= 1e-10 * up, "{kind:?} complement");
    }
}

#[test]
fn ratio_bound_cases() {
    let c = cfg();
    let (a, b, y) = (2.5, 1.5, 0.3);
    let (k, _) = ratio_bound_a(&bp(a, b, 1e-12, y), &c).unwrap();
    assert_rel(k.value, (a + b) / a * y, 1e-10);

    let (k, cf) = ratio_bound_a(&bp(1.0, 1.0, 2.0, 0.5), &c).unwrap();
    assert_rel(cf.value, 0.5 * (0.5 + 4.25f64.sqrt()), 1e-15);
    assert!(cf.value >= k.value);

    let (k, cf) = ratio_bound_a(&bp(3.0, 2.0, 1.0, 0.7), &c).unwrap();
    let r = oracle::beta_nc_cdf(4.0, 2.0, 1.0, 0.7, 1e-14).0 / oracle::beta_nc_cdf(3.0, 2.0, 1.0, 0.7, 1e-14).0;
    assert!(k.value >= r && cf.value >= r);
}

#[test]
fn recurrence_bound_cases() {
    let c = cfg();
    let uu = central_uu(2.0, 2.0, 0.25).unwrap();
    assert_rel(uu.value, 0.2109375, 1e-15);
    assert!(uu.valid && uu.value > oracle::central_beta(2.0, 2.0, 0.25, 1e-14));
    let r = recurrence_difference_bounds_beta(&bp(2.0, 2.0, 0.0, 0.25), &c).unwrap();
    assert_rel(r.b_upper.value, 0.2109375, 1e-15);

    let rela = central_rela(2.0, 2.0, 0.75).unwrap();
    let (_, bbar) = oracle::beta_nc_cdf(2.0, 2.0, 0.0, 0.75, 1e-14);
    assert!(rela.valid && rela.value > bbar);
    assert_rel(rela.value, 0.2109375, 1e-15);

    let r = recurrence_difference_bounds_beta(&bp(2.0, 3.0, 2.0, 0.1), &c).unwrap();
    let (b, _) = oracle::beta_nc_cdf(2.0, 3.0, 2.0, 0.1, 1e-14);
    assert!(r.b_upper.valid && r.b_upper.value >= b);
    let r = recurrence_difference_bounds_beta(&bp(2.0, 3.0, 2.0, 1e-4), &c).unwrap();
    let (b, _) = oracle::beta_nc_cdf(2.0, 3.0, 2.0, 1e-4, 1e-14);
    assert!(b / r.b_upper.value > 1.0 - 5e-3 && b / r.b_upper.value <= 1.0);

    assert_eq!(recurrence_crossing(2.0, 3.0, 0.0, &c).unwrap(), 0.4);
    assert!(matches!(
        recurrence_difference_bounds_beta(&bp(2.0, 3.0, 0.0, 0.4), &c),
        Err(Error::SingularDenominator { .. })
    ));
}

#[test]
fn ee_is_uu_at_shifted_order() {
    let (a, b, y) = (3.0, 2.0, 0.2);
    let ee = central_ee(a, b, y).unwrap();
    let i = oracle::central_beta(a, b, y, 1e-14);
    assert!(ee.valid && ee.value > i);
    assert!(central_ee(0.8, b, y).is_err());
}

#[test]
fn series_bound_cases() {
    let c = cfg();
    let (a, b, y) = (2.0, 3.0, 0.3);
    let s0 = series_lower_bound_beta(&bp(a, b, 0.0, y), 0, &c).unwrap();
    assert_rel(s0.value, lead(a, b, y), 1e-14);
    assert!(s0.value < oracle::central_beta(a, b, y, 1e-14));

    let u = bp(1.0, 1.0, 0.0, 0.3);
    assert_rel(series_lower_bound_beta(&u, 0, &c).unwrap().value, 0.21, 1e-14);
    assert!((series_lower_bound_beta(&u, 60, &c).unwrap().value - 0.3).abs() < 1e-10);

    // strict even with many terms: the N-term form never reaches B
    let p = bp(2.0, 3.0, 4.0, 0.5);
    let (b, _) = oracle::beta_nc_cdf(2.0, 3.0, 4.0, 0.5, 1e-14);
    let mut last = 0.0;
    for n in [0, 1, 2, 5, 10, 20] {
        let v = series_lower_bound_beta(&p, n, &c).unwrap().value;
        assert!(v > last && v < b);
        last = v;
    }
    let comp = series_complement_lower_beta(&p, &c).unwrap();
    assert!(comp.value < oracle::beta_nc_cdf(2.0, 3.0, 4.0, 0.5, 1e-14).1);
}

#[test]
fn central_factor_cases() {
    let c = cfg();
    let p = bp(2.0, 3.0, 1e-12, 0.5);
    let f = central_factor_bounds(&p, 0.0, &c).unwrap();
    let t = beta_nc_cdf(&p, &c).unwrap();
    assert_rel(f.b_upper.value, t.lower, 1e-10);
    assert_rel(f.bbar_lower.value, t.upper, 1e-10);

    let f = central_factor_bounds(&bp(2.0, 3.0, 4.0, 0.5), 0.0, &c).unwrap();
    let (b, bbar) = oracle::beta_nc_cdf(2.0, 3.0, 4.0, 0.5, 1e-14);
    assert!(f.b_upper.value >= b && f.bbar_lower.value <= bbar);

    let f = central_factor_bounds(&bp(2.0, 3.0, 4.0, 0.5), 0.6, &c).unwrap();
    assert!(f.b_upper.value >= b && f.bbar_lower.value <= bbar);

    assert!(central_factor_bounds(&bp(1.0, 1.0, 2.0, 0.9), 0.0, &c).unwrap().curious_margin > 0.0);
}

#[test]
fn kummer_form_below_closed_form() {
    let c = cfg();
    for a in [0.5, 1.0, 3.0, 9.0] {
        for b in [0.5, 2.0, 7.0] {
            for x in [0.1, 2.0, 30.0] {
                for y in [0.05, 0.5, 0.95] {
                    let (k, cf) = ratio_bound_a(&bp(a, b, x, y), &c).unwrap();
                    assert!(k.value <= cf.value * (1.0 + 1e-14), "({a}, {b}, {x}, {y})");
                }
            }
        }
    }
}
