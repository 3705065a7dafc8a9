use num_traits::ToPrimitive;
use proptest::prelude::*;
use twist_lo::riley::{all_roots, bracket_constants, DEFAULT_TOL_T};
use twist_lo::{bracket, phi_num, riley_poly, solve, solve_with, tau_num, Error, SolveOptions};

fn twist() -> impl Strategy<Value = i64> {
    (-8i64..=8).prop_filter("hyperbolic", |n| *n != 0 && *n != -1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn float_riley_matches_exact_polynomial(n in twist(), s in 0.01..100.0f64, frac in 0.0..1.0f64) {
        let big_t = s + 2.0 + frac * 4.0 / s;
        let exact = riley_poly(n).unwrap().eval_at_f64(s, big_t).unwrap().to_f64().unwrap();
        let float = phi_num(n, s, big_t).unwrap();
        prop_assert!((exact - float).abs() <= 1e-7 * (1.0 + exact.abs()), "{exact} vs {float}");
    }

    #[test]
    fn tau_recursion_and_symmetry(m in -40i64..40, trace in -1.999..1.999f64) {
        let (a, b, c) = (tau_num(m - 1, trace).unwrap(), tau_num(m, trace).unwrap(), tau_num(m + 1, trace).unwrap());
        prop_assert!((c - trace * b + a).abs() < 1e-9 * (1.0 + b.abs()));
        prop_assert_eq!(tau_num(-m, trace).unwrap(), -b);
    }

    #[test]
    fn solution_is_bracketed_and_in_band(n in twist(), log_s in -6.0..8.0f64) {
        let s = 10f64.powf(log_s);
        let sol = solve(n, s, DEFAULT_TOL_T).unwrap();
        prop_assert!(sol.offset > 0.0 && sol.offset < 4.0 / s);
        prop_assert!(sol.trace_w.abs() < 2.0);
        if n != 1 {
            let br = bracket(n, s).unwrap();
            prop_assert_eq!(br.sign_lo * br.sign_hi, -1);
            prop_assert!(sol.offset >= br.offset_lo && sol.offset <= br.offset_hi);
        }
    }

    #[test]
    fn iterations_are_bounded(n in twist(), s in 0.05..50.0f64, tol_exp in 4i32..13) {
        prop_assume!(n != 1);
        let tol = 10f64.powi(-tol_exp);
        let br = bracket(n, s).unwrap();
        let sol = solve(n, s, tol).unwrap();
        let bound = ((br.hi - br.lo) / tol).log2().ceil().max(0.0) as usize + 2;
        prop_assert!(sol.iterations <= bound);
    }
}

#[test]
fn closed_form_for_n_one() {
    for i in 0..50 {
        let s = 10f64.powf(-3.0 + 6.0 * i as f64 / 49.0);
        let sol = solve(1, s, DEFAULT_TOL_T).unwrap();
        assert!((sol.big_t - (s + 2.0 + 1.0 / (s + 1.0))).abs() < 1e-12, "s={s}");
    }
}

#[test]
fn quadratic_roots_at_s_one() {
    let t2 = solve(2, 1.0, DEFAULT_TOL_T).unwrap().big_t;
    assert!((t2 - (17.0 + 17f64.sqrt()) / 4.0).abs() < 1e-10);
    let tm2 = solve(-2, 1.0, DEFAULT_TOL_T).unwrap().big_t;
    assert!((tm2 - (7.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
}

#[test]
fn phi_sign_at_band_points() {
    assert!((phi_num(-2, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
    assert!((phi_num(-2, 1.0, 5.0).unwrap() + 1.0).abs() < 1e-12);
    assert!(matches!(phi_num(2, 1.0, 7.5), Err(Error::OutsideBand { .. })));
}

#[test]
fn bracket_offsets_for_positive_twists() {
    let (c, c2) = bracket_constants(3).unwrap();
    let angle = std::f64::consts::PI / 7.0;
    assert!((c - (2.0 - 2.0 * angle.cos())).abs() < 1e-15);
    assert!((c2 - (2.0 - 2.0 * (3.0 * angle).cos())).abs() < 1e-15);
    assert!(matches!(bracket_constants(0), Err(Error::InvalidTwist { n: 0 })));
    assert!(matches!(bracket_constants(-1), Err(Error::InvalidTwist { n: -1 })));
}

#[test]
fn bracketed_root_appears_in_exhaustive_scan() {
    for (n, s) in [(-3i64, 1.0), (3, 0.5), (5, 2.0)] {
        let sol = solve(n, s, DEFAULT_TOL_T).unwrap();
        let roots = all_roots(n, s, 4000, DEFAULT_TOL_T).unwrap();
        assert!(
            roots.iter().any(|r| (r - sol.big_t).abs() < 1e-10),
            "n={n} s={s}: {roots:?}"
        );
    }
}

#[test]
fn tiny_tolerance_stops_at_float_resolution() {
    let opts = SolveOptions {
        tol: f64::MIN_POSITIVE,
        ..SolveOptions::default()
    };
    let sol = solve_with(-4, 2.0, &opts).unwrap();
    let (lo, hi) = sol.bracket.unwrap();
    assert!(hi - lo <= 4.0 * f64::EPSILON * hi);
}

#[test]
fn solution_json_fields() {
    let sol = solve(2, 1.0, DEFAULT_TOL_T).unwrap();
    let v: serde_json::Value = serde_json::to_value(sol).unwrap();
    for key in ["n", "s", "T", "t", "trace_w", "residual", "iterations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}
