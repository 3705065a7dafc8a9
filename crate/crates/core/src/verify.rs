//! Grid-wide invariant report: every structural identity of the pipeline,
//! evaluated at each `(n, s)` of a grid and aggregated per check.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cover::{lift_generators, lifted_longitude};
use crate::exec::Exec;
use crate::poly::TauTable;
use crate::rep::{longitude, relation_residual, solution_gen_matrices, solution_w_matrix, w_power, w_star_power, Mat2};
use crate::riley::{bracket, solve_with, tau_num, SolveOptions};
use crate::slope::g_eval;
use crate::word::{word_eval, Word};

/// Twist parameters of the standard grid.
pub const STANDARD_NS: [i64; 11] = [-6, -5, -4, -3, -2, 1, 2, 3, 4, 5, 6];
/// Values of `s` of the standard grid.
pub const STANDARD_SS: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 10.0, 100.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub ns: Vec<i64>,
    pub ss: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            ns: STANDARD_NS.to_vec(),
            ss: STANDARD_SS.to_vec(),
        }
    }
}

/// One measured quantity; passes when `value < threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub check: &'static str,
    pub n: i64,
    pub s: Option<f64>,
    pub value: f64,
    pub threshold: f64,
}

impl Measurement {
    pub fn passed(&self) -> bool {
        self.value < self.threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Measurement>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn m(check: &'static str, n: i64, s: Option<f64>, value: f64, threshold: f64) -> Measurement {
    // NaN must fail
    let value = if value.is_nan() { f64::INFINITY } else { value };
    Measurement {
        check,
        n,
        s,
        value,
        threshold,
    }
}

/// Boolean check expressed as a measurement: 0 passes, 1 fails.
fn flag(check: &'static str, n: i64, s: Option<f64>, ok: bool) -> Measurement {
    m(check, n, s, if ok { 0.0 } else { 1.0 }, 0.5)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn det_defect(x: &Mat2) -> f64 {
    (x.det() - 1.0).abs()
}

/// Equal-value and sign pattern of `Tau_m` at the angles `pi/(2m+1)` and `3pi/(2m+1)`.
pub fn chebyshev_checks() -> Vec<Measurement> {
    let mut out = Vec::new();
    for k in 1..=12i64 {
        let tr = 2.0 * (PI / (2 * k + 1) as f64).cos();
        let (a, b) = (
            tau_num(k, tr).unwrap_or(f64::NAN),
            tau_num(k + 1, tr).unwrap_or(f64::NAN),
        );
        out.push(m("chebyshev_equal_values", k, None, rel(b, a), 1e-12));
        out.push(flag("chebyshev_signs", k, None, a > 0.0));
        if k >= 2 {
            let tr = 2.0 * (3.0 * PI / (2 * k + 1) as f64).cos();
            let (a, b) = (
                tau_num(k, tr).unwrap_or(f64::NAN),
                tau_num(k + 1, tr).unwrap_or(f64::NAN),
            );
            out.push(m("chebyshev_equal_values", k, None, rel(b, a), 1e-12));
            out.push(flag("chebyshev_signs", k, None, a < 0.0));
        }
    }
    out
}

/// Finite-sample versions of the small-s and large-s limits of `t`, `B` and `g`.
pub fn limit_checks(n: i64) -> Vec<Measurement> {
    let (small, large) = (1e-6, 1e6);
    let mut out = Vec::new();
    let (Ok(lo), Ok(hi)) = (g_eval(n, small), g_eval(n, large)) else {
        out.push(flag("limit_solve", n, None, false));
        return out;
    };
    if n == 1 {
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        out.push(m("limit_t_small_s", n, Some(small), (lo.t - golden).abs(), 1e-4));
    }
    out.push(m("limit_t_minus_s", n, Some(large), (hi.t - large - 2.0).abs(), 0.01));
    out.push(m("limit_s_over_t", n, Some(large), (large / hi.t - 1.0).abs(), 0.01));
    out.push(m("limit_b_small_s", n, Some(small), (lo.b - 1.0).abs(), 0.01));
    out.push(m(
        "limit_b_t2_large_s",
        n,
        Some(large),
        (hi.b * hi.t * hi.t - 1.0).abs(),
        0.01,
    ));
    out.push(m("limit_g_small_s", n, Some(small), lo.g, 0.005));
    out.push(m("limit_g_large_s", n, Some(large), 4.0 - hi.g, 0.005));
    out
}

/// Solver settings used by the grid: bisect down to binary64 resolution.
/// Several identities have slopes near `1e8` in `T` at `s = 100`, so a root
/// good to `1e-13` is not enough to resolve them.
pub fn grid_solve_options() -> SolveOptions {
    SolveOptions {
        tol: f64::MIN_POSITIVE,
        ..SolveOptions::default()
    }
}

/// Every per-point identity at `(n, s)`.
pub fn point_checks(n: i64, s: f64, table: &mut TauTable) -> Vec<Measurement> {
    let at = Some(s);
    let mut out = Vec::new();
    if n != 1 {
        let ok = bracket(n, s).map(|b| b.sign_lo * b.sign_hi == -1).unwrap_or(false);
        out.push(flag("bracket_sign_change", n, at, ok));
    }
    let sol = match solve_with(n, s, &grid_solve_options()) {
        Ok(sol) => sol,
        Err(_) => {
            out.push(flag("solve", n, at, false));
            return out;
        }
    };
    out.push(flag(
        "solution_in_open_band",
        n,
        at,
        sol.big_t > s + 2.0 && sol.big_t < s + 2.0 + 4.0 / s,
    ));
    out.push(flag("trace_in_open_interval", n, at, sol.trace_w.abs() < 2.0));
    out.push(m("t_inverts_T", n, at, rel(sol.t + 1.0 / sol.t, sol.big_t), 1e-12));

    let exact = table
        .riley(n)
        .ok()
        .and_then(|phi| phi.eval_at_f64(s, sol.big_t))
        .and_then(|v| v.to_f64())
        .map(f64::abs)
        .unwrap_or(f64::NAN);
    out.push(m("exact_riley_residual", n, at, exact, 1e-9));

    let t = sol.t;
    if let (Ok((x, y)), Ok(w)) = (solution_gen_matrices(&sol), solution_w_matrix(&sol)) {
        let expected_trace = 2.0 - s * sol.offset;
        out.push(m(
            "w_trace_formula",
            n,
            at,
            (w.trace() - expected_trace).abs() / (1.0 + expected_trace.abs()),
            1e-10,
        ));
        let by_word = word_eval(&Word::w(), &x, &y);
        out.push(m("w_closed_form", n, at, by_word.rel_diff(&w), 1e-10));
        if let (Ok(wn), Ok(wsn)) = (w_power(n, s, t), w_star_power(n, s, t)) {
            let iterated = word_eval(&Word::w().pow(n), &x, &y);
            out.push(m("w_power_iterated", n, at, wn.rel_diff(&iterated), 1e-8));
            let star = word_eval(&Word::w_star().pow(n), &x, &y);
            out.push(m("w_star_pattern", n, at, wsn.rel_diff(&star), 1e-8));
            let dets = [x, y, w, wn, wsn].iter().map(det_defect).fold(0.0, f64::max);
            out.push(m("unit_determinant", n, at, dets, 1e-10));
        } else {
            out.push(flag("w_power_iterated", n, at, false));
        }
    } else {
        out.push(flag("generator_matrices", n, at, false));
    }

    out.push(m(
        "relation_residual",
        n,
        at,
        relation_residual(n, s, t).unwrap_or(f64::NAN),
        1e-8,
    ));

    match longitude(n, &sol) {
        Ok((l, hol)) => {
            out.push(m("longitude_diagonal", n, at, hol.offdiag_residual / l.norm(), 1e-6));
            out.push(flag("longitude_entry_positive", n, at, l.m11 > 0.0));
            out.push(m("holonomy_closed_form", n, at, rel(hol.b_matrix, hol.b), 1e-10));
            out.push(m("longitude_inverse_pair", n, at, (l.m11 * l.m22 - 1.0).abs(), 1e-10));
            out.push(m("peripheral_identity", n, at, hol.peripheral_identity.abs(), 1e-9));
            match lift_generators(n, &sol) {
                Ok(lift) => {
                    out.push(m("lifted_relator", n, at, lift.relator_residual / lift.scale, 1e-8));
                    out.push(flag("lifted_meridian_omega_zero", n, at, lift.x.omega == 0.0));
                    match lifted_longitude(n, &lift.x, &lift.y) {
                        Ok(lt) => {
                            let b2 = hol.b * hol.b;
                            let gamma_l = (b2 - 1.0) / (b2 + 1.0);
                            out.push(m("lifted_longitude_omega", n, at, lt.omega.abs(), 1e-6));
                            out.push(m(
                                "lifted_longitude_gamma",
                                n,
                                at,
                                (lt.gamma - num_complex::Complex64::new(gamma_l, 0.0)).norm() / lift.scale,
                                1e-8,
                            ));
                        }
                        Err(_) => out.push(flag("lifted_longitude_omega", n, at, false)),
                    }
                }
                Err(_) => out.push(flag("lifted_relator", n, at, false)),
            }
        }
        Err(_) => out.push(flag("longitude_diagonal", n, at, false)),
    }
    out
}

fn summarize(all: Vec<Measurement>) -> Report {
    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut failures = Vec::new();
    for meas in all {
        let ok = meas.passed();
        match checks.iter_mut().find(|c| c.check == meas.check) {
            Some(c) => {
                c.cases += 1;
                c.failures += usize::from(!ok);
                c.worst = c.worst.max(meas.value);
                c.passed &= ok;
            }
            None => checks.push(CheckSummary {
                check: meas.check,
                cases: 1,
                failures: usize::from(!ok),
                worst: meas.value,
                threshold: meas.threshold,
                passed: ok,
            }),
        }
        if !ok {
            failures.push(meas);
        }
    }
    Report { checks, failures }
}

/// Runs every check over `grid`; the report is independent of `exec`.
pub fn verify(grid: &Grid, exec: Exec) -> Report {
    let points: Vec<(i64, f64)> = grid
        .ns
        .iter()
        .flat_map(|&n| grid.ss.iter().map(move |&s| (n, s)))
        .collect();
    let mut all = chebyshev_checks();
    for chunk in exec.map(&points, |&(n, s)| point_checks(n, s, &mut TauTable::new())) {
        all.extend(chunk);
    }
    for chunk in exec.map(&grid.ns, |&n| limit_checks(n)) {
        all.extend(chunk);
    }
    summarize(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_passes() {
        let report = verify(&Grid::default(), Exec::Parallel);
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(report.failures.is_empty());
        assert!(report.checks.len() >= 20);
    }

    #[test]
    fn report_is_deterministic_across_exec() {
        let grid = Grid {
            ns: vec![-3, 2],
            ss: vec![0.5, 3.0],
        };
        assert_eq!(verify(&grid, Exec::Sequential), verify(&grid, Exec::Parallel));
    }

    #[test]
    fn nan_measurements_fail() {
        assert!(!m("x", 1, None, f64::NAN, 1.0).passed());
    }
}
