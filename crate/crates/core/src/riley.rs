//! Floating-point Riley equation: Chebyshev-type values, certified
//! sign-change brackets and bisection for `T` at a fixed `s > 0`.
//!
//! Internally the unknown is the offset `u = T - s - 2`, which lives in
//! `[0, 4/s]`. Working with `u` keeps the trace `2 - s*u` and the
//! longitude holonomy free of cancellation when `s` is large.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_twist, Error, Result};

/// Default absolute tolerance on `T`.
pub const DEFAULT_TOL_T: f64 = 1e-13;
/// Default bisection iteration cap.
pub const DEFAULT_MAX_ITER: usize = 200;

/// Width of the angular window around 0 and pi where limit values are used.
const ENDPOINT_THETA: f64 = 1e-8;
/// Relative slack accepted on the band edges before reporting `OutsideBand`.
const BAND_SLACK: f64 = 1e-12;

/// `sin(m theta) / sin(theta)` for `trace = 2 cos(theta)`.
pub fn tau_num(m: i64, trace: f64) -> Result<f64> {
    if !(trace.abs() <= 2.0) {
        return Err(Error::TraceOutOfRange { trace });
    }
    Ok(tau_unchecked(m, trace))
}

fn tau_unchecked(m: i64, trace: f64) -> f64 {
    let theta = (0.5 * trace).clamp(-1.0, 1.0).acos();
    let mf = m as f64;
    if theta < ENDPOINT_THETA {
        mf
    } else if PI - theta < ENDPOINT_THETA {
        if m.rem_euclid(2) == 1 {
            mf
        } else {
            -mf
        }
    } else {
        (mf * theta).sin() / theta.sin()
    }
}

/// Value of the Riley function at offset `u = T - s - 2`; the trace is clamped to `[-2, 2]`.
pub(crate) fn phi_at_offset(n: i64, s: f64, u: f64) -> f64 {
    let trace = (2.0 - s * u).clamp(-2.0, 2.0);
    tau_unchecked(n + 1, trace) - (1.0 + u) * tau_unchecked(n, trace)
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "s",
            value: s,
            reason: "must be a positive finite real",
        })
    }
}

/// `Phi_n(T) = Tau_{n+1}(z) - (T - 1 - s) Tau_n(z)` on the band `[s+2, s+2+4/s]`.
pub fn phi_num(n: i64, s: f64, t_param: f64) -> Result<f64> {
    check_s(s)?;
    let u = (t_param - 2.0) - s;
    let width = 4.0 / s;
    let slack = BAND_SLACK * t_param.abs().max(1.0);
    if !(u >= -slack && u <= width + slack) {
        return Err(Error::OutsideBand { s, t_param });
    }
    Ok(phi_at_offset(n, s, u.clamp(0.0, width)))
}

/// Offsets `(c, c')` such that the certified bracket is `s+2+c/s < T < s+2+c'/s`.
pub fn bracket_constants(n: i64) -> Result<(f64, f64)> {
    check_twist(n)?;
    match n {
        1 => Err(Error::ClosedFormAvailable),
        -2 => Ok((1.0, 2.0)),
        n if n > 1 => {
            let k = (2 * n + 1) as f64;
            Ok((2.0 - 2.0 * (PI / k).cos(), 2.0 - 2.0 * (3.0 * PI / k).cos()))
        }
        n => {
            let k = (2 * n.abs() - 1) as f64;
            Ok((2.0 - 2.0 * (PI / k).cos(), 2.0 - 2.0 * (3.0 * PI / k).cos()))
        }
    }
}

/// Sign-change bracket for `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub sign_lo: i8,
    pub sign_hi: i8,
    /// `lo - s - 2`
    pub offset_lo: f64,
    /// `hi - s - 2`
    pub offset_hi: f64,
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

pub fn bracket(n: i64, s: f64) -> Result<Bracket> {
    check_s(s)?;
    let (c_lo, c_hi) = bracket_constants(n)?;
    let (u_lo, u_hi) = (c_lo / s, c_hi / s);
    let (f_lo, f_hi) = (phi_at_offset(n, s, u_lo), phi_at_offset(n, s, u_hi));
    let (sign_lo, sign_hi) = (sign_of(f_lo), sign_of(f_hi));
    if sign_lo * sign_hi != -1 {
        return Err(Error::NoSignChange {
            lo: s + 2.0 + u_lo,
            hi: s + 2.0 + u_hi,
            f_lo,
            f_hi,
        });
    }
    Ok(Bracket {
        lo: s + 2.0 + u_lo,
        hi: s + 2.0 + u_hi,
        sign_lo,
        sign_hi,
        offset_lo: u_lo,
        offset_hi: u_hi,
    })
}

/// `t = (T + sqrt(T^2 - 4)) / 2`, the root of `t + 1/t = T` with `t >= 1`.
#[allow(non_snake_case)]
pub fn t_from_T(T: f64) -> Result<f64> {
    if !(T >= 2.0) || !T.is_finite() {
        return Err(Error::Domain {
            name: "T",
            value: T,
            reason: "must be at least 2",
        });
    }
    Ok(0.5 * (T + ((T - 2.0) * (T + 2.0)).sqrt()))
}

/// Same root, from `T - 2 = s + u` without forming `T - 2` by subtraction.
pub(crate) fn t_from_offset(s: f64, u: f64) -> f64 {
    let big_t = s + 2.0 + u;
    0.5 * (big_t + ((s + u) * (big_t + 2.0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Absolute tolerance on `T`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOL_T,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// A solution `(s, T)` of Riley's equation with `t > 1` and derived scalars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepSolution {
    pub n: i64,
    pub s: f64,
    /// `T - s - 2`
    pub offset: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub t: f64,
    pub trace_w: f64,
    pub theta: f64,
    /// `Phi_n(T)` at the returned point.
    pub residual: f64,
    pub iterations: usize,
    /// Final bisection interval in `T`; absent for the closed-form case.
    pub bracket: Option<(f64, f64)>,
}

impl RepSolution {
    fn from_offset(n: i64, s: f64, u: f64, iterations: usize, bracket: Option<(f64, f64)>) -> Self {
        let trace_w = 2.0 - s * u;
        RepSolution {
            n,
            s,
            offset: u,
            big_t: s + 2.0 + u,
            t: t_from_offset(s, u),
            trace_w,
            theta: (0.5 * trace_w).clamp(-1.0, 1.0).acos(),
            residual: phi_at_offset(n, s, u),
            iterations,
            bracket,
        }
    }

    /// `sqrt(t)`, the (1,1)-entry of the meridian image.
    pub fn meridian_entry(&self) -> f64 {
        self.t.sqrt()
    }
}

pub fn solve(n: i64, s: f64, tol: f64) -> Result<RepSolution> {
    solve_with(
        n,
        s,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_with(n: i64, s: f64, opts: &SolveOptions) -> Result<RepSolution> {
    check_twist(n)?;
    check_s(s)?;
    if !(opts.tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: opts.tol,
            reason: "must be positive",
        });
    }
    if n == 1 {
        return Ok(RepSolution::from_offset(1, s, 1.0 / (s + 1.0), 0, None));
    }
    let br = bracket(n, s)?;
    let (mut lo, mut hi) = (br.offset_lo, br.offset_hi);
    let mut iterations = 0;
    while hi - lo >= opts.tol {
        let mid = lo + 0.5 * (hi - lo);
        // interval no longer splittable in binary64
        if mid <= lo || mid >= hi {
            break;
        }
        if iterations == opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                width: hi - lo,
            });
        }
        iterations += 1;
        let sign = sign_of(phi_at_offset(n, s, mid));
        if sign == 0 {
            lo = mid;
            hi = mid;
        } else if sign == br.sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo + 0.5 * (hi - lo);
    Ok(RepSolution::from_offset(
        n,
        s,
        u,
        iterations,
        Some((s + 2.0 + lo, s + 2.0 + hi)),
    ))
}

/// Every sign change of `Phi_n` on a uniform grid over the whole band, each
/// refined by bisection. Returns the `T` values in increasing order.
pub fn all_roots(n: i64, s: f64, samples: usize, tol: f64) -> Result<Vec<f64>> {
    check_twist(n)?;
    check_s(s)?;
    let samples = samples.max(2);
    let width = 4.0 / s;
    let grid: Vec<f64> = (0..samples).map(|i| width * i as f64 / (samples - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&u| phi_at_offset(n, s, u)).collect();
    let mut roots = Vec::new();
    for i in 0..samples - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            roots.push(s + 2.0 + grid[i]);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let sign_lo = sign_of(fa);
        while hi - lo >= tol {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if sign_of(phi_at_offset(n, s, mid)) == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(s + 2.0 + lo + 0.5 * (hi - lo));
    }
    if values[samples - 1] == 0.0 {
        roots.push(s + 2.0 + width);
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn tau_examples() {
        assert!(close(tau_num(2, 1.5).unwrap(), 1.5, 1e-15));
        assert!(close(tau_num(3, 1.5).unwrap(), 1.25, 1e-14));
        assert_eq!(tau_num(5, 2.0).unwrap(), 5.0);
        assert_eq!(tau_num(5, -2.0).unwrap(), 5.0);
        assert_eq!(tau_num(4, -2.0).unwrap(), -4.0);
        assert_eq!(tau_num(-4, -2.0).unwrap(), 4.0);
        assert_eq!(tau_num(0, 0.3).unwrap(), 0.0);
        assert!(matches!(tau_num(2, 2.1), Err(Error::TraceOutOfRange { .. })));
        assert!(tau_num(2, f64::NAN).is_err());
    }

    #[test]
    fn tau_matches_recursion() {
        for &tr in &[-1.99, -1.0, -0.3, 0.0, 0.7, 1.5, 1.999] {
            let (mut prev, mut cur) = (0.0, 1.0);
            for m in 1..40 {
                assert!(close(tau_num(m, tr).unwrap(), cur, 1e-10), "m={m} tr={tr}");
                assert!(close(tau_num(-m, tr).unwrap(), -cur, 1e-10));
                let next = tr * cur - prev;
                prev = cur;
                cur = next;
            }
        }
    }

    #[test]
    fn chebyshev_special_values() {
        for m in 1..=12i64 {
            let tr = 2.0 * (PI / (2 * m + 1) as f64).cos();
            let (a, b) = (tau_num(m, tr).unwrap(), tau_num(m + 1, tr).unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs() && a > 0.0, "m={m}");
        }
        for m in 2..=12i64 {
            let tr = 2.0 * (3.0 * PI / (2 * m + 1) as f64).cos();
            let (a, b) = (tau_num(m, tr).unwrap(), tau_num(m + 1, tr).unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs() && a < 0.0, "m={m}");
        }
    }

    #[test]
    fn phi_examples() {
        assert!((phi_num(-2, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((phi_num(-2, 1.0, 5.0).unwrap() + 1.0).abs() < 1e-12);
        assert!(phi_num(1, 1.0, 3.5).unwrap().abs() < 1e-12);
        assert!(matches!(phi_num(2, 1.0, 2.5), Err(Error::OutsideBand { .. })));
        assert!(matches!(phi_num(2, 1.0, 7.5), Err(Error::OutsideBand { .. })));
        assert!(phi_num(2, 1.0, 7.0).is_ok());
        assert!(phi_num(2, 0.0, 3.0).is_err());
    }

    #[test]
    fn bracket_examples() {
        let b = bracket(2, 1.0).unwrap();
        assert!((b.lo - 3.381_966_011_250_105).abs() < 1e-12);
        assert!((b.hi - 5.618_033_988_749_895).abs() < 1e-12);
        assert_eq!(b.sign_lo * b.sign_hi, -1);

        let b = bracket(-2, 2.0).unwrap();
        assert_eq!((b.lo, b.hi), (4.5, 5.0));

        let b = bracket(-3, 1.0).unwrap();
        assert!((b.lo - 3.381_966_011_250_105).abs() < 1e-12);
        assert!((b.hi - 5.618_033_988_749_895).abs() < 1e-12);

        assert!(matches!(bracket(1, 1.0), Err(Error::ClosedFormAvailable)));
        assert!(matches!(bracket(0, 1.0), Err(Error::InvalidTwist { .. })));
        assert!(matches!(bracket(-1, 1.0), Err(Error::InvalidTwist { .. })));
    }

    #[test]
    fn bracket_stays_inside_band() {
        for n in [-9i64, -4, -3, -2, 2, 3, 8] {
            let (c, c2) = bracket_constants(n).unwrap();
            assert!(0.0 < c && c < c2 && c2 < 4.0, "n={n}");
        }
    }

    #[test]
    fn solve_examples() {
        let sol = solve(1, 1.0, DEFAULT_TOL_T).unwrap();
        assert_eq!(sol.big_t, 3.5);
        assert!((sol.t - 3.186_140_661_634_507).abs() < 1e-14);
        assert_eq!(sol.iterations, 0);

        let sol = solve(2, 1.0, DEFAULT_TOL_T).unwrap();
        assert!((sol.big_t - (17.0 + 17f64.sqrt()) / 4.0).abs() < 1e-12);

        let sol = solve(-2, 1.0, DEFAULT_TOL_T).unwrap();
        assert!((sol.big_t - (7.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn solution_invariants_and_iteration_bound() {
        for n in [-6i64, -3, -2, 2, 3, 6] {
            for s in [0.01, 0.1, 1.0, 7.0, 100.0, 1e4] {
                let sol = solve(n, s, DEFAULT_TOL_T).unwrap();
                assert!(sol.offset > 0.0 && sol.offset < 4.0 / s);
                assert!(sol.t > 1.0);
                assert!(((sol.t + 1.0 / sol.t) - sol.big_t).abs() <= 1e-12 * sol.big_t);
                assert!(sol.trace_w > -2.0 && sol.trace_w < 2.0);
                assert!(sol.theta > 0.0 && sol.theta < PI);
                let br = bracket(n, s).unwrap();
                let bound = ((br.offset_hi - br.offset_lo) / DEFAULT_TOL_T).log2().ceil() as usize + 2;
                assert!(sol.iterations <= bound, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn solve_survives_float_resolution_limit() {
        // T spacing near 1e6 is ~1e-10, far above the default tolerance
        let sol = solve(3, 1e6, DEFAULT_TOL_T).unwrap();
        assert!(sol.offset > 0.0 && sol.offset < 4e-6);
        let sol = solve(-4, 1e-6, DEFAULT_TOL_T).unwrap();
        assert!(sol.big_t > 1e5);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let opts = SolveOptions {
            tol: 1e-13,
            max_iter: 5,
        };
        assert!(matches!(
            solve_with(2, 1.0, &opts),
            Err(Error::NonConvergence { iterations: 5, .. })
        ));
    }

    #[test]
    fn t_from_t_examples() {
        assert_eq!(t_from_T(2.0).unwrap(), 1.0);
        assert_eq!(t_from_T(2.5).unwrap(), 2.0);
        assert!((t_from_T(3.5).unwrap() - 3.186_140_661_634_507).abs() < 1e-14);
        assert!(t_from_T(1.9).is_err());
    }

    #[test]
    fn exhaustive_scan_finds_the_second_root() {
        let roots = all_roots(2, 1.0, 2000, 1e-13).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - (17.0 - 17f64.sqrt()) / 4.0).abs() < 1e-10);
        assert!((roots[1] - (17.0 + 17f64.sqrt()) / 4.0).abs() < 1e-10);
    }
}
