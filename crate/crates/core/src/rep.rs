//! The representation `rho_s` into `SL2(R)`: generator matrices, powers of
//! `W = rho_s(w)` through the tau recursion, the defining relation, and the
//! diagonal longitude image with its holonomy scalars.

use std::ops::Mul;

use serde::Serialize;

use crate::error::{check_twist, Error, Result};
use crate::riley::{tau_num, RepSolution};
use crate::word::Group;

/// Relative off-diagonal size above which a longitude image is rejected.
pub const OFFDIAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, d)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    /// Max-abs entry norm.
    pub fn norm(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        Mat2::new(
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        )
        .norm()
    }

    /// Max-abs difference scaled by `1 + max(|self|, |other|)`.
    pub fn rel_diff(&self, other: &Mat2) -> f64 {
        self.max_abs_diff(other) / (1.0 + self.norm().max(other.norm()))
    }

    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        Mat2::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, b: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 * b.m11 + self.m12 * b.m21,
            self.m11 * b.m12 + self.m12 * b.m22,
            self.m21 * b.m11 + self.m22 * b.m21,
            self.m21 * b.m12 + self.m22 * b.m22,
        )
    }
}

impl Group for Mat2 {
    fn identity() -> Self {
        Mat2::IDENTITY
    }
    fn compose(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn inverse(&self) -> Self {
        Mat2::inverse(self)
    }
}

fn check_params(s: f64, t: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain {
            name: "s",
            value: s,
            reason: "must be a positive finite real",
        });
    }
    if !(t - 1.0 > 1e-12 * t) || !t.is_finite() {
        return Err(Error::DegenerateMeridian { t });
    }
    Ok(())
}

/// `T - s - 2` for the trace `T = t + 1/t`.
fn offset_of(s: f64, t: f64) -> f64 {
    (t - 1.0) * (t - 1.0) / t - s
}

/// Images of the meridians `x` and `y`.
pub fn gen_matrices(s: f64, t: f64) -> Result<(Mat2, Mat2)> {
    check_params(s, t)?;
    Ok(gen_at(s, t, offset_of(s, t)))
}

/// `gen_matrices` at a solution, using its offset to avoid cancellation at large `s`.
pub fn solution_gen_matrices(sol: &RepSolution) -> Result<(Mat2, Mat2)> {
    check_params(sol.s, sol.t)?;
    Ok(gen_at(sol.s, sol.t, sol.offset))
}

fn gen_at(s: f64, t: f64, u: f64) -> (Mat2, Mat2) {
    let rt = t.sqrt();
    let k = rt - 1.0 / rt;
    let x = Mat2::diag(rt, 1.0 / rt);
    let y = Mat2::new((1.0 + u - 1.0 / t) / k, -u / (s + u), -s, (s + 1.0 - 1.0 / t) / k);
    (x, y)
}

/// `W = rho_s(x y^-1 x^-1 y)` in closed form.
pub fn w_matrix(s: f64, t: f64) -> Result<Mat2> {
    check_params(s, t)?;
    Ok(w_at(s, t, offset_of(s, t)))
}

pub fn solution_w_matrix(sol: &RepSolution) -> Result<Mat2> {
    check_params(sol.s, sol.t)?;
    Ok(w_at(sol.s, sol.t, sol.offset))
}

fn w_at(s: f64, t: f64, u: f64) -> Mat2 {
    let rt = t.sqrt();
    let su = s * u;
    Mat2::new(
        1.0 - su * t / (t - 1.0),
        (t - 1.0 + s * t) / rt * (u / (s + u)),
        -s * (1.0 + u - 1.0 / t) / rt,
        1.0 + su / (t - 1.0),
    )
}

/// `W^n` from the entries of `W` and `tau_{n-1}, tau_n, tau_{n+1}` at `trace`.
fn power_from_taus(n: i64, w: &Mat2, trace: f64) -> Result<Mat2> {
    let trace = if trace.abs() <= 2.0 + 1e-12 {
        trace.clamp(-2.0, 2.0)
    } else {
        trace
    };
    let (prev, cur, next) = (tau_num(n - 1, trace)?, tau_num(n, trace)?, tau_num(n + 1, trace)?);
    Ok(Mat2::new(
        w.m11 * cur - prev,
        w.m12 * cur,
        w.m21 * cur,
        next - w.m11 * cur,
    ))
}

/// `W^n` for any integer `n`; needs `|trace W| <= 2`.
pub fn w_power(n: i64, s: f64, t: f64) -> Result<Mat2> {
    let w = w_matrix(s, t)?;
    power_from_taus(n, &w, w.trace())
}

/// `s (sqrt t - 1/sqrt t)^2 / ((sqrt t - 1/sqrt t)^2 - s)`.
pub fn sigma(s: f64, t: f64) -> Result<f64> {
    check_params(s, t)?;
    let u = offset_of(s, t);
    Ok(s * (s + u) / u)
}

/// Swaps the off-diagonal entries of `m` through `sigma`; maps `rho(w^n)` to `rho(w_*^n)`.
pub fn sigma_transform(m: &Mat2, sigma: f64) -> Mat2 {
    Mat2::new(m.m11, m.m21 / sigma, m.m12 * sigma, m.m22)
}

/// `rho_s(w_*^n)` from `W^n` and `sigma`.
pub fn w_star_power(n: i64, s: f64, t: f64) -> Result<Mat2> {
    Ok(sigma_transform(&w_power(n, s, t)?, sigma(s, t)?))
}

/// `max |rho(w^n x) - rho(y w^n)|` entrywise.
pub fn relation_residual(n: i64, s: f64, t: f64) -> Result<f64> {
    let (x, y) = gen_matrices(s, t)?;
    let wn = w_power(n, s, t)?;
    Ok((wn * x).max_abs_diff(&(y * wn)))
}

/// `B_s = (t - s - 1) / ((1 + s) t - 1)` with `t - s - 1` taken as `1 + u - 1/t`.
pub fn longitude_entry(sol: &RepSolution) -> f64 {
    (1.0 + sol.offset - 1.0 / sol.t) / ((1.0 + sol.s) * sol.t - 1.0)
}

/// `ln B_s` without cancellation at either end of the `s` range.
pub fn log_longitude_entry(sol: &RepSolution) -> f64 {
    let t = sol.t;
    // B = 1 - x
    let x = sol.s * (1.0 + t) / ((1.0 + sol.s) * t - 1.0);
    if x < 0.5 {
        (-x).ln_1p()
    } else {
        longitude_entry(sol).ln()
    }
}

/// Holonomy of the peripheral subgroup at a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolonomyData {
    /// `sqrt t`, the (1,1)-entry of the meridian image.
    pub a: f64,
    /// Closed-form (1,1)-entry of the longitude image.
    pub b: f64,
    /// (1,1)-entry read off the longitude matrix.
    pub b_matrix: f64,
    pub sigma: f64,
    pub offdiag_residual: f64,
    /// `u11 u12 sigma + u21 u22`, which vanishes on solutions.
    pub peripheral_identity: f64,
}

/// Longitude image `rho(w_*^n) rho(w^n)` at a solution of Riley's equation.
pub fn longitude(n: i64, sol: &RepSolution) -> Result<(Mat2, HolonomyData)> {
    check_twist(n)?;
    let (s, t) = (sol.s, sol.t);
    let w = solution_w_matrix(sol)?;
    let wn = power_from_taus(n, &w, 2.0 - s * sol.offset)?;
    let sig = s * (s + sol.offset) / sol.offset;
    let ws = sigma_transform(&wn, sig);
    let l = ws * wn;

    let offdiag = l.m12.abs().max(l.m21.abs());
    let norm = l.norm();
    if offdiag > OFFDIAG_TOL * norm {
        return Err(Error::OffDiagonalTooLarge {
            residual: offdiag,
            norm,
        });
    }
    let hol = HolonomyData {
        a: t.sqrt(),
        b: longitude_entry(sol),
        b_matrix: l.m11,
        sigma: sig,
        offdiag_residual: offdiag,
        peripheral_identity: wn.m11 * wn.m12 * sig + wn.m21 * wn.m22,
    };
    Ok((l, hol))
}
