//! Arithmetic in the universal cover of `SL2(R)`.
//!
//! `SL2(R)` is conjugated into `SU(1,1)`, whose elements `[[a, b], [conj b, conj a]]`
//! are charted by `gamma = b / a` (a point of the open unit disk) and
//! `omega = arg a`. The cover keeps the same chart with `omega` ranging over
//! the whole real line; deck transformations are `(0, 2 m pi)`.
//!
//! The surgery certificate lifts the representation at a solution of
//! Riley's equation, normalizes the lift so the meridian sits at `omega = 0`,
//! and checks that `x^p L^q` lifts to the identity `(0, 0)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rep::{longitude, solution_gen_matrices, Mat2};
use crate::riley::{solve_with, RepSolution, SolveOptions};
use crate::slope::{invert_with, InvertOptions};
use crate::word::{word_eval, Group, Word};

/// Acceptance tolerance on the final `|gamma|` and `|omega|` of a certificate.
pub const DEFAULT_TOL_CERT: f64 = 1e-6;
/// Largest `|gamma|` tolerated on a lifted relator, relative to `1 + |rho(y)|^2`.
pub const RELATOR_TOL: f64 = 1e-6;
/// Largest `|omega|` tolerated on the lifted longitude.
pub const LONGITUDE_OMEGA_TOL: f64 = 1e-6;
const DET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SU11Elem {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl SU11Elem {
    pub const IDENTITY: SU11Elem = SU11Elem {
        alpha: Complex64::new(1.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    };

    /// `|alpha|^2 - |beta|^2 - 1`.
    pub fn norm_defect(&self) -> f64 {
        self.alpha.norm_sqr() - self.beta.norm_sqr() - 1.0
    }

    pub fn mul(&self, rhs: &SU11Elem) -> SU11Elem {
        SU11Elem {
            alpha: self.alpha * rhs.alpha + self.beta * rhs.beta.conj(),
            beta: self.alpha * rhs.beta + self.beta * rhs.alpha.conj(),
        }
    }

    /// Back to `SL2(R)`.
    pub fn to_sl2(&self) -> Mat2 {
        let (a, b) = (self.alpha, self.beta);
        Mat2::new(a.re + b.re, a.im - b.im, -a.im - b.im, a.re - b.re)
    }

    pub fn max_abs_diff(&self, other: &SU11Elem) -> f64 {
        (self.alpha - other.alpha).norm().max((self.beta - other.beta).norm())
    }
}

/// Conjugation `A -> J A J^-1` with `J = [[1, -i], [1, i]]`.
pub fn to_su11(m: &Mat2) -> Result<SU11Elem> {
    let det = m.det();
    if !((det - 1.0).abs() <= DET_TOL * (1.0 + m.norm() * m.norm())) {
        return Err(Error::DeterminantViolation { det });
    }
    Ok(SU11Elem {
        alpha: Complex64::new(0.5 * (m.m11 + m.m22), 0.5 * (m.m12 - m.m21)),
        beta: Complex64::new(0.5 * (m.m11 - m.m22), -0.5 * (m.m12 + m.m21)),
    })
}

/// Element `(gamma, omega)` of the universal cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverElem {
    pub gamma: Complex64,
    pub omega: f64,
}

impl CoverElem {
    pub const IDENTITY: CoverElem = CoverElem {
        gamma: Complex64::new(0.0, 0.0),
        omega: 0.0,
    };

    pub fn new(gamma: Complex64, omega: f64) -> Self {
        CoverElem { gamma, omega }
    }

    pub fn real(gamma: f64, omega: f64) -> Self {
        CoverElem::new(Complex64::new(gamma, 0.0), omega)
    }

    /// Deck transformation `(0, 2 m pi)`.
    pub fn deck(m: i64) -> Self {
        CoverElem::real(0.0, TAU * m as f64)
    }

    pub fn inverse(&self) -> CoverElem {
        let rot = Complex64::from_polar(1.0, 2.0 * self.omega);
        CoverElem::new(-self.gamma * rot, -self.omega)
    }

    /// `max(|gamma|, |omega|)`, the distance to the identity in the chart.
    pub fn dist_to_identity(&self) -> f64 {
        self.gamma.norm().max(self.omega.abs())
    }
}

/// Principal chart: `omega` in `(-pi, pi]`.
pub fn chart(u: &SU11Elem) -> CoverElem {
    let w = u.alpha.arg();
    CoverElem::new(u.beta / u.alpha, if w <= -PI { w + TAU } else { w })
}

/// `alpha = e^{i omega} / sqrt(1 - |gamma|^2)`, `beta = gamma alpha`.
pub fn unchart(e: &CoverElem) -> SU11Elem {
    let alpha = Complex64::from_polar(1.0 / (1.0 - e.gamma.norm_sqr()).sqrt(), e.omega);
    SU11Elem {
        alpha,
        beta: e.gamma * alpha,
    }
}

/// Group law of the cover; `omega` is never reduced.
pub fn cover_mul(a: &CoverElem, b: &CoverElem) -> CoverElem {
    let rot = Complex64::from_polar(1.0, -2.0 * b.omega);
    let denom = 1.0 + a.gamma * b.gamma.conj() * rot;
    // 1 + z with |z| < 1, so the principal log of denom / conj(denom) is 2i arg(denom)
    debug_assert!(denom.re > 0.0, "principal branch violated: {denom}");
    CoverElem {
        gamma: (b.gamma + a.gamma * rot) / denom,
        omega: a.omega + b.omega + denom.arg(),
    }
}

pub fn cover_pow(a: &CoverElem, k: i64) -> CoverElem {
    let base = if k < 0 { a.inverse() } else { *a };
    (0..k.unsigned_abs()).fold(CoverElem::IDENTITY, |acc, _| cover_mul(&acc, &base))
}

impl Group for CoverElem {
    fn identity() -> Self {
        CoverElem::IDENTITY
    }
    fn compose(&self, rhs: &Self) -> Self {
        cover_mul(self, rhs)
    }
    fn inverse(&self) -> Self {
        CoverElem::inverse(self)
    }
}

/// Lifted meridian images and the relator check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorLift {
    pub x: CoverElem,
    pub y: CoverElem,
    /// Central shift `(0, 2 k pi)` applied to the principal lift of `y`.
    pub deck_shift: i64,
    /// Distance of the lifted relator from `(0, 0)`.
    pub relator_residual: f64,
    /// `1 + |rho(y)|^2`; chart errors of words in `x, y` grow with it.
    pub scale: f64,
}

pub fn lift_generators(n: i64, sol: &RepSolution) -> Result<GeneratorLift> {
    let (xm, ym) = solution_gen_matrices(sol)?;
    let x = chart(&to_su11(&xm)?);
    let y0 = chart(&to_su11(&ym)?);
    let relator = Word::relator(n);

    let scale = 1.0 + ym.norm() * ym.norm();
    let r0 = word_eval(&relator, &x, &y0);
    if r0.gamma.norm() > RELATOR_TOL * scale {
        return Err(Error::RelatorNotCentral {
            gamma_abs: r0.gamma.norm(),
        });
    }
    let k = (r0.omega / TAU).round() as i64;
    let y = cover_mul(&y0, &CoverElem::deck(k));
    let r = word_eval(&relator, &x, &y);
    Ok(GeneratorLift {
        x,
        y,
        deck_shift: k,
        relator_residual: r.dist_to_identity(),
        scale,
    })
}

/// Lift of the longitude `w_*^n w^n`, which must land on the real axis at `omega = 0`.
pub fn lifted_longitude(n: i64, x: &CoverElem, y: &CoverElem) -> Result<CoverElem> {
    let l = word_eval(&Word::longitude(n), x, y);
    if l.omega.abs() > LONGITUDE_OMEGA_TOL {
        return Err(Error::LongitudeOmegaNonzero { omega: l.omega });
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    #[serde(rename = "T")]
    pub tol_t: f64,
    pub g: f64,
    pub cert: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurgeryCertificate {
    pub version: String,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub s_star: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub t: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub g: f64,
    pub gamma_x: f64,
    #[serde(rename = "gamma_L")]
    pub gamma_l: f64,
    pub deck_shift: i64,
    pub relator_residual: f64,
    pub longitude_gamma_error: f64,
    pub longitude_omega: f64,
    pub final_gamma_abs: f64,
    pub final_omega: f64,
    pub projection_residual: f64,
    pub tolerances: Tolerances,
}

impl SurgeryCertificate {
    pub fn holds(&self) -> bool {
        self.final_gamma_abs < self.tolerances.cert && self.final_omega.abs() < self.tolerances.cert
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CertOptions {
    pub invert: InvertOptions,
    pub tol_cert: Option<f64>,
}

pub fn certificate(n: i64, p: i64, q: i64) -> Result<SurgeryCertificate> {
    certificate_with(n, p, q, &CertOptions::default())
}

/// Certificates for many `(n, p, q)` triples; results follow input order.
pub fn certificate_batch(cases: &[(i64, i64, i64)], opts: &CertOptions, exec: Exec) -> Vec<Result<SurgeryCertificate>> {
    exec.map(cases, |&(n, p, q)| certificate_with(n, p, q, opts))
}

pub fn certificate_with(n: i64, p: i64, q: i64, opts: &CertOptions) -> Result<SurgeryCertificate> {
    let tol_cert = opts.tol_cert.unwrap_or(DEFAULT_TOL_CERT);
    let inv = invert_with(n, p, q, &opts.invert)?;
    let solve_opts: SolveOptions = opts.invert.solve;
    let sol = solve_with(n, inv.sample.s, &solve_opts)?;
    let (_, hol) = longitude(n, &sol)?;

    let lift = lift_generators(n, &sol)?;
    let l = lifted_longitude(n, &lift.x, &lift.y)?;
    let gamma_x = (sol.t - 1.0) / (sol.t + 1.0);
    let b2 = hol.b * hol.b;
    let gamma_l = (b2 - 1.0) / (b2 + 1.0);

    let fin = cover_mul(&cover_pow(&lift.x, p), &cover_pow(&l, q));
    let projection = unchart(&fin).to_sl2();

    let cert = SurgeryCertificate {
        version: env!("CARGO_PKG_VERSION").to_string(),
        n,
        p,
        q,
        s_star: sol.s,
        big_t: sol.big_t,
        t: sol.t,
        b: hol.b,
        g: inv.sample.g,
        gamma_x,
        gamma_l,
        deck_shift: lift.deck_shift,
        relator_residual: lift.relator_residual,
        longitude_gamma_error: (l.gamma - Complex64::new(gamma_l, 0.0)).norm(),
        longitude_omega: l.omega,
        final_gamma_abs: fin.gamma.norm(),
        final_omega: fin.omega,
        projection_residual: projection.max_abs_diff(&Mat2::IDENTITY),
        tolerances: Tolerances {
            tol_t: solve_opts.tol,
            g: opts.invert.tol_g,
            cert: tol_cert,
        },
    };
    if cert.holds() {
        Ok(cert)
    } else {
        Err(Error::CertificateFailed(Box::new(cert)))
    }
}

/// Reduces `omega` to `(-pi, pi]`, i.e. projects to `SU(1,1)` and re-charts.
pub fn principal(e: &CoverElem) -> CoverElem {
    let mut w = e.omega.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    CoverElem::new(e.gamma, w)
}
