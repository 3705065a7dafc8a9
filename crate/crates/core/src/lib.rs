//! SL2(R) representations of twist knot groups from Riley's equation,
//! the slope map of their peripheral holonomy, and lifts to the universal
//! cover of SL2(R) that certify non-abelian representations of the
//! surgered manifold groups for slopes in `(0, 4)`.
//!
//! Module map:
//! - [`poly`]: exact `tau_m` and Riley polynomials over big integers.
//! - [`riley`]: floating-point Riley function, certified brackets, bisection.
//! - [`rep`]: generator matrices, `W^n`, the relation and longitude checks.
//! - [`slope`]: the slope map `g`, scans and inversion.
//! - [`cover`]: the `(gamma, omega)` model of the universal cover and certificates.
//! - [`verify`]: grid-wide invariant report.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cover;
pub mod error;
pub mod exec;
pub mod poly;
pub mod rep;
pub mod riley;
pub mod slope;
pub mod verify;
pub mod word;

pub use cover::{
    certificate, certificate_batch, certificate_with, chart, cover_mul, cover_pow, lift_generators, lifted_longitude,
    to_su11, unchart, CertOptions, CoverElem, GeneratorLift, SU11Elem, SurgeryCertificate,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use poly::{eval_exact, riley_poly, tau_poly, BivarPoly, TauTable};
pub use rep::{gen_matrices, longitude, relation_residual, w_power, HolonomyData, Mat2};
pub use riley::{bracket, phi_num, solve, solve_with, t_from_T, tau_num, Bracket, RepSolution, SolveOptions};
pub use slope::{g_eval, invert, invert_with, scan, scan_with, Inversion, InvertOptions, SlopeSample};
pub use word::{word_eval, Group, Letter, Word};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
