//! The slope map `g(s) = -ln B_s / ln A_s`, log-spaced scans of it, and its
//! inversion for a target rational slope in `(0, 4)`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{check_twist, Error, Result};
use crate::exec::Exec;
use crate::rep::{log_longitude_entry, longitude_entry};
use crate::riley::{solve_with, RepSolution, SolveOptions};

pub const DEFAULT_TOL_G: f64 = 1e-9;
pub const DEFAULT_GRID_MIN: f64 = 1e-6;
pub const DEFAULT_GRID_MAX: f64 = 1e8;
pub const DEFAULT_GRID_POINTS: usize = 400;

/// CSV header for scan tables.
pub const CSV_HEADER: &str = "s,T,t,B,g";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeSample {
    pub s: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub t: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub g: f64,
}

impl SlopeSample {
    fn from_solution(sol: &RepSolution) -> Self {
        SlopeSample {
            s: sol.s,
            big_t: sol.big_t,
            t: sol.t,
            b: longitude_entry(sol),
            g: -2.0 * log_longitude_entry(sol) / sol.t.ln(),
        }
    }

    /// `[s, T, t, B, g]`, matching `CSV_HEADER`.
    pub fn values(&self) -> [f64; 5] {
        [self.s, self.big_t, self.t, self.b, self.g]
    }
}

pub fn g_eval(n: i64, s: f64) -> Result<SlopeSample> {
    g_eval_with(n, s, &SolveOptions::default())
}

pub fn g_eval_with(n: i64, s: f64, opts: &SolveOptions) -> Result<SlopeSample> {
    let sol = solve_with(n, s, opts)?;
    Ok(SlopeSample::from_solution(&sol))
}

/// `samples` log-spaced points from `s_min` to `s_max` inclusive.
pub fn log_grid(s_min: f64, s_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(s_min > 0.0 && s_min < s_max && s_max.is_finite()) {
        return Err(Error::Domain {
            name: "s_min",
            value: s_min,
            reason: "need 0 < s_min < s_max < inf",
        });
    }
    if samples < 2 {
        return Err(Error::Domain {
            name: "samples",
            value: samples as f64,
            reason: "need at least 2 samples",
        });
    }
    let (a, b) = (s_min.ln(), s_max.ln());
    let last = samples - 1;
    Ok((0..samples)
        .map(|i| match i {
            0 => s_min,
            i if i == last => s_max,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect())
}

pub fn scan(n: i64, s_min: f64, s_max: f64, samples: usize) -> Result<Vec<SlopeSample>> {
    scan_with(n, s_min, s_max, samples, &SolveOptions::default(), Exec::default())
}

pub fn scan_with(
    n: i64,
    s_min: f64,
    s_max: f64,
    samples: usize,
    opts: &SolveOptions,
    exec: Exec,
) -> Result<Vec<SlopeSample>> {
    check_twist(n)?;
    let grid = log_grid(s_min, s_max, samples)?;
    exec.map(&grid, |&s| g_eval_with(n, s, opts)).into_iter().collect()
}

/// Checks that `p/q` is reduced with `q > 0` and lies in `(0, 4)`.
pub fn check_slope(p: i64, q: i64) -> Result<f64> {
    if q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::MalformedSlope { p, q });
    }
    if p <= 0 || p >= 4 * q {
        return Err(Error::SlopeOutOfRange { p, q });
    }
    Ok(p as f64 / q as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertOptions {
    pub tol_g: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub max_iter: usize,
    pub solve: SolveOptions,
    pub exec: Exec,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            tol_g: DEFAULT_TOL_G,
            grid_min: DEFAULT_GRID_MIN,
            grid_max: DEFAULT_GRID_MAX,
            grid_points: DEFAULT_GRID_POINTS,
            max_iter: 200,
            solve: SolveOptions::default(),
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inversion {
    pub sample: SlopeSample,
    /// Every grid interval `[s_i, s_{i+1}]` on which `g - r` changes sign.
    pub brackets: Vec<(f64, f64)>,
    pub iterations: usize,
}

pub fn invert(n: i64, p: i64, q: i64, tol: f64) -> Result<SlopeSample> {
    let opts = InvertOptions {
        tol_g: tol,
        ..InvertOptions::default()
    };
    Ok(invert_with(n, p, q, &opts)?.sample)
}

/// Finds `s*` with `|g(s*) - p/q| <= tol_g`: scan the log grid for the leftmost
/// sign change of `g - r`, then bisect in `ln s`.
pub fn invert_with(n: i64, p: i64, q: i64, opts: &InvertOptions) -> Result<Inversion> {
    check_twist(n)?;
    let r = check_slope(p, q)?;
    let table = scan_with(
        n,
        opts.grid_min,
        opts.grid_max,
        opts.grid_points,
        &opts.solve,
        opts.exec,
    )?;

    let mut brackets = Vec::new();
    for pair in table.windows(2) {
        let (da, db) = (pair[0].g - r, pair[1].g - r);
        if da == 0.0 {
            brackets.push((pair[0].s, pair[0].s));
        } else if da * db < 0.0 {
            brackets.push((pair[0].s, pair[1].s));
        }
    }
    let Some(&(s_lo, s_hi)) = brackets.first() else {
        return Err(Error::NoBracketFound { r, table });
    };
    if s_lo == s_hi {
        let sample = *table.iter().find(|x| x.s == s_lo).expect("bracket from table");
        return Ok(Inversion {
            sample,
            brackets,
            iterations: 0,
        });
    }

    let (mut lo, mut hi) = (s_lo.ln(), s_hi.ln());
    let sample_lo = g_eval_with(n, s_lo, &opts.solve)?;
    let sample_hi = g_eval_with(n, s_hi, &opts.solve)?;
    let below_at_lo = sample_lo.g < r;
    for iterations in 1..=opts.max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let sample = g_eval_with(n, mid.exp(), &opts.solve)?;
        if (sample.g - r).abs() <= opts.tol_g {
            return Ok(Inversion {
                sample,
                brackets,
                iterations,
            });
        }
        if (sample.g < r) == below_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::SlopeDiscontinuity {
        r,
        lo: lo.exp(),
        hi: hi.exp(),
        g_lo: sample_lo.g,
        g_hi: sample_hi.g,
    })
}

/// Empirical range of `g` over a scan table.
pub fn g_range(table: &[SlopeSample]) -> Option<(f64, f64)> {
    table.iter().map(|x| x.g).fold(None, |acc, g| match acc {
        None => Some((g, g)),
        Some((lo, hi)) => Some((lo.min(g), hi.max(g))),
    })
}
