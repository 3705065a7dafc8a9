//! Exact bivariate polynomials in `(s, T)` with big-integer coefficients.
//!
//! This module is the ground truth for every floating-point routine in the
//! crate: the Chebyshev-type sequence `tau_m` and the Riley polynomial
//! `phi_n(s, T) = tau_{n+1} - (T - 1 - s) tau_n` are built here with exact
//! integer arithmetic and evaluated over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_twist, Result};

/// Exponent pair. Ordered by T-degree first, then s-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t_deg: u32,
    pub s_deg: u32,
}

impl Monomial {
    pub fn new(s_deg: u32, t_deg: u32) -> Self {
        Monomial { t_deg, s_deg }
    }
}

/// Sparse polynomial in `s` and `T`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Monomial::new(0, 0), c.into());
        p
    }

    pub fn one() -> Self {
        BivarPoly::constant(1)
    }

    /// The monomial `c * s^s_deg * T^t_deg`.
    pub fn term<C: Into<BigInt>>(c: C, s_deg: u32, t_deg: u32) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Monomial::new(s_deg, t_deg), c.into());
        p
    }

    pub fn s() -> Self {
        BivarPoly::term(1, 1, 0)
    }

    pub fn t() -> Self {
        BivarPoly::term(1, 0, 1)
    }

    /// Builds a polynomial from `(s_deg, t_deg, coeff)` triples, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = BivarPoly::zero();
        for (s_deg, t_deg, c) in terms {
            p.add_term(Monomial::new(s_deg, t_deg), c.into());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `s^s_deg T^t_deg` (zero if absent).
    pub fn coeff(&self, s_deg: u32, t_deg: u32) -> BigInt {
        self.coeffs
            .get(&Monomial::new(s_deg, t_deg))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Terms in serialization order: by T-degree, then s-degree.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    /// Degree in `T`; `None` for the zero polynomial.
    pub fn t_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.t_deg).max()
    }

    pub fn s_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.s_deg).max()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    /// Exact value at rational `(s, T)`.
    pub fn eval_exact(&self, s: &BigRational, t: &BigRational) -> BigRational {
        let (Some(max_s), Some(max_t)) = (self.s_degree(), self.t_degree()) else {
            return BigRational::zero();
        };
        let s_pows = powers(s, max_s);
        let t_pows = powers(t, max_t);
        let mut acc = BigRational::zero();
        for (m, c) in &self.coeffs {
            let term = &s_pows[m.s_deg as usize] * &t_pows[m.t_deg as usize];
            acc += term * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact value at the binary64 point `(s, T)`, each float converted without rounding.
    pub fn eval_at_f64(&self, s: f64, t: f64) -> Option<BigRational> {
        let s = BigRational::from_float(s)?;
        let t = BigRational::from_float(t)?;
        Some(self.eval_exact(&s, &t))
    }
}

fn powers(x: &BigRational, max: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BigRational::one());
    for i in 1..=max as usize {
        let next = &out[i - 1] * x;
        out.push(next);
    }
    out
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &rhs.coeffs {
                let m = Monomial::new(ma.s_deg + mb.s_deg, ma.t_deg + mb.t_deg);
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for BivarPoly {
            type Output = BivarPoly;
            fn $method(self, rhs: BivarPoly) -> BivarPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        -&self
    }
}

impl fmt::Display for BivarPoly {
    /// Highest T-degree first, e.g. `2*s^2*T^2 - 17*T + 34`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (m.s_deg == 0 && m.t_deg == 0) {
                factors.push(mag.to_string());
            }
            match m.s_deg {
                0 => {}
                1 => factors.push("s".to_string()),
                d => factors.push(format!("s^{d}")),
            }
            match m.t_deg {
                0 => {}
                1 => factors.push("T".to_string()),
                d => factors.push(format!("T^{d}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    s_deg: u32,
    #[serde(rename = "T_deg")]
    t_deg: u32,
    coeff: String,
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|(m, c)| TermRecord {
            s_deg: m.s_deg,
            t_deg: m.t_deg,
            coeff: c.to_string(),
        }))
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let mut p = BivarPoly::zero();
        for r in records {
            let c: BigInt = r
                .coeff
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad coefficient {:?}", r.coeff)))?;
            p.add_term(Monomial::new(r.s_deg, r.t_deg), c);
        }
        Ok(p)
    }
}

/// `s^2 - (T - 2) s + 2`, the trace of the image of `w`.
pub fn trace_poly() -> BivarPoly {
    BivarPoly::from_terms([(2u32, 0u32, 1i64), (1, 1, -1), (1, 0, 2), (0, 0, 2)])
}

/// Memoized table of `tau_0, ..., tau_M`.
#[derive(Debug, Clone)]
pub struct TauTable {
    trace: BivarPoly,
    values: Vec<BivarPoly>,
}

impl Default for TauTable {
    fn default() -> Self {
        TauTable::new()
    }
}

impl TauTable {
    pub fn new() -> Self {
        TauTable {
            trace: trace_poly(),
            values: vec![BivarPoly::zero(), BivarPoly::one()],
        }
    }

    fn extend_to(&mut self, m: usize) {
        while self.values.len() <= m {
            let k = self.values.len();
            let next = &(&self.trace * &self.values[k - 1]) - &self.values[k - 2];
            self.values.push(next);
        }
    }

    /// `tau_m` for any integer `m`, using `tau_{-m} = -tau_m`.
    pub fn get(&mut self, m: i64) -> BivarPoly {
        let idx = m.unsigned_abs() as usize;
        self.extend_to(idx);
        if m < 0 {
            -&self.values[idx]
        } else {
            self.values[idx].clone()
        }
    }

    pub fn riley(&mut self, n: i64) -> Result<BivarPoly> {
        check_twist(n)?;
        let next = self.get(n + 1);
        let cur = self.get(n);
        // T - 1 - s
        let shift = BivarPoly::from_terms([(0u32, 1u32, 1i64), (0, 0, -1), (1, 0, -1)]);
        Ok(&next - &(&shift * &cur))
    }
}

/// Exact `tau_m` as a polynomial in `(s, T)`.
pub fn tau_poly(m: i64) -> BivarPoly {
    TauTable::new().get(m)
}

/// Exact Riley polynomial of the `n`-twist knot.
pub fn riley_poly(n: i64) -> Result<BivarPoly> {
    TauTable::new().riley(n)
}

/// Exact evaluation at rational `(s, T)`.
pub fn eval_exact(p: &BivarPoly, s: &BigRational, t: &BigRational) -> BigRational {
    p.eval_exact(s, t)
}
