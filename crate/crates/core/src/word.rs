//! Words in the two meridian generators and their evaluation in any group.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Minimal group interface shared by `SL2(R)` matrices and the universal cover.
pub trait Group: Clone {
    fn identity() -> Self;
    fn compose(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    X,
    XInv,
    Y,
    YInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::Y => Letter::YInv,
            Letter::YInv => Letter::Y,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::XInv => 'X',
            Letter::Y => 'y',
            Letter::YInv => 'Y',
        }
    }
}

/// A word in `x, y` and their inverses; no free reduction is performed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w = x y^-1 x^-1 y`.
    pub fn w() -> Self {
        Word(vec![Letter::X, Letter::YInv, Letter::XInv, Letter::Y])
    }

    /// `w_* = y x^-1 y^-1 x`, the letters of `w` in reverse order.
    pub fn w_star() -> Self {
        Word(vec![Letter::Y, Letter::XInv, Letter::YInv, Letter::X])
    }

    pub fn x() -> Self {
        Word(vec![Letter::X])
    }

    pub fn y() -> Self {
        Word(vec![Letter::Y])
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, rhs: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    /// `k`-th power; negative `k` repeats the inverse.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// Longitude `w_*^n w^n` of the `n`-twist knot.
    pub fn longitude(n: i64) -> Self {
        Word::w_star().pow(n).concat(&Word::w().pow(n))
    }

    /// Relator `(w^n x)(y w^n)^-1`.
    pub fn relator(n: i64) -> Self {
        let wn = Word::w().pow(n);
        let lhs = wn.concat(&Word::x());
        let rhs = Word::y().concat(&wn);
        lhs.concat(&rhs.inverse())
    }

    /// Exponent sums `(in x, in y)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(a, b), l| match l {
            Letter::X => (a + 1, b),
            Letter::XInv => (a - 1, b),
            Letter::Y => (a, b + 1),
            Letter::YInv => (a, b - 1),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWordError(pub String);

impl fmt::Display for ParseWordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse word: {}", self.0)
    }
}

impl std::error::Error for ParseWordError {}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Accepts `x`, `y`, capitals for inverses, and the suffixes `^-1` or `⁻¹`.
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        let mut rest = src;
        while let Some(c) = rest.chars().next() {
            rest = &rest[c.len_utf8()..];
            let letter = match c {
                c if c.is_whitespace() => continue,
                'x' => Letter::X,
                'X' => Letter::XInv,
                'y' => Letter::Y,
                'Y' => Letter::YInv,
                other => return Err(ParseWordError(format!("unexpected {other:?} in {src:?}"))),
            };
            let letter = if let Some(r) = rest.strip_prefix("^-1") {
                rest = r;
                letter.inverse()
            } else if let Some(r) = rest.strip_prefix("⁻¹") {
                rest = r;
                letter.inverse()
            } else {
                letter
            };
            out.push(letter);
        }
        Ok(Word(out))
    }
}

/// Evaluates `word` left to right with `x`, `y` substituted.
pub fn word_eval<G: Group>(word: &Word, x: &G, y: &G) -> G {
    let (x_inv, y_inv) = (x.inverse(), y.inverse());
    word.letters().iter().fold(G::identity(), |acc, l| {
        let g = match l {
            Letter::X => x,
            Letter::XInv => &x_inv,
            Letter::Y => y,
            Letter::YInv => &y_inv,
        };
        acc.compose(g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let w: Word = "x y^-1 x⁻¹ y".parse().unwrap();
        assert_eq!(w, Word::w());
        assert_eq!("xYXy".parse::<Word>().unwrap(), Word::w());
        assert_eq!("yXYx".parse::<Word>().unwrap(), Word::w_star());
        assert_eq!("X^-1".parse::<Word>().unwrap(), Word::x());
        assert!("xz".parse::<Word>().is_err());
        assert!("".parse::<Word>().unwrap().is_empty());
    }

    #[test]
    fn w_star_reverses_w() {
        let rev: Vec<Letter> = Word::w().letters().iter().rev().copied().collect();
        assert_eq!(Word::w_star().letters(), rev.as_slice());
    }

    #[test]
    fn longitude_has_zero_exponent_sums() {
        for n in -5..=5 {
            assert_eq!(Word::longitude(n).exponent_sums(), (0, 0));
            assert_eq!(Word::relator(n).exponent_sums(), (1, -1));
        }
        assert_eq!(Word::longitude(2).len(), 16);
    }

    #[test]
    fn display_round_trip() {
        let w = Word::relator(-2);
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    /// Free group on two letters, modelled as reduced words.
    #[derive(Clone, Debug, PartialEq)]
    struct Free(Vec<Letter>);

    impl Group for Free {
        fn identity() -> Self {
            Free(vec![])
        }
        fn compose(&self, rhs: &Self) -> Self {
            let mut v = self.0.clone();
            for &l in &rhs.0 {
                if v.last() == Some(&l.inverse()) {
                    v.pop();
                } else {
                    v.push(l);
                }
            }
            Free(v)
        }
        fn inverse(&self) -> Self {
            Free(self.0.iter().rev().map(|l| l.inverse()).collect())
        }
    }

    #[test]
    fn eval_in_free_group() {
        let (x, y) = (Free(vec![Letter::X]), Free(vec![Letter::Y]));
        assert_eq!(word_eval(&Word::empty(), &x, &y), Free::identity());
        assert_eq!(word_eval(&"xX".parse().unwrap(), &x, &y), Free::identity());
        let w3 = word_eval(&Word::w().pow(3), &x, &y);
        assert_eq!(w3.0.len(), 12);
        let back = word_eval(&Word::w().pow(-3), &x, &y).compose(&w3);
        assert_eq!(back, Free::identity());
    }
}
