//! Arithmetic of the extended natural numbers and of fixed-length vectors
//! over them.
//!
//! The extended naturals are the commutative monoid `ℕ₀ ∪ {inf}` under
//! addition, with `inf` absorbing: `n + inf = inf` for every `n`. The monoid
//! is totally ordered (finite values by magnitude, `inf` maximal) but not
//! cancellative, so there is no subtraction.
//!
//! Finite values are arbitrary-precision; `inf` is a distinct tag, never a
//! sentinel integer.

use num_bigint::BigUint;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::Error;

/// An element of `ℕ₀ ∪ {inf}`.
///
/// The derived ordering is the total order of the monoid: finite values
/// compare by magnitude and `Inf` is the maximum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(BigUint),
    Inf,
}

impl ExtNat {
    pub fn zero() -> Self {
        ExtNat::Fin(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Fin(n) if n.is_zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// `c`-fold sum of `self`. The empty sum is 0, so `scale(0, inf) = 0`;
    /// for `c >= 1` infinity is preserved.
    pub fn scale(&self, c: &BigUint) -> ExtNat {
        if c.is_zero() {
            return ExtNat::zero();
        }
        match self {
            ExtNat::Fin(n) => ExtNat::Fin(c * n),
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    /// Whether `self` lies in `m·(ℕ₀ ∪ {inf})`. Requires `m >= 2`.
    /// `inf = m·inf`, so `inf` is a multiple of every `m`.
    pub fn is_multiple_of(&self, m: &BigUint) -> bool {
        assert!(*m >= BigUint::from(2u32), "modulus must be at least 2");
        match self {
            ExtNat::Fin(n) => (n % m).is_zero(),
            ExtNat::Inf => true,
        }
    }
}

impl Add<&ExtNat> for &ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: &ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        &self + &rhs
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(BigUint::from(n))
    }
}

impl From<BigUint> for ExtNat {
    fn from(n: BigUint) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{}", n),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(ExtNat::Inf);
        }
        let n = BigUint::from_str(s)
            .map_err(|_| Error::Parse(format!("invalid entry `{}`: expected a nonnegative integer or `inf`", s)))?;
        Ok(ExtNat::Fin(n))
    }
}

/// Dot product of a row of nonnegative integer coefficients with a vector
/// over the extended naturals. A zero coefficient annihilates `inf`.
pub fn row_dot(row: &[BigUint], v: &ExtVector) -> ExtNat {
    assert_eq!(row.len(), v.dim(), "row length does not match vector dimension");
    let mut acc = ExtNat::zero();
    for (c, x) in row.iter().zip(v.iter()) {
        acc = &acc + &x.scale(c);
    }
    acc
}

/// A fixed-length vector over `ℕ₀ ∪ {inf}` under componentwise addition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtVector {
    entries: Vec<ExtNat>,
}

impl ExtVector {
    pub fn new(entries: Vec<ExtNat>) -> Self {
        ExtVector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        ExtVector { entries: vec![ExtNat::zero(); dim] }
    }

    pub fn from_finite(entries: Vec<BigUint>) -> Self {
        ExtVector { entries: entries.into_iter().map(ExtNat::Fin).collect() }
    }

    pub fn from_u64s(entries: &[u64]) -> Self {
        ExtVector { entries: entries.iter().map(|&n| ExtNat::from(n)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> &ExtNat {
        &self.entries[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtNat> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExtNat::is_zero)
    }

    /// All entries finite.
    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| !e.is_inf())
    }

    /// The finite entries as plain integers, or `None` if any entry is `inf`.
    pub fn as_finite(&self) -> Option<Vec<BigUint>> {
        self.entries
            .iter()
            .map(|e| e.as_finite().cloned())
            .collect()
    }

    /// Indices of the nonzero entries (0-based).
    pub fn supp(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.entries[i].is_zero()).collect()
    }

    /// Indices of the infinite entries (0-based).
    pub fn inf_supp(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i].is_inf()).collect()
    }

    /// Largest finite entry, or 0 if there is none.
    pub fn max_finite(&self) -> BigUint {
        let mut best = BigUint::zero();
        for e in &self.entries {
            if let ExtNat::Fin(n) = e {
                if *n > best {
                    best = n.clone();
                }
            }
        }
        best
    }

    /// The infinite multiple of `self`: `inf` on the support, 0 elsewhere.
    /// This is the limit of `n·self` as `n` grows.
    pub fn inf_multiple(&self) -> ExtVector {
        ExtVector {
            entries: self
                .entries
                .iter()
                .map(|e| if e.is_zero() { ExtNat::zero() } else { ExtNat::Inf })
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigUint) -> ExtVector {
        ExtVector { entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    /// Graded-lexicographic comparison: total degree (a value in
    /// `ℕ₀ ∪ {inf}`) first, then entries left to right. This is the
    /// canonical order used for generator sets and enumerations.
    pub fn cmp_graded_lex(&self, other: &ExtVector) -> Ordering {
        debug_assert_eq!(self.dim(), other.dim());
        let deg = |v: &ExtVector| {
            v.entries.iter().fold(ExtNat::zero(), |acc, e| &acc + e)
        };
        deg(self)
            .cmp(&deg(other))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl Add<&ExtVector> for &ExtVector {
    type Output = ExtVector;

    fn add(self, rhs: &ExtVector) -> ExtVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        ExtVector {
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl PartialOrd for ExtVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_graded_lex(other)
    }
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtVector {
    type Err = Error;

    /// Parses `1 inf 3`, `1,inf,3` or `(1,inf,3)`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(ExtNat::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExtVector::new(entries))
    }
}
