//! Systems of diophantine congruences and inequalities over the extended
//! naturals, their direct membership semantics, duals, slack-variable
//! encodings and pullback composition.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::fmt;

use crate::extnat::{row_dot, ExtVector};
use crate::Error;

/// One congruence row `coeffs · t ∈ modulus·(ℕ₀ ∪ {inf})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CongRow {
    pub coeffs: Vec<BigUint>,
    pub modulus: BigUint,
}

/// One inequality row `lhs · t ≥ rhs · t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IneqRow {
    pub lhs: Vec<BigUint>,
    pub rhs: Vec<BigUint>,
}

/// A finite system of congruence and inequality rows over `k` variables,
/// optionally carrying an order unit (a strictly positive designated
/// solution). The solution set in `(ℕ₀ ∪ {inf})^k` is a commutative monoid.
///
/// Rows are kept in insertion order; equality of systems compares the
/// canonical form (rows sorted, duplicates removed), so the dual of the
/// dual is equal to the original even when row order differs.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    k: usize,
    cong_rows: Vec<CongRow>,
    ineq_rows: Vec<IneqRow>,
    unit: Option<Vec<BigUint>>,
}

/// Where a member sits relative to the finite parts of the monoid:
/// `V` is the finite part with every inequality tight, `WMinusV` the finite
/// part with some inequality strict, `InfinitePart` everything with an
/// infinite entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    NotMember,
    V,
    WMinusV,
    InfinitePart,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::NotMember => "not-member",
            Classification::V => "V",
            Classification::WMinusV => "W-minus-V",
            Classification::InfinitePart => "infinite-part",
        };
        write!(f, "{}", s)
    }
}

impl SystemSpec {
    /// The trivial system over `k` variables; every vector is a solution.
    pub fn trivial(k: usize) -> Self {
        SystemSpec { k, cong_rows: Vec::new(), ineq_rows: Vec::new(), unit: None }
    }

    /// Builds a validated system. Every row must have length `k`, every
    /// modulus must be at least 2, and a unit must be strictly positive.
    pub fn build(
        k: usize,
        cong_rows: Vec<CongRow>,
        ineq_rows: Vec<IneqRow>,
        unit: Option<Vec<BigUint>>,
    ) -> Result<Self, Error> {
        let two = BigUint::from(2u32);
        for row in &cong_rows {
            if row.coeffs.len() != k {
                return Err(Error::Dimension { expected: k, got: row.coeffs.len() });
            }
            if row.modulus < two {
                return Err(Error::Parse(format!("modulus {} is less than 2", row.modulus)));
            }
        }
        for row in &ineq_rows {
            if row.lhs.len() != k {
                return Err(Error::Dimension { expected: k, got: row.lhs.len() });
            }
            if row.rhs.len() != k {
                return Err(Error::Dimension { expected: k, got: row.rhs.len() });
            }
        }
        if let Some(u) = &unit {
            if u.len() != k {
                return Err(Error::Dimension { expected: k, got: u.len() });
            }
            if u.iter().any(BigUint::is_zero) {
                return Err(Error::Parse("order unit entries must be at least 1".into()));
            }
        }
        Ok(SystemSpec { k, cong_rows, ineq_rows, unit })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cong_rows(&self) -> &[CongRow] {
        &self.cong_rows
    }

    pub fn ineq_rows(&self) -> &[IneqRow] {
        &self.ineq_rows
    }

    pub fn unit(&self) -> Option<&[BigUint]> {
        self.unit.as_deref()
    }

    pub fn with_unit(mut self, unit: Vec<BigUint>) -> Result<Self, Error> {
        let s = SystemSpec::build(self.k, Vec::new(), Vec::new(), Some(unit.clone()))?;
        drop(s);
        self.unit = Some(unit);
        Ok(self)
    }

    /// Direct membership semantics: every congruence row evaluates into
    /// `modulus·(ℕ₀ ∪ {inf})` and every inequality row holds in the total
    /// order of the extended naturals (`inf` maximal).
    pub fn is_member(&self, x: &ExtVector) -> bool {
        assert_eq!(x.dim(), self.k, "vector dimension does not match system");
        self.cong_rows
            .iter()
            .all(|row| row_dot(&row.coeffs, x).is_multiple_of(&row.modulus))
            && self
                .ineq_rows
                .iter()
                .all(|row| row_dot(&row.lhs, x) >= row_dot(&row.rhs, x))
    }

    /// The dual system: same congruences, every inequality reversed.
    pub fn dual(&self) -> SystemSpec {
        SystemSpec {
            k: self.k,
            cong_rows: self.cong_rows.clone(),
            ineq_rows: self
                .ineq_rows
                .iter()
                .map(|row| IneqRow { lhs: row.rhs.clone(), rhs: row.lhs.clone() })
                .collect(),
            unit: self.unit.clone(),
        }
    }

    /// Classifies `x` against this system. Members with an infinite entry
    /// form the infinite part; finite members split into `V` (every
    /// inequality tight) and `W ∖ V` (some inequality strict).
    pub fn classify(&self, x: &ExtVector) -> Classification {
        if !self.is_member(x) {
            return Classification::NotMember;
        }
        if !x.is_finite() {
            return Classification::InfinitePart;
        }
        let tight = self
            .ineq_rows
            .iter()
            .all(|row| row_dot(&row.lhs, x) == row_dot(&row.rhs, x));
        if tight {
            Classification::V
        } else {
            Classification::WMinusV
        }
    }

    /// Encodes the finite solutions as a homogeneous equation system over
    /// `ℕ₀^(k+ℓ+n)`: inequality `j` becomes `lhs·t − rhs·t − u_j = 0` with a
    /// slack variable `u_j`, congruence `i` becomes `d·t − m_i·s_i = 0` with
    /// a slack variable `s_i`. Projecting the solution set to the first `k`
    /// coordinates gives exactly `M ∩ ℕ₀^k`.
    pub fn to_slack_equations(&self) -> EquationSystem {
        let l = self.ineq_rows.len();
        let n = self.cong_rows.len();
        let vars = self.k + l + n;
        let mut rows = Vec::with_capacity(l + n);
        for (j, row) in self.ineq_rows.iter().enumerate() {
            let mut eq = vec![BigInt::zero(); vars];
            for t in 0..self.k {
                eq[t] = BigInt::from(row.lhs[t].clone()) - BigInt::from(row.rhs[t].clone());
            }
            eq[self.k + j] = BigInt::from(-1);
            rows.push(eq);
        }
        for (i, row) in self.cong_rows.iter().enumerate() {
            let mut eq = vec![BigInt::zero(); vars];
            for t in 0..self.k {
                eq[t] = BigInt::from(row.coeffs[t].clone());
            }
            eq[self.k + l + i] = -BigInt::from(row.modulus.clone());
            rows.push(eq);
        }
        EquationSystem { vars, rows, project_to: self.k }
    }

    /// Like [`to_slack_equations`](Self::to_slack_equations) but with every
    /// inequality forced to equality: no inequality slacks, so the
    /// projection of the solution set is `V = M ∩ D(M) ∩ ℕ₀^k`.
    pub fn to_equality_equations(&self) -> EquationSystem {
        let n = self.cong_rows.len();
        let vars = self.k + n;
        let mut rows = Vec::with_capacity(self.ineq_rows.len() + n);
        for row in &self.ineq_rows {
            let mut eq = vec![BigInt::zero(); vars];
            for t in 0..self.k {
                eq[t] = BigInt::from(row.lhs[t].clone()) - BigInt::from(row.rhs[t].clone());
            }
            rows.push(eq);
        }
        for (i, row) in self.cong_rows.iter().enumerate() {
            let mut eq = vec![BigInt::zero(); vars];
            for t in 0..self.k {
                eq[t] = BigInt::from(row.coeffs[t].clone());
            }
            eq[self.k + i] = -BigInt::from(row.modulus.clone());
            rows.push(eq);
        }
        EquationSystem { vars, rows, project_to: self.k }
    }

    /// Canonical form: rows sorted lexicographically with duplicates
    /// removed. Two systems are equal iff their canonical forms match.
    pub fn canonical(&self) -> SystemSpec {
        let mut cong = self.cong_rows.clone();
        cong.sort();
        cong.dedup();
        let mut ineq = self.ineq_rows.clone();
        ineq.sort();
        ineq.dedup();
        SystemSpec { k: self.k, cong_rows: cong, ineq_rows: ineq, unit: self.unit.clone() }
    }
}

impl PartialEq for SystemSpec {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.k == b.k && a.cong_rows == b.cong_rows && a.ineq_rows == b.ineq_rows && a.unit == b.unit
    }
}

impl Eq for SystemSpec {}

/// Pullback composition: the system over `inner`'s variables whose
/// solutions are `{x : x ∈ M(inner) and C·x ∈ M(outer)}`. Each row of
/// `outer` is composed with the matrix `map` (`outer.k × inner.k`, rows
/// indexed by `outer`'s variables) and appended to `inner`'s rows.
pub fn pullback(outer: &SystemSpec, map: &[Vec<BigUint>], inner: &SystemSpec) -> SystemSpec {
    assert_eq!(map.len(), outer.k(), "pullback matrix must have one row per outer variable");
    for row in map {
        assert_eq!(row.len(), inner.k(), "pullback matrix row length must match inner dimension");
    }
    let compose = |coeffs: &[BigUint]| -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); inner.k()];
        for (c, map_row) in coeffs.iter().zip(map.iter()) {
            for (o, m) in out.iter_mut().zip(map_row.iter()) {
                *o += c * m;
            }
        }
        out
    };
    let mut cong_rows = inner.cong_rows.clone();
    let mut ineq_rows = inner.ineq_rows.clone();
    for row in &outer.cong_rows {
        cong_rows.push(CongRow { coeffs: compose(&row.coeffs), modulus: row.modulus.clone() });
    }
    for row in &outer.ineq_rows {
        ineq_rows.push(IneqRow { lhs: compose(&row.lhs), rhs: compose(&row.rhs) });
    }
    SystemSpec { k: inner.k(), cong_rows, ineq_rows, unit: inner.unit.clone() }
}

/// Applies a nonnegative integer matrix to a vector over the extended
/// naturals, one `row_dot` per output coordinate.
pub fn map_vector(map: &[Vec<BigUint>], x: &ExtVector) -> ExtVector {
    ExtVector::new(map.iter().map(|row| row_dot(row, x)).collect())
}

/// A homogeneous linear system `A·x = 0` over `ℕ₀^vars`, with the first
/// `project_to` coordinates designated as the original variables and the
/// rest as slacks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub vars: usize,
    pub rows: Vec<Vec<BigInt>>,
    pub project_to: usize,
}
