//! Minimal generating sets for the finite parts of a constraint monoid.
//!
//! `W = M ∩ ℕ₀^k` and `V = M ∩ D(M) ∩ ℕ₀^k` are computed by running a
//! Hilbert-basis completion on the slack-variable encoding of the system
//! and projecting away the slacks. The completion is a Contejean–Devie
//! style directed search: a frontier of candidate vectors grows by unit
//! steps whose defect points against the current defect, pruned by
//! dominance against the minimal solutions found so far.
//!
//! [`brute_solutions`] enumerates members directly from the system
//! semantics and serves as the independent oracle for everything above.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::extnat::ExtVector;
use crate::order;
use crate::system::{EquationSystem, SystemSpec};

/// A finite, canonically ordered (graded-lexicographic) list of nonzero
/// generators of a submonoid of `(ℕ₀ ∪ {inf})^k`.
///
/// Construction sorts, deduplicates and drops zero vectors; minimality
/// (no generator decomposing over the others) is established by the
/// producing operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    dim: usize,
    gens: Vec<ExtVector>,
}

impl GeneratorSet {
    pub fn canonical(dim: usize, mut gens: Vec<ExtVector>) -> Self {
        for g in &gens {
            assert_eq!(g.dim(), dim, "generator dimension mismatch");
        }
        gens.retain(|g| !g.is_zero());
        gens.sort();
        gens.dedup();
        GeneratorSet { dim, gens }
    }

    pub fn empty(dim: usize) -> Self {
        GeneratorSet { dim, gens: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[ExtVector] {
        &self.gens
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtVector> {
        self.gens.iter()
    }

    pub fn contains(&self, v: &ExtVector) -> bool {
        self.gens.binary_search_by(|g| g.cmp_graded_lex(v)).is_ok()
    }

    /// All generators finite, as plain integer vectors.
    pub fn as_finite(&self) -> Option<Vec<Vec<BigUint>>> {
        self.gens.iter().map(ExtVector::as_finite).collect()
    }
}

impl std::fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for g in &self.gens {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", g)?;
            first = false;
        }
        Ok(())
    }
}

fn componentwise_leq(a: &[BigUint], b: &[BigUint]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Hilbert basis (unique minimal generating set) of
/// `{x ∈ ℕ₀^vars : rows · x = 0}`. Entries of `rows` may be negative.
/// A system with no rows yields the standard basis vectors.
pub fn hilbert_basis(rows: &[Vec<BigInt>], vars: usize) -> GeneratorSet {
    for row in rows {
        assert_eq!(row.len(), vars, "equation length mismatch");
    }
    // Defect of each unit step.
    let unit_defect: Vec<Vec<BigInt>> = (0..vars)
        .map(|i| rows.iter().map(|r| r[i].clone()).collect())
        .collect();
    let mut basis: Vec<Vec<BigUint>> = Vec::new();
    let dominated = |x: &[BigUint], basis: &[Vec<BigUint>]| basis.iter().any(|b| componentwise_leq(b, x));

    let mut frontier: BTreeMap<Vec<BigUint>, Vec<BigInt>> = BTreeMap::new();
    for i in 0..vars {
        let mut e = vec![BigUint::zero(); vars];
        e[i] = BigUint::from(1u32);
        frontier.insert(e, unit_defect[i].clone());
    }
    while !frontier.is_empty() {
        let mut next: BTreeMap<Vec<BigUint>, Vec<BigInt>> = BTreeMap::new();
        // Solutions of this level join the basis; within a level no vector
        // dominates another, so ordering inside the pass is immaterial.
        for (x, defect) in &frontier {
            if defect.iter().all(BigInt::is_zero) && !dominated(x, &basis) {
                basis.push(x.clone());
            }
        }
        for (x, defect) in frontier {
            if defect.iter().all(BigInt::is_zero) {
                continue;
            }
            for i in 0..vars {
                // Step only against the defect; this keeps the search
                // complete while directing it toward solutions.
                let score: BigInt = defect.iter().zip(&unit_defect[i]).map(|(a, b)| a * b).sum();
                if !score.is_negative() {
                    continue;
                }
                let mut stepped = x.clone();
                stepped[i] += BigUint::from(1u32);
                if dominated(&stepped, &basis) || next.contains_key(&stepped) {
                    continue;
                }
                let new_defect: Vec<BigInt> =
                    defect.iter().zip(&unit_defect[i]).map(|(a, b)| a + b).collect();
                next.insert(stepped, new_defect);
            }
        }
        frontier = next;
    }
    GeneratorSet::canonical(vars, basis.into_iter().map(ExtVector::from_finite).collect())
}

/// Projects generators to the first `k` coordinates, drops zero vectors and
/// removes every projection that decomposes over the remaining ones.
pub fn project_and_minimize(g: &GeneratorSet, k: usize) -> GeneratorSet {
    assert!(k <= g.dim(), "cannot project {} coordinates out of {}", k, g.dim());
    let projected: Vec<ExtVector> = g
        .iter()
        .map(|v| ExtVector::new(v.iter().take(k).cloned().collect()))
        .collect();
    GeneratorSet::canonical(k, order::minimize_generators(k, projected))
}

fn solve(eqs: &EquationSystem) -> GeneratorSet {
    project_and_minimize(&hilbert_basis(&eqs.rows, eqs.vars), eqs.project_to)
}

/// Minimal generating set of `W = M ∩ ℕ₀^k`.
pub fn solve_w(s: &SystemSpec) -> GeneratorSet {
    solve(&s.to_slack_equations())
}

/// Minimal generating set of `V`: the finite solutions with every
/// inequality forced to equality.
pub fn solve_v(s: &SystemSpec) -> GeneratorSet {
    solve(&s.to_equality_equations())
}

/// All members of `M` in the box `{0..bound}^k`, in canonical order.
/// Independent of the completion machinery: each point is tested directly
/// against the system semantics.
pub fn brute_solutions(s: &SystemSpec, bound: u64) -> Vec<ExtVector> {
    let k = s.k();
    let mut out = Vec::new();
    let mut current = vec![0u64; k];
    loop {
        let v = ExtVector::from_u64s(&current);
        if s.is_member(&v) {
            out.push(v);
        }
        // Odometer step.
        let mut pos = k;
        while pos > 0 {
            if current[pos - 1] < bound {
                current[pos - 1] += 1;
                for c in current.iter_mut().skip(pos) {
                    *c = 0;
                }
                break;
            }
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    out.sort();
    out
}
