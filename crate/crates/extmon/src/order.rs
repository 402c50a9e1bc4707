//! Decomposition search over generating sets, the algebraic preorder, and
//! the structural invariants used to tell monoids apart: idempotents,
//! minimal elements, superdecomposable elements, full-affineness with
//! equation synthesis, and unperforation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;

use crate::extnat::{ExtNat, ExtVector};
use crate::hilbert::{self, GeneratorSet};
use crate::smith;
use crate::supports::{self, SupportSet};
use crate::system::{Classification, CongRow, IneqRow, SystemSpec};
use crate::Error;

/// A witness that a vector lies in the monoid generated by a finite set:
/// nonzero multiplicities whose combination reproduces the vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    terms: Vec<(ExtVector, BigUint)>,
}

impl Decomposition {
    fn from_multiplicities(gens: &[ExtVector], mults: Vec<BigUint>) -> Self {
        let terms = gens
            .iter()
            .zip(mults)
            .filter(|(_, m)| !m.is_zero())
            .map(|(g, m)| (g.clone(), m))
            .collect();
        Decomposition { terms }
    }

    pub fn terms(&self) -> &[(ExtVector, BigUint)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The combination this witness denotes.
    pub fn sum(&self, dim: usize) -> ExtVector {
        let mut acc = ExtVector::zero(dim);
        for (g, m) in &self.terms {
            acc = &acc + &g.scale(m);
        }
        acc
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", m, g)?;
        }
        Ok(())
    }
}

/// Per-coordinate requirement on the combination being searched for.
enum Goal {
    /// The combination must hit this finite value exactly.
    Exact(BigUint),
    /// The combination must be infinite (some used generator is `inf` here).
    NeedsInf,
    /// No constraint.
    Free,
}

/// Bounded multiplicity search. Generators whose support is entirely on
/// unconstrained coordinates only matter by presence, so their
/// multiplicities are clamped to one; the rest are bounded by the exact
/// targets and by `cap`.
fn search(gens: &[ExtVector], goals: &[Goal], cap: &BigUint) -> Option<Vec<BigUint>> {
    let remaining: Vec<Option<BigUint>> = goals
        .iter()
        .map(|g| match g {
            Goal::Exact(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    let inf_missing: Vec<bool> = goals.iter().map(|g| matches!(g, Goal::NeedsInf)).collect();
    let mut mults = vec![BigUint::zero(); gens.len()];
    if dfs(gens, cap, 0, &remaining, &inf_missing, &mut mults) {
        Some(mults)
    } else {
        None
    }
}

fn dfs(
    gens: &[ExtVector],
    cap: &BigUint,
    idx: usize,
    remaining: &[Option<BigUint>],
    inf_missing: &[bool],
    mults: &mut Vec<BigUint>,
) -> bool {
    if idx == gens.len() {
        return remaining.iter().all(|r| r.as_ref().map_or(true, Zero::is_zero))
            && inf_missing.iter().all(|&b| !b);
    }
    let g = &gens[idx];
    let mut max = cap.clone();
    let mut constrained = false;
    for (j, e) in g.iter().enumerate() {
        if let Some(rem) = &remaining[j] {
            match e {
                ExtNat::Inf => {
                    max = BigUint::zero();
                    constrained = true;
                }
                ExtNat::Fin(c) if !c.is_zero() => {
                    constrained = true;
                    let bound = rem / c;
                    if bound < max {
                        max = bound;
                    }
                }
                _ => {}
            }
        }
    }
    if !constrained && max > BigUint::one() {
        max = BigUint::one();
    }
    let mut rem = remaining.to_vec();
    let mut infm = inf_missing.to_vec();
    let mut m = BigUint::zero();
    loop {
        if dfs(gens, cap, idx + 1, &rem, &infm, mults) {
            mults[idx] = m;
            return true;
        }
        if m >= max {
            return false;
        }
        m += 1u32;
        for (j, e) in g.iter().enumerate() {
            match e {
                ExtNat::Fin(c) => {
                    if let Some(r) = &mut rem[j] {
                        *r -= c;
                    }
                }
                ExtNat::Inf => {
                    infm[j] = false;
                }
            }
        }
    }
}

/// Searches for a decomposition of `x` over `gens`. Multiplicities are
/// capped at `B + 1` where `B` is the largest finite coordinate of `x`;
/// the cap is complete because finite coordinates bound the useful
/// multiplicities and generators living inside the infinite support only
/// matter by presence.
pub fn submonoid_member(x: &ExtVector, gens: &GeneratorSet) -> Option<Decomposition> {
    assert_eq!(x.dim(), gens.dim(), "vector and generator dimensions differ");
    let goals: Vec<Goal> = x
        .iter()
        .map(|e| match e {
            ExtNat::Fin(v) => Goal::Exact(v.clone()),
            ExtNat::Inf => Goal::NeedsInf,
        })
        .collect();
    let cap = x.max_finite() + 1u32;
    search(gens.gens(), &goals, &cap).map(|m| Decomposition::from_multiplicities(gens.gens(), m))
}

/// The algebraic preorder of the monoid generated by `gens`:
/// `x ≤ y` iff `x + z = y` for some `z` in the monoid. On coordinates where
/// `y` is finite `z` is forced; where `y` is infinite and `x` finite, `z`
/// must be infinite; where both are infinite, `z` is unconstrained.
pub fn alg_leq(x: &ExtVector, y: &ExtVector, gens: &GeneratorSet) -> bool {
    assert_eq!(x.dim(), gens.dim());
    assert_eq!(y.dim(), gens.dim());
    let mut goals = Vec::with_capacity(x.dim());
    for (a, b) in x.iter().zip(y.iter()) {
        match (a, b) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                if a > b {
                    return false;
                }
                goals.push(Goal::Exact(b - a));
            }
            (ExtNat::Inf, ExtNat::Fin(_)) => return false,
            (ExtNat::Fin(_), ExtNat::Inf) => goals.push(Goal::NeedsInf),
            (ExtNat::Inf, ExtNat::Inf) => goals.push(Goal::Free),
        }
    }
    let cap = y.max_finite() + 1u32;
    search(gens.gens(), &goals, &cap).is_some()
}

/// Greedy minimization: candidates are dropped, in decreasing canonical
/// order, whenever they decompose over the surviving rest.
pub(crate) fn minimize_generators(dim: usize, gens: Vec<ExtVector>) -> Vec<ExtVector> {
    let mut gens = {
        let mut g = gens;
        g.retain(|v| !v.is_zero());
        g.sort();
        g.dedup();
        g
    };
    let mut idx = gens.len();
    while idx > 0 {
        idx -= 1;
        let candidate = gens[idx].clone();
        let rest: Vec<ExtVector> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let rest_set = GeneratorSet::canonical(dim, rest);
        if submonoid_member(&candidate, &rest_set).is_some() {
            gens.remove(idx);
        }
    }
    gens
}

/// All idempotent members: the solutions with every entry 0 or `inf`.
pub fn idempotents(s: &SystemSpec) -> Result<Vec<ExtVector>, Error> {
    let k = s.k();
    if k > 16 {
        return Err(Error::Capacity(format!("idempotent enumeration needs k <= 16, got {}", k)));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let v = ExtVector::new(
            (0..k)
                .map(|i| if mask >> i & 1 == 1 { ExtNat::Inf } else { ExtNat::zero() })
                .collect(),
        );
        if s.is_member(&v) {
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

/// Which set minimal elements are taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalMode {
    /// Minimal in `W` under the componentwise order: no smaller nonzero
    /// member below.
    W,
    /// Minimal in the semigroup `W ∖ V` under the algebraic order of `W`:
    /// no decomposition into a smaller `W ∖ V` member plus a nonzero `W`
    /// member.
    WMinusV,
}

/// Exhaustively visits the box `{0..limits}`, stopping early when `f`
/// returns true; reports whether it ever did.
fn search_box(limits: &[BigUint], current: &mut Vec<BigUint>, f: &mut dyn FnMut(&[BigUint]) -> bool) -> bool {
    if current.len() == limits.len() {
        return f(current);
    }
    let limit = limits[current.len()].clone();
    let mut v = BigUint::zero();
    loop {
        current.push(v.clone());
        if search_box(limits, current, f) {
            current.pop();
            return true;
        }
        current.pop();
        if v >= limit {
            return false;
        }
        v += 1u32;
    }
}

/// Minimal elements of `W` or of `W ∖ V`. Every minimal element is
/// irreducible and hence a generator, so candidates come from `solve_w`
/// and are checked by brute force below the candidate.
pub fn minimal_elements(s: &SystemSpec, mode: MinimalMode) -> Vec<ExtVector> {
    let w = hilbert::solve_w(s);
    let candidates: Vec<ExtVector> = match mode {
        MinimalMode::W => w.gens().to_vec(),
        MinimalMode::WMinusV => w
            .iter()
            .filter(|g| s.classify(g) == Classification::WMinusV)
            .cloned()
            .collect(),
    };
    candidates
        .into_iter()
        .filter(|g| {
            let limits = g.as_finite().expect("solve_w generators are finite");
            let mut current = Vec::new();
            let found_smaller = search_box(&limits, &mut current, &mut |y| {
                if y.iter().all(Zero::is_zero) || y == limits.as_slice() {
                    return false;
                }
                let yv = ExtVector::from_finite(y.to_vec());
                match mode {
                    MinimalMode::W => s.is_member(&yv),
                    MinimalMode::WMinusV => {
                        if s.classify(&yv) != Classification::WMinusV {
                            return false;
                        }
                        let z: Vec<BigUint> = limits.iter().zip(y).map(|(g, y)| g - y).collect();
                        s.is_member(&ExtVector::from_finite(z))
                    }
                }
            });
            !found_smaller
        })
        .collect()
}

/// Whether a member has no finite member's support inside its own support,
/// so that every decomposition of it keeps decomposing. The zero vector is
/// not superdecomposable by convention.
pub fn is_superdecomposable(x: &ExtVector, s: &SystemSpec) -> Result<bool, Error> {
    if !s.is_member(x) {
        return Err(Error::NotMember(x.clone()));
    }
    if x.is_zero() {
        return Ok(false);
    }
    let supp = x.supp();
    let w = hilbert::solve_w(s);
    Ok(!w.iter().any(|g| g.supp().iter().all(|i| supp.contains(i))))
}

/// Outcome of the full-affineness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FullAffine {
    Yes,
    /// A difference of members that lies in `ℕ₀^k` but not in the monoid.
    No { witness: ExtVector },
}

impl FullAffine {
    pub fn is_full_affine(&self) -> bool {
        matches!(self, FullAffine::Yes)
    }
}

/// Checks that the monoid generated by the (finite) generators is full
/// affine: closed under differences that stay in `ℕ₀^k`. The difference
/// monoid is generated by the Hilbert basis of
/// `{(x,a,b) : x + Σ b_i·g_i = Σ a_i·g_i}` projected to `x`; each projected
/// generator is tested for membership.
pub fn is_full_affine(gens: &GeneratorSet) -> FullAffine {
    let finite = gens.as_finite().expect("full-affine check requires finite generators");
    let k = gens.dim();
    let r = finite.len();
    let vars = k + 2 * r;
    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let mut row = vec![BigInt::zero(); vars];
        row[j] = BigInt::one();
        for (i, g) in finite.iter().enumerate() {
            row[k + i] = -BigInt::from(g[j].clone());
            row[k + r + i] = BigInt::from(g[j].clone());
        }
        rows.push(row);
    }
    let basis = hilbert::hilbert_basis(&rows, vars);
    let projected = hilbert::project_and_minimize(&basis, k);
    for c in projected.iter() {
        if submonoid_member(c, gens).is_none() {
            return FullAffine::No { witness: c.clone() };
        }
    }
    FullAffine::Yes
}

/// Synthesizes a congruence-and-equation system whose finite solution set
/// is exactly the monoid generated by a full affine generating set.
///
/// Equations come from an integer basis of the rational kernel of the
/// generator matrix, split into nonnegative parts. Congruences come from
/// the elementary divisors of the generator lattice inside its saturation:
/// with `U·A·W = diag` for the matrix `A` of generators as columns, the
/// first `rank` rows of `U` are integer coordinates on the saturation, and
/// the Smith form of the generator coordinates yields one congruence per
/// elementary divisor exceeding 1.
pub fn synthesize_equations(gens: &GeneratorSet) -> Result<SystemSpec, Error> {
    if let FullAffine::No { witness } = is_full_affine(gens) {
        return Err(Error::NotFullAffine(witness));
    }
    let finite = gens.as_finite().expect("synthesis requires finite generators");
    let k = gens.dim();
    let r = finite.len();

    // Equation rows: kernel of the r×k matrix whose rows are the generators.
    let gen_rows: Vec<Vec<BigInt>> =
        finite.iter().map(|g| g.iter().map(|c| BigInt::from(c.clone())).collect()).collect();
    let mut ineq_rows = Vec::new();
    for v in smith::kernel_basis(&gen_rows, k) {
        let pos: Vec<BigUint> =
            v.iter().map(|c| if c > &BigInt::zero() { c.to_biguint().unwrap() } else { BigUint::zero() }).collect();
        let neg: Vec<BigUint> =
            v.iter().map(|c| if c < &BigInt::zero() { (-c).to_biguint().unwrap() } else { BigUint::zero() }).collect();
        ineq_rows.push(IneqRow { lhs: pos.clone(), rhs: neg.clone() });
        ineq_rows.push(IneqRow { lhs: neg, rhs: pos });
    }

    // Congruence rows from the elementary divisors.
    let mut cong_rows = Vec::new();
    if r > 0 {
        let cols: Vec<Vec<BigInt>> = (0..k)
            .map(|j| finite.iter().map(|g| BigInt::from(g[j].clone())).collect())
            .collect();
        let outer = smith::smith_normal_form(&cols, r);
        let q = outer.rank;
        // Coordinates of each generator on the saturation basis.
        let coords: Vec<Vec<BigInt>> = (0..q)
            .map(|i| {
                (0..r)
                    .map(|gi| (0..k).map(|t| &outer.u[i][t] * &cols[t][gi]).sum())
                    .collect()
            })
            .collect();
        let inner = smith::smith_normal_form(&coords, r);
        debug_assert_eq!(inner.rank, q, "generator lattice must have full rank in its saturation");
        for i in 0..inner.rank {
            let divisor = &inner.d[i];
            if divisor <= &BigInt::one() {
                continue;
            }
            let modulus = divisor.to_biguint().unwrap();
            let functional: Vec<BigInt> = (0..k)
                .map(|t| (0..q).map(|row| &inner.u[i][row] * &outer.u[row][t]).sum())
                .collect();
            let coeffs: Vec<BigUint> = functional
                .iter()
                .map(|c| {
                    let m = BigInt::from(modulus.clone());
                    (((c % &m) + &m) % &m).to_biguint().unwrap()
                })
                .collect();
            if coeffs.iter().all(Zero::is_zero) {
                continue;
            }
            cong_rows.push(CongRow { coeffs, modulus });
        }
    } else {
        // No generators: the monoid is {0}, pinned by x_j = 0 for all j.
        // kernel_basis above already produced those equations.
    }
    SystemSpec::build(k, cong_rows, ineq_rows, None)
}

/// A failure of unperforation: `n·x ≤ n·y` in the algebraic order of the
/// generated monoid while `x ≤ y` fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perforation {
    pub x: ExtVector,
    pub y: ExtVector,
    pub n: u64,
}

impl fmt::Display for Perforation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{} <= {}*{} but {} <= {} fails", self.n, self.x, self.n, self.y, self.x, self.y)
    }
}

/// Samples members of the generated monoid with coordinates up to `bound`
/// and checks `n·x ≤ n·y ⇒ x ≤ y` for `2 ≤ n ≤ n_max`. Returns the first
/// violation in canonical order, or `None` if the sample is unperforated.
pub fn unperforated_check(gens: &GeneratorSet, n_max: u64, bound: u64) -> Option<Perforation> {
    let finite = gens.as_finite().expect("unperforation check requires finite generators");
    let k = gens.dim();
    let limit = bound.saturating_mul(n_max.max(1));
    // Closure of the generated monoid inside the large box; differences and
    // their multiples are then table lookups.
    let steps: Vec<Vec<u64>> = finite
        .iter()
        .filter_map(|g| g.iter().map(u64::try_from).collect::<Result<Vec<u64>, _>>().ok())
        .filter(|g| g.iter().all(|&c| c <= limit))
        .collect();
    let mut table = std::collections::BTreeSet::new();
    let mut queue = vec![vec![0u64; k]];
    table.insert(vec![0u64; k]);
    while let Some(x) = queue.pop() {
        for g in &steps {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if y.iter().all(|&c| c <= limit) && table.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    let members: Vec<Vec<u64>> = {
        let mut m: Vec<Vec<u64>> = table.iter().filter(|x| x.iter().all(|&c| c <= bound)).cloned().collect();
        m.sort_by(|a, b| ExtVector::from_u64s(a).cmp(&ExtVector::from_u64s(b)));
        m
    };
    for x in &members {
        for y in &members {
            if x == y || !x.iter().zip(y).all(|(a, b)| a <= b) {
                continue;
            }
            let d: Vec<u64> = y.iter().zip(x).map(|(b, a)| b - a).collect();
            if table.contains(&d) {
                continue;
            }
            for n in 2..=n_max {
                let nd: Vec<u64> = d.iter().map(|&c| c * n).collect();
                if nd.iter().all(|&c| c <= limit) && table.contains(&nd) {
                    return Some(Perforation {
                        x: ExtVector::from_u64s(x),
                        y: ExtVector::from_u64s(y),
                        n,
                    });
                }
            }
        }
    }
    None
}

/// Structural invariants of a system's monoid. The numeric profile
/// (counts and support sizes) is preserved by monoid isomorphism, so
/// differing profiles certify non-isomorphic monoids; the element lists
/// are informational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub k: usize,
    pub idempotents: Vec<ExtVector>,
    pub minimal_w: Vec<ExtVector>,
    pub minimal_w_minus_v: Vec<ExtVector>,
    pub supports: Vec<SupportSet>,
    pub extended_generator_count: usize,
}

impl InvariantReport {
    pub fn idempotent_count(&self) -> usize {
        self.idempotents.len()
    }

    /// Isomorphism-invariant profile: idempotent count, minimal-element
    /// counts, the multiset of support sizes, and the extended generator
    /// count.
    pub fn profile(&self) -> (usize, usize, usize, Vec<usize>, usize) {
        let mut sizes: Vec<usize> = self.supports.iter().map(SupportSet::len).collect();
        sizes.sort_unstable();
        (
            self.idempotents.len(),
            self.minimal_w.len(),
            self.minimal_w_minus_v.len(),
            sizes,
            self.extended_generator_count,
        )
    }

    /// Profiles differ, so the two monoids cannot be isomorphic.
    pub fn distinguishes(&self, other: &InvariantReport) -> bool {
        self.profile() != other.profile()
    }
}

fn join_vectors(vs: &[ExtVector]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "idempotent count: {}", self.idempotents.len())?;
        writeln!(f, "idempotents: {}", join_vectors(&self.idempotents))?;
        writeln!(f, "minimal of W: {}", join_vectors(&self.minimal_w))?;
        writeln!(f, "minimal of W\\V: {}", join_vectors(&self.minimal_w_minus_v))?;
        writeln!(
            f,
            "supports: {}",
            self.supports.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
        )?;
        writeln!(f, "extended generator count: {}", self.extended_generator_count)
    }
}

/// Assembles the invariant report for a system.
pub fn invariant_report(s: &SystemSpec) -> Result<InvariantReport, Error> {
    let idempotents = idempotents(s)?;
    let minimal_w = minimal_elements(s, MinimalMode::W);
    let minimal_w_minus_v = minimal_elements(s, MinimalMode::WMinusV);
    let lattice = supports::support_lattice(s)?;
    let extended = supports::generators_extended(s)?;
    Ok(InvariantReport {
        k: s.k(),
        idempotents,
        minimal_w,
        minimal_w_minus_v,
        supports: lattice.supports(),
        extended_generator_count: extended.len(),
    })
}
