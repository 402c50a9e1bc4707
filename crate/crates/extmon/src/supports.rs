//! Infinite-support analysis of a constraint monoid.
//!
//! A member with infinite entries on a set `I` of coordinates exists iff
//! no inequality forces an infinite right side against a finite left side;
//! such `I` are the admissible supports. Fixing an admissible `I` and
//! looking at the finite coordinates yields a reduced system over the
//! complement, and membership factors through it: `x ∈ M` iff the infinite
//! support of `x` is admissible and the finite part of `x` solves the
//! reduced system. The admissible supports with the generating sets of
//! their finite parts present `M` by a finite amount of data, and stitching
//! those together gives a finite generating set of `M` over the extended
//! naturals.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::extnat::{ExtNat, ExtVector};
use crate::hilbert::{self, GeneratorSet};
use crate::order;
use crate::system::{CongRow, IneqRow, SystemSpec};
use crate::Error;

/// A set of coordinate indices (0-based in the API, printed 1-based).
/// Ordered by size first, then lexicographically, so sorting puts the
/// empty set first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        SupportSet { indices }
    }

    pub fn empty() -> Self {
        SupportSet { indices: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        SupportSet::new(self.indices.iter().chain(other.indices.iter()).copied())
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|i| other.contains(*i))
    }

    /// Coordinates not in the set, for ambient dimension `k`.
    pub fn complement(&self, k: usize) -> Vec<usize> {
        (0..k).filter(|i| !self.contains(*i)).collect()
    }
}

impl PartialOrd for SupportSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SupportSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices.cmp(&other.indices))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// Whether members with infinite entries exactly on `i` can exist: every
/// inequality whose right side meets `i` must have a left side meeting `i`
/// as well (an infinite right side forces an infinite left side).
/// Congruence rows never obstruct, since `inf` is a multiple of every
/// modulus.
pub fn admissible(i: &SupportSet, s: &SystemSpec) -> bool {
    assert!(i.indices().iter().all(|&c| c < s.k()), "support index out of range");
    let meets = |coeffs: &[num_bigint::BigUint]| coeffs.iter().enumerate().any(|(j, c)| !c.is_zero() && i.contains(j));
    s.ineq_rows().iter().all(|row| !meets(&row.rhs) || meets(&row.lhs))
}

/// The system governing the finite coordinates of members whose infinite
/// support is `I`: the parent rows that do not meet `I`, restricted to the
/// complement of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    outside: Vec<usize>,
    spec: SystemSpec,
}

impl ReducedSystem {
    pub fn outside(&self) -> &[usize] {
        &self.outside
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    /// Projection of an ambient vector onto the retained coordinates.
    pub fn restrict(&self, x: &ExtVector) -> ExtVector {
        ExtVector::new(self.outside.iter().map(|&c| x.entry(c).clone()).collect())
    }
}

pub fn reduced_system(i: &SupportSet, s: &SystemSpec) -> Result<ReducedSystem, Error> {
    if !admissible(i, s) {
        return Err(Error::Inadmissible(i.to_string()));
    }
    let outside = i.complement(s.k());
    let restrict = |coeffs: &[num_bigint::BigUint]| -> Vec<num_bigint::BigUint> {
        outside.iter().map(|&c| coeffs[c].clone()).collect()
    };
    let meets = |coeffs: &[num_bigint::BigUint]| coeffs.iter().enumerate().any(|(j, c)| !c.is_zero() && i.contains(j));
    let mut cong_rows = Vec::new();
    for row in s.cong_rows() {
        if !meets(&row.coeffs) {
            cong_rows.push(CongRow { coeffs: restrict(&row.coeffs), modulus: row.modulus.clone() });
        }
    }
    let mut ineq_rows = Vec::new();
    for row in s.ineq_rows() {
        if !meets(&row.lhs) {
            // Admissibility makes the right side avoid I too.
            debug_assert!(!meets(&row.rhs));
            ineq_rows.push(IneqRow { lhs: restrict(&row.lhs), rhs: restrict(&row.rhs) });
        }
    }
    let unit = s.unit().map(restrict);
    let spec = SystemSpec::build(outside.len(), cong_rows, ineq_rows, unit)
        .map_err(|e| Error::Internal(format!("reduced system construction failed: {}", e)))?;
    Ok(ReducedSystem { outside, spec })
}

/// One admissible support with its reduced system and the generating set
/// of its finite part.
#[derive(Clone, Debug)]
pub struct SupportEntry {
    pub support: SupportSet,
    pub reduced: ReducedSystem,
    pub finite_gens: GeneratorSet,
}

/// All admissible supports of a system, each with its reduced system and
/// finite-part generators, ordered empty set first, then by size.
#[derive(Clone, Debug)]
pub struct SupportLattice {
    k: usize,
    entries: Vec<SupportEntry>,
}

impl SupportLattice {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[SupportEntry] {
        &self.entries
    }

    pub fn supports(&self) -> Vec<SupportSet> {
        self.entries.iter().map(|e| e.support.clone()).collect()
    }

    pub fn entry(&self, s: &SupportSet) -> Option<&SupportEntry> {
        self.entries.iter().find(|e| &e.support == s)
    }

    pub fn contains(&self, s: &SupportSet) -> bool {
        self.entry(s).is_some()
    }
}

/// Enumerates every admissible support (so `k` is capped at 16), solves
/// each reduced system, and validates closure under unions and the
/// projection compatibility between nested supports. The validations can
/// only fail on an internal bug: systems of inequalities always satisfy
/// them.
pub fn support_lattice(s: &SystemSpec) -> Result<SupportLattice, Error> {
    let k = s.k();
    if k > 16 {
        return Err(Error::Capacity(format!("support enumeration needs k <= 16, got {}", k)));
    }
    let mut entries = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let support = SupportSet::new((0..k).filter(|&i| mask >> i & 1 == 1));
        if !admissible(&support, s) {
            continue;
        }
        let reduced = reduced_system(&support, s)?;
        let finite_gens = hilbert::solve_w(reduced.spec());
        entries.push(SupportEntry { support, reduced, finite_gens });
    }
    entries.sort_by(|a, b| a.support.cmp(&b.support));
    let lattice = SupportLattice { k, entries };

    debug_assert!(lattice.contains(&SupportSet::empty()));
    for a in lattice.entries() {
        for b in lattice.entries() {
            let union = a.support.union(&b.support);
            if !lattice.contains(&union) {
                return Err(Error::Internal(format!(
                    "supports {} and {} are admissible but their union {} is not",
                    a.support, b.support, union
                )));
            }
        }
    }
    // Projection condition: generators of a finite part, projected onto the
    // complement of a larger support, solve the larger reduced system.
    for small in lattice.entries() {
        for large in lattice.entries() {
            if !small.support.is_subset(&large.support) || small.support == large.support {
                continue;
            }
            for h in small.finite_gens.iter() {
                let projected = ExtVector::new(
                    large
                        .reduced
                        .outside()
                        .iter()
                        .map(|c| {
                            let pos = small.reduced.outside().iter().position(|d| d == c).unwrap();
                            h.entry(pos).clone()
                        })
                        .collect(),
                );
                if !large.reduced.spec().is_member(&projected) {
                    return Err(Error::Internal(format!(
                        "projection of {} from support {} violates the reduced system of {}",
                        h, small.support, large.support
                    )));
                }
            }
        }
    }
    Ok(lattice)
}

/// A finite generating set of `M` over the extended naturals: the finite
/// generators, plus for each nonempty admissible support the vector that is
/// `inf` there, alone and combined with each finite-part generator, all
/// greedily minimized.
pub fn generators_extended(s: &SystemSpec) -> Result<GeneratorSet, Error> {
    let lattice = support_lattice(s)?;
    let k = s.k();
    let mut candidates: Vec<ExtVector> = Vec::new();
    for entry in lattice.entries() {
        if entry.support.is_empty() {
            candidates.extend(entry.finite_gens.iter().cloned());
            continue;
        }
        let base = ExtVector::new(
            (0..k)
                .map(|i| if entry.support.contains(i) { ExtNat::Inf } else { ExtNat::zero() })
                .collect(),
        );
        candidates.push(base.clone());
        for h in entry.finite_gens.iter() {
            let mut entries: Vec<ExtNat> = base.iter().cloned().collect();
            for (pos, &c) in entry.reduced.outside().iter().enumerate() {
                entries[c] = h.entry(pos).clone();
            }
            candidates.push(ExtVector::new(entries));
        }
    }
    Ok(GeneratorSet::canonical(k, order::minimize_generators(k, candidates)))
}

/// The presentation of `M` by its admissible supports and finite-part
/// generator sets.
#[derive(Clone, Debug)]
pub struct SystemOfSupports {
    k: usize,
    items: Vec<(SupportSet, GeneratorSet)>,
}

impl SystemOfSupports {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn items(&self) -> &[(SupportSet, GeneratorSet)] {
        &self.items
    }

    /// Membership through the presentation: the infinite support must be
    /// an admissible set and the finite part must decompose over that
    /// support's generators.
    pub fn is_member(&self, x: &ExtVector) -> bool {
        assert_eq!(x.dim(), self.k);
        let support = SupportSet::new(x.inf_supp());
        let Some((_, gens)) = self.items.iter().find(|(s, _)| s == &support) else {
            return false;
        };
        let finite_part = ExtVector::new(
            support.complement(self.k).iter().map(|&c| x.entry(c).clone()).collect(),
        );
        order::submonoid_member(&finite_part, gens).is_some()
    }
}

impl fmt::Display for SystemOfSupports {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (support, gens) in &self.items {
            if gens.is_empty() {
                writeln!(f, "{}: -", support)?;
            } else {
                writeln!(f, "{}: {}", support, gens)?;
            }
        }
        Ok(())
    }
}

/// Packages the support lattice as the presentation `{(I, generators of
/// the finite part)}`.
pub fn build_system_of_supports(s: &SystemSpec) -> Result<SystemOfSupports, Error> {
    let lattice = support_lattice(s)?;
    Ok(SystemOfSupports {
        k: lattice.k(),
        items: lattice.entries().iter().map(|e| (e.support.clone(), e.finite_gens.clone())).collect(),
    })
}
