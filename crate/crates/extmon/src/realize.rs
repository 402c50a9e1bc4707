//! Compilation of a constraint system into a tree of primitive blocks
//! composed by pullbacks, and verification that the tree denotes the same
//! monoid as the system.
//!
//! The primitive blocks are the binary order block `geq` (the monoid
//! `{(x,y) : x ≥ y}` over the extended naturals), its reversal `leq`, and
//! the unary congruence block `cong m` (the monoid `m·(ℕ₀ ∪ {inf})`).
//! A pullback arm tests a matrix image in its inner node; an intersection
//! requires every child to accept. Dualizing a tree swaps `geq` and `leq`
//! and leaves congruence blocks alone, matching the dual system.

use num_bigint::BigUint;
use std::fmt;
use std::fmt::Write as _;

use crate::extnat::{ExtNat, ExtVector};
use crate::system::{map_vector, SystemSpec};
use crate::Error;

/// A primitive monoid with a fixed small arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `{(x,y) : x ≥ y}`, arity 2.
    Geq,
    /// `{(x,y) : y ≥ x}`, arity 2.
    Leq,
    /// `m·(ℕ₀ ∪ {inf})`, arity 1.
    Congruence(BigUint),
}

impl Block {
    pub fn arity(&self) -> usize {
        match self {
            Block::Geq | Block::Leq => 2,
            Block::Congruence(_) => 1,
        }
    }

    fn member(&self, x: &ExtVector) -> bool {
        assert_eq!(x.dim(), self.arity(), "block arity mismatch");
        match self {
            Block::Geq => x.entry(0) >= x.entry(1),
            Block::Leq => x.entry(1) >= x.entry(0),
            Block::Congruence(m) => x.entry(0).is_multiple_of(m),
        }
    }

    fn reversed(&self) -> Block {
        match self {
            Block::Geq => Block::Leq,
            Block::Leq => Block::Geq,
            Block::Congruence(m) => Block::Congruence(m.clone()),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Geq => write!(f, "geq"),
            Block::Leq => write!(f, "leq"),
            Block::Congruence(m) => write!(f, "cong {}", m),
        }
    }
}

/// A node of a construction tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceNode {
    Leaf(Block),
    /// Tests `matrix · x` in the inner node; the matrix has one row per
    /// inner variable.
    Pullback { matrix: Vec<Vec<BigUint>>, inner: Box<TraceNode> },
    Intersection(Vec<TraceNode>),
}

impl TraceNode {
    fn denote(&self, x: &ExtVector) -> bool {
        match self {
            TraceNode::Leaf(block) => block.member(x),
            TraceNode::Pullback { matrix, inner } => inner.denote(&map_vector(matrix, x)),
            TraceNode::Intersection(children) => children.iter().all(|c| c.denote(x)),
        }
    }

    fn dualized(&self) -> TraceNode {
        match self {
            TraceNode::Leaf(block) => TraceNode::Leaf(block.reversed()),
            TraceNode::Pullback { matrix, inner } => {
                TraceNode::Pullback { matrix: matrix.clone(), inner: Box::new(inner.dualized()) }
            }
            TraceNode::Intersection(children) => {
                TraceNode::Intersection(children.iter().map(TraceNode::dualized).collect())
            }
        }
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        match self {
            TraceNode::Leaf(block) => {
                let _ = writeln!(out, "{}{}", pad, block);
            }
            TraceNode::Pullback { matrix, inner } => {
                let rows: Vec<String> = matrix
                    .iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                let _ = writeln!(out, "{}pullback [{}]", pad, rows.join("; "));
                inner.render_into(out, depth + 1);
            }
            TraceNode::Intersection(children) => {
                let _ = writeln!(out, "{}intersection", pad);
                for c in children {
                    c.render_into(out, depth + 1);
                }
            }
        }
    }
}

/// A construction tree denoting a submonoid of the extended naturals in a
/// fixed ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTrace {
    ambient: usize,
    root: TraceNode,
}

impl ConstructionTrace {
    pub fn new(ambient: usize, root: TraceNode) -> Self {
        ConstructionTrace { ambient, root }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn root(&self) -> &TraceNode {
        &self.root
    }

    /// Whether `x` lies in the denoted monoid.
    pub fn denote(&self, x: &ExtVector) -> bool {
        assert_eq!(x.dim(), self.ambient, "vector dimension does not match trace");
        self.root.denote(x)
    }

    /// The tree denoting the dual monoid: every order block reversed.
    pub fn dualized(&self) -> ConstructionTrace {
        ConstructionTrace { ambient: self.ambient, root: self.root.dualized() }
    }

    /// Stable indented rendering, matrices in row-major text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.root.render_into(&mut out, 0);
        out
    }
}

/// Compiles a system into its construction tree: one congruence leaf per
/// congruence row pulled back along the row, one `geq` leaf per inequality
/// row pulled back along the two-row matrix `(lhs; rhs)`, all intersected.
/// Zero rows compile to vacuous arms and are kept for traceability.
pub fn compile(s: &SystemSpec) -> ConstructionTrace {
    let mut children = Vec::new();
    for row in s.cong_rows() {
        children.push(TraceNode::Pullback {
            matrix: vec![row.coeffs.clone()],
            inner: Box::new(TraceNode::Leaf(Block::Congruence(row.modulus.clone()))),
        });
    }
    for row in s.ineq_rows() {
        children.push(TraceNode::Pullback {
            matrix: vec![row.lhs.clone(), row.rhs.clone()],
            inner: Box::new(TraceNode::Leaf(Block::Geq)),
        });
    }
    ConstructionTrace { ambient: s.k(), root: TraceNode::Intersection(children) }
}

/// Checks, over the grid `({0..bound} ∪ {inf})^k`, that the tree denotes
/// the system's monoid and the dualized tree denotes the dual's. Returns
/// the first counterexample, or `None` when the denotations agree.
pub fn verify(t: &ConstructionTrace, s: &SystemSpec, bound: u64) -> Option<ExtVector> {
    assert_eq!(t.ambient(), s.k(), "trace and system dimensions differ");
    let dual_trace = t.dualized();
    let dual_system = s.dual();
    let mut entries: Vec<ExtNat> = (0..=bound).map(ExtNat::from).collect();
    entries.push(ExtNat::Inf);
    let k = s.k();
    let mut indices = vec![0usize; k];
    loop {
        let x = ExtVector::new(indices.iter().map(|&i| entries[i].clone()).collect());
        if t.denote(&x) != s.is_member(&x) || dual_trace.denote(&x) != dual_system.is_member(&x) {
            return Some(x);
        }
        let mut pos = k;
        while pos > 0 {
            if indices[pos - 1] + 1 < entries.len() {
                indices[pos - 1] += 1;
                for i in indices.iter_mut().skip(pos) {
                    *i = 0;
                }
                break;
            }
            pos -= 1;
        }
        if pos == 0 {
            return None;
        }
    }
}

/// Validates the order unit of a system: strictly positive, a member that
/// meets every inequality with equality, and compatible with every
/// congruence.
pub fn validate_unit(s: &SystemSpec) -> Result<bool, Error> {
    let unit = s.unit().ok_or(Error::MissingUnit)?;
    let u = ExtVector::from_finite(unit.to_vec());
    let positive = unit.iter().all(|c| !num_traits::Zero::is_zero(c));
    Ok(positive && s.classify(&u) == crate::system::Classification::V)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::system_from_text;

    fn sys(text: &str) -> SystemSpec {
        system_from_text(text).unwrap()
    }

    fn xv(s: &str) -> ExtVector {
        s.parse().unwrap()
    }

    const GS: &str = "vars 2\nineq 1 0 >= 0 1\n";

    #[test]
    fn leaf_denotations() {
        assert!(Block::Geq.member(&xv("3 1")));
        assert!(!Block::Geq.member(&xv("1 3")));
        assert!(Block::Leq.member(&xv("1 3")));
        assert!(Block::Geq.member(&xv("inf 3")));
        assert!(Block::Congruence(BigUint::from(2u32)).member(&xv("4")));
        assert!(Block::Congruence(BigUint::from(2u32)).member(&xv("inf")));
        assert!(!Block::Congruence(BigUint::from(2u32)).member(&xv("3")));
    }

    #[test]
    fn compile_shapes() {
        let t = compile(&sys(GS));
        let TraceNode::Intersection(children) = t.root() else { panic!("expected intersection") };
        assert_eq!(children.len(), 1);
        let TraceNode::Pullback { matrix, inner } = &children[0] else { panic!("expected pullback") };
        assert_eq!(matrix, &vec![vec![BigUint::from(1u32), BigUint::from(0u32)], vec![BigUint::from(0u32), BigUint::from(1u32)]]);
        assert_eq!(**inner, TraceNode::Leaf(Block::Geq));

        let t = compile(&sys("vars 2\ncong 1 1 mod 2\n"));
        let TraceNode::Intersection(children) = t.root() else { panic!() };
        let TraceNode::Pullback { matrix, inner } = &children[0] else { panic!() };
        assert_eq!(matrix, &vec![vec![BigUint::from(1u32), BigUint::from(1u32)]]);
        assert_eq!(**inner, TraceNode::Leaf(Block::Congruence(BigUint::from(2u32))));
    }

    #[test]
    fn denotations() {
        let t = compile(&sys("vars 2\nineq 2 0 >= 0 1\n"));
        assert!(t.denote(&xv("1 2")));
        assert!(!t.denote(&xv("1 3")));
        let empty = ConstructionTrace::new(2, TraceNode::Intersection(Vec::new()));
        assert!(empty.denote(&xv("5 inf")));
    }

    #[test]
    fn dualized_traces() {
        let t = compile(&sys(GS));
        let d = t.dualized();
        assert!(d.denote(&xv("1 3")));
        assert!(!d.denote(&xv("3 1")));
        assert_eq!(d.dualized(), t);
        let nondiv = compile(&sys("vars 2\nineq 2 0 >= 0 1\n"));
        assert!(nondiv.dualized().denote(&xv("1 3")));
        assert!(!nondiv.dualized().denote(&xv("1 1")));
    }

    #[test]
    fn pullback_composition_is_matrix_product() {
        let c1 = vec![vec![BigUint::from(1u32), BigUint::from(2u32)], vec![BigUint::from(0u32), BigUint::from(1u32)]];
        let c2 = vec![vec![BigUint::from(1u32), BigUint::from(1u32)]];
        let nested = ConstructionTrace::new(
            2,
            TraceNode::Pullback {
                matrix: c1.clone(),
                inner: Box::new(TraceNode::Pullback {
                    matrix: c2.clone(),
                    inner: Box::new(TraceNode::Leaf(Block::Congruence(BigUint::from(3u32)))),
                }),
            },
        );
        // c2 · c1 over the nonnegative integers.
        let product: Vec<Vec<BigUint>> = c2
            .iter()
            .map(|row| {
                (0..2)
                    .map(|j| row.iter().zip(&c1).map(|(c, r1)| c * &r1[j]).sum())
                    .collect()
            })
            .collect();
        let flat = ConstructionTrace::new(
            2,
            TraceNode::Pullback {
                matrix: product,
                inner: Box::new(TraceNode::Leaf(Block::Congruence(BigUint::from(3u32)))),
            },
        );
        let mut entries: Vec<ExtNat> = (0..=4u64).map(ExtNat::from).collect();
        entries.push(ExtNat::Inf);
        for a in &entries {
            for b in &entries {
                let x = ExtVector::new(vec![a.clone(), b.clone()]);
                assert_eq!(nested.denote(&x), flat.denote(&x), "at {x}");
            }
        }
    }

    #[test]
    fn verification_of_compiled_traces() {
        for text in [
            GS,
            "vars 2\nineq 2 0 >= 0 1\n",
            "vars 2\neq 2 1 = 1 2\ncong 1 1 mod 2\n",
            "vars 3\ncong 1 2 0 mod 3\nineq 1 1 0 >= 0 0 2\n",
        ] {
            let s = sys(text);
            assert_eq!(verify(&compile(&s), &s, 3), None, "{text}");
        }
    }

    #[test]
    fn corrupted_trace_is_detected() {
        let s = sys(GS);
        // Swap the two pullback rows: the arm now denotes the dual.
        let corrupted = ConstructionTrace::new(
            2,
            TraceNode::Intersection(vec![TraceNode::Pullback {
                matrix: vec![vec![BigUint::from(0u32), BigUint::from(1u32)], vec![BigUint::from(1u32), BigUint::from(0u32)]],
                inner: Box::new(TraceNode::Leaf(Block::Geq)),
            }]),
        );
        let witness = verify(&corrupted, &s, 3).expect("corruption must be caught");
        assert!(corrupted.denote(&witness) != s.is_member(&witness)
            || corrupted.dualized().denote(&witness) != s.dual().is_member(&witness));
    }

    #[test]
    fn rendering_is_stable() {
        let t = compile(&sys("vars 2\ncong 1 1 mod 2\nineq 2 1 >= 1 2\n"));
        assert_eq!(
            t.render(),
            "intersection\n  pullback [1 1]\n    cong 2\n  pullback [2 1; 1 2]\n    geq\n"
        );
    }

    #[test]
    fn unit_validation() {
        let gs_with_unit = sys("vars 2\nunit 1 1\nineq 1 0 >= 0 1\n");
        assert!(validate_unit(&gs_with_unit).unwrap());
        let nondiv = sys("vars 2\nunit 1 2\nineq 2 0 >= 0 1\n");
        assert!(validate_unit(&nondiv).unwrap());
        let bad = sys("vars 2\nunit 1 2\nineq 1 0 >= 0 1\n");
        assert!(!validate_unit(&bad).unwrap());
        assert!(matches!(validate_unit(&sys(GS)), Err(Error::MissingUnit)));
    }
}
