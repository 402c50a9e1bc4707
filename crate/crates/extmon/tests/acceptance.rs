//! Acceptance suite: one test per criterion, exact arithmetic, zero
//! tolerance. Each test name is the pass/fail line for its criterion;
//! the body also prints a summary line visible with `--nocapture`.

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use extmon::extnat::{ExtNat, ExtVector};
use extmon::format::system_from_text;
use extmon::hilbert::{brute_solutions, solve_v, solve_w, GeneratorSet};
use extmon::order::{
    self, invariant_report, is_full_affine, minimal_elements, submonoid_member,
    synthesize_equations, unperforated_check, FullAffine, MinimalMode, Perforation,
};
use extmon::realize::{compile, verify, Block, ConstructionTrace, TraceNode};
use extmon::supports::{generators_extended, support_lattice, SupportSet};
use extmon::system::{CongRow, IneqRow, SystemSpec};

fn sys(text: &str) -> SystemSpec {
    system_from_text(text).unwrap()
}

fn xv(s: &str) -> ExtVector {
    s.parse().unwrap()
}

fn gens(vs: &[&str]) -> GeneratorSet {
    let parsed: Vec<ExtVector> = vs.iter().map(|s| xv(s)).collect();
    let dim = parsed[0].dim();
    GeneratorSet::canonical(dim, parsed)
}

/// All vectors over `{0..bound}` in dimension `k`, optionally extended by
/// `inf` as an extra entry value.
fn grid(k: usize, bound: u64, with_inf: bool) -> Vec<ExtVector> {
    let mut entries: Vec<ExtNat> = (0..=bound).map(ExtNat::from).collect();
    if with_inf {
        entries.push(ExtNat::Inf);
    }
    let mut out = Vec::new();
    let mut indices = vec![0usize; k];
    loop {
        out.push(ExtVector::new(indices.iter().map(|&i| entries[i].clone()).collect()));
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
            return out;
        }
    }
}

const GS: &str = "vars 2\nineq 1 0 >= 0 1\n";
const GS_DUAL: &str = "vars 2\nineq 0 1 >= 1 0\n";

/// 24 seeded random small systems: k <= 3, up to 2 congruences with
/// modulus <= 4, up to 2 inequalities, coefficients <= 3.
fn corpus() -> Vec<SystemSpec> {
    let mut rng = StdRng::seed_from_u64(0x0e77_d1ce);
    let mut out = Vec::new();
    while out.len() < 24 {
        let k = rng.gen_range(1..=3usize);
        let coeffs = |rng: &mut StdRng| -> Vec<BigUint> {
            (0..k).map(|_| BigUint::from(rng.gen_range(0..=3u32))).collect()
        };
        let cong_rows: Vec<CongRow> = (0..rng.gen_range(0..=2u32))
            .map(|_| CongRow { coeffs: coeffs(&mut rng), modulus: BigUint::from(rng.gen_range(2..=4u32)) })
            .collect();
        let ineq_rows: Vec<IneqRow> = (0..rng.gen_range(0..=2u32))
            .map(|_| IneqRow { lhs: coeffs(&mut rng), rhs: coeffs(&mut rng) })
            .collect();
        out.push(SystemSpec::build(k, cong_rows, ineq_rows, None).unwrap());
    }
    out
}

/// The systems named by the worked examples, used alongside the random
/// corpus where a criterion asks for them.
fn named_systems() -> Vec<(&'static str, SystemSpec)> {
    let mut out = vec![
        ("order", sys(GS)),
        ("order-dual", sys(GS_DUAL)),
        ("parity", sys("vars 2\ncong 1 1 mod 2\n")),
        ("diagonal", sys("vars 2\neq 1 0 = 0 1\n")),
        ("absorb-right", sys("vars 2\neq 1 1 = 0 2\n")),
        ("absorb-left", sys("vars 2\neq 1 1 = 2 0\n")),
        ("balance", sys("vars 2\neq 2 1 = 1 2\n")),
        ("one-sided", sys("vars 2\neq 2 0 = 1 1\nineq 1 0 >= 0 1\n")),
    ];
    for n in 2..=5u64 {
        out.push(("scaled-free", sys(&format!("vars 2\ncong 1 {} mod {}\n", n - 1, n))));
    }
    for n in 2..=3u64 {
        out.push(("nondivisibility", sys(&format!("vars 2\nunit 1 {}\nineq {} 0 >= 0 1\n", n, n))));
    }
    out
}

#[test]
fn c01_order_monoid_generators() {
    assert_eq!(solve_w(&sys(GS)), gens(&["1 1", "1 0"]));
    assert_eq!(solve_w(&sys(GS_DUAL)), gens(&["1 1", "0 1"]));
    let extended = generators_extended(&sys(GS)).unwrap();
    let expect: Vec<ExtVector> = ["1 0", "1 1", "inf 0", "inf inf"].iter().map(|s| xv(s)).collect();
    assert_eq!(extended.gens(), expect.as_slice(), "canonical order required");
    println!("criterion 1: PASS — order monoid generator sets, exact canonical order");
}

#[test]
fn c02_scaled_free_monoids() {
    for n in 1..=5u64 {
        let s = if n == 1 {
            SystemSpec::trivial(2)
        } else {
            sys(&format!("vars 2\ncong 1 {} mod {}\n", n - 1, n))
        };
        let generators = if n == 1 {
            gens(&["1 1", "1 0", "0 1"])
        } else {
            gens(&["1 1", &format!("{} 0", n), &format!("0 {}", n)])
        };
        for x in grid(2, 3 * n, false) {
            assert_eq!(
                s.is_member(&x),
                submonoid_member(&x, &generators).is_some(),
                "n={n} at {x}"
            );
        }
    }
    println!("criterion 2: PASS — x+(n-1)y ≡ 0 mod n matches <(1,1),(n,0),(0,n)> up to 3n, n=1..5");
}

#[test]
fn c03_two_coordinate_equation_monoids() {
    let cases: Vec<(&str, SystemSpec, GeneratorSet)> = vec![
        ("x=y", sys("vars 2\neq 1 0 = 0 1\n"), gens(&["1 1", "inf inf"])),
        ("x+y=2y", sys("vars 2\neq 1 1 = 0 2\n"), gens(&["1 1", "0 inf", "inf inf"])),
        ("x+y=2x", sys("vars 2\neq 1 1 = 2 0\n"), gens(&["1 1", "inf 0", "inf inf"])),
        ("2x+y=x+2y", sys("vars 2\neq 2 1 = 1 2\n"), gens(&["1 1", "0 inf", "inf 0"])),
    ];
    for (name, s, expected) in cases {
        for x in grid(2, 4, true) {
            assert_eq!(
                s.is_member(&x),
                submonoid_member(&x, &expected).is_some(),
                "{name} at {x}"
            );
        }
        assert_eq!(generators_extended(&s).unwrap(), expected, "{name}");
    }
    println!("criterion 3: PASS — the four equation monoids in two coordinates");
}

#[test]
fn c04_asymmetric_systems() {
    for n in 1..=3u64 {
        let cong = if n >= 2 { format!("cong 1 {} mod {}\n", n - 1, n) } else { String::new() };
        let w_expect = if n == 1 {
            gens(&["1 1", "1 0"])
        } else {
            gens(&["1 1", &format!("{} 0", n)])
        };
        let w_dual_expect = if n == 1 {
            gens(&["1 1", "0 1"])
        } else {
            gens(&["1 1", &format!("0 {}", n)])
        };
        for ineq in ["ineq 1 0 >= 0 1\n", "ineq 2 1 >= 1 2\n", "ineq 1 1 >= 0 2\n"] {
            let s = sys(&format!("vars 2\n{}{}", cong, ineq));
            assert_eq!(solve_w(&s), w_expect, "n={n} {ineq}");
            assert_eq!(solve_w(&s.dual()), w_dual_expect, "n={n} dual {ineq}");
        }
    }
    // The one-sided system: free on one side only, told apart by
    // idempotent counts.
    let s = sys("vars 2\neq 2 0 = 1 1\nineq 1 0 >= 0 1\n");
    assert_eq!(solve_w(&s), gens(&["1 1"]));
    assert_eq!(solve_w(&s.dual()), gens(&["1 1"]));
    let r = invariant_report(&s).unwrap();
    let rd = invariant_report(&s.dual()).unwrap();
    assert_eq!(r.idempotent_count(), 3);
    assert_eq!(rd.idempotent_count(), 2);
    assert!(r.distinguishes(&rd));
    println!("criterion 4: PASS — finite generator lists and the 3-vs-2 idempotent count");
}

#[test]
fn c05_nondivisibility() {
    for n in 2..=3u64 {
        let s = sys(&format!("vars 2\nunit 1 {}\nineq {} 0 >= 0 1\n", n, n));
        let expect: Vec<ExtVector> = (0..=n).map(|y| xv(&format!("1 {}", y))).collect();
        assert_eq!(solve_w(&s).gens(), expect.as_slice(), "n={n}");
        assert_eq!(solve_w(&s.dual()), gens(&["0 1", &format!("1 {}", n)]), "n={n} dual");
        let minimal: Vec<ExtVector> = (0..n).map(|y| xv(&format!("1 {}", y))).collect();
        assert_eq!(minimal_elements(&s, MinimalMode::WMinusV), minimal, "n={n}");
        let r = invariant_report(&s).unwrap();
        let rd = invariant_report(&s.dual()).unwrap();
        assert!(r.distinguishes(&rd), "n={n} must be distinguishable");
    }
    println!("criterion 5: PASS — nx >= y generators, minimal elements, non-isomorphic sides");
}

#[test]
fn c06_not_an_equation_monoid() {
    let s = sys(GS);
    let lattice = support_lattice(&s).unwrap();
    assert_eq!(
        lattice.supports(),
        vec![SupportSet::empty(), SupportSet::new([0]), SupportSet::new([0, 1])]
    );
    let idems = order::idempotents(&s).unwrap();
    assert_eq!(idems, vec![xv("0 0"), xv("inf 0"), xv("inf inf")]);
    assert_eq!(&xv("inf 0") + &xv("inf inf"), xv("inf inf"));
    // Infinite multiples of the finite generators land on the idempotents.
    let c = xv("1 0").inf_multiple();
    let d = xv("1 1").inf_multiple();
    assert_eq!(c, xv("inf 0"));
    assert_eq!(d, xv("inf inf"));
    assert!(s.is_member(&c) && s.is_member(&d));
    println!("criterion 6: PASS — three supports, three idempotents, absorbing sums");
}

#[test]
fn c07_oracle_equivalence() {
    let mut checked = 0usize;
    for s in corpus() {
        let w = solve_w(&s);
        for x in brute_solutions(&s, 6) {
            assert!(
                submonoid_member(&x, &w).is_some(),
                "{x} enumerated but not generated (k={})",
                s.k()
            );
            checked += 1;
        }
        for g in w.iter() {
            let bound = u64::try_from(&g.max_finite()).unwrap();
            assert!(brute_solutions(&s, bound).contains(g), "generator {g} not enumerated");
        }
    }
    assert!(checked > 0);
    println!("criterion 7: PASS — oracle equivalence on 24 random systems, zero failures");
}

#[test]
fn c08_duality_and_reflection() {
    // Intersection law on the random corpus.
    for s in corpus() {
        let v = solve_v(&s);
        let w = solve_w(&s);
        let wd = solve_w(&s.dual());
        for x in grid(s.k(), 6, false) {
            let in_v = submonoid_member(&x, &v).is_some();
            let in_both = submonoid_member(&x, &w).is_some() && submonoid_member(&x, &wd).is_some();
            assert_eq!(in_v, in_both, "at {x}");
        }
    }

    // Reflection through a multiple of the order unit, on every system
    // that has one.
    let mut with_unit = 0usize;
    let mut candidates: Vec<SystemSpec> = corpus();
    candidates.extend(named_systems().into_iter().map(|(_, s)| s));
    for s in candidates {
        let unit = match s.unit() {
            Some(u) => Some(u.to_vec()),
            None => grid(s.k(), 4, false).into_iter().find_map(|x| {
                let fin = x.as_finite().unwrap();
                let positive = fin.iter().all(|c| !num_traits::Zero::is_zero(c));
                (positive && s.classify(&x) == extmon::Classification::V).then_some(fin)
            }),
        };
        let Some(unit) = unit else { continue };
        let s = s.with_unit(unit.clone()).unwrap();
        assert!(extmon::realize::validate_unit(&s).unwrap(), "searched unit must be valid");
        with_unit += 1;
        let u: Vec<u64> = unit.iter().map(|c| u64::try_from(c).unwrap()).collect();
        let dual = s.dual();
        for x in grid(s.k(), 4, false) {
            let xs: Vec<u64> = x.as_finite().unwrap().iter().map(|c| u64::try_from(c).unwrap()).collect();
            let m_star = xs.iter().zip(&u).map(|(x, u)| x.div_ceil(*u)).max().unwrap_or(0);
            let reflected = (0..=m_star).any(|m| {
                let scaled: Vec<u64> = u.iter().map(|c| c * m).collect();
                if xs.iter().zip(&scaled).any(|(x, s)| x > s) {
                    return false;
                }
                let diff: Vec<u64> = scaled.iter().zip(&xs).map(|(s, x)| s - x).collect();
                s.is_member(&ExtVector::from_u64s(&diff))
            });
            assert_eq!(dual.is_member(&x), reflected, "reflection at {x}");
        }
    }
    assert!(with_unit >= 3, "reflection test needs systems with units, found {with_unit}");
    println!("criterion 8: PASS — V = W ∩ W(dual) on the grid; reflection held for {with_unit} systems");
}

#[test]
fn c09_unperforation() {
    for s in corpus() {
        let w = solve_w(&s);
        assert_eq!(unperforated_check(&w, 3, 6), None, "W of a random system must be unperforated");
    }
    let perforated = gens(&["1 1", "2 0", "3 0"]);
    let witness = unperforated_check(&perforated, 3, 6).expect("perforation must be found");
    assert_eq!(witness, Perforation { x: xv("2 0"), y: xv("3 0"), n: 2 });
    println!("criterion 9: PASS — corpus W parts unperforated; documented witness found");
}

#[test]
fn c10_realization_compiler() {
    let mut systems = corpus();
    systems.extend(named_systems().into_iter().map(|(_, s)| s));
    let count = systems.len();
    for s in &systems {
        assert_eq!(verify(&compile(s), s, 4), None, "compile must verify (k={})", s.k());
    }
    // Mutation: swapping the two rows of an order pullback flips the
    // denotation and must be caught with a witness.
    let s = sys(GS);
    let corrupted = ConstructionTrace::new(
        2,
        TraceNode::Intersection(vec![TraceNode::Pullback {
            matrix: vec![
                vec![BigUint::from(0u32), BigUint::from(1u32)],
                vec![BigUint::from(1u32), BigUint::from(0u32)],
            ],
            inner: Box::new(TraceNode::Leaf(Block::Geq)),
        }]),
    );
    let witness = verify(&corrupted, &s, 4).expect("mutation must be detected");
    assert!(
        corrupted.denote(&witness) != s.is_member(&witness)
            || corrupted.dualized().denote(&witness) != s.dual().is_member(&witness)
    );
    println!("criterion 10: PASS — {count} systems verified at bound 4; mutation detected");
}

#[test]
fn c11_full_affine_synthesis() {
    let mut round_trips = 0usize;
    for s in corpus() {
        let v = solve_v(&s);
        assert!(is_full_affine(&v).is_full_affine(), "V of a random system must be full affine");
        let synthesized = synthesize_equations(&v).unwrap();
        assert_eq!(solve_w(&synthesized), v, "synthesis round trip (k={})", s.k());
        round_trips += 1;
    }
    match is_full_affine(&gens(&["1 1", "1 0"])) {
        FullAffine::No { witness } => assert_eq!(witness, xv("0 1")),
        FullAffine::Yes => panic!("order monoid W part is not full affine"),
    }
    println!("criterion 11: PASS — {round_trips} synthesis round trips; witness (0,1) reported");
}
