use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use bgpres::area::{corridor_area, min_area, AreaOutcome, AreaQuery, NoBound};
use bgpres::bs::{bs_eval, BsElement};
use bgpres::family::make_mu0;
use bgpres::hnn::{is_trivial_in_g, HnnSpec};
use bgpres::tietze::{apply_move, replay, AreaLedger, Presentation, TietzeMove};
use bgpres::word::{free_reduce, Gen, Letter, RawWord, Word};

fn letter(gens: &'static [Gen]) -> impl Strategy<Value = Letter> {
    (0..gens.len(), prop::bool::ANY).prop_map(move |(g, s)| Letter::new(gens[g], if s { 1 } else { -1 }))
}

fn letters(gens: &'static [Gen], max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(gens), 0..=max)
}

const XY: &[Gen] = &[Gen::X, Gen::Y];
const XYT: &[Gen] = &[Gen::X, Gen::Y, Gen::T];

/// `s -> scale·s + shift` as exact rationals.
#[derive(Clone, Debug, PartialEq)]
struct Affine {
    scale: BigRational,
    shift: BigRational,
}

impl Affine {
    fn of(l: Letter) -> Affine {
        let half = BigRational::new(1.into(), 2.into());
        let two = BigRational::from_integer(2.into());
        match (l.gen, l.sign) {
            (Gen::X, s) => Affine {
                scale: BigRational::one(),
                shift: BigRational::from_integer(s.into()),
            },
            (Gen::Y, 1) => Affine {
                scale: half,
                shift: BigRational::zero(),
            },
            (Gen::Y, _) => Affine {
                scale: two,
                shift: BigRational::zero(),
            },
            _ => unreachable!("base letters only"),
        }
    }

    /// `self ∘ o`.
    fn then(&self, o: &Affine) -> Affine {
        Affine {
            scale: &self.scale * &o.scale,
            shift: &self.scale * &o.shift + &self.shift,
        }
    }

    fn from_element(e: &BsElement) -> Affine {
        let (num, exp) = e.a.as_fraction(1 << 20).expect("small");
        let k: i64 = e.k.clone().try_into().expect("small");
        let scale = if k >= 0 {
            BigRational::new(1.into(), BigInt::from(1) << k)
        } else {
            BigRational::from_integer(BigInt::from(1) << (-k))
        };
        Affine {
            scale,
            shift: BigRational::new(num, BigInt::from(1) << exp),
        }
    }
}

fn eval_affine(w: &[Letter]) -> Affine {
    w.iter().fold(
        Affine {
            scale: BigRational::one(),
            shift: BigRational::zero(),
        },
        |acc, &l| acc.then(&Affine::of(l)),
    )
}

fn area_bfs(w: &Word, p: &Presentation, max_area: u64) -> Option<u64> {
    let q = AreaQuery::new(w.clone(), p.clone(), max_area, 24);
    min_area(&q, &NoBound).unwrap().area()
}

/// Product of conjugates `c r^±1 c^-1` of relators of `p`.
fn conjugate_product(p: &Presentation, terms: &[(usize, bool, Vec<Letter>)]) -> Word {
    let mut out = Vec::new();
    for (i, inv, c) in terms {
        let r = &p.relators[i % p.relators.len()];
        let r = if *inv { r.inverse() } else { r.clone() };
        out.extend(c.iter().copied());
        out.extend(r.0);
        out.extend(c.iter().rev().map(|l| l.inverse()));
    }
    free_reduce(&out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_associative(a in letters(XYT, 12), b in letters(XYT, 12), c in letters(XYT, 12)) {
        let ab = free_reduce(&[a.clone(), b.clone()].concat());
        let bc = free_reduce(&[b.clone(), c.clone()].concat());
        prop_assert_eq!(ab.mul(&free_reduce(&c)), free_reduce(&a).mul(&bc));
    }

    #[test]
    fn inverse_cancels(a in letters(XYT, 16)) {
        let w = free_reduce(&a);
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn bs_eval_matches_affine_maps(a in letters(XY, 24)) {
        let budget = HnnSpec::default().budget;
        let e = bs_eval(&free_reduce(&a), &budget).unwrap();
        prop_assert_eq!(Affine::from_element(&e), eval_affine(&a));
    }

    #[test]
    fn bs_product_matches_composition(a in letters(XY, 12), b in letters(XY, 12)) {
        let budget = HnnSpec::default().budget;
        let (wa, wb) = (free_reduce(&a), free_reduce(&b));
        let ea = bs_eval(&wa, &budget).unwrap();
        let eb = bs_eval(&wb, &budget).unwrap();
        prop_assert_eq!(ea.mul(&eb, &budget).unwrap(), bs_eval(&wa.mul(&wb), &budget).unwrap());
        prop_assert!(ea.mul(&ea.inverse(), &budget).unwrap().is_identity());
    }

    #[test]
    fn conjugate_products_are_trivial(terms in prop::collection::vec((0usize..2, prop::bool::ANY, letters(XYT, 3)), 1..4)) {
        let w = conjugate_product(&make_mu0(), &terms);
        prop_assert!(is_trivial_in_g(&w, &HnnSpec::default()).unwrap());
    }

    #[test]
    fn op3_twice_is_identity(rels in prop::collection::vec(letters(XY, 6), 1..4), i in 0usize..4) {
        let p = Presentation::new(vec![Gen::X, Gen::Y], rels.into_iter().map(RawWord).collect()).unwrap();
        let i = i % p.relators.len();
        let q = apply_move(&apply_move(&p, &TietzeMove::Op3 { i }).unwrap(), &TietzeMove::Op3 { i }).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn full_rotation_is_identity(rel in letters(XY, 8)) {
        let p = Presentation::new(vec![Gen::X, Gen::Y], vec![RawWord(rel.clone())]).unwrap();
        let q = apply_move(&p, &TietzeMove::Op2 { i: 0, rot: rel.len() }).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn ledger_halves_per_op4(ops in prop::collection::vec(0u8..3, 0..8)) {
        let p: Presentation = "gens: x y\nrel: x y\nrel: y X\n".parse().unwrap();
        let script: Vec<TietzeMove> = ops
            .iter()
            .map(|o| match o {
                0 => TietzeMove::Op4 { i: 0, j: 1 },
                1 => TietzeMove::Op3 { i: 1 },
                _ => TietzeMove::Op2 { i: 0, rot: 1 },
            })
            .collect();
        let (_, ledger): (Presentation, AreaLedger) = replay(&p, &script, None).unwrap();
        let op4 = ops.iter().filter(|&&o| o == 0).count();
        let expected = BigRational::new(1.into(), BigInt::from(1) << op4);
        prop_assert_eq!(&ledger.factor, &expected);
        prop_assert_eq!(ledger.op4_count(), op4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corridor_area_matches_bfs(terms in prop::collection::vec((0usize..2, prop::bool::ANY, letters(XYT, 2)), 1..3)) {
        let mu0 = make_mu0();
        let w = conjugate_product(&mu0, &terms);
        prop_assume!(w.length() <= BigInt::from(14));
        let bfs = area_bfs(&w, &mu0, 3);
        let letters = w.to_letters(64).unwrap();
        let corridor = corridor_area(&letters, &HnnSpec::default()).unwrap();
        if let Some(b) = bfs {
            prop_assert_eq!(corridor, Some(b));
        }
    }

    #[test]
    fn area_is_invariant_under_inverse_and_rotation(terms in prop::collection::vec((0usize..2, prop::bool::ANY, letters(XYT, 2)), 1..3), k in 0usize..16) {
        let mu0 = make_mu0();
        let w = conjugate_product(&mu0, &terms);
        prop_assume!(!w.is_empty() && w.length() <= BigInt::from(14));
        let spec = HnnSpec::default();
        let letters = w.to_letters(64).unwrap();
        let base = corridor_area(&letters, &spec).unwrap();
        let inv: Vec<Letter> = letters.iter().rev().map(|l| l.inverse()).collect();
        prop_assert_eq!(corridor_area(&free_reduce(&inv).to_letters(64).unwrap(), &spec).unwrap(), base);
        let mut rot = letters.clone();
        rot.rotate_left(k % letters.len());
        prop_assert_eq!(corridor_area(&free_reduce(&rot).to_letters(64).unwrap(), &spec).unwrap(), base);
    }

    #[test]
    fn op4_changes_area_by_at_most_two(
        r0 in letters(XY, 3),
        r1 in letters(XY, 3),
        terms in prop::collection::vec((0usize..2, prop::bool::ANY, letters(XY, 1)), 1..3),
    ) {
        prop_assume!(!r0.is_empty() && !r1.is_empty());
        let p = Presentation::new(vec![Gen::X, Gen::Y], vec![RawWord(r0), RawWord(r1)]).unwrap();
        let q = apply_move(&p, &TietzeMove::Op4 { i: 0, j: 1 }).unwrap();
        let w = conjugate_product(&p, &terms);
        if let (Some(a), Some(b)) = (area_bfs(&w, &p, 4), area_bfs(&w, &q, 4)) {
            prop_assert!(b <= 2 * a && a <= 2 * b, "areas {} and {}", a, b);
        }
    }
}

#[test]
fn outcome_reports_area() {
    let mu0 = make_mu0();
    let w: Word = "Y x y X^2".parse().unwrap();
    match min_area(&AreaQuery::new(w, mu0, 2, 8), &NoBound).unwrap() {
        AreaOutcome::Found { area, .. } => assert_eq!(area, 1),
        other => panic!("{other}"),
    }
}
