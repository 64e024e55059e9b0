use proptest::prelude::*;

use dioforge::arith::Rat;
use dioforge::expr::{Assignment, Equation};
use dioforge::poly::MPoly;
use dioforge::reduction::*;

/// `(f, [(a, sol)])` with every `sol` a natural solution of `f(a, ·) = 0`.
const FIXTURES: &[(&str, &[(u64, [u64; 3])])] = &[
    ("(x+2)*(y+2) - t", &[(6, [0, 1, 0]), (6, [1, 0, 0]), (18, [7, 0, 0]), (12, [1, 2, 0]), (18, [4, 1, 3])]),
    ("x + y + z = t", &[(0, [0, 0, 0]), (5, [2, 2, 1]), (3, [0, 3, 0]), (7, [7, 0, 0])]),
    ("x^y = t", &[(8, [2, 3, 0]), (1, [5, 0, 3]), (9, [3, 2, 1])]),
    ("2^x + 3^y = t + z*z", &[(5, [1, 1, 0]), (13, [2, 2, 0]), (10, [3, 1, 1])]),
    ("x*x - 2*y*y = t", &[(1, [3, 2, 0]), (1, [1, 0, 5]), (7, [3, 1, 0])]),
    ("t*x = y*z + 1", &[(3, [1, 1, 2]), (2, [5, 9, 1])]),
];

fn input(f: &str, a: u64) -> ReductionInput {
    ReductionInput::exponential(Equation::parse(f).unwrap(), a).unwrap()
}

fn sorted(names: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

#[test]
fn fixture_suite_is_large_enough() {
    assert!(FIXTURES.len() >= 5);
    assert!(FIXTURES.iter().map(|(_, p)| p.len()).sum::<usize>() >= 20);
    for (f, pairs) in FIXTURES {
        for &(a, sol) in *pairs {
            assert!(input(f, a).is_solution(sol).unwrap(), "{f} at {a}: {sol:?}");
        }
    }
}

#[test]
fn thm1_soundness_over_fixtures() {
    for (f, pairs) in FIXTURES {
        for &(a, sol) in *pairs {
            let inp = input(f, a);
            let eq = construct_thm1(&inp).unwrap();
            assert_eq!(unknowns_of(&eq), sorted(&THM1_UNKNOWNS));
            let w = witness_thm1_for(&inp, &eq, sol).unwrap();
            assert_eq!(eq.verify(&w).unwrap(), Verdict::Zero, "{f} at {a}: {sol:?}");
        }
    }
}

#[test]
fn thm2_soundness_over_fixtures() {
    for (f, pairs) in FIXTURES {
        for &(a, sol) in *pairs {
            let inp = input(f, a);
            let eq = construct_thm2(&inp).unwrap();
            assert_eq!(unknowns_of(&eq), sorted(&THM2_UNKNOWNS));
            assert!(unknowns_only_squared(&eq.equation.lhs));
            let w = witness_thm2(&inp, sol).unwrap();
            assert_eq!(eq.verify(&w.assignment).unwrap(), Verdict::Zero, "{f} at {a}: {sol:?}");
        }
    }
}

#[test]
fn non_solutions_are_refused() {
    let inp = input("(x+2)*(y+2) - t", 6);
    assert_eq!(witness_thm1(&inp, [0, 0, 0]).unwrap_err(), ReductionError::NotASolution(0, 0, 0));
    assert_eq!(witness_thm2(&inp, [2, 2, 2]).unwrap_err(), ReductionError::NotASolution(2, 2, 2));
}

#[test]
fn thm1_powers_stay_in_the_nonnegative_domain() {
    let eq = construct_thm1(&input("x*y + z = t", 8)).unwrap();
    assert!(powers_are_manifestly_nonnegative(&eq.equation.lhs));
    // Any rational point evaluates without a domain violation, including
    // points where a Pell argument (4x+2)*xb*xb + 1 vanishes.
    let at = Assignment::new()
        .with("x", Rat::new(-3, 4))
        .with("y", Rat::from(-2))
        .with("z", Rat::new(1, 2))
        .with("xb", Rat::one())
        .with("yb", Rat::new(-1, 3))
        .with("zb", Rat::from(2))
        .with("u", Rat::new(5, 7))
        .with("v", Rat::from(-1));
    assert!(matches!(eq.verify(&at).unwrap(), Verdict::NonZero(_) | Verdict::NotRational));
}

#[test]
fn thm1_witness_matches_hand_values() {
    let w = witness_thm1(&input("(x+2)*(y+2) - t", 6), [0, 1, 0]).unwrap();
    // m = 0 and m = 1 both have x_bar = 2: 2*4 + 1 = 9, 6*4 + 1 = 25.
    for b in ["xb", "yb", "zb"] {
        assert_eq!(w.get(b), Some(&Rat::from(2)));
    }
    // u = 1 / (8 * 3 * 7^4 * 11^4 * 13^4)
    let tower = 8u64 * 3 * 7u64.pow(4) * 11u64.pow(4) * 13u64.pow(4);
    assert_eq!(w.get("u"), Some(&Rat::new(1, tower)));
    // v = -(3 + 5W + 3W^2), W = (3 + 81 + 625 + 81)(1 + 1/81 + 1/625 + 1/81)
    let wv = Rat::from(790) * (Rat::one() + Rat::new(2, 81) + Rat::new(1, 625));
    let v = -(Rat::from(3) + Rat::from(5) * &wv + Rat::from(3) * wv.square());
    assert_eq!(w.get("v"), Some(&v));
}

#[test]
fn thm3_rejects_bad_inputs_and_counts_unknowns() {
    let q: MPoly = "t*x1 - x2*x3 + x10".parse().unwrap();
    let ok = ReductionInput::polynomial(q.clone(), 4, Some(vec![31, 37, 41, 43, 47, 53, 59, 61, 67, 71])).unwrap();
    let eq = construct_thm3(&ok).unwrap();
    assert_eq!(unknowns_of(&eq), sorted(&THM3_UNKNOWNS));
    assert!(eq.equation.to_string().contains("31^(x1*x1)*37^(x2*x2)"));
    assert!(matches!(
        ReductionInput::polynomial(q, 4, Some(vec![31, 37, 41, 43, 47, 53, 59, 61, 67, 72])),
        Err(ReductionError::BadPrimes(_))
    ));
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Rat::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thm2_is_even_in_every_unknown(values in prop::collection::vec(small_rat(), 10), flip in 0usize..10) {
        let eq = construct_thm2(&input("x + y - z*t", 2)).unwrap();
        let point: Assignment = THM2_UNKNOWNS.iter().zip(&values).map(|(n, v)| (n.to_string(), v.clone())).collect();
        let name = THM2_UNKNOWNS[flip];
        let flipped = point.clone().with(name, -values[flip].clone());
        prop_assert_eq!(eq.verify(&point).unwrap(), eq.verify(&flipped).unwrap());
    }

    #[test]
    fn thm3_tower_vanishing_needs_q(values in prop::collection::vec(-2i64..=2, 10)) {
        let q: MPoly = "x1 + x2 - t".parse().unwrap();
        let eq = construct_thm3(&ReductionInput::polynomial(q, 1, None).unwrap()).unwrap();
        let mut at = Assignment::new().with("x0", Rat::one());
        for (n, v) in THM3_UNKNOWNS[1..].iter().zip(&values) {
            at.insert(*n, Rat::from(*v));
        }
        let zero = eq.verify(&at).unwrap() == Verdict::Zero;
        prop_assert!(!zero || values[0] + values[1] == 1);
    }
}
