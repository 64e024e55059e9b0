//! Eleven unknowns from a polynomial Q(t, x1..x10) and ten primes.

use dioforge::arith::Rat;
use dioforge::expr::Assignment;
use dioforge::poly::MPoly;
use dioforge::reduction::{construct_thm3, ReductionInput, DEFAULT_PRIMES, THM3_UNKNOWNS};

fn main() {
    let q: MPoly = "x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8 + x9 + x10 - t*x10".parse().unwrap();
    let input = ReductionInput::polynomial(q, 10, None).unwrap();
    let eq = construct_thm3(&input).unwrap();
    println!("{}", eq.equation);

    let prod: u64 = DEFAULT_PRIMES.iter().product();
    let mut a = Assignment::new().with("x0", Rat::new(1, prod));
    for v in &THM3_UNKNOWNS[1..] {
        a.insert(*v, Rat::one());
    }
    println!("at {}: {}", a.to_json(), eq.verify(&a).unwrap());
}
