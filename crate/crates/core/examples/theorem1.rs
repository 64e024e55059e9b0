//! Eight rational unknowns: build the equation for `(x+2)(y+2) = t` at t = 6,
//! lift the solution (0, 1, 0), and verify exactly.

use dioforge::arith::Rat;
use dioforge::expr::Equation;
use dioforge::reduction::{construct_thm1, witness_thm1_for, ReductionInput};

fn main() {
    let f: Equation = "(x+2)*(y+2) - t".parse().unwrap();
    let input = ReductionInput::exponential(f, 6).unwrap();
    let eq = construct_thm1(&input).unwrap();
    let text = eq.equation.to_string();
    println!("unknowns: {:?}", eq.unknowns);
    println!("printed size: {} bytes", text.len());
    println!("head: {}...", &text[..200]);

    let w = witness_thm1_for(&input, &eq, [0, 1, 0]).unwrap();
    println!("witness: {}", w.to_json());
    println!("verify: {}", eq.verify(&w).unwrap());

    let u = w.get("u").unwrap().clone();
    let bumped = w.clone().with("u", u + Rat::one());
    println!("verify with u+1: {}", eq.verify(&bumped).unwrap());

    println!("(0, 0, 0): {}", witness_thm1_for(&input, &eq, [0, 0, 0]).unwrap_err());
}
