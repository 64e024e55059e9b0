//! Ten unknowns, each occurring squared: the product over δ ∈ {1,2}^3.

use dioforge::expr::Equation;
use dioforge::reduction::{
    construct_thm2, thm2_decomposition, thm2_factors, unknowns_only_squared, witness_thm2,
    ReductionInput,
};

fn main() {
    let input = ReductionInput::exponential("(x+2)*(y+2) - t".parse::<Equation>().unwrap(), 6).unwrap();
    let eq = construct_thm2(&input).unwrap();
    println!("unknowns: {:?}", eq.unknowns);
    println!("only squared: {}", unknowns_only_squared(&eq.equation.lhs));
    println!("first factor: {}", thm2_factors(&input).unwrap()[0].1);

    let w = witness_thm2(&input, [0, 1, 0]).unwrap();
    println!("deltas {:?}, witness {}", w.deltas, w.assignment.to_json());
    println!("verify: {}", eq.verify(&w.assignment).unwrap());

    let flipped = w.assignment.clone().with("y2", -w.assignment.get("y2").unwrap().clone());
    println!("verify with y2 negated: {}", eq.verify(&flipped).unwrap());

    let input = ReductionInput::exponential("x - 7*y".parse::<Equation>().unwrap(), 0).unwrap();
    println!("7 = {:?}", thm2_decomposition(7));
    let w = witness_thm2(&input, [7, 1, 0]).unwrap();
    let eq = construct_thm2(&input).unwrap();
    println!("x=7: deltas {:?}, verify {}", w.deltas, eq.verify(&w.assignment).unwrap());
}
