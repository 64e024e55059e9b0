//! Parse an equation, print it canonically, and evaluate it at a point.

use dioforge::expr::{eval, Assignment, Equation};

fn main() {
    let text = "x^2^y^x + y^(x+3*y) = 5*z^(2*x^2) + x*y*z + 4";
    let eq: Equation = text.parse().expect("valid equation");
    println!("input:     {text}");
    println!("canonical: {eq}");
    println!("as zero:   {} = 0", eq.difference());

    let reparsed: Equation = eq.to_string().parse().unwrap();
    assert_eq!(reparsed, eq);

    let at = Assignment::new()
        .with("x", "1".parse().unwrap())
        .with("y", "1".parse().unwrap())
        .with("z", "1/2".parse().unwrap());
    match eval(&eq.difference(), &at) {
        Ok(v) => println!("lhs - rhs at {}: {v}", at.to_json()),
        Err(e) => println!("lhs - rhs at {}: {e}", at.to_json()),
    }

    for bad in ["x +", "2^", "(x*y", "x = y = z"] {
        println!("{bad:>10} -> {}", Equation::parse(bad).unwrap_err());
    }
}
