//! `x^y = y^x` at the rational pairs `((1+1/n)^n, (1+1/n)^(n+1))`.
//!
//! Both sides are irrational for n >= 2, yet the difference is an exact zero.

use dioforge::arith::{rational_pow, Rat};
use dioforge::expr::{eval, Assignment, Equation};

fn main() {
    let eq: Equation = "x^y = y^x".parse().unwrap();
    let diff = eq.difference();
    for n in 1..=10i64 {
        let base = Rat::one() + Rat::new(1, n);
        let x = rational_pow(&base, &Rat::from(n)).unwrap();
        let y = rational_pow(&base, &Rat::from(n + 1)).unwrap();
        let at = Assignment::new().with("x", x.clone()).with("y", y.clone());
        let side = eval(&"x^y".parse().unwrap(), &at);
        println!(
            "n={n:2}  x={x}  y={y}  x^y {}  x^y - y^x = {}",
            if side.is_ok() { "rational" } else { "irrational" },
            eval(&diff, &at).unwrap()
        );
    }
    let at = Assignment::new().with("x", Rat::new(3, 2));
    println!("x^x at 3/2: {:?}", eval(&"x^x".parse().unwrap(), &at));
}
