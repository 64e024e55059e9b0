//! One polynomial J_k whose rational roots in x exist iff every A_s is a square.

use dioforge::arith::Rat;
use dioforge::cert;
use dioforge::lemmas::{jk_decision, jk_point};
use dioforge::poly::{jk_cached, jk_expand, w_polynomial};

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn main() {
    println!("J_1 = {}", jk_expand(1).unwrap());
    let w2 = w_polynomial(2).unwrap();
    println!("W for k=2: ({}) over A^{:?}", w2.numerator, w2.denominator_exponents);

    let j2 = jk_cached(2).unwrap();
    println!("J_2: {} terms, degree {} in x", j2.num_terms(), j2.degree_in("x"));
    let j3 = jk_cached(3).unwrap();
    println!("J_3: {} terms, degree {} in x, {} in A1", j3.num_terms(), j3.degree_in("x"), j3.degree_in("A1"));

    for a in [vec!["4", "9/4"], vec!["4", "3"], vec!["1", "25", "49/16"]] {
        let a: Vec<Rat> = a.iter().map(|s| r(s)).collect();
        let d = jk_decision(&a).unwrap();
        println!("{}", cert::jk(&a, &d));
        if let dioforge::lemmas::JkDecision::AllSquares { x, .. } = &d {
            let j = jk_cached(a.len()).unwrap();
            println!("  J at witness = {}", j.eval(&jk_point(&a, x)).unwrap());
        }
    }
}
