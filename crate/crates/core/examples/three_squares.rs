//! Every nonnegative rational is `x1^2 + x2^2 + δ x3^2` with δ = 1 or 2.

use dioforge::arith::{classify_exceptional, three_squares_int, Delta, Rat};
use dioforge::cert;
use dioforge::lemmas::three_squares_rational;

fn main() {
    let exceptional: Vec<(u64, Delta)> = (0..64)
        .flat_map(|n| Delta::ALL.into_iter().map(move |d| (n, d)))
        .filter(|&(n, d)| classify_exceptional(n, d))
        .collect();
    println!("exceptional n < 64: {exceptional:?}");
    println!("7 with δ=2: {:?}", three_squares_int(7, Delta::Two));

    for alpha in ["0", "7", "14", "7/2", "15/8", "112"] {
        let t = three_squares_rational(&alpha.parse::<Rat>().unwrap()).unwrap();
        assert!(t.holds());
        println!("{}", cert::three_squares(&t));
    }
}
