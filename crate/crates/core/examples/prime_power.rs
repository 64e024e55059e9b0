//! Values of prime-power products and valuation certificates for claimed values.

use dioforge::arith::Rat;
use dioforge::cert;
use dioforge::lemmas::{integrality_certificate, prime_power_product_value, PrimePowerProduct};

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn main() {
    let cases: [(&[u64], &[&str], &str); 5] = [
        (&[2, 3], &["2", "3"], "108"),
        (&[2, 3], &["2", "3"], "216"),
        (&[2, 3], &["2", "3"], "540"),
        (&[2, 5, 7], &["-1", "2", "0"], "25/2"),
        (&[2], &["1/2"], "3/2"),
    ];
    for (primes, exps, claimed) in cases {
        let pp = PrimePowerProduct::from_u64(primes, exps.iter().map(|e| r(e)).collect()).unwrap();
        let value = prime_power_product_value(&pp).unwrap();
        let claimed = r(claimed);
        let verdict = integrality_certificate(&pp, &claimed).unwrap();
        println!("{}", cert::prime_power(&pp, &value, Some((&claimed, &verdict))));
    }

    // Squaring the exponents keeps rationality exactly when they were integers.
    let pp = PrimePowerProduct::from_u64(&[3, 11], vec![r("-2"), r("1/3")]).unwrap();
    for p in [pp.clone(), pp.squared_exponents()] {
        let shown: Vec<String> = p.exponents().iter().map(Rat::to_string).collect();
        println!("{shown:?} -> {:?}", prime_power_product_value(&p).unwrap());
    }
}
