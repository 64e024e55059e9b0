//! The sign of an integer m through `(4m+2)x^2 + 1 = square`.

use num_bigint::BigInt;

use dioforge::cert;
use dioforge::lemmas::{nonneg_witness_pell, PellOutcome};

fn main() {
    for m in [-3i64, -1, 0, 1, 2, 5, 15, 30] {
        let outcome = nonneg_witness_pell(&BigInt::from(m));
        let ok = match &outcome {
            PellOutcome::Witness(w) => w.holds(),
            PellOutcome::Negative(n) => n.coefficient() < BigInt::from(0),
        };
        println!("{} checks={ok}", cert::pell(&outcome));
    }
}
