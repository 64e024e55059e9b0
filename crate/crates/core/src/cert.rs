//! JSON renderings of lemma certificates. Every number is a rational string.

use serde_json::{json, Value};

use crate::arith::Rat;
use crate::lemmas::{
    CertificateVerdict, JkDecision, PellOutcome, PrimePowerProduct, ProductValue, RationalTernary,
    RejectReason,
};

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

pub fn pell(outcome: &PellOutcome) -> Value {
    match outcome {
        PellOutcome::Witness(w) => json!({
            "lemma": "pell",
            "m": w.m.to_string(),
            "x_bar": w.x_bar.to_string(),
            "sqrt": w.square_root.to_string(),
        }),
        PellOutcome::Negative(n) => json!({
            "lemma": "pell",
            "m": n.m.to_string(),
            "refutation": "negative",
            "coefficient": n.coefficient().to_string(),
            "bound": "1 - 2*x^2",
        }),
    }
}

pub fn jk(a: &[Rat], decision: &JkDecision) -> Value {
    match decision {
        JkDecision::AllSquares { roots, w, x } => json!({
            "lemma": "jk",
            "k": a.len().to_string(),
            "A": rats(a),
            "decision": "all-squares",
            "roots": rats(roots),
            "W": w.to_string(),
            "x": x.to_string(),
        }),
        JkDecision::NotAllSquares { index } => json!({
            "lemma": "jk",
            "k": a.len().to_string(),
            "A": rats(a),
            "decision": "not-all-squares",
            "index": (index + 1).to_string(),
        }),
    }
}

pub fn three_squares(t: &RationalTernary) -> Value {
    json!({
        "lemma": "three-squares",
        "alpha": t.alpha.to_string(),
        "delta": t.delta.to_string(),
        "x1": t.x1.to_string(),
        "x2": t.x2.to_string(),
        "x3": t.x3.to_string(),
    })
}

pub fn prime_power(
    pp: &PrimePowerProduct,
    value: &ProductValue,
    check: Option<(&Rat, &CertificateVerdict)>,
) -> Value {
    let mut out = json!({
        "lemma": "prime-power",
        "primes": pp.primes().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "exponents": rats(pp.exponents()),
        "value": match value {
            ProductValue::Rational(r) => Value::String(r.to_string()),
            ProductValue::Irrational => Value::String("irrational".into()),
        },
    });
    if let Some((claimed, verdict)) = check {
        let verdict = match verdict {
            CertificateVerdict::Accept => json!("accept"),
            CertificateVerdict::Reject(RejectReason::NotPositive) => json!({"reject": "not-positive"}),
            CertificateVerdict::Reject(RejectReason::ValuationMismatch { prime, expected, found }) => {
                json!({
                    "reject": "valuation-mismatch",
                    "prime": prime.to_string(),
                    "expected": expected.to_string(),
                    "found": found.to_string(),
                })
            }
            CertificateVerdict::Reject(RejectReason::ForeignFactor(f)) => {
                json!({"reject": "foreign-factor", "factor": f.to_string()})
            }
        };
        out["claimed"] = json!(claimed.to_string());
        out["verdict"] = verdict;
    }
    out
}
