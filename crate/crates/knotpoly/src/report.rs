//! Machine-readable run reports. JSON output is deterministic byte-for-byte
//! for identical inputs: serde_json's default map keeps keys sorted, and
//! every payload value has one canonical encoding.

use crate::field::Scalar;
use crate::laurent::{LaurentPoly, RationalExpr};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

/// One CLI invocation's result envelope.
#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    /// path -> sha256 of every input file consumed
    pub inputs: Vec<(String, String)>,
    pub result: Value,
    pub normalization: String,
    pub status: String,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            result: Value::Null,
            normalization: String::new(),
            status: "ok".into(),
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.inputs
            .push((path.display().to_string(), hex::encode(hasher.finalize())));
    }

    pub fn to_json(&self) -> Value {
        let mut inputs = Map::new();
        for (path, hash) in &self.inputs {
            inputs.insert(path.clone(), json!({ "sha256": hash }));
        }
        json!({
            "command": self.command,
            "inputs": Value::Object(inputs),
            "normalization": self.normalization,
            "result": self.result,
            "status": self.status,
        })
    }
}

/// A scalar as a JSON value: integers as numbers when they fit, everything
/// else as a canonical string.
pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Fp { v, .. } => json!(v),
        Scalar::Q(r) => {
            if r.denom() == &num_bigint::BigInt::from(1) {
                if let Some(n) = r.numer().to_i64() {
                    return json!(n);
                }
            }
            json!(s.to_string())
        }
    }
}

/// Polynomial as ascending `[degree, coefficient]` pairs, zeros omitted.
pub fn poly_json(p: &LaurentPoly) -> Value {
    Value::Array(
        p.iter_terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(deg, c)| json!([deg, scalar_json(c)]))
            .collect(),
    )
}

pub fn ratexpr_json(e: &RationalExpr) -> Value {
    json!({
        "num": poly_json(e.num()),
        "den": poly_json(e.den()),
    })
}
