//! Certificate re-verification: parse a stored certificate strictly,
//! recompute every field from its inputs and seed, and diff the two.

use std::path::Path;

use serde_json::Value;

use ulrich_core::forge::{certify, certify_counterexample, UlrichCertificate};
use ulrich_core::fp::FieldPrime;
use ulrich_core::picard::{Divisor, SurfaceParams};

use crate::{fail, EXIT_NOT_ULRICH, EXIT_OK, EXIT_SCHEMA_MISMATCH};

pub fn cmd_verify(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => {
            return fail(
                EXIT_SCHEMA_MISMATCH,
                &format!("reading {}: {err}", path.display()),
            )
        }
    };
    let stored: UlrichCertificate = match serde_json::from_str(&text) {
        Ok(cert) => cert,
        Err(err) => {
            return fail(
                EXIT_SCHEMA_MISMATCH,
                &format!("certificate schema mismatch: {err}"),
            )
        }
    };
    if stored.e < 0 || stored.e > i64::from(u32::MAX) {
        return fail(
            EXIT_SCHEMA_MISMATCH,
            "certificate surface invariant is out of range",
        );
    }
    let field = match FieldPrime::new(stored.p) {
        Ok(f) => f,
        Err(err) => return fail(EXIT_SCHEMA_MISMATCH, &err.to_string()),
    };
    let recomputed = if let Some(cx) = stored.counterexample {
        certify_counterexample(cx.d, cx.u, field)
    } else {
        let e = SurfaceParams::new(stored.e as u32);
        let c1 = Divisor::new(stored.c1.alpha, stored.c1.beta);
        certify(e, stored.h, stored.r, c1, stored.kind, field, stored.seed)
    };
    let recomputed = match recomputed {
        Ok(cert) => cert,
        Err(err) => {
            return fail(
                EXIT_NOT_ULRICH,
                &format!("stored inputs no longer produce a certificate: {err}"),
            )
        }
    };
    let stored_value = serde_json::to_value(&stored).unwrap();
    let recomputed_value = serde_json::to_value(&recomputed).unwrap();
    if stored_value == recomputed_value {
        println!("certificate verifies: all fields match the recomputation");
        return EXIT_OK;
    }
    eprintln!("certificate mismatch:");
    diff_values("", &stored_value, &recomputed_value);
    EXIT_NOT_ULRICH
}

/// Field-level diff of two JSON values, printing one line per divergence.
fn diff_values(path: &str, stored: &Value, recomputed: &Value) {
    match (stored, recomputed) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for key in keys {
                let sub = format!("{path}/{key}");
                match (a.get(key), b.get(key)) {
                    (Some(x), Some(y)) => diff_values(&sub, x, y),
                    (Some(x), None) => eprintln!("  {sub}: stored {x}, recomputation omits it"),
                    (None, Some(y)) => eprintln!("  {sub}: missing, recomputed {y}"),
                    (None, None) => unreachable!(),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff_values(&format!("{path}[{i}]"), x, y);
            }
        }
        (a, b) if a != b => eprintln!("  {path}: stored {a}, recomputed {b}"),
        _ => {}
    }
}
