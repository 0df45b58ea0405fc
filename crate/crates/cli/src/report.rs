//! Machine-readable report envelope shared by every subcommand.

use serde_json::{json, Value};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

/// Wrap a payload in the report envelope. Payload fields round-trip
/// losslessly; timing is metadata and excluded from that guarantee.
pub fn envelope(command: &str, query: Value, payload: Value, started: Instant) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "query": query,
        "report": payload,
        "timing_ms": started.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}
