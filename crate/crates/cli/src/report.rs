//! JSON report helpers. Reports are `serde_json::Value` maps, so keys come out
//! sorted; floats carry 17 significant digits; nothing run-dependent (timing,
//! thread count) is ever recorded.

use std::path::Path;

use anyhow::{Context, Result};
use num_rational::Ratio;
use ppf_core::{DoQuad, Fe, FieldCtx};
use serde_json::{json, Map, Value};

pub const TOOL: &str = "ppf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Listings longer than this are only written to an `--out` file.
pub const LISTING_LIMIT: usize = 10_000;

pub fn hex(x: Fe) -> String {
    format!("0x{:x}", x.0)
}

/// `"p/q"`, or `"p"` for integers.
pub fn ratio(r: Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `x` with 17 significant digits.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str(&format!("{x:.16e}")).expect("a formatted float is valid JSON")
}

pub fn field_info(ctx: &FieldCtx) -> Value {
    json!({
        "n": ctx.n(),
        "poly": format!("0x{:x}", ctx.poly()),
        "m": ctx.split().map(|s| s.m),
    })
}

pub fn function_info(spec: &str, f: &DoQuad) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(&(i, j), &c)| json!([i, j, hex(c)]))
        .collect();
    json!({ "spec": spec, "terms": terms })
}

/// A report skeleton with the tool, version and command.
pub fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!(TOOL));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
