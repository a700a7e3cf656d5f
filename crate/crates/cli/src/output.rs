//! Deterministic output: CSV (UTF-8, comma separated, header row, LF line
//! endings) and JSON (`{config, results, metadata}`). Numbers are written in
//! Rust's shortest round-trip form; log-domain quantities stay logs.

use std::io::Write;

use serde::Serialize;

use crate::config::EffectiveModel;

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    version: &'a str,
}

#[derive(Serialize)]
struct JsonDoc<'a, R: Serialize> {
    config: &'a serde_json::Value,
    results: R,
    metadata: Metadata<'a>,
}

pub fn json_document<R: Serialize>(
    command: &str,
    effective: &EffectiveModel,
    extra_config: &[(&str, serde_json::Value)],
    results: R,
) -> String {
    let mut config = serde_json::to_value(effective).expect("config serializes");
    if let serde_json::Value::Object(map) = &mut config {
        for (k, v) in extra_config {
            map.insert((*k).to_string(), v.clone());
        }
    }
    let doc = JsonDoc {
        config: &config,
        results,
        metadata: Metadata {
            command,
            version: env!("CARGO_PKG_VERSION"),
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

/// Serialize rows as CSV using each row's JSON field order for the header.
pub fn csv_table<R: Serialize>(rows: &[R]) -> String {
    let mut out = String::new();
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| serde_json::to_value(r).expect("row serializes"))
        .collect();
    if let Some(serde_json::Value::Object(first)) = values.first() {
        let headers: Vec<&String> = first.keys().collect();
        out.push_str(
            &headers
                .iter()
                .map(|h| h.as_str())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for v in &values {
            if let serde_json::Value::Object(map) = v {
                let line: Vec<String> = map.values().map(render_value).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
    }
    out
}

fn render_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => {
            // shortest round-trip via Rust's float formatter
            if let Some(f) = n.as_f64() {
                format!("{f}")
            } else {
                n.to_string()
            }
        }
        serde_json::Value::Null => "NaN".to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(out: Option<&std::path::Path>, content: &str) -> Result<(), String> {
    match out {
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| format!("write to stdout failed: {e}"))
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("write to {} failed: {e}", path.display())),
    }
}
