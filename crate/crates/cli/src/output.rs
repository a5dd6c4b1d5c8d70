//! Rendering of command documents as JSON, text or CSV.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Text => flatten(doc).into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        Format::Csv => match doc.pointer("/result/rows") {
            Some(Value::Array(rows)) if rows.iter().all(Value::is_object) => table(rows),
            _ => {
                let mut out = String::from("key,value\n");
                for (k, v) in flatten(doc) {
                    out.push_str(&format!("{},{}\n", quote(&k), quote(&v)));
                }
                out
            }
        },
    }
}

/// Leaf values keyed by dotted paths, array entries by index.
fn flatten(doc: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(doc, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    let leaf = path.clone();
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                walk(child, join(k), out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push((leaf.clone(), "[]".into()));
            }
            for (i, child) in items.iter().enumerate() {
                walk(child, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((leaf, s.clone())),
        Value::Null => out.push((leaf, "null".into())),
        other => out.push((leaf, other.to_string())),
    }
}

fn table(rows: &[Value]) -> String {
    let header: Vec<String> = rows
        .first()
        .and_then(Value::as_object)
        .map(|m| m.keys().cloned().collect())
        .unwrap_or_default();
    let mut out = header.iter().map(|h| quote(h)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = header
            .iter()
            .map(|h| match &row[h] {
                Value::String(s) => quote(s),
                Value::Null => String::new(),
                other => quote(&other.to_string()),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_and_csv() {
        let doc = json!({ "command": "x", "result": { "terms": ["1", "2"], "ok": true } });
        assert_eq!(render(&doc, Format::Text), "command: x\nresult.ok: true\nresult.terms.0: 1\nresult.terms.1: 2\n");
        let rows = json!({ "result": { "rows": [{ "n": 0, "v": "a,b" }, { "n": 1, "v": "c" }] } });
        assert_eq!(render(&rows, Format::Csv), "n,v\n0,\"a,b\"\n1,c\n");
    }
}
