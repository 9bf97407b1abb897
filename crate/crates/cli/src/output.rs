//! Deterministic rendering: JSON with sorted keys and fixed-width floats,
//! or an indented plain-text view of the same tree.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Number, Value};

/// Floats are printed with 12 significant digits.
fn fixed_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let text = format!("{x:.11e}");
    text.parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::String(text))
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => fixed_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => {
            let sorted: Map<String, Value> =
                map.into_iter().map(|(k, v)| (k, normalize(v))).collect();
            Value::Object(sorted)
        }
        other => other,
    }
}

pub fn to_tree<T: Serialize>(report: &T) -> Value {
    normalize(serde_json::to_value(report).expect("reports serialize"))
}

pub fn json(tree: &Value) -> String {
    let mut s = serde_json::to_string_pretty(tree).expect("value serializes");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar_text(item) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        write_value(out, item, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) if items.iter().all(|i| scalar_text(i).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar_text).collect();
            writeln!(out, "{pad}[{}]", parts.join(", ")).unwrap();
        }
        Value::Array(items) => {
            for item in items {
                if is_check(item) {
                    write_check(out, item, &pad);
                } else {
                    writeln!(out, "{pad}-").unwrap();
                    write_value(out, item, indent + 1);
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default()).unwrap(),
    }
}

fn is_check(v: &Value) -> bool {
    v.as_object().is_some_and(|m| {
        m.len() == 3 && m.contains_key("name") && m.contains_key("pass") && m.contains_key("detail")
    })
}

fn write_check(out: &mut String, v: &Value, pad: &str) {
    let pass = v["pass"].as_bool().unwrap_or(false);
    let name = v["name"].as_str().unwrap_or_default();
    let detail = v["detail"].as_str().unwrap_or_default();
    writeln!(
        out,
        "{pad}{} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    )
    .unwrap();
}

pub fn text(title: &str, tree: &Value) -> String {
    let mut out = format!("{title}\n");
    write_value(&mut out, tree, 1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_digits() {
        let v = to_tree(&serde_json::json!({"b": 0.1, "a": [1.0e-7, 2]}));
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"a":[1.00000000000e-7,2],"b":1.00000000000e-1}"#
        );
    }

    #[test]
    fn text_marks_checks() {
        let v = serde_json::json!({"checks": [{"name": "x", "pass": false, "detail": "d"}]});
        assert!(text("t", &v).contains("FAIL x: d"));
    }
}
