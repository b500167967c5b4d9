//! JSON rendering with every float printed to 17 significant digits
//! (`{:.16e}`), which is exactly enough to round-trip an f64 bit for bit.
//!
//! serde_json's default writer uses shortest-round-trip notation instead;
//! the CLI contract pins 17 digits, so values are serialized to a
//! `serde_json::Value` first and printed here. Non-finite floats have no
//! JSON representation and arrive as `null` (the human-readable companion
//! strings carry `"0"`/`"inf"` where relevant).

use serde_json::Value;

pub fn to_string_pretty(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out.push('\n');
    out
}

fn render(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().expect("number is i64, u64 or f64");
                out.push_str(&format!("{x:.16e}"));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 1, out);
                render(item, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push_str(": ");
                render(v, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}
