//! Reports: canonical JSON and a plain text rendering.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Valid,
    Invalid,
    Computed,
    Certified,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Valid => "valid",
            Status::Invalid => "invalid",
            Status::Computed => "computed",
            Status::Certified => "certified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Valid | Status::Computed | Status::Certified => 0,
            Status::Invalid | Status::Refuted => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn from_verdict(v: crate::homotopy::Verdict) -> Status {
        match v {
            crate::homotopy::Verdict::Certified => Status::Certified,
            crate::homotopy::Verdict::Refuted => Status::Refuted,
            crate::homotopy::Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

/// Keys sorted at every level, whatever map type serde_json was built with.
pub fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        v => v.clone(),
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonical(v)).expect("serializable");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for k in keys {
                match scalar(&m[k]) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(&m[k], indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        v => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": {"d": [1, 2], "c": "x"}});
        assert_eq!(to_json(&v), "{\n  \"a\": {\n    \"c\": \"x\",\n    \"d\": [\n      1,\n      2\n    ]\n  },\n  \"b\": 1\n}\n");
        assert_eq!(to_text(&v), "a:\n  c: x\n  d: [1, 2]\nb: 1\n");
    }
}
