//! Markdown and CSV views of a JSON report.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(cell).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn table_columns(rows: &[Value]) -> Option<Vec<String>> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object()?.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    Some(cols)
}

fn md_table(rows: &[Value], out: &mut String) -> bool {
    let cols = match table_columns(rows) {
        Some(c) if !rows.is_empty() => c,
        _ => return false,
    };
    out.push_str(&format!("| {} |\n", cols.join(" | ")));
    out.push_str(&format!("|{}\n", " --- |".repeat(cols.len())));
    for r in rows {
        let line: Vec<String> = cols.iter().map(|c| cell(r.get(c).unwrap_or(&Value::Null)).replace('|', "\\|")).collect();
        out.push_str(&format!("| {} |\n", line.join(" | ")));
    }
    true
}

fn md_object(v: &Value, depth: usize, out: &mut String) {
    let Some(obj) = v.as_object() else {
        out.push_str(&format!("{}\n", cell(v)));
        return;
    };
    for (k, val) in obj {
        match val {
            Value::Object(_) => {
                out.push_str(&format!("\n{} {k}\n\n", "#".repeat(depth + 1)));
                md_object(val, depth + 1, out);
            }
            Value::Array(a) if a.iter().any(Value::is_object) => {
                out.push_str(&format!("\n{} {k}\n\n", "#".repeat(depth + 1)));
                if !md_table(a, out) {
                    out.push_str(&format!("{}\n", val));
                }
            }
            _ => out.push_str(&format!("- **{k}**: {}\n", cell(val))),
        }
    }
}

pub fn markdown(report: &Value) -> String {
    let mut out = format!("# {}\n\n", report.get("command").and_then(Value::as_str).unwrap_or("report"));
    md_object(report, 1, &mut out);
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The first array of records in the result becomes the table; otherwise
/// `key,value` rows of the result.
pub fn csv(report: &Value) -> String {
    let result = report.get("result").or_else(|| report.get("error")).unwrap_or(report);
    let mut out = String::new();
    if let Some(obj) = result.as_object() {
        for val in obj.values() {
            if let Value::Array(rows) = val {
                if let Some(cols) = table_columns(rows).filter(|c| !c.is_empty() && !rows.is_empty()) {
                    out.push_str(&cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                    out.push('\n');
                    for r in rows {
                        let line: Vec<String> = cols.iter().map(|c| csv_field(&cell(r.get(c).unwrap_or(&Value::Null)))).collect();
                        out.push_str(&line.join(","));
                        out.push('\n');
                    }
                    return out;
                }
            }
        }
        out.push_str("key,value\n");
        for (k, v) in obj {
            out.push_str(&format!("{},{}\n", csv_field(k), csv_field(&cell(v))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tables() {
        let r = json!({ "command": "weyl census", "result": { "rows": [{ "k": 0, "p": 1 }, { "k": 1, "p": 2 }] } });
        assert_eq!(csv(&r), "k,p\n0,1\n1,2\n");
        let md = markdown(&r);
        assert!(md.contains("| k | p |"));
        assert!(md.starts_with("# weyl census"));
    }
}
