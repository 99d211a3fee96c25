//! Built-in examples: stored invocations and the report fragment each must reproduce.

use serde::Serialize;
use serde_json::{json, Value};

pub struct ExampleRecord {
    pub name: &'static str,
    pub topic: &'static str,
    pub args: Vec<&'static str>,
    /// Must be contained in the report's `result`.
    pub expected: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub pass: bool,
    pub mismatches: Vec<String>,
}

const DM: &str = r#"{"variables": ["x", "y", "z"], "bracket": [["0", "x"], ["y"]]}"#;
const ALPHA: &str = r#"{"variables": ["x", "y", "z"], "bracket": [["0", "-x"], ["y"]]}"#;

pub fn registry() -> Vec<ExampleRecord> {
    vec![
        ExampleRecord {
            name: "dixmier-moeglin-remark",
            topic: "core of a point on the plane z = 0 is the line through it",
            args: vec!["poisson", "core", "--input", DM, "--point", "1,1,0"],
            expected: json!({ "core": ["x - y"], "certified": true }),
        },
        ExampleRecord {
            name: "dixmier-moeglin-casimirs",
            topic: "only constant Casimirs up to degree 6",
            args: vec!["poisson", "casimirs", "--input", DM, "--degree-bound", "6"],
            expected: json!({ "casimirs": ["1"] }),
        },
        ExampleRecord {
            name: "dixmier-moeglin-scaled-line",
            topic: "core line x - (a/b) y",
            args: vec!["poisson", "core", "--input", DM, "--point", "3,1,-1"],
            expected: json!({ "core": ["x - 3*y"], "certified": true }),
        },
        ExampleRecord {
            name: "alpha-leaves-rational",
            topic: "leaves on the level sets of x y",
            args: vec!["poisson", "core", "--input", ALPHA, "--point", "2,3,1"],
            expected: json!({ "core": ["x*y - 6"], "certified": true }),
        },
        ExampleRecord {
            name: "alpha-casimir",
            topic: "x y is a Casimir",
            args: vec!["poisson", "casimirs", "--input", ALPHA, "--degree-bound", "2"],
            expected: json!({ "casimirs": ["x*y", "1"] }),
        },
        ExampleRecord {
            name: "z2-invariants",
            topic: "Kleinian A1 presentation",
            args: vec!["group", "--group", "z2", "invariants"],
            expected: json!({
                "generators": [{ "name": "A", "poly": "x^2" }, { "name": "B", "poly": "x*y" }, { "name": "C", "poly": "y^2" }],
                "relations": ["B^2 - A*C"],
            }),
        },
        ExampleRecord {
            name: "z2-quotient-strata",
            topic: "open stratum closes to the cone, the closed stratum is its vertex",
            args: vec!["vgamma", "--group", "z2", "strata"],
            expected: json!({
                "strata": [
                    { "subgroup_order": 1, "fixed_dim": 2, "j_ideal": ["B^2 - A*C"] },
                    { "subgroup_order": 2, "fixed_dim": 0, "j_ideal": ["A", "B", "C"] },
                ]
            }),
        },
        ExampleRecord {
            name: "z2-fiber-generic",
            topic: "fiber over a smooth point is a full matrix algebra",
            args: vec!["vgamma", "--group", "z2", "fiber", "--point", "1,2"],
            expected: json!({ "tuple": [4, 1, 0, 4] }),
        },
        ExampleRecord {
            name: "z2-fiber-jump",
            topic: "fiber over the cone point",
            args: vec!["vgamma", "--group", "z2", "fiber", "--point", "0,0"],
            expected: json!({ "invariants": { "dim": 6, "radical_dim": 4, "semisimple_dim": 2 } }),
        },
        ExampleRecord {
            name: "weyl-b2-census",
            topic: "parabolic classes versus element classes disagree for B2",
            args: vec!["weyl", "census", "--type", "B", "--rank", "2"],
            expected: json!({
                "agree": false,
                "rows": [
                    { "k": 0, "parabolic": 1, "elements": 1 },
                    { "k": 1, "parabolic": 2, "elements": 2 },
                    { "k": 2, "parabolic": 1, "elements": 2 },
                ]
            }),
        },
        ExampleRecord {
            name: "weyl-a2xa1-census",
            topic: "type A products agree",
            args: vec!["weyl", "census", "--system", "A2xA1"],
            expected: json!({ "agree": true, "order": 12 }),
        },
        ExampleRecord {
            name: "sra-z2-pbw",
            topic: "PBW dimensions 2 C(i+2, 2)",
            args: vec!["sra", "--group", "z2", "--t", "0", "--c", "1", "pbw", "--degree", "2"],
            expected: json!({ "dims": [2, 6, 12], "pass": true }),
        },
        ExampleRecord {
            name: "weyl-algebra-quantization",
            topic: "quantizing the Weyl algebra recovers the symplectic bracket",
            args: vec!["sra", "--group", "trivial", "--t", "formal", "qbracket", "--z1", "x^2", "--z2", "y^2"],
            expected: json!({ "bracket": "4*x*y" }),
        },
        ExampleRecord {
            name: "sra-z2-deformed-center",
            topic: "deformed Kleinian singularity C^2 - 4AB = c^2",
            args: vec!["sra", "--group", "z2", "--t", "0", "--c", "1", "presentation", "--degree", "2"],
            expected: json!({ "relations": ["A*B - 1/4*C^2 + 1/4"], "poisson_valid": true }),
        },
    ]
}

/// Paths where `actual` does not contain `expected`.
pub fn fragment_mismatches(expected: &Value, actual: &Value, path: &str, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let p = format!("{path}/{k}");
                match a.get(k) {
                    Some(av) => fragment_mismatches(ev, av, &p, out),
                    None => out.push(format!("{p}: missing")),
                }
            }
        }
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                out.push(format!("{path}: expected {} items, got {}", e.len(), a.len()));
                return;
            }
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                fragment_mismatches(ev, av, &format!("{path}/{i}"), out);
            }
        }
        (e, a) if e == a => {}
        (e, a) => out.push(format!("{path}: expected {e}, got {a}")),
    }
}

pub fn run_example(ex: &ExampleRecord) -> ExampleOutcome {
    let mut argv = vec!["porder"];
    argv.extend(ex.args.iter().copied());
    let (code, report) = crate::report(argv);
    let mut mismatches = Vec::new();
    if code != 0 {
        mismatches.push(format!("exit code {code}: {}", report.get("error").cloned().unwrap_or(Value::Null)));
    } else {
        fragment_mismatches(&ex.expected, &report["result"], "", &mut mismatches);
    }
    ExampleOutcome { name: ex.name.to_string(), pass: mismatches.is_empty(), mismatches }
}
