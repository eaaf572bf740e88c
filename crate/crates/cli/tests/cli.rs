use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn rankp(doc: &str, args: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rankp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rankp");
    child.stdin.take().unwrap().write_all(doc.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_valid(schema: &jsonschema::JSONSchema, r: &Value) {
    if let Err(errs) = schema.validate(r) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("record {r} violates the schema: {msgs:?}");
    }
}

const MIXED: &str = "\
mode mixed p=3
u = 1 + l^3 * T^-1
classify u
classify T^2
lift mu_p t^2 + 1
lift etale 1/t
filtration u, T^2, 1 + T
selftest 4
";

#[test]
fn classify_examples() {
    let out = rankp("mode mixed p=3\nclassify 1 + l^3*T^-1\nclassify T^2\n", &["--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    assert_eq!(rs.len(), 2);
    let r = &rs[0]["result"];
    assert_eq!(
        (r["kind"].as_str(), r["delta"].as_i64(), r["n"].as_i64(), r["m"].as_i64(), r["h"].as_i64(), r["level"].as_i64()),
        (Some("etale"), Some(0), Some(1), Some(1), Some(0), Some(1))
    );
    let r = &rs[1]["result"];
    assert_eq!(
        (r["kind"].as_str(), r["delta"].as_i64(), r["n"].as_i64(), r["m"].as_i64(), r["h"].as_i64(), r["level"].as_i64()),
        (Some("mu_p"), Some(2), Some(0), Some(0), Some(2), Some(0))
    );
}

#[test]
fn records_follow_the_schema() {
    let s = schema();
    let charp = "\
mode charp p=3 f=2
f = mu_p(1 + t^4)
conductor f at 0
residue mu_p(t) at inf
cartier-check f
as-reduce t^-3 + t^-1 + a1
config C {
  component X1 = mu_p(t) marked 1
  component X2 = mu_p(1/t)
  node X1@0 X2@0
}
kummerian C
conductor etale(1/t) at 0
";
    let mut seen = std::collections::BTreeSet::new();
    for doc in [MIXED, charp, "mode mixed p=3 f=2\ngalois-check sigma^1 1 + l^3*a1*T^-1\nclassify 1 + pi*T\n"] {
        let out = rankp(doc, &["--json"]);
        assert_ne!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
        for r in records(&out) {
            assert_valid(&s, &r);
            seen.insert(r["command"].as_str().unwrap().to_string());
        }
    }
    assert_eq!(seen.len(), 10, "every command kind is covered: {seen:?}");
}

#[test]
fn lift_round_trips() {
    let out = rankp(MIXED, &["--json"]);
    for r in records(&out).iter().filter(|r| r["command"] == "lift") {
        assert_eq!(r["status"], "ok", "{r}");
        assert_eq!(r["result"]["round_trip"]["reparsed"], true);
    }
}

#[test]
fn output_order_is_document_order() {
    let out = rankp(MIXED, &["--json"]);
    let rs = records(&out);
    let idx: Vec<i64> = rs.iter().map(|r| r["index"].as_i64().unwrap()).collect();
    assert_eq!(idx, (0..rs.len() as i64).collect::<Vec<_>>());
    let lines: Vec<i64> = rs.iter().map(|r| r["line"].as_i64().unwrap()).collect();
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exit_codes() {
    assert_eq!(rankp("mode mixed p=3\nclassify T^2\n", &[]).status.code(), Some(0));
    // the second directive errors but the first still reports
    let out = rankp("mode mixed p=3\nclassify T^2\nclassify 3*T\n", &["--json"]);
    assert_eq!(out.status.code(), Some(1));
    let rs = records(&out);
    assert_eq!(rs[0]["status"], "ok");
    assert_eq!(rs[1]["status"], "error");
    assert_eq!(rs[1]["error"]["kind"], "RamifiedInputContent");
    assert_eq!(rs[1]["error"]["details"]["content"], 2);
    // a failed verdict
    let doc = "mode charp p=3\nconfig C {\n  component X1 = mu_p(t)\n  component X2 = mu_p(t)\n  node X1@0 X2@0\n}\nkummerian C\n";
    let out = rankp(doc, &["--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["status"], "fail");
    assert_eq!(rankp("mode charp p=3\nkummerian C\n", &[]).status.code(), Some(2));
    assert_eq!(rankp("mode mixed p=3\nclassify (1 + T\n", &[]).status.code(), Some(2));
    assert_eq!(rankp("mode mixed p=1\nclassify T\n", &[]).status.code(), Some(2));
}

#[test]
fn empty_document_is_silent() {
    for doc in ["", "# nothing here\n\n", "mode mixed p=3\n"] {
        let out = rankp(doc, &["--json"]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn errors_carry_line_and_column() {
    let out = rankp("mode mixed p=3\nclassify 1 + pi^3 T\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("syntax error at line 2, column 19"), "{err}");

    let out = rankp("mode charp p=3\nx = 1 + T\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("type error at line 2"), "{err}");
}

#[test]
fn extension_policies_agree() {
    let doc = "mode mixed p=3\nclassify 1 + pi*T\nclassify 1 + l^3*T^-1\n";
    let off = records(&rankp(doc, &["--json"]));
    assert_eq!(off[0]["error"]["kind"], "ExtensionRequired");
    assert_eq!(off[0]["error"]["details"]["c"], 3);
    let auto = records(&rankp(doc, &["--json", "--extend", "auto"]));
    let fixed = records(&rankp(doc, &["--json", "--extend", "c=3"]));
    for (a, b) in auto.iter().zip(&fixed) {
        let (a, b) = (&a["result"], &b["result"]);
        let e = b["extension"].as_i64().unwrap() / a["extension"].as_i64().unwrap();
        assert_eq!(a["kind"], b["kind"]);
        assert_eq!(a["m"], b["m"]);
        assert_eq!(a["level"].as_i64().unwrap() * e, b["level"].as_i64().unwrap());
        assert_eq!(a["n"].as_i64().unwrap() * e, b["n"].as_i64().unwrap());
    }
    assert_eq!(auto[0]["result"]["kind"], "alpha_p");
}

#[test]
fn table_output() {
    let out = rankp("mode mixed p=3\nclassify T^2\n", &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("#"));
    let row = lines.next().unwrap();
    assert!(row.contains("classify") && row.contains("ok") && row.contains("kind=mu_p"), "{row}");
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let doc = "mode  mixed p=3   N=16\n u=(1+(l^3)*T^(-1))\nclassify  u # comment\nfiltration u,T^2\n";
    let once = rankp(doc, &["--canonical"]);
    assert_eq!(once.status.code(), Some(0));
    let once = String::from_utf8(once.stdout).unwrap();
    let twice = String::from_utf8(rankp(&once, &["--canonical"]).stdout).unwrap();
    assert_eq!(once, twice);
    assert!(once.contains("u = 1 + l^3*T^-1"), "{once}");
}

#[test]
fn command_line_overrides() {
    let out = rankp("mode mixed p=3 N=8\nclassify T^2\n", &["--json", "--prec", "16", "--window", "-20:20"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = rankp("mode mixed p=3\nclassify T\n", &["--extend", "c=0"]);
    assert_eq!(bad.status.code(), Some(2));
}
