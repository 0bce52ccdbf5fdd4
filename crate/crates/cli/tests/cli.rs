use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bctori(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_bctori"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name)
}

fn validate(schema: &str, doc: &Value) {
    let text = std::fs::read_to_string(schema_path(schema)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema:?} rejects output: {msgs:?}\n{doc:#}");
}

fn json_of(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

const SEVEN_NEG: &str = r#"{"q":["-1","-1","-1","-1","-1","-1","-1"],"isogeny":"adjoint"}"#;
const SPLIT_B3: &str = r#"{"q":["1","-1","1","-1","1","-1","1"],"isogeny":"adjoint"}"#;
const SPLIT_C3: &str = r#"{"a":"1","b":"1","h":["1","1","1"],"isogeny":"adjoint"}"#;

#[test]
fn ratio_text() {
    let r = bctori(&["ratio", "--n", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "lambda = sqrt(8/5) ≈ 1.2649");
    let r = bctori(&["--json", "ratio", "--n", "4"]);
    let v = json_of(&r);
    validate("output/ratio.schema.json", &v);
    assert_eq!(v["radicand"], "10/7");
}

#[test]
fn tori_enumerate_sp12() {
    let r = bctori(&["tori", "enumerate", "--form", "Sp(1,2)"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "[[0,3,0],[0,1,1]]");
    let v = json_of(&bctori(&["tori", "enumerate", "--form", "Sp(1,2)", "--json"]));
    validate("output/tori_enumerate.schema.json", &v);
    assert_eq!(v["tori"], serde_json::json!([[0, 3, 0], [0, 1, 1]]));
}

#[test]
fn tori_compare_and_classify() {
    let r = bctori(&["--strict", "tori", "compare", "SO(3,4)", "SplitC(3)"]);
    assert_eq!(r.code, 0);
    let r = bctori(&["--strict", "tori", "compare", "SO(2,5)", "Sp(1,2)"]);
    assert_eq!(r.code, 1);
    let r = bctori(&["tori", "compare", "SO(2,5)", "Sp(1,3)"]);
    assert_eq!(r.code, 2);
    let v = json_of(&bctori(&["--json", "tori", "classify", "--rank", "3"]));
    validate("output/tori_classify.schema.json", &v);
    assert_eq!(v.as_array().unwrap().len(), 5);
    validate("output/tori_compare.schema.json", &json_of(&bctori(&["--json", "tori", "compare", "SO(2,5)", "Sp(1,2)"])));
}

#[test]
fn twin_first_failure_at_infinity() {
    let d = TempDir::new().unwrap();
    let g1 = write(&d, "g1.json", SEVEN_NEG);
    let g2 = write(&d, "g2.json", SPLIT_C3);
    let r = bctori(&["twin", &g1, &g2, "--json"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.replace([' ', '\n'], "").starts_with(r#"{"twin":false,"first_failure":{"place":"inf","#));
    let v = json_of(&r);
    validate("output/twin.schema.json", &v);
    assert_eq!(bctori(&["--strict", "twin", &g1, &g2]).code, 1);

    let g1 = write(&d, "b.json", SPLIT_B3);
    let r = bctori(&["--strict", "--json", "twin", &g1, &g2]);
    assert_eq!(r.code, 0);
    assert_eq!(json_of(&r)["twin"], true);
}

#[test]
fn weak_commensurability() {
    let d = TempDir::new().unwrap();
    let g1 = write(&d, "g1.json", SPLIT_B3);
    let g2 = write(&d, "g2.json", SPLIT_C3);
    let r = bctori(&["--json", "wc", &g1, &g2, "--S", "inf,2,5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    validate("output/wc.schema.json", &v);
    assert_eq!(v["weakly_commensurable"], true);
    // ∞ must lie in S
    assert_eq!(bctori(&["wc", &g1, &g2, "--S", "2,5"]).code, 2);
    // rank 2 is outside the criterion
    let b2 = write(&d, "b2.json", r#"{"q":["1","-1","1","-1","1"],"isogeny":"sc"}"#);
    let c2 = write(&d, "c2.json", r#"{"a":"1","b":"1","h":["1","1"],"isogeny":"sc"}"#);
    assert_eq!(bctori(&["wc", &b2, &c2, "--S", "inf"]).code, 3);
}

#[test]
fn invariants_and_witt() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "f.json", r#"["1","1","1","1","1"]"#);
    let v = json_of(&bctori(&["--json", "invariants", &f]));
    validate("output/invariants.schema.json", &v);
    assert_eq!(v["witt_index"], 0);
    let r = bctori(&["--json", "witt", &f, "--place", "2"]);
    let v = json_of(&r);
    validate("output/witt.schema.json", &v);
    assert_eq!(v["witt_index"], 1);
    assert_eq!(bctori(&["witt", &f, "--place", "4"]).code, 2);
}

#[test]
fn schema_errors_carry_field_path() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", r#"{"a":"1","b":"x","h":["1","1"],"isogeny":"adjoint"}"#);
    let b = write(&d, "b.json", SPLIT_B3);
    let r = bctori(&["twin", &b, &g]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("`b`"), "{}", r.stderr);
    let g = write(&d, "g2.json", r#"{"a":"1","b":"1","h":["1","1","1"],"isogeny":"weird"}"#);
    let r = bctori(&["twin", &b, &g]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("`isogeny`"), "{}", r.stderr);
    assert_eq!(bctori(&["twin", &b, "/nonexistent.json"]).code, 2);
    assert_eq!(bctori(&["frobnicate"]).code, 2);
}

#[test]
fn embed_decisions() {
    let d = TempDir::new().unwrap();
    // ℚ(i) × ℚ(i) × (ℚ, id)
    let alg = write(&d, "e.json", r#"{"factors":[{"min_poly":["0","1"],"d":["-1"]},{"min_poly":["0","1"],"d":["-1"]}],"fixed":1}"#);
    let split = write(&d, "t.json", r#"{"kind":"orthogonal","form":["1","-1","1","-1","1"]}"#);
    let r = bctori(&["--json", "--strict", "embed", &alg, &split]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    validate("output/embed.schema.json", &v);
    assert_eq!(v["decision"], "embeds");
    assert_eq!(v["certificate"]["construction"], "orthogonal_split");

    let five = write(&d, "t5.json", r#"{"kind":"orthogonal","form":["1","1","1","1","1"]}"#);
    let r = bctori(&["--json", "embed", &alg, &five]);
    assert_eq!(r.code, 3);
    validate("output/embed.schema.json", &json_of(&r));

    let rr = write(&d, "rr.json", r#"{"factors":[{"min_poly":["0","1"],"d":["2"]},{"min_poly":["0","1"],"d":["-1"]}],"fixed":1}"#);
    let r = bctori(&["--json", "--strict", "embed", &rr, &five]);
    assert_eq!(r.code, 1);
    let v = json_of(&r);
    validate("output/embed.schema.json", &v);
    assert_eq!(v["place"], "inf");

    let even = write(&d, "ev.json", r#"{"factors":[{"min_poly":["-2","0","0","1"],"d":["-1"]}]}"#);
    let sp = write(&d, "sp.json", r#"{"kind":"symplectic","n":6}"#);
    let v = json_of(&bctori(&["--json", "embed", &even, &sp]));
    validate("output/embed.schema.json", &v);
    assert_eq!(v["certificate"]["construction"], "symplectic");
}

#[test]
fn rank2_and_lattice() {
    let d = TempDir::new().unwrap();
    let q = write(&d, "q.json", r#"["1","-1","1","-1","1"]"#);
    let q2 = write(&d, "q2.json", r#"["1","-1","1","1","1"]"#);
    let v = json_of(&bctori(&["--json", "rank2", &q, &q]));
    validate("output/rank2.schema.json", &v);
    assert_eq!(v["same_tori"], true);
    assert_eq!(bctori(&["--strict", "rank2", &q, &q2]).code, 1);
    let m = write(&d, "m.json", "[[0,1],[1,0]]");
    let r = bctori(&["--json", "lattice-type", &m]);
    let v = json_of(&r);
    validate("output/lattice_type.schema.json", &v);
    assert_eq!(v, serde_json::json!([0, 0, 1]));
    let m = write(&d, "m2.json", "[[1,1],[0,1]]");
    assert_eq!(bctori(&["lattice-type", &m]).code, 2);
}

#[test]
fn deterministic_output() {
    let d = TempDir::new().unwrap();
    let alg = write(&d, "e.json", r#"{"factors":[{"min_poly":["-2","0","0","1"],"d":["-1"]}],"fixed":1}"#);
    let t = write(&d, "t.json", r#"{"kind":"orthogonal","form":["1","-1","1","-1","1","-1","1"]}"#);
    let a = bctori(&["--json", "--seed", "7", "embed", &alg, &t]);
    let b = bctori(&["--json", "--seed", "7", "embed", &alg, &t]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn input_files_validate_against_schemas() {
    let docs = [
        ("input/form.schema.json", r#"["1","-1","7/3"]"#),
        ("input/group_b.schema.json", SPLIT_B3),
        ("input/group_c.schema.json", SPLIT_C3),
        ("input/algebra.schema.json", r#"{"factors":[{"min_poly":["-2","0","0","1"],"d":["-1"]}],"fixed":1}"#),
        ("input/target.schema.json", r#"{"kind":"unitary","m":"-1","h":["1","-1"]}"#),
        ("input/matrix.schema.json", "[[0,1],[1,0]]"),
    ];
    for (schema, doc) in docs {
        validate(schema, &serde_json::from_str(doc).unwrap());
    }
}
