use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use jsonschema::{Resource, Validator};
use nanophrase::{is_isomorphic, parse_phrase, replay, Alphabet, HomotopyData, MoveDescriptor};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nanophrase(args: &[&str]) -> Run {
    nanophrase_env(args, &[])
}

fn nanophrase_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nanophrase"));
    cmd.args(args).env_remove("NANO_ATLAS_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn validator(name: &str) -> Validator {
    let defs = load("defs.json");
    let id = defs["$id"].as_str().unwrap().to_string();
    jsonschema::options()
        .with_resource(id, Resource::from_contents(defs).unwrap())
        .build(&load(name))
        .unwrap()
}

fn check_json(schema: &str, stdout: &str) -> Value {
    let value: Value = serde_json::from_str(stdout).unwrap();
    let v = validator(schema);
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{stdout}");
    value
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nanophrase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn abab_contracts() {
    let r = nanophrase(&["equiv", "ABAB ; A=a B=b", "", "--alphabet", "ab-swap"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("Equivalent"));

    let r = nanophrase(&["equiv", "--format", "json", "ABAB ; A=a B=b", ""]);
    let value = check_json("verdict.json", &r.stdout);
    let path: Vec<MoveDescriptor> = serde_json::from_value(value["path"].clone()).unwrap();
    let alphabet = Arc::new(Alphabet::ab_swap());
    let data = HomotopyData::diagonal(alphabet.clone());
    let start = parse_phrase("ABAB ; A=a B=b", &alphabet).unwrap();
    let (phrases, _) = replay(&start, &data, &path).unwrap();
    let end = parse_phrase("", &alphabet).unwrap();
    assert!(is_isomorphic(phrases.last().unwrap(), &end).unwrap());
}

#[test]
fn distinct_verdicts() {
    let r = nanophrase(&["equiv", "A|A ; A=a", "0|0"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("Distinct: pairing"), "{}", r.stdout);

    let r = nanophrase(&["equiv", "--format", "json", "AB|AB ; A=a B=a", "AB|BA ; A=a B=a"]);
    let value = check_json("verdict.json", &r.stdout);
    assert_eq!(value["witness"]["by"], "catalog");
}

#[test]
fn inconclusive_exits_two() {
    let r = nanophrase(&["equiv", "--max-states", "10", "ABAB ; A=a B=b", "ABBA ; A=b B=a"]);
    assert_eq!(r.code, 2);
    let r = nanophrase(&[
        "equiv",
        "--format",
        "json",
        "--max-states",
        "10",
        "ABAB ; A=a B=b",
        "ABBA ; A=b B=a",
    ]);
    assert_eq!(r.code, 2);
    check_json("verdict.json", &r.stdout);
}

#[test]
fn classify_labels() {
    let r = nanophrase(&["classify", "A|BAB ; A=a B=b"]);
    assert_eq!(r.stdout, "P13;p=1,q=2;a=a,b=b\n");
    let r = nanophrase(&["classify", "--format", "json", "BA|0|AB ; A=a B=a"]);
    let value = check_json("classify.json", &r.stdout);
    assert_eq!(value["label"], "P22II;p=1,q=3;a=a,b=a");
    assert_eq!(value["representative"], "AB|0|BA ; A=a B=a");

    let r = nanophrase(&["classify", "ABCABC ; A=a B=a C=a"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("out of scope"));
}

#[test]
fn input_errors_exit_one() {
    let r = nanophrase(&["validate", "AB|A ; A=a B=b"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("occurs 1 time"));
    let r = nanophrase(&["canon", "AB|AB ; A=a B=c"]);
    assert_eq!(r.code, 1);
    let r = nanophrase(&["equiv", "A|A ; A=a", "0"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("different lengths"));
    let r = nanophrase(&["invariants", "--alphabet", "/nonexistent/alphabet", "0"]);
    assert_eq!(r.code, 1);
}

#[test]
fn validate_and_canon() {
    let r = nanophrase(&["validate", "0|ABAB ; A=a B=b"]);
    assert_eq!(r.stdout, "valid: 2 component(s), 2 letter(s)\n");
    let r = nanophrase(&["validate", "--format", "json", "AB|AB ; A=a B=b"]);
    check_json("phrase.json", &r.stdout);

    let r = nanophrase(&["canon", "DC|CD ; C=a D=b"]);
    assert_eq!(r.stdout, "AB|BA ; A=b B=a\n");
    let r = nanophrase(&["canon", "--format", "json", "DC|CD ; C=a D=b"]);
    check_json("phrase.json", &r.stdout);
}

#[test]
fn invariants_output() {
    let r = nanophrase(&["invariants", "ABA|B ; A=a B=b"]);
    assert_eq!(r.stdout, "parity: 1 1\ngamma: z1^-1 z1\nT: (1,1)=-1 0\npairing: (-1)\n");
    let r = nanophrase(&["invariants", "--format", "json", "ABA|B ; A=a B=b"]);
    let value = check_json("signature.json", &r.stdout);
    assert_eq!(value["t"][0]["(1,1)"], -1);
}

#[test]
fn custom_alphabet_file() {
    let path = temp_file("fixed.alphabet", "# two fixed symbols\nx x\ny y\n");
    let r = nanophrase(&["invariants", "--alphabet", path.to_str().unwrap(), "AB|AB ; A=x B=y"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("parity: 0 0\n"));
}

#[test]
fn reduce_output() {
    let r = nanophrase(&["reduce", "BAAB ; A=a B=a"]);
    assert!(r.stdout.starts_with("0\n2 move(s)"), "{}", r.stdout);
    let r = nanophrase(&["reduce", "--format", "json", "ABAB ; A=a B=b"]);
    let value = check_json("reduce.json", &r.stdout);
    assert_eq!(value["phrase"], "0");
}

#[test]
fn encode_curves() {
    let path = temp_file("two.gauss", "1,2\n2,1\nsigns: 1=+,2=-\n");
    let r = nanophrase(&["encode-curve", path.to_str().unwrap()]);
    assert_eq!(r.stdout, "AB|BA ; A=a B=b\n");
    let r = nanophrase(&["encode-curve", "--format", "json", path.to_str().unwrap()]);
    check_json("phrase.json", &r.stdout);
}

#[test]
fn atlas_table() {
    let r = nanophrase(&["atlas"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 53);
    assert_eq!(*lines.last().unwrap(), "2 2 8 4 24 12 total=52");

    let single = nanophrase_env(&["atlas"], &[("NANO_ATLAS_JOBS", "1")]);
    assert_eq!(single.stdout, r.stdout);

    let r = nanophrase(&["atlas", "--format", "json"]);
    let value = check_json("atlas.json", &r.stdout);
    assert_eq!(value.as_array().unwrap().len(), 52);
}

#[test]
fn output_is_deterministic() {
    let args = ["equiv", "--format", "json", "AB|AB ; A=a B=b", "0|0"];
    assert_eq!(nanophrase(&args).stdout, nanophrase(&args).stdout);
}
