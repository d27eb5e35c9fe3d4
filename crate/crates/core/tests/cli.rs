use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use redinv::input::RingFile;
use serde_json::Value;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn redinv(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_redinv"))
        .args(args)
        .current_dir(workspace())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(schema_name: &str, args: &[&str]) -> Value {
    let (code, out, err) = redinv(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    let value: Value = serde_json::from_str(&out).unwrap();
    let v = schema(schema_name);
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    value
}

fn scratch(name: &str, text: &str) -> tempfile::TempPath {
    let mut f = tempfile::Builder::new().suffix(name).tempfile().unwrap();
    std::io::Write::write_all(&mut f, text.as_bytes()).unwrap();
    f.into_temp_path()
}

#[test]
fn documented_invocations() {
    let (code, out, _) = redinv(&["example", "huckaba"]);
    assert_eq!(code, 0);
    assert!(out.contains("λ(I³/J₁I²) = 3") && out.contains("λ(I³/J₂I²) = 2"), "{out}");

    let (code, out, _) = redinv(&["verify", "theorem1", "--ring", "corpus/quadric.ring", "--samples", "20", "--seed", "42"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: pass"), "{out}");

    let (code, out, _) = redinv(&["length", "--ring", "corpus/plane.ring", "--ideal", "(x,y)^2"]);
    assert_eq!((code, out.as_str()), (0, "3\n"));
}

#[test]
fn exit_codes() {
    let bad_char = scratch(".ring", "char 4; vars x;");
    assert_eq!(redinv(&["length", "--ring", bad_char.to_str().unwrap(), "--ideal", "m"]).0, 2);
    let unknown_key = scratch(".ring", "char 7; vars x; colour blue;");
    assert_eq!(redinv(&["length", "--ring", unknown_key.to_str().unwrap(), "--ideal", "m"]).0, 2);
    assert_eq!(redinv(&["verify", "theorem2", "--ring", "plane"]).0, 2);
    assert_eq!(redinv(&["length", "--ring", "plane", "--ideal", "(x)"]).0, 3);
    assert_eq!(redinv(&["verify", "koszul", "--ring", "curve345"]).0, 3);

    let embedded = scratch(".ring", "char 32003; vars x y; mod x^2, x*y; cm true;");
    let path = embedded.to_str().unwrap();
    let (code, out, _) = redinv(&["cm-check", "--ring", path]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(redinv(&["verify", "theorem1", "--ring", path, "--samples", "3"]).0, 1);
}

#[test]
fn json_output_matches_the_shipped_schemas() {
    assert_valid("length_report.schema.json", &["length", "--ring", "quadric", "--ideal", "m^2", "--json"]);
    assert_valid(
        "length_report.schema.json",
        &["length", "--ring", "plane", "--ideal", "m^3", "--in", "m", "--json"],
    );
    assert_valid("invariant_report.schema.json", &["invariants", "--ring", "curve4567", "--json"]);
    assert_valid("reduction_record.schema.json", &["reduce", "--ring", "huckaba", "--ideal", "I", "--json"]);
    assert_valid("cm_check.schema.json", &["cm-check", "--ring", "cubic", "--json"]);
    for what in ["serre", "vv", "theorem1", "koszul"] {
        assert_valid(
            "experiment_report.schema.json",
            &["verify", what, "--ring", "space", "--samples", "4", "--json"],
        );
    }
    assert_valid(
        "experiment_report.schema.json",
        &["verify", "serre", "--ring", "huckaba", "--ideal", "I", "--samples", "3", "--json"],
    );
    let both = assert_valid("example.schema.json", &["example", "huckaba", "--json"]);
    assert_eq!(both.as_array().unwrap().len(), 2);
    assert_valid("example.schema.json", &["example", "huckaba", "--char", "0", "--json"]);
    assert_valid(
        "experiment_report.schema.json",
        &["scan", "question", "--ring", "curve345", "--samples", "5", "--json"],
    );
}

#[test]
fn json_reports_replay_byte_for_byte() {
    let args = ["scan", "question", "--ring", "quadric", "--samples", "10", "--seed", "8", "--json"];
    let strip = |text: String| {
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["duration_ms"] = Value::from(0);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(redinv(&args).1), strip(redinv(&args).1));
}

#[test]
fn csv_has_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let (code, _, err) = redinv(&[
        "verify",
        "theorem1",
        "--ring",
        "cubic",
        "--samples",
        "6",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "lambda_m3_over_Jm2"));
    assert_eq!(reader.records().count(), 6);
}

fn poly_text(terms: &[(i64, u8, Vec<u32>)], vars: &[&str]) -> String {
    let mut s = String::new();
    for (k, (num, den, exps)) in terms.iter().enumerate() {
        let sign = if *num < 0 { "-" } else { "+" };
        if k == 0 {
            if *num < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        let mut factors = vec![if *den == 1 {
            num.abs().to_string()
        } else {
            format!("{}/{}", num.abs(), den)
        }];
        for (e, v) in exps.iter().zip(vars) {
            if *e > 0 {
                factors.push(format!("{v}^{e}"));
            }
        }
        s.push_str(&factors.join("*"));
    }
    s
}

fn arb_terms() -> impl Strategy<Value = Vec<(i64, u8, Vec<u32>)>> {
    proptest::collection::vec((-20i64..=20, 1u8..=5, proptest::collection::vec(0u32..4, 3)), 1..4)
}

proptest! {
    #[test]
    fn ring_files_round_trip(
        ch in prop::sample::select(vec![0u64, 7, 32003]),
        arity in 1usize..=3,
        defining in proptest::collection::vec(arb_terms(), 0..3),
        ideals in proptest::collection::vec(arb_terms(), 0..3),
        dim in proptest::option::of(0usize..3),
        cm in proptest::option::of(any::<bool>()),
    ) {
        let vars = &["x", "y", "z"][..arity];
        let mut text = format!("char {ch}; vars {};\n", vars.join(" "));
        if !defining.is_empty() {
            let polys: Vec<String> = defining.iter().map(|t| poly_text(t, vars)).collect();
            text.push_str(&format!("mod {};\n", polys.join(", ")));
        }
        if let Some(d) = dim {
            text.push_str(&format!("dim {d};\n"));
        }
        if let Some(c) = cm {
            text.push_str(&format!("cm {c};\n"));
        }
        for (k, t) in ideals.iter().enumerate() {
            text.push_str(&format!("ideal I{k} = {}; # note\n", poly_text(t, vars)));
        }
        let parsed = RingFile::parse(&text).unwrap();
        let printed = parsed.to_text();
        let again = RingFile::parse(&printed).unwrap();
        prop_assert_eq!(&again, &parsed);
        prop_assert_eq!(again.to_text(), printed);
    }
}
