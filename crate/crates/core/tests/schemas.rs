use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

use jsonschema::{Retrieve, Uri, Validator};
use serde_json::{json, Value};

const BASE: &str = "https://dhecke.invalid/schema/";
const NAMES: [&str; 4] = ["root_datum", "ledger", "config", "report"];

struct Local(HashMap<String, Value>);

impl Retrieve for Local {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        self.0.get(uri.as_str()).cloned().ok_or_else(|| format!("unknown schema {uri}").into())
    }
}

fn load(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    doc["$id"] = json!(format!("{BASE}{name}.schema.json"));
    doc
}

fn validator(name: &str) -> Validator {
    let all = NAMES.iter().map(|n| (format!("{BASE}{n}.schema.json"), load(n))).collect();
    jsonschema::options().with_retriever(Local(all)).build(&load(name)).expect("schema compiles")
}

fn assert_valid(v: &Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn dhecke(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_dhecke")).args(args).env_remove("DHECKE_OUT").output().unwrap();
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn reports_match_the_report_schema() {
    let v = validator("report");
    for args in [
        &["audit", "--preset", "GL2", "--p", "3", "--l0", "1"][..],
        &["audit", "--preset", "Sp4", "--p", "3", "--l0", "1"],
        &["dims", "--preset", "GL3", "--l0", "1"],
        &["hecke", "--preset", "GL2", "--lambda", "2,0", "--prime", "3", "--oracle", "--emit-reps"],
        &["ext", "--vars", "1", "--field", "Q", "--gens", r#"[["X^2"]]"#],
        &["finite", "--n", "2", "--p", "3", "--b", "2", "--c", "2", "--check", "diamond", "--planted"],
        &["rootdata", "--preset", "SL3", "--lambda", "1,0"],
    ] {
        assert_valid(&v, &dhecke(args));
    }
    assert!(!v.is_valid(&json!({ "checks": [], "status": "maybe" })));
}

#[test]
fn preset_data_match_the_root_datum_schema() {
    let v = validator("root_datum");
    for preset in ["GL2", "GL5", "SL3", "Sp4"] {
        let doc = dhecke(&["rootdata", "--preset", preset]);
        assert_valid(&v, &doc["checks"][0]["details"]["datum"]);
    }
}

#[test]
fn configs_and_ledgers_match_their_schemas() {
    let ledger = validator("ledger");
    assert_valid(&ledger, &json!({"locals": [{"place": "p", "h0": 1, "h1": 5, "h2": 0, "dim_v": 4, "deg_f": 1}]}));
    assert_valid(&ledger, &json!({"l0": 1, "d": 2}));

    let config = validator("config");
    let ok = json!({
        "preset": "GL3",
        "primes": [2, 3],
        "l0": 1,
        "sequences": [{"vars": 2, "field": "Fp:5", "gens": ["X1 + X2^2", "X2"]}],
        "random_sequences": 2,
        "seed": 7
    });
    assert_valid(&config, &ok);
    let datum = dhecke(&["rootdata", "--preset", "GL2"])["checks"][0]["details"]["datum"].clone();
    assert_valid(&config, &json!({ "datum": datum, "primes": [5] }));
    assert!(!config.is_valid(&json!({ "preset": "GL2", "bogus": 1 })));
    assert!(!config.is_valid(&json!({ "preset": "GL2", "datum": datum })));
}
