//! The cross-module audit: build a report by hand, then run the full
//! pipeline through the command-line entry point and read its files back.
//!
//! ```text
//! cargo run --release --example audit_pipeline
//! ```

use derived_hecke::cli;
use derived_hecke::finitegroup::GlOracle;
use derived_hecke::heckecomb::coset_count_report;
use derived_hecke::report::AuditReport;
use derived_hecke::rootdata::{build_preset, Coweight, PresetKind};
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gl2 = build_preset(PresetKind::GL, 2)?;
    let mut audit = AuditReport::new();
    for a in 0..3 {
        let lambda = Coweight(vec![a, 0]);
        let r = coset_count_report(&gl2, &lambda, 3, Some(&GlOracle::default()))?;
        audit.push(&json!({ "lambda": lambda, "p": 3 }), r.to_report(), 0.0);
    }
    println!("hand-built audit: {} ({} bytes of canonical JSON)", audit.status(), audit.canonical_json().len());

    let dir = std::env::temp_dir().join("dhecke-audit-example");
    let args = ["dhecke", "audit", "--preset", "GL2", "--p", "3", "--l0", "1", "--seed", "1", "--out"];
    let code = cli::run(args.iter().map(|s| s.to_string()).chain([dir.display().to_string()]));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("audit.json"))?)?;
    let checks = doc["checks"].as_array().map_or(0, Vec::len);
    eprintln!("exit code {code}, status {}, {checks} checks, files in {}", doc["status"], dir.display());
    Ok(())
}
