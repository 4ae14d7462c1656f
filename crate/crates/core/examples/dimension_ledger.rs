//! Dimension ledgers: the crystalline ledger of a root datum, its audit, and
//! the smoothness, Poitou–Tate and Leopoldt counts.
//!
//! ```text
//! cargo run --example dimension_ledger
//! ```

use derived_hecke::galdim::{
    audit_ledger, borel_quotient_rank, crystalline_ledger, dual_selmer_offset, ht_profile, leopoldt_h1,
    poitou_tate_consistency, smooth_case_tuple, smoothness_dim, DimLedger, LieDims,
};
use derived_hecke::rootdata::{build_preset, PresetKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kind, n) in [(PresetKind::GL, 2), (PresetKind::GL, 3), (PresetKind::Sp4, 4)] {
        let d = build_preset(kind, n)?;
        let lie = LieDims::of(&d);
        let profile = ht_profile(&d, &d.two_rho_check())?;
        println!(
            "{}: r = {}, dim U = {}, negative HT weights {}, Borel quotient rank {}",
            d.name().unwrap_or("?"),
            lie.r,
            lie.dim_u,
            profile.negative_count(),
            borel_quotient_rank(&d)?
        );
        for l0 in 0..=lie.r.min(2) {
            let tuple = smooth_case_tuple(l0, lie.r)?;
            println!(
                "  l0 = {l0}: dual Selmer offset {}, smooth dimension {}, Poitou–Tate {:?} {}",
                dual_selmer_offset(&d, l0)?,
                smoothness_dim(&d, l0)?,
                tuple,
                poitou_tate_consistency(tuple).verdict.as_str()
            );
        }
        for r in audit_ledger(&crystalline_ledger(&d, 1)?, Some(&d))? {
            println!("  {}: {}", r.name, r.verdict.as_str());
        }
    }

    let ledger = DimLedger::from_json(r#"{"l0": 1, "d": 3, "q0": 1}"#)?;
    for r in audit_ledger(&ledger, None)? {
        println!("hand-written ledger, {}: {}", r.name, r.verdict.as_str());
    }
    println!("h1 for Q: {}", leopoldt_h1(0, 0));
    Ok(())
}
