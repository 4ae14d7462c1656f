//! The diamond quotient `T_b`, its characters `Hom(T_b, Z/p^m)` via the Smith
//! normal form, and the conjugation check for each character.
//!
//! ```text
//! cargo run --release --example diamond_characters
//! ```

use derived_hecke::finitegroup::{
    diamond_conjugation_check, hom_group, CongSubgroup, DiamondFunction, DiamondQuotient, Guards,
};
use derived_hecke::rootdata::Coweight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let guards = Guards::default();
    for (n, p, b) in [(2, 3, 2), (2, 2, 3), (1, 3, 3), (2, 3, 1)] {
        let q = DiamondQuotient::new(n, p, b, &guards)?;
        let homs = hom_group(&q, 1, &guards)?;
        println!(
            "n = {n}, p = {p}, b = {b}: |T_b| = {}, invariant factors {:?}, {} characters to Z/{p}",
            q.order(),
            q.invariant_factors(),
            homs.order
        );
    }

    let group = CongSubgroup::new(2, 3, 1, 2, 2)?;
    let lambda = Coweight(vec![1, 0]);
    let q = DiamondQuotient::new(2, 3, 2, &guards)?;
    for h in hom_group(&q, 1, &guards)?.homs {
        let r = diamond_conjugation_check(&group, &lambda, &DiamondFunction::Torus(h.clone()), &guards)?;
        println!("character {:?}: {}", h.values, r.verdict.as_str());
    }
    let planted = diamond_conjugation_check(&group, &lambda, &DiamondFunction::UnipotentCoordinate, &guards)?;
    println!("unipotent coordinate: {}, witness {}", planted.verdict.as_str(), planted.witness.unwrap_or_default());
    Ok(())
}
