//! Double-coset counts `p^{deg λ}`, explicit representatives and the product
//! identity, cross-checked against enumeration in `GL_n(Z/p^N)`.
//!
//! ```text
//! cargo run --example hecke_cosets
//! ```

use derived_hecke::finitegroup::GlOracle;
use derived_hecke::heckecomb::{coset_count_report, coset_representatives, product_identity_check};
use derived_hecke::rootdata::{build_preset, Coweight, PresetKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gl2 = build_preset(PresetKind::GL, 2)?;
    let oracle = GlOracle::default();

    for (l, p) in [(vec![1, 0], 3), (vec![2, 0], 2), (vec![3, 1], 3)] {
        let lambda = Coweight(l);
        let r = coset_count_report(&gl2, &lambda, p, Some(&oracle))?;
        println!(
            "GL2 λ = {lambda}, p = {p}: deg {}, predicted {}, enumerated {:?}",
            r.degree, r.predicted, r.oracle_count
        );
    }

    let reps = coset_representatives(&gl2, &Coweight(vec![2, 0]), 3)?;
    println!("representatives for λ = (2,0), p = 3:");
    for slot in &reps.slots {
        println!("  slot root {} copy {}: residues mod {}", slot.root, slot.copy, slot.modulus);
    }
    println!("  {} tuples, first {:?}, last {:?}", reps.len(), reps.reps[0], reps.reps[reps.len() - 1]);

    let gl3 = build_preset(PresetKind::GL, 3)?;
    let r = product_identity_check(&gl3, &Coweight(vec![1, 0, 0]), &Coweight(vec![1, 1, 0]), 2, Some(&oracle))?;
    println!("GL3 product (1,0,0)·(1,1,0) at p = 2: {}", r.verdict.as_str());
    Ok(())
}
