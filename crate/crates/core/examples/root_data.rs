//! Root data: presets, the Weyl group, `α*`, degrees of coweights, the
//! discriminant and strong regularity.
//!
//! ```text
//! cargo run --example root_data
//! ```

use derived_hecke::rootdata::{
    alpha_star, build_preset, deg_coweight, discriminant, is_dominant, is_strongly_regular, parse_preset, weyl_group,
    Coweight, UnramifiedCharacter, Weight,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["GL2", "GL3", "SL3", "Sp4"] {
        let (kind, n) = parse_preset(name)?;
        let d = build_preset(kind, n)?;
        let w = weyl_group(&d)?;
        println!(
            "{name}: rank {}, {} roots, |W| = {}, dim U = {}, 2ρ∨ = {}",
            d.rank(),
            d.roots().len(),
            w.len(),
            d.dim_unipotent(),
            d.two_rho_check()
        );
        for &i in d.positive_roots() {
            let a = alpha_star(&d, &Weight(d.roots()[i].clone()))?;
            println!("  α = {:?}: m = {}, α* = {}", d.roots()[i], a.m, a.coweight);
        }
        let disc = discriminant(&d);
        let invariant = w.iter().all(|x| disc.act(x) == disc);
        println!("  discriminant: {} terms, W-invariant: {invariant}", disc.terms().len());
    }

    let gl3 = build_preset(parse_preset("GL3")?.0, 3)?;
    for l in [vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0], vec![0, 1, 0]] {
        let lambda = Coweight(l);
        if is_dominant(&gl3, &lambda)? {
            println!("GL3 deg {lambda} = {}", deg_coweight(&gl3, &lambda)?);
        } else {
            println!("GL3 {lambda} is not dominant");
        }
    }

    for values in [[1, 2, 3], [2, 2, 3]] {
        let chi = UnramifiedCharacter::from_integers(&values)?;
        let s = is_strongly_regular(&chi, &gl3)?;
        println!(
            "χ = {values:?}: reflection test {}, stabilizer test {}, fixed roots {:?}",
            s.reflection_test, s.stabilizer_test, s.fixed_roots
        );
    }
    Ok(())
}
