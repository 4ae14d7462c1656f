//! Koszul Ext dimensions, the Yoneda action by two routes, the generation
//! verdict and the cohomological degree map.
//!
//! ```text
//! cargo run --example koszul_ext
//! ```

use derived_hecke::linalg::{Field, PrimeField, Rationals};
use derived_hecke::localalg::{
    action_via_chain_map, action_via_linear_part, cohomology_degree_map, generation_verdict,
    is_part_of_regular_system, koszul_ext_dims, parse_poly, DivisionOrder, LocalSequence,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: [(usize, &[&str]); 4] = [
        (2, &["X1 + X2^2", "X2 - 3*X1*X2"]),
        (2, &["X1^2", "X2"]),
        (3, &["X1 + X2", "X2 + X3", "X1 - X3"]),
        (1, &["X"]),
    ];
    for (vars, gens) in cases {
        let polys = gens.iter().map(|g| parse_poly(g, vars)).collect::<Result<Vec<_>, _>>()?;
        let seq = LocalSequence::new(Rationals, vars, polys)?;
        let dims = koszul_ext_dims(&seq)?;
        let verdict = generation_verdict(&seq)?;
        println!(
            "{:?} in {vars} variables: Ext dims {dims:?}, generated over bottom degree: {}, linear parts independent: {}",
            seq.formatted(),
            verdict.generated_over_bottom,
            is_part_of_regular_system(&seq)?
        );
    }

    let f = PrimeField::new(5)?;
    let polys = vec![parse_poly("X1 + X2*X3", 3)?, parse_poly("X2 + 2*X1^2", 3)?];
    let seq = LocalSequence::from_rational(f.clone(), 3, &polys)?;
    let eta = vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)];
    let class = vec![f.from_i64(1)];
    let closed = action_via_linear_part(&seq, 1, &eta, 0, &class)?;
    let chain = action_via_chain_map(&seq, &DivisionOrder::Priority(vec![2, 0, 1]), 1, &eta, 0, &class)?;
    println!("η·1 over F_5: closed form {closed:?}, chain map {chain:?}");

    let table = cohomology_degree_map(2, 1, &koszul_ext_dims(&seq)?)?;
    println!("degrees q0 + i: {:?}, binomial pattern {}", table.entries, table.binomial_pattern);
    Ok(())
}
