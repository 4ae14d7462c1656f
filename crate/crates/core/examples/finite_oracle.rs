//! Exhaustive checks in `GL_2(Z/p^N)`: subgroup enumeration, double cosets,
//! the representative formula and the `U_p` factorization.
//!
//! ```text
//! cargo run --release --example finite_oracle
//! ```

use derived_hecke::finitegroup::{
    closure_report, double_coset_count_detailed, enumerate_subgroup, required_level, verify_rep_formula,
    verify_up_factorization, CongSubgroup, Guards,
};
use derived_hecke::rootdata::Coweight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let guards = Guards::default();

    for (p, kind) in [(3, "standard"), (3, "iwahori")] {
        let group = match kind {
            "standard" => CongSubgroup::new(2, p, 1, 1, 2)?,
            _ => CongSubgroup::iwahori(2, p, 1, 2)?,
        };
        let els = enumerate_subgroup(&group, &guards)?;
        let closure = closure_report(&group, &els, 0, 200)?;
        println!("{} mod {}: {} elements, closure {}", group.label(), group.modulus(), els.len(), closure.verdict.as_str());
    }

    for a in 0..=3 {
        let lambda = Coweight(vec![a, 0]);
        let base = CongSubgroup::new(2, 3, 1, 1, 1)?;
        let group = base.at_level(required_level(&base, &lambda)?)?;
        let c = double_coset_count_detailed(&group, &lambda, &guards)?;
        let reps = verify_rep_formula(&group, &lambda, &guards)?;
        println!(
            "λ = {lambda}: {} cosets at level {} (|C| = {}, stabilizer {}), representatives {}",
            c.count,
            c.level,
            c.group_order,
            c.stabilizer_order,
            reps.verdict.as_str()
        );
    }

    for p in [2, 3] {
        let group = CongSubgroup::new(2, p, 1, 2, 2)?;
        for l in [vec![1, 0], vec![1, 1]] {
            let r = verify_up_factorization(&group, &Coweight(l.clone()), &guards)?;
            println!("U_p factorization, p = {p}, λ = {l:?}: {}", r.verdict.as_str());
        }
    }
    Ok(())
}
