//! Finite-level oracle: `GL_n(Z/p^N)` for `n ≤ 3`, the congruence subgroups
//! `I(b,c)`, and exhaustive checks of the coset and diamond identities.
//!
//! Every computation enumerates. [`Guards`] bound the group orders and orbit
//! sizes; exceeding a bound is an error, never a silent sample.
//!
//! ```
//! use derived_hecke::finitegroup::{double_coset_count, CongSubgroup, Guards};
//! use derived_hecke::rootdata::Coweight;
//!
//! let group = CongSubgroup::new(2, 3, 1, 1, 2).unwrap();
//! let count = double_coset_count(&group, &Coweight(vec![1, 0]), &Guards::default()).unwrap();
//! assert_eq!(count, 3);
//! ```

mod cosets;
mod diamond;
mod modmat;
mod subgroup;

pub use cosets::{
    conjugate_by_torus, double_coset_count, double_coset_count_detailed, max_pairing, normalize_coweight,
    required_level, unipotent_representative, verify_product_identity, verify_rep_formula,
    verify_up_factorization, DoubleCosetCount,
};
pub use diamond::{diamond_conjugation_check, hom_group, DiamondFunction, DiamondQuotient, HomGroup, TorusHom};
pub use modmat::{ModMatrix, MAX_DIM};
pub use subgroup::{
    closure_report, enumerate_subgroup, generated_subgroup, primitive_root_mod_p2, pro_p_part, CongSubgroup,
    Guards, SubgroupKind,
};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::heckecomb::CosetOracle;
use crate::report::Report;
use crate::rootdata::{build_preset, Coweight, PresetKind, RootDatum};

/// `n` if `datum` is the `GL_n` preset, which is the only datum with a matrix
/// realization here.
pub fn gl_rank(datum: &RootDatum) -> Result<usize> {
    let n = datum.rank();
    let reference = build_preset(PresetKind::GL, n).ok();
    match reference {
        Some(r) if r.roots() == datum.roots() && r.coroots() == datum.coroots() => Ok(n),
        _ => Err(Error::InvalidInput(format!(
            "no finite matrix model for {}",
            datum.name().unwrap_or("this root datum")
        ))),
    }
}

/// [`CosetOracle`] backed by exhaustive enumeration in `GL_n(Z/p^N)`, with
/// the level chosen as the smallest one that determines the answer.
#[derive(Clone, Copy, Debug)]
pub struct GlOracle {
    pub kind: SubgroupKind,
    pub b: u32,
    pub c: u32,
    pub guards: Guards,
}

impl Default for GlOracle {
    fn default() -> Self {
        GlOracle {
            kind: SubgroupKind::Standard,
            b: 1,
            c: 1,
            guards: Guards::default(),
        }
    }
}

impl GlOracle {
    pub fn subgroup(&self, n: usize, p: u64, lambda: &Coweight) -> Result<CongSubgroup> {
        let base = CongSubgroup::with_kind(n, p, self.b, self.c, self.c, self.kind)?;
        base.at_level(required_level(&base, lambda)?)
    }
}

impl CosetOracle for GlOracle {
    fn double_coset_count(&self, datum: &RootDatum, lambda: &Coweight, p: u64) -> Result<BigUint> {
        let n = gl_rank(datum)?;
        let group = self.subgroup(n, p, lambda)?;
        Ok(BigUint::from(double_coset_count(&group, lambda, &self.guards)?))
    }

    fn product_identity(&self, datum: &RootDatum, a: &Coweight, b: &Coweight, p: u64) -> Result<Report> {
        let n = gl_rank(datum)?;
        let group = CongSubgroup::with_kind(n, p, self.b, self.c, self.c, self.kind)?;
        verify_product_identity(&group, a, b, &self.guards)
    }
}
