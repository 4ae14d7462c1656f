//! Dimension bookkeeping for Selmer-type groups attached to the adjoint
//! representation of the dual group.
//!
//! Every dimension here is an abstract nonnegative integer, supplied by the
//! caller or derived from a root datum by the rules below. Nothing in this
//! module computes Galois cohomology; it checks the arithmetic that relates
//! the dimensions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::rootdata::{is_strictly_dominant, pairing, Coweight, RootDatum, Weight};

pub const LEDGER_HEADER: &str =
    "dimensions are abstract integers checked against the dimension formulas; no Galois cohomology is computed";

/// `h^1 = h^2 + [F:Q_p]·dim V + h^0`.
pub fn local_euler_h1(h0: u64, h2: u64, deg_f: u64, dim_v: u64) -> u64 {
    h2 + deg_f * dim_v + h0
}

/// `dim H^1_f = h^0 + [F:Q_p]·#(negative Hodge–Tate weights)`.
pub fn h1f_dim(h0: u64, deg_f: u64, neg_weights: u64) -> u64 {
    h0 + deg_f * neg_weights
}

/// `dim_E H^1 = 1 + r_2 + δ`.
pub fn leopoldt_h1(r2: u64, defect: u64) -> u64 {
    1 + r2 + defect
}

/// Dimensions of `Lie Ť ⊂ Lie B̌ ⊂ Lie Ǧ` and `Lie Ǔ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LieDims {
    pub r: u64,
    pub dim_u: u64,
    pub dim_b: u64,
    pub dim_g: u64,
}

impl LieDims {
    pub fn of(datum: &RootDatum) -> Self {
        let r = datum.torus_rank() as u64;
        let dim_u = datum.dim_unipotent();
        let dim_b = r + dim_u;
        Self {
            r,
            dim_u,
            dim_b,
            dim_g: dim_b + dim_u,
        }
    }
}

/// Hodge–Tate weights of `Lie Ǧ` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HTProfile {
    pub weights: BTreeMap<i64, u64>,
}

impl HTProfile {
    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn negative_count(&self) -> u64 {
        self.weights.range(..0).map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, w: i64) -> u64 {
        self.weights.get(&w).copied().unwrap_or(0)
    }
}

/// Profile for a strictly dominant `χ`, realizing the negative-cone
/// convention: `Lie Ť` has weight 0, the root space of `α > 0` in `Lie Ǔ` has
/// weight `-<χ,α>` and its opposite `+<χ,α>`, each with multiplicity `d_α`.
pub fn ht_profile(datum: &RootDatum, chi: &Coweight) -> Result<HTProfile> {
    if !is_strictly_dominant(datum, chi)? {
        return Err(Error::InvalidInput(format!(
            "χ = {chi} is not regular (some positive root pairs to <= 0)"
        )));
    }
    let lie = LieDims::of(datum);
    let mut weights = BTreeMap::new();
    weights.insert(0, lie.r);
    for &i in datum.positive_roots() {
        let k = pairing(datum, chi, &Weight(datum.roots()[i].clone()))?;
        let d = datum.dim_of(i) as u64;
        *weights.entry(-k).or_insert(0) += d;
        *weights.entry(k).or_insert(0) += d;
    }
    let profile = HTProfile { weights };
    if profile.negative_count() != lie.dim_u || profile.total() != lie.dim_g {
        return Err(Error::Internal(format!(
            "profile {:?} does not match dim U = {}, dim G = {}",
            profile.weights, lie.dim_u, lie.dim_g
        )));
    }
    Ok(profile)
}

/// `dim H^1/H^1_f` of `Lie B̌` at `p`, which equals the torus rank `r`.
///
/// Recomputed as `h^1 - h^1_f` with `h^2 = 0`, `dim V = dim B̌` and the
/// negative weights of `Lie B̌` read off the profile of `2ρ^∨`.
pub fn borel_quotient_rank(datum: &RootDatum) -> Result<u64> {
    let lie = LieDims::of(datum);
    let profile = ht_profile(datum, &datum.two_rho_check())?;
    // Lie B̌ = Lie Ť ⊕ Lie Ǔ carries all the negative weights
    let neg_b = profile.negative_count();
    let h0 = 0;
    let h1 = local_euler_h1(h0, 0, 1, lie.dim_b);
    let h1f = h1f_dim(h0, 1, neg_b);
    let rank = h1 - h1f;
    if rank != lie.r {
        return Err(Error::Internal(format!(
            "Borel quotient rank {rank} differs from r = {}",
            lie.r
        )));
    }
    Ok(rank)
}

/// Local data at one place. `deg_f` is `[F_v : Q_p]` at `p` and 0 away from
/// `p`, so the Euler identity reads `h^1 = h^2 + h^0` there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDatum {
    pub place: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2: Option<u64>,
    /// Dimension of the tangent space of the local condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(default)]
    pub dim_v: u64,
    #[serde(default)]
    pub deg_f: u64,
}

impl LocalDatum {
    pub fn validate(&self) -> Result<()> {
        if let (Some(h0), Some(h1), Some(h2)) = (self.h0, self.h1, self.h2) {
            let expected = local_euler_h1(h0, h2, self.deg_f, self.dim_v);
            if h1 != expected {
                return Err(Error::Inconsistent(format!(
                    "place {}: h1 = {h1} but h2 + deg_f·dim_v + h0 = {expected}",
                    self.place
                )));
            }
        }
        Ok(())
    }
}

/// Named dimensions of local and global cohomology groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimLedger {
    #[serde(default)]
    pub l0: Option<u64>,
    #[serde(default)]
    pub r: Option<u64>,
    #[serde(default)]
    pub dim_lie_g: Option<u64>,
    #[serde(default)]
    pub dim_lie_b: Option<u64>,
    #[serde(default)]
    pub dim_lie_u: Option<u64>,
    #[serde(default)]
    pub dim_lie_t: Option<u64>,
    #[serde(default)]
    pub locals: Vec<LocalDatum>,
    #[serde(default)]
    pub h0_v: Option<u64>,
    #[serde(default)]
    pub h0_vdual1: Option<u64>,
    #[serde(default)]
    pub selmer: Option<u64>,
    #[serde(default)]
    pub dual_selmer: Option<u64>,
    #[serde(default)]
    pub ordinary_tangent: Option<u64>,
    #[serde(default)]
    pub coker_psi: Option<u64>,
    #[serde(default)]
    pub q0: Option<i64>,
    #[serde(default)]
    pub d: Option<i64>,
    /// Five dimensions of the Poitou–Tate sequence, if supplied.
    #[serde(default)]
    pub poitou_tate: Option<[u64; 5]>,
    #[serde(default)]
    pub leopoldt: Option<LeopoldtInput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeopoldtInput {
    pub r2: u64,
    #[serde(default)]
    pub defect: u64,
    #[serde(default)]
    pub h1: Option<u64>,
}

impl DimLedger {
    /// Parse and validate; an inconsistent local datum fails construction.
    pub fn from_json(text: &str) -> Result<Self> {
        let ledger: DimLedger =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        for l in &ledger.locals {
            l.validate()?;
        }
        Ok(ledger)
    }

    /// Fill the Lie-algebra dimensions from `datum`, keeping supplied values.
    pub fn with_datum(mut self, datum: &RootDatum) -> Self {
        let lie = LieDims::of(datum);
        self.r.get_or_insert(lie.r);
        self.dim_lie_t.get_or_insert(lie.r);
        self.dim_lie_u.get_or_insert(lie.dim_u);
        self.dim_lie_b.get_or_insert(lie.dim_b);
        self.dim_lie_g.get_or_insert(lie.dim_g);
        self
    }
}

pub fn q0_from(d: i64, l0: i64) -> Result<i64> {
    if (d - l0) % 2 != 0 {
        return Err(Error::Inconsistent(format!("d - l0 = {} is odd", d - l0)));
    }
    Ok((d - l0) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenbergWiles {
    pub value: i64,
    /// `selmer - dual_selmer == value`, when both are supplied.
    pub consistent: Option<bool>,
}

/// `h^0(V) - h^0(V^*(1)) + Σ_v (t_v - h^0_v)`.
pub fn greenberg_wiles(ledger: &DimLedger) -> Result<GreenbergWiles> {
    let h0_v = ledger.h0_v.ok_or_else(|| Error::MissingField("h0_v".into()))?;
    let h0_dual = ledger
        .h0_vdual1
        .ok_or_else(|| Error::MissingField("h0_vdual1".into()))?;
    let mut value = h0_v as i64 - h0_dual as i64;
    for (i, l) in ledger.locals.iter().enumerate() {
        let t = l
            .t
            .ok_or_else(|| Error::MissingField(format!("locals[{i}].t")))?;
        let h0 = l
            .h0
            .ok_or_else(|| Error::MissingField(format!("locals[{i}].h0")))?;
        value += t as i64 - h0 as i64;
    }
    let consistent = match (ledger.selmer, ledger.dual_selmer) {
        (Some(s), Some(ds)) => Some(s as i64 - ds as i64 == value),
        _ => None,
    };
    Ok(GreenbergWiles { value, consistent })
}

/// Ledger with crystalline condition at `p`, the oddness count at infinity and
/// one generic place.
///
/// * at `p`: `h^0 = 0`, `h^2 = 0`, `t = dim H^1_f = #(negative weights)`;
/// * at infinity: `t = 0`, `h^0 = dim Ǔ + l0`;
/// * at a generic `q`: `h^2 = 0`, so `h^1 = h^0` and the unramified
///   condition has `t = h^0`.
pub fn crystalline_ledger(datum: &RootDatum, l0: u64) -> Result<DimLedger> {
    let lie = LieDims::of(datum);
    let profile = ht_profile(datum, &datum.two_rho_check())?;
    let (h0_p, h2_p) = (0, 0);
    let at_p = LocalDatum {
        place: "p".into(),
        h0: Some(h0_p),
        h1: Some(local_euler_h1(h0_p, h2_p, 1, lie.dim_g)),
        h2: Some(h2_p),
        t: Some(h1f_dim(h0_p, 1, profile.negative_count())),
        dim_v: lie.dim_g,
        deg_f: 1,
    };
    let at_infinity = LocalDatum {
        place: "inf".into(),
        h0: Some(lie.dim_u + l0),
        h1: None,
        h2: None,
        t: Some(0),
        dim_v: lie.dim_g,
        deg_f: 0,
    };
    let h0_q = lie.r;
    let at_q = LocalDatum {
        place: "q".into(),
        h0: Some(h0_q),
        h1: Some(local_euler_h1(h0_q, 0, 0, lie.dim_g)),
        h2: Some(0),
        t: Some(h0_q),
        dim_v: lie.dim_g,
        deg_f: 0,
    };
    for l in [&at_p, &at_infinity, &at_q] {
        l.validate()?;
    }
    Ok(DimLedger {
        l0: Some(l0),
        locals: vec![at_p, at_infinity, at_q],
        h0_v: Some(0),
        h0_vdual1: Some(0),
        ..DimLedger::default()
    }
    .with_datum(datum))
}

/// `dim H^1_f(V^*(1)) - dim H^1_f(V) = l0`, derived through the crystalline
/// ledger and the Greenberg–Wiles formula.
pub fn dual_selmer_offset(datum: &RootDatum, l0: u64) -> Result<i64> {
    let ledger = crystalline_ledger(datum, l0)?;
    let offset = -greenberg_wiles(&ledger)?.value;
    if offset != l0 as i64 {
        return Err(Error::Internal(format!(
            "dual Selmer offset {offset} differs from l0 = {l0}"
        )));
    }
    Ok(offset)
}

/// `dim Lie B̌ + h^0(Q_p, Lie Ǧ)`.
pub fn ordinary_tangent_dim(datum: &RootDatum, h0_at_p: u64) -> u64 {
    LieDims::of(datum).dim_b + h0_at_p
}

/// `dim Lie B̌ - dim Lie Ǔ - l0`, checked against `r - l0`.
pub fn smoothness_dim(datum: &RootDatum, l0: u64) -> Result<u64> {
    let lie = LieDims::of(datum);
    if l0 > lie.r {
        return Err(Error::Inconsistent(format!("l0 = {l0} exceeds r = {}", lie.r)));
    }
    let via_lie = lie.dim_b - lie.dim_u - l0;
    if via_lie != lie.r - l0 {
        return Err(Error::Internal(format!(
            "smoothness routes disagree: {via_lie} vs {}",
            lie.r - l0
        )));
    }
    Ok(via_lie)
}

/// Dimensions `(0, l0, r, r - l0, 0)` of the sequence in the smooth case.
pub fn smooth_case_tuple(l0: u64, r: u64) -> Result<[u64; 5]> {
    if l0 > r {
        return Err(Error::Inconsistent(format!("l0 = {l0} exceeds r = {r}")));
    }
    Ok([0, l0, r, r - l0, 0])
}

/// Exactness of a five-term sequence forces `a - b + r - d + e = 0`.
pub fn poitou_tate_consistency(dims: [u64; 5]) -> Report {
    let [a, b, r, d, e] = dims.map(|x| x as i64);
    let sum = a - b + r - d + e;
    let report = Report::with_verdict("poitou_tate_consistency", sum == 0)
        .detail("dims", dims)
        .detail("alternating_sum", sum)
        .note(LEDGER_HEADER);
    if sum == 0 {
        report
    } else {
        report.fail(json!({ "alternating_sum": sum }))
    }
}

/// `t_Λ - (h^1_ord - dim ker ψ)`.
pub fn coker_psi_dim(t_lambda: u64, h1_ord: u64, ker_psi: u64) -> Result<u64> {
    if ker_psi > h1_ord {
        return Err(Error::InvalidInput(format!(
            "ker ψ ({ker_psi}) exceeds h1_ord ({h1_ord})"
        )));
    }
    let image = h1_ord - ker_psi;
    t_lambda.checked_sub(image).ok_or_else(|| {
        Error::Inconsistent(format!("image of ψ ({image}) exceeds t_Λ ({t_lambda})"))
    })
}

fn check(name: &str, ok: bool, details: serde_json::Value) -> Report {
    let r = Report::with_verdict(name, ok)
        .detail("values", &details)
        .note(LEDGER_HEADER);
    if ok {
        r
    } else {
        r.fail(details)
    }
}

/// Every identity the ledger allows checking, one report each. `datum`
/// enables the checks derived from a root datum.
pub fn audit_ledger(ledger: &DimLedger, datum: Option<&RootDatum>) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let ledger = match datum {
        Some(d) => ledger.clone().with_datum(d),
        None => ledger.clone(),
    };

    if let (Some(t), Some(u), Some(b)) = (ledger.dim_lie_t, ledger.dim_lie_u, ledger.dim_lie_b) {
        out.push(check(
            "lie_b_equals_t_plus_u",
            b == t + u,
            json!({ "dim_lie_b": b, "dim_lie_t": t, "dim_lie_u": u }),
        ));
    }
    if let (Some(u), Some(b), Some(g)) = (ledger.dim_lie_u, ledger.dim_lie_b, ledger.dim_lie_g) {
        out.push(check(
            "lie_g_equals_b_plus_u",
            g == b + u,
            json!({ "dim_lie_g": g, "dim_lie_b": b, "dim_lie_u": u }),
        ));
    }
    if let (Some(d), Some(l0)) = (ledger.d, ledger.l0) {
        let derived = q0_from(d, l0 as i64);
        let ok = match (&derived, ledger.q0) {
            (Ok(q), Some(given)) => *q == given,
            (Ok(_), None) => true,
            (Err(_), _) => false,
        };
        out.push(check(
            "q0_integral",
            ok,
            json!({ "d": d, "l0": l0, "q0": ledger.q0, "derived": derived.ok() }),
        ));
    }
    for l in &ledger.locals {
        if let (Some(h0), Some(h1), Some(h2)) = (l.h0, l.h1, l.h2) {
            let expected = local_euler_h1(h0, h2, l.deg_f, l.dim_v);
            out.push(check(
                &format!("local_euler[{}]", l.place),
                h1 == expected,
                json!({ "h0": h0, "h1": h1, "h2": h2, "expected_h1": expected }),
            ));
        }
    }
    if ledger.h0_v.is_some() && ledger.h0_vdual1.is_some() && !ledger.locals.is_empty() {
        let gw = greenberg_wiles(&ledger)?;
        out.push(check(
            "greenberg_wiles",
            gw.consistent.unwrap_or(true),
            json!({
                "value": gw.value,
                "selmer": ledger.selmer,
                "dual_selmer": ledger.dual_selmer,
            }),
        ));
    }
    if let (Some(ot), Some(d)) = (ledger.ordinary_tangent, datum) {
        let h0_p = ledger
            .locals
            .iter()
            .find(|l| l.place == "p")
            .and_then(|l| l.h0)
            .unwrap_or(0);
        let expected = ordinary_tangent_dim(d, h0_p);
        out.push(check(
            "ordinary_tangent",
            ot == expected,
            json!({ "ordinary_tangent": ot, "expected": expected, "h0_p": h0_p }),
        ));
    }
    if let Some(d) = datum {
        out.push(check(
            "borel_quotient_rank",
            true,
            json!({ "rank": borel_quotient_rank(d)?, "r": LieDims::of(d).r }),
        ));
        if let Some(l0) = ledger.l0 {
            let offset = dual_selmer_offset(d, l0)?;
            out.push(check(
                "dual_selmer_offset",
                offset == l0 as i64,
                json!({ "offset": offset, "l0": l0 }),
            ));
            if l0 <= LieDims::of(d).r {
                let s = smoothness_dim(d, l0)?;
                out.push(check(
                    "smoothness_dim",
                    s + l0 == LieDims::of(d).r,
                    json!({ "smoothness": s, "l0": l0 }),
                ));
            } else {
                out.push(check(
                    "smoothness_dim",
                    false,
                    json!({ "l0": l0, "r": LieDims::of(d).r, "error": "l0 exceeds r" }),
                ));
            }
        }
    }
    if let Some(pt) = ledger.poitou_tate {
        out.push(poitou_tate_consistency(pt));
    }
    if let Some(lp) = &ledger.leopoldt {
        let value = leopoldt_h1(lp.r2, lp.defect);
        out.push(check(
            "leopoldt_h1",
            lp.h1.map_or(true, |h| h == value),
            json!({ "r2": lp.r2, "defect": lp.defect, "h1": value, "supplied": lp.h1 }),
        ));
    }
    if let (Some(c), Some(r), Some(l0)) = (ledger.coker_psi, ledger.r, ledger.l0) {
        // smooth case: ψ has image of dimension r - l0 in a space of dimension r
        let expected = coker_psi_dim(r, r.saturating_sub(l0), 0)?;
        out.push(check(
            "coker_psi",
            c == expected,
            json!({ "coker_psi": c, "expected": expected }),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_preset, PresetKind};

    fn gl(n: usize) -> RootDatum {
        build_preset(PresetKind::GL, n).unwrap()
    }

    fn sl2() -> RootDatum {
        build_preset(PresetKind::SL, 2).unwrap()
    }

    #[test]
    fn formula_examples() {
        assert_eq!(local_euler_h1(0, 0, 1, 3), 3);
        assert_eq!(local_euler_h1(1, 1, 1, 1), 3);
        assert_eq!(h1f_dim(0, 1, 1), 1);
        assert_eq!(h1f_dim(2, 1, 0), 2);
        assert_eq!(h1f_dim(0, 1, gl(3).positive_roots().len() as u64), 3);
        assert_eq!(leopoldt_h1(0, 0), 1);
        assert_eq!(leopoldt_h1(1, 0), 2);
        assert_eq!(leopoldt_h1(2, 1), 4);
    }

    #[test]
    fn borel_and_smoothness() {
        assert_eq!(borel_quotient_rank(&gl(2)).unwrap(), 2);
        assert_eq!(borel_quotient_rank(&gl(3)).unwrap(), 3);
        assert_eq!(borel_quotient_rank(&sl2()).unwrap(), 1);
        assert_eq!(smoothness_dim(&gl(2), 1).unwrap(), 1);
        assert_eq!(smoothness_dim(&gl(3), 2).unwrap(), 1);
        assert_eq!(smoothness_dim(&sl2(), 0).unwrap(), 1);
        assert!(matches!(smoothness_dim(&sl2(), 2), Err(Error::Inconsistent(_))));
        assert_eq!(ordinary_tangent_dim(&gl(2), 0), 3);
        assert_eq!(ordinary_tangent_dim(&gl(2), 1), 4);
        assert_eq!(ordinary_tangent_dim(&gl(3), 0), 6);
    }

    #[test]
    fn greenberg_wiles_examples() {
        let empty = DimLedger {
            h0_v: Some(0),
            h0_vdual1: Some(0),
            ..DimLedger::default()
        };
        assert_eq!(greenberg_wiles(&empty).unwrap().value, 0);
        let crys = crystalline_ledger(&gl(2), 1).unwrap();
        let contributions: Vec<i64> = crys
            .locals
            .iter()
            .map(|l| l.t.unwrap() as i64 - l.h0.unwrap() as i64)
            .collect();
        assert_eq!(contributions, vec![1, -2, 0]);
        assert_eq!(greenberg_wiles(&crys).unwrap().value, -1);
        let mut with_selmer = crys.clone();
        with_selmer.selmer = Some(0);
        with_selmer.dual_selmer = Some(1);
        assert_eq!(greenberg_wiles(&with_selmer).unwrap().consistent, Some(true));
        with_selmer.dual_selmer = Some(2);
        assert_eq!(greenberg_wiles(&with_selmer).unwrap().consistent, Some(false));
        assert!(matches!(
            greenberg_wiles(&DimLedger::default()),
            Err(Error::MissingField(_))
        ));
    }

    #[test]
    fn dual_selmer_examples() {
        assert_eq!(dual_selmer_offset(&gl(2), 1).unwrap(), 1);
        assert_eq!(dual_selmer_offset(&gl(3), 2).unwrap(), 2);
        assert_eq!(dual_selmer_offset(&sl2(), 0).unwrap(), 0);
    }

    #[test]
    fn poitou_tate_and_coker() {
        let t = smooth_case_tuple(1, 2).unwrap();
        assert_eq!(t, [0, 1, 2, 1, 0]);
        assert!(poitou_tate_consistency(t).passed());
        assert!(poitou_tate_consistency([0, 0, 2, 2, 0]).passed());
        let bad = poitou_tate_consistency([1, 1, 2, 3, 0]);
        assert!(!bad.passed());
        assert_eq!(bad.details["alternating_sum"], json!(-1));
        assert_eq!(coker_psi_dim(2, 1, 0).unwrap(), 1);
        assert_eq!(coker_psi_dim(2, 2, 0).unwrap(), 0);
        assert_eq!(coker_psi_dim(2, 0, 0).unwrap(), 2);
        assert!(coker_psi_dim(1, 3, 0).is_err());
        assert!(coker_psi_dim(1, 1, 2).is_err());
    }

    #[test]
    fn ht_profile_examples() {
        let p = ht_profile(&gl(2), &Coweight(vec![1, 0])).unwrap();
        assert_eq!(p.weights, BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        let p = ht_profile(&gl(3), &Coweight(vec![2, 1, 0])).unwrap();
        assert_eq!(
            p.weights,
            BTreeMap::from([(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 1)])
        );
        assert_eq!(p.negative_count(), 3);
        assert!(ht_profile(&gl(2), &Coweight(vec![1, 1])).is_err());
    }

    #[test]
    fn ledger_parsing_and_audit() {
        let bad = r#"{"locals":[{"place":"p","h0":0,"h1":5,"h2":0,"dim_v":4,"deg_f":1}]}"#;
        assert!(matches!(DimLedger::from_json(bad), Err(Error::Inconsistent(_))));
        let good = r#"{"l0":1,"d":3,"q0":1,"h0_v":0,"h0_vdual1":0,"selmer":0,"dual_selmer":1,
            "locals":[{"place":"p","h0":0,"h1":4,"h2":0,"t":1,"dim_v":4,"deg_f":1},
                      {"place":"inf","h0":2,"t":0,"dim_v":4}],
            "poitou_tate":[0,1,2,1,0],"leopoldt":{"r2":0,"defect":0,"h1":1}}"#;
        let ledger = DimLedger::from_json(good).unwrap();
        let reports = audit_ledger(&ledger, Some(&gl(2))).unwrap();
        assert!(reports.iter().all(Report::passed), "{reports:#?}");
        assert!(reports.iter().any(|r| r.name == "greenberg_wiles"));
        let mut wrong = ledger.clone();
        wrong.q0 = Some(2);
        let reports = audit_ledger(&wrong, None).unwrap();
        assert!(reports.iter().any(|r| r.name == "q0_integral" && !r.passed()));
    }
}
