//! Double cosets `CλC` by exhaustive enumeration, the representative
//! formula, and set identities between unions of left cosets.

use std::collections::{HashMap, HashSet};

use serde_json::json;

use super::modmat::ModMatrix;
use super::subgroup::{enumerate_subgroup, CongSubgroup, Guards};
use crate::arith::{mod_inv, pow_u64};
use crate::error::{Error, Result};
use crate::heckecomb::coset_representatives_bounded;
use crate::report::Report;
use crate::rootdata::{build_preset, deg_coweight, Coweight, PresetKind, RootDatum};

/// Check that `lambda` is a dominant coweight of `GL_n` and shift it so its
/// last entry is zero. Central shifts act trivially on cosets.
pub fn normalize_coweight(n: usize, lambda: &Coweight) -> Result<Vec<u32>> {
    if lambda.0.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: lambda.0.len(),
        });
    }
    if lambda.0.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let last = lambda.0[n - 1];
    lambda
        .0
        .iter()
        .map(|&x| u32::try_from(x - last).map_err(|_| Error::InvalidInput(format!("{lambda} too large"))))
        .collect()
}

/// `max_α <λ,α>` over positive roots, the denominator bound of conjugation.
pub fn max_pairing(lam: &[u32]) -> u32 {
    lam[0] - lam[lam.len() - 1]
}

/// Smallest level at which `|CλC/C|` can be read off the finite image.
pub fn required_level(group: &CongSubgroup, lambda: &Coweight) -> Result<u32> {
    let lam = normalize_coweight(group.n, lambda)?;
    Ok(group.c.max(max_pairing(&lam)))
}

/// Entries of `λ(p)^{-1}·g·λ(p)` with their precisions. Entry `(i, j)` is
/// scaled by `p^{λ_j - λ_i}`; a negative exponent must divide exactly.
pub fn conjugate_by_torus(g: &ModMatrix, p: u64, lam: &[u32]) -> Result<Vec<Vec<(u64, u32)>>> {
    let n = g.n();
    let prec = super::subgroup::exponent_of(g.modulus(), p)?;
    let mut out = vec![vec![(0, 0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let s = lam[j] as i64 - lam[i] as i64;
            let x = g.get(i, j);
            out[i][j] = if s >= 0 {
                let s = s as u32;
                let q = pow_u64(p, prec + s);
                ((x as u128 * pow_u64(p, s) as u128 % q as u128) as u64, prec + s)
            } else {
                let k = (-s) as u32;
                if k > prec {
                    return Err(Error::Precision(format!(
                        "dividing by p^{k} with entries known mod p^{prec}"
                    )));
                }
                let pk = pow_u64(p, k);
                if x % pk != 0 {
                    return Err(Error::NonIntegral { row: i, col: j });
                }
                (x / pk, prec - k)
            };
        }
    }
    Ok(out)
}

/// `H = {h ∈ C : λ^{-1} h λ ∈ C}`, the image of `C ∩ λCλ^{-1}`.
fn stabilizer(group: &CongSubgroup, elements: &[ModMatrix], lam: &[u32]) -> Result<Vec<ModMatrix>> {
    let mut out = Vec::new();
    for g in elements {
        match conjugate_by_torus(g, group.p, lam) {
            Ok(conj) => {
                if group.contains_lifted(&conj)? {
                    out.push(*g);
                }
            }
            Err(Error::NonIntegral { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DoubleCosetCount {
    pub count: u64,
    pub group_order: u64,
    pub stabilizer_order: u64,
    pub level: u32,
}

struct Partition {
    group: Vec<ModMatrix>,
    stabilizer: Vec<ModMatrix>,
    lam: Vec<u32>,
}

fn partition_data(group: &CongSubgroup, lambda: &Coweight, guards: &Guards) -> Result<Partition> {
    let lam = normalize_coweight(group.n, lambda)?;
    let need = group.c.max(max_pairing(&lam));
    if group.level < need {
        return Err(Error::Precision(format!(
            "level {} below max(c, max pairing) = {need}",
            group.level
        )));
    }
    let elements = enumerate_subgroup(group, guards)?;
    let stab = stabilizer(group, &elements, &lam)?;
    Ok(Partition {
        group: elements,
        stabilizer: stab,
        lam,
    })
}

/// `|CλC/C| = [C : C ∩ λCλ^{-1}]`, counted by partitioning the finite image
/// of `C` into left cosets of the stabilizer.
pub fn double_coset_count_detailed(group: &CongSubgroup, lambda: &Coweight, guards: &Guards) -> Result<DoubleCosetCount> {
    let part = partition_data(group, lambda, guards)?;
    let mut covered: HashSet<ModMatrix> = HashSet::with_capacity(part.group.len());
    let mut count = 0u64;
    for g in &part.group {
        if covered.contains(g) {
            continue;
        }
        count += 1;
        if count as usize > guards.max_orbit {
            return Err(Error::SizeGuard(format!("more than {} cosets", guards.max_orbit)));
        }
        for h in &part.stabilizer {
            covered.insert(g.mul(h));
        }
    }
    let (order, stab) = (part.group.len() as u64, part.stabilizer.len() as u64);
    if covered.len() as u64 != order || count * stab != order {
        return Err(Error::Internal(format!(
            "coset partition inconsistent: {count} cosets of size {stab} in a group of order {order}"
        )));
    }
    Ok(DoubleCosetCount {
        count,
        group_order: order,
        stabilizer_order: stab,
        level: group.level,
    })
}

pub fn double_coset_count(group: &CongSubgroup, lambda: &Coweight, guards: &Guards) -> Result<u64> {
    Ok(double_coset_count_detailed(group, lambda, guards)?.count)
}

/// `(i, j)` with `α = e_i - e_j` for a root of the `GL_n` preset.
fn root_pair(root: &[i64]) -> Result<(usize, usize)> {
    let i = root.iter().position(|&x| x == 1);
    let j = root.iter().position(|&x| x == -1);
    match (i, j) {
        (Some(i), Some(j)) if root.iter().filter(|&&x| x != 0).count() == 2 => Ok((i, j)),
        _ => Err(Error::MalformedDatum(format!("{root:?} is not of the form e_i - e_j"))),
    }
}

/// `Π (1 + x_s E_{i_s j_s})` over the representative slots, in slot order.
pub fn unipotent_representative(
    datum: &RootDatum,
    slots: &[crate::heckecomb::RepSlot],
    tuple: &[u64],
    modulus: u64,
) -> Result<ModMatrix> {
    let n = datum.rank();
    let mut u = ModMatrix::identity(n, modulus);
    for (slot, &x) in slots.iter().zip(tuple) {
        let (i, j) = root_pair(&datum.roots()[slot.root])?;
        u = u.mul(&ModMatrix::elementary(n, modulus, i, j, x));
    }
    Ok(u)
}

/// Realize every abstract representative of `X(λ)` as a unipotent matrix
/// `u` and check that the cosets `uλC` are pairwise distinct and exhaust
/// `CλC/C`; equivalently the `uH` partition the image of `C`.
pub fn verify_rep_formula(group: &CongSubgroup, lambda: &Coweight, guards: &Guards) -> Result<Report> {
    let datum = build_preset(PresetKind::GL, group.n)?;
    let part = partition_data(group, lambda, guards)?;
    let reps = coset_representatives_bounded(&datum, lambda, group.p, guards.max_orbit as u64)?;
    let q = group.modulus();
    let mut report = Report::pass("verify_rep_formula")
        .detail("group", group.label())
        .detail("n", group.n)
        .detail("prime", group.p)
        .detail("level", group.level)
        .detail("lambda", lambda)
        .detail("representatives", reps.len())
        .detail("group_order", part.group.len())
        .detail("stabilizer_order", part.stabilizer.len());

    let mut owner: HashMap<ModMatrix, usize> = HashMap::with_capacity(part.group.len());
    for (r, tuple) in reps.reps.iter().enumerate() {
        let u = unipotent_representative(&datum, &reps.slots, tuple, q)?;
        if !group.contains(&u)? {
            return Ok(report.fail(json!({ "tuple": tuple, "matrix": u, "reason": "representative not in C" })));
        }
        for h in &part.stabilizer {
            let x = u.mul(h);
            if let Some(&prev) = owner.get(&x) {
                return Ok(report.fail(json!({
                    "reason": "two representatives give the same coset",
                    "tuples": [&reps.reps[prev], tuple],
                    "common_element": x,
                })));
            }
            owner.insert(x, r);
        }
    }
    if let Some(missing) = part.group.iter().find(|g| !owner.contains_key(g)) {
        return Ok(report.fail(json!({ "reason": "coset not reached", "element": missing })));
    }
    report = report.detail("torus_exponents", &part.lam);
    Ok(report)
}

/// A set of left cosets `gC` of matrices with `det` of valuation `v`,
/// stored at level `M ≥ c + v`.
struct CosetSet<'a> {
    group: &'a CongSubgroup,
    v: u32,
    reps: Vec<ModMatrix>,
    /// `adj(r)·u^{-1}` where `det r = p^v u`: `g ∈ rC` iff this times `g`
    /// is `p^v` times an element of `C`.
    probes: Vec<ModMatrix>,
}

impl<'a> CosetSet<'a> {
    fn new(group: &'a CongSubgroup, v: u32) -> Self {
        CosetSet {
            group,
            v,
            reps: Vec::new(),
            probes: Vec::new(),
        }
    }

    fn probe(&self, r: &ModMatrix) -> Result<ModMatrix> {
        let p = self.group.p;
        let pv = pow_u64(p, self.v);
        let d = r.det();
        if d % pv != 0 || (d / pv) % p == 0 {
            return Err(Error::Internal(format!("determinant {d} does not have valuation {}", self.v)));
        }
        let inv = mod_inv(d / pv, r.modulus()).expect("unit");
        let mut w = r.adjugate();
        for i in 0..r.n() {
            for j in 0..r.n() {
                let x = (w.get(i, j) as u128 * inv as u128 % r.modulus() as u128) as u64;
                w.set(i, j, x);
            }
        }
        Ok(w)
    }

    fn same(&self, probe: &ModMatrix, g: &ModMatrix) -> Result<bool> {
        let pv = pow_u64(self.group.p, self.v);
        let t = probe.mul(g);
        let low = g.modulus() / pv;
        let mut z = ModMatrix::zero(g.n(), low);
        for i in 0..g.n() {
            for j in 0..g.n() {
                let x = t.get(i, j);
                if x % pv != 0 {
                    return Ok(false);
                }
                z.set(i, j, x / pv);
            }
        }
        self.group.contains(&z)
    }

    fn find(&self, g: &ModMatrix) -> Result<Option<usize>> {
        for (k, pr) in self.probes.iter().enumerate() {
            if self.same(pr, g)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn insert(&mut self, g: ModMatrix) -> Result<bool> {
        if self.find(&g)?.is_some() {
            return Ok(false);
        }
        self.probes.push(self.probe(&g)?);
        self.reps.push(g);
        Ok(true)
    }

    fn len(&self) -> usize {
        self.reps.len()
    }
}

/// Close `start` under left multiplication by `gens`, as a set of left cosets.
fn coset_orbit<'a>(
    group: &'a CongSubgroup,
    v: u32,
    start: &[ModMatrix],
    gens: &[ModMatrix],
    guards: &Guards,
) -> Result<CosetSet<'a>> {
    let mut set = CosetSet::new(group, v);
    let mut queue = Vec::new();
    for g in start {
        if set.insert(*g)? {
            queue.push(*g);
        }
    }
    while let Some(x) = queue.pop() {
        for h in gens {
            let y = h.mul(&x);
            if set.insert(y)? {
                if set.len() > guards.max_orbit {
                    return Err(Error::SizeGuard(format!("orbit exceeds {} cosets", guards.max_orbit)));
                }
                queue.push(y);
            }
        }
    }
    Ok(set)
}

fn torus_matrix(p: u64, lam: &[u32], modulus: u64) -> ModMatrix {
    let d: Vec<u64> = lam.iter().map(|&k| pow_u64(p, k) % modulus).collect();
    ModMatrix::diagonal(modulus, &d)
}

/// Left cosets of `a` not contained in `b`.
fn missing_from(a: &CosetSet, b: &CosetSet) -> Result<Option<ModMatrix>> {
    for r in &a.reps {
        if b.find(r)?.is_none() {
            return Ok(Some(*r));
        }
    }
    Ok(None)
}

/// Set-level check of `CλCλ'C = Cλλ'C`, comparing unions of left cosets
/// obtained as orbits under generators of `C`.
pub fn verify_product_identity(group: &CongSubgroup, a: &Coweight, b: &Coweight, guards: &Guards) -> Result<Report> {
    let (n, p) = (group.n, group.p);
    let la = normalize_coweight(n, a)?;
    let lb = normalize_coweight(n, b)?;
    let v: u32 = la.iter().chain(&lb).sum();
    let level = group.c + v;
    let q = pow_u64(p, level);
    let gens = group.generators(q);
    let xa = torus_matrix(p, &la, q);
    let xb = torus_matrix(p, &lb, q);

    let inner = coset_orbit(group, lb.iter().sum(), &[xb], &gens, guards)?;
    let shifted: Vec<ModMatrix> = inner.reps.iter().map(|x| xa.mul(x)).collect();
    let lhs = coset_orbit(group, v, &shifted, &gens, guards)?;
    let rhs = coset_orbit(group, v, &[xa.mul(&xb)], &gens, guards)?;

    let datum = build_preset(PresetKind::GL, n)?;
    let expected = pow_u64(p, deg_coweight(&datum, &a.add(b))? as u32);
    let report = Report::pass("product_identity_sets")
        .detail("group", group.label())
        .detail("prime", p)
        .detail("lambda", a)
        .detail("lambda_prime", b)
        .detail("level", level)
        .detail("inner_cosets", inner.len())
        .detail("lhs_cosets", lhs.len())
        .detail("rhs_cosets", rhs.len())
        .detail("predicted", expected);
    if let Some(g) = missing_from(&lhs, &rhs)? {
        return Ok(report.fail(json!({ "in_lhs_only": g })));
    }
    if let Some(g) = missing_from(&rhs, &lhs)? {
        return Ok(report.fail(json!({ "in_rhs_only": g })));
    }
    Ok(report)
}

/// Set-level check of `I(b,c)λI(b,c) = I(b,c-1)λI(b,c)`.
///
/// Both sides are unions of left `I(b,c)`-cosets; the right side is the
/// orbit under the larger group. The identity needs `<λ,α> > 0` for every
/// positive root; for other `λ` the check fails with a witness coset.
pub fn verify_up_factorization(group: &CongSubgroup, lambda: &Coweight, guards: &Guards) -> Result<Report> {
    let (n, p, b, c) = (group.n, group.p, group.b, group.c);
    if c < b + 1 {
        return Err(Error::InvalidInput(format!("need c - 1 ≥ b, got b={b}, c={c}")));
    }
    let lam = normalize_coweight(n, lambda)?;
    let v: u32 = lam.iter().sum();
    let level = c + v;
    let q = pow_u64(p, level);
    let big = group.with_c(c - 1)?;
    let xi = torus_matrix(p, &lam, q);
    let small_side = coset_orbit(group, v, &[xi], &group.generators(q), guards)?;
    let big_side = coset_orbit(group, v, &[xi], &big.generators(q), guards)?;
    let regular = lam.windows(2).all(|w| w[0] > w[1]);
    let report = Report::pass("verify_up_factorization")
        .detail("prime", p)
        .detail("b", b)
        .detail("c", c)
        .detail("lambda", lambda)
        .detail("strictly_dominant", regular)
        .detail("level", level)
        .detail("cosets_small", small_side.len())
        .detail("cosets_large", big_side.len());
    if let Some(g) = missing_from(&big_side, &small_side)? {
        return Ok(report.fail(json!({ "coset_only_in_larger_double_coset": g })));
    }
    if let Some(g) = missing_from(&small_side, &big_side)? {
        return Ok(report.fail(json!({ "coset_only_in_smaller_double_coset": g })));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn double_coset_examples() {
        let g = Guards::default();
        let i11 = |p, level| CongSubgroup::new(2, p, 1, 1, level).unwrap();
        assert_eq!(double_coset_count(&i11(3, 2), &cw(&[1, 0]), &g).unwrap(), 3);
        assert_eq!(double_coset_count(&i11(3, 2), &cw(&[1, 1]), &g).unwrap(), 1);
        assert_eq!(double_coset_count(&i11(2, 2), &cw(&[2, 0]), &g).unwrap(), 4);
        assert_eq!(double_coset_count(&i11(3, 2), &cw(&[0, -1]), &g).unwrap(), 3);
        let iw = CongSubgroup::iwahori(2, 3, 1, 2).unwrap();
        assert_eq!(double_coset_count(&iw, &cw(&[2, 0]), &g).unwrap(), 9);
        assert!(matches!(
            double_coset_count(&i11(3, 1), &cw(&[2, 0]), &g),
            Err(Error::Precision(_))
        ));
        assert!(matches!(
            double_coset_count(&i11(3, 2), &cw(&[0, 1]), &g),
            Err(Error::NotDominant(_))
        ));
        let gl3 = CongSubgroup::new(3, 3, 1, 1, 1).unwrap();
        assert_eq!(double_coset_count(&gl3, &cw(&[1, 1, 0]), &g).unwrap(), 9);
    }

    #[test]
    fn conjugation_tracks_precision() {
        let g = ModMatrix::from_entries(2, 27, &[1, 6, 9, 4]).unwrap();
        let c = conjugate_by_torus(&g, 3, &[1, 0]).unwrap();
        assert_eq!(c[0][1], (2, 2));
        assert_eq!(c[1][0], (27, 4));
        assert_eq!(c[0][0], (1, 3));
        let h = ModMatrix::from_entries(2, 27, &[1, 1, 0, 1]).unwrap();
        assert_eq!(conjugate_by_torus(&h, 3, &[1, 0]), Err(Error::NonIntegral { row: 0, col: 1 }));
    }

    #[test]
    fn representative_formula() {
        let g = Guards::default();
        for (p, lam) in [(3, vec![1, 0]), (2, vec![2, 0]), (3, vec![1, 1]), (2, vec![3, 0])] {
            let lam = cw(&lam);
            let group = CongSubgroup::new(2, p, 1, 1, 3).unwrap();
            let r = verify_rep_formula(&group, &lam, &g).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = verify_rep_formula(&CongSubgroup::new(2, 3, 1, 1, 2).unwrap(), &cw(&[1, 1]), &g).unwrap();
        assert_eq!(r.details["representatives"], 1);
        let gl3 = CongSubgroup::new(3, 2, 1, 1, 1).unwrap();
        assert!(verify_rep_formula(&gl3, &cw(&[1, 0, 0]), &g).unwrap().passed());
    }

    #[test]
    fn product_identity_sets() {
        let g = Guards::default();
        let group = CongSubgroup::new(2, 3, 1, 1, 1).unwrap();
        let r = verify_product_identity(&group, &cw(&[1, 0]), &cw(&[1, 0]), &g).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.details["lhs_cosets"], 9);
        let r = verify_product_identity(&group, &cw(&[2, 0]), &cw(&[1, 1]), &g).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["rhs_cosets"], 9);
    }

    #[test]
    fn up_factorization() {
        let g = Guards::default();
        for p in [2, 3] {
            let group = CongSubgroup::new(2, p, 1, 2, 2).unwrap();
            let r = verify_up_factorization(&group, &cw(&[1, 0]), &g).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.details["cosets_small"], p);
        }
        // central λ: I(1,2)·p ≠ I(1,1)·p
        let group = CongSubgroup::new(2, 3, 1, 2, 2).unwrap();
        let r = verify_up_factorization(&group, &cw(&[1, 1]), &g).unwrap();
        assert!(!r.passed());
        assert_eq!(r.details["cosets_large"], 3);
        assert!(verify_up_factorization(&CongSubgroup::new(2, 3, 1, 1, 1).unwrap(), &cw(&[1, 0]), &g).is_err());
    }
}
