//! The diamond quotient `T_b = T(Z/p^b)_p`, its character groups
//! `Hom(T_b, Z/p^m)`, and the conjugation invariance of inflated characters.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::cosets::{conjugate_by_torus, max_pairing, normalize_coweight};
use super::modmat::ModMatrix;
use super::subgroup::{enumerate_subgroup, pro_p_part, CongSubgroup, Guards};
use crate::arith::{is_prime, mod_inv, pow_u64};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rootdata::Coweight;
use crate::snf::smith_normal_form;

/// `T(Z/p^b)_p` for the diagonal torus of `GL_n`: tuples of units `≡ 1 mod p`
/// under componentwise multiplication mod `p^b`.
#[derive(Clone, Debug)]
pub struct DiamondQuotient {
    pub n: usize,
    pub p: u64,
    pub b: u32,
    modulus: u64,
    generators: Vec<Vec<u64>>,
    orders: Vec<u64>,
    relations: Vec<Vec<i64>>,
    invariant_factors: Vec<u64>,
    /// Columns give the invariant-factor basis in terms of the generators.
    basis_change: Vec<Vec<i64>>,
    /// Exponent vector of each element in the generators.
    dlog: BTreeMap<Vec<u64>, Vec<u64>>,
}

fn mul_tuple(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x * y % q).collect()
}

impl DiamondQuotient {
    pub fn new(n: usize, p: u64, b: u32, guards: &Guards) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if b == 0 || n == 0 {
            return Err(Error::InvalidInput("need n ≥ 1 and b ≥ 1".into()));
        }
        let order = (p as u128).pow((b - 1) * n as u32);
        if order > guards.max_order as u128 {
            return Err(Error::SizeGuard(format!("|T_b| = {order} exceeds {}", guards.max_order)));
        }
        let q = pow_u64(p, b);
        let local: Vec<u64> = if p == 2 { vec![q - 1, 5 % q] } else { vec![(1 + p) % q] };
        let mut generators = Vec::new();
        for i in 0..n {
            for &x in &local {
                if x % q != 1 % q {
                    let mut t = vec![1 % q; n];
                    t[i] = x;
                    generators.push(t);
                }
            }
        }
        let one = vec![1 % q; n];
        let orders: Vec<u64> = generators
            .iter()
            .map(|g| {
                let mut k = 1;
                let mut x = g.clone();
                while x != one {
                    x = mul_tuple(&x, g, q);
                    k += 1;
                }
                k
            })
            .collect();
        let box_size: u128 = orders.iter().map(|&o| o as u128).product();
        if box_size > guards.max_order as u128 {
            return Err(Error::SizeGuard(format!("relation search over {box_size} tuples")));
        }

        // exponent box, last coordinate fastest
        let k = generators.len();
        let mut relations: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        let mut dlog = BTreeMap::new();
        let mut exps = vec![0u64; k];
        loop {
            let mut t = one.clone();
            for (g, &e) in generators.iter().zip(&exps) {
                for _ in 0..e {
                    t = mul_tuple(&t, g, q);
                }
            }
            if t == one && exps.iter().any(|&e| e != 0) {
                relations.push(exps.iter().map(|&e| e as i64).collect());
            }
            dlog.entry(t).or_insert_with(|| exps.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
            if exps.iter().all(|&e| e == 0) {
                break;
            }
        }
        if dlog.len() as u128 != order {
            return Err(Error::Internal(format!(
                "generators reach {} of {order} elements",
                dlog.len()
            )));
        }
        let snf = smith_normal_form(&relations, k);
        let invariant_factors: Vec<u64> = snf.diagonal.iter().map(|d| d.unsigned_abs()).collect();
        Ok(DiamondQuotient {
            n,
            p,
            b,
            modulus: q,
            generators,
            orders,
            relations,
            invariant_factors,
            basis_change: snf.v,
            dlog,
        })
    }

    pub fn order(&self) -> usize {
        self.dlog.len()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.dlog.keys().cloned().collect()
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.invariant_factors.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Image of a diagonal `(d_1, .., d_n)` of units: reduce mod `p^b` and
    /// take the p-power part of each entry.
    pub fn project(&self, diag: &[u64]) -> Vec<u64> {
        diag.iter().map(|&d| pro_p_part(d, self.p, self.b)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        mul_tuple(a, b, self.modulus)
    }

    /// Exponents of `t` in the generators.
    pub fn discrete_log(&self, t: &[u64]) -> Result<&[u64]> {
        self.dlog
            .get(t)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidInput(format!("{t:?} is not in T_{}", self.b)))
    }
}

/// A homomorphism `T_b → Z/p^m`, given by its values on the generators of
/// the quotient.
#[derive(Clone, Debug, Serialize)]
pub struct TorusHom {
    pub n: usize,
    pub p: u64,
    pub b: u32,
    pub m: u32,
    pub modulus: u64,
    pub values: Vec<u64>,
    #[serde(skip)]
    table: BTreeMap<Vec<u64>, u64>,
}

impl TorusHom {
    /// Check every relation of the quotient and tabulate the values.
    pub fn from_generator_values(q: &DiamondQuotient, m: u32, values: Vec<u64>) -> Result<Self> {
        if values.len() != q.generators.len() {
            return Err(Error::LengthMismatch(format!(
                "{} values for {} generators",
                values.len(),
                q.generators.len()
            )));
        }
        let modulus = pow_u64(q.p, m);
        for rel in &q.relations {
            let s: i128 = rel.iter().zip(&values).map(|(&r, &v)| r as i128 * v as i128).sum();
            if s.rem_euclid(modulus as i128) != 0 {
                return Err(Error::InvalidInput(format!(
                    "values {values:?} violate the relation {rel:?}"
                )));
            }
        }
        let table = q
            .dlog
            .iter()
            .map(|(t, e)| {
                let s: u128 = e.iter().zip(&values).map(|(&x, &v)| x as u128 * v as u128).sum();
                (t.clone(), (s % modulus as u128) as u64)
            })
            .collect();
        Ok(TorusHom {
            n: q.n,
            p: q.p,
            b: q.b,
            m,
            modulus,
            values,
            table,
        })
    }

    pub fn trivial(q: &DiamondQuotient, m: u32) -> Self {
        Self::from_generator_values(q, m, vec![0; q.generators.len()]).expect("zero satisfies relations")
    }

    pub fn eval(&self, t: &[u64]) -> Result<u64> {
        self.table
            .get(t)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{t:?} is not in T_{}", self.b)))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

#[derive(Clone, Debug)]
pub struct HomGroup {
    /// Invariant factors of `T_b`.
    pub source_factors: Vec<u64>,
    /// `gcd(d_i, p^m)` for each invariant factor `d_i`.
    pub factors: Vec<u64>,
    pub order: u64,
    pub homs: Vec<TorusHom>,
}

/// `Hom(T_b, Z/p^m)` through the invariant-factor decomposition of `T_b`.
pub fn hom_group(q: &DiamondQuotient, m: u32, guards: &Guards) -> Result<HomGroup> {
    let pm = pow_u64(q.p, m);
    let k = q.generators.len();
    let g: Vec<u64> = q.invariant_factors.iter().map(|&d| num_integer::gcd(d, pm)).collect();
    let order: u128 = g.iter().map(|&x| x as u128).product();
    if order > guards.max_order as u128 {
        return Err(Error::SizeGuard(format!("{order} homomorphisms")));
    }
    let mut homs = Vec::with_capacity(order as usize);
    let mut s = vec![0u64; k];
    loop {
        // value on the i-th invariant-factor basis vector
        let w: Vec<u64> = (0..k).map(|i| s[i] * (pm / g[i])).collect();
        let values: Vec<u64> = (0..k)
            .map(|j| {
                let acc: i128 = (0..k).map(|i| q.basis_change[j][i] as i128 * w[i] as i128).sum();
                acc.rem_euclid(pm as i128) as u64
            })
            .collect();
        homs.push(TorusHom::from_generator_values(q, m, values)?);
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            s[i] += 1;
            if s[i] < g[i] {
                break;
            }
            s[i] = 0;
        }
        if s.iter().all(|&x| x == 0) {
            break;
        }
    }
    debug_assert_eq!(homs.len() as u128, order);
    Ok(HomGroup {
        source_factors: q.invariant_factors(),
        factors: g.into_iter().filter(|&x| x > 1).collect(),
        order: order as u64,
        homs,
    })
}

/// A function on the upper-triangular-mod-`p^c` group whose conjugation
/// behaviour is tested.
#[derive(Clone, Debug)]
pub enum DiamondFunction {
    /// A character inflated from `T_b` through the diagonal.
    Torus(TorusHom),
    /// `g ↦ g_12 · g_11^{-1} mod p`, which reads a unipotent coordinate and
    /// is therefore not torus-inflated.
    UnipotentCoordinate,
}

impl DiamondFunction {
    pub fn label(&self) -> String {
        match self {
            DiamondFunction::Torus(h) => format!("torus{:?}", h.values),
            DiamondFunction::UnipotentCoordinate => "unipotent-coordinate".into(),
        }
    }

    fn eval(&self, p: u64, entries: &[Vec<(u64, u32)>]) -> Result<u64> {
        match self {
            DiamondFunction::Torus(h) => {
                let mut t = Vec::with_capacity(entries.len());
                for (i, row) in entries.iter().enumerate() {
                    let (v, prec) = row[i];
                    if prec < h.b {
                        return Err(Error::Precision(format!("diagonal known mod p^{prec}, need p^{}", h.b)));
                    }
                    t.push(pro_p_part(v, p, h.b));
                }
                h.eval(&t)
            }
            DiamondFunction::UnipotentCoordinate => {
                let (a, pa) = entries[0][0];
                let (x, px) = entries[0][1];
                if pa < 1 || px < 1 {
                    return Err(Error::Precision("need entries mod p".into()));
                }
                let inv = mod_inv(a % p, p).ok_or_else(|| Error::InvalidInput("g_11 not a unit".into()))?;
                Ok(x % p * inv % p)
            }
        }
    }
}

fn lifted(g: &ModMatrix, prec: u32) -> Vec<Vec<(u64, u32)>> {
    g.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| (v, prec)).collect())
        .collect()
}

/// Check `F(λ^{-1} g λ) = F(g)` for every `g ∈ λIλ^{-1} ∩ I`, enumerating
/// `I` at level `N + B` so that conjugates are known to precision at least
/// `N`.
pub fn diamond_conjugation_check(
    group: &CongSubgroup,
    lambda: &Coweight,
    f: &DiamondFunction,
    guards: &Guards,
) -> Result<Report> {
    let lam = normalize_coweight(group.n, lambda)?;
    if let DiamondFunction::Torus(h) = f {
        if h.n != group.n || h.p != group.p || h.b > group.c {
            return Err(Error::InvalidInput(format!(
                "character of T_{} for GL_{} at p={} does not inflate to {}",
                h.b,
                h.n,
                h.p,
                group.label()
            )));
        }
    }
    if matches!(f, DiamondFunction::UnipotentCoordinate) && group.n < 2 {
        return Err(Error::InvalidInput("unipotent coordinate needs n ≥ 2".into()));
    }
    let bound = max_pairing(&lam);
    let level = group.level + bound;
    let big = group.at_level(level)?;
    let elements = enumerate_subgroup(&big, guards)?;
    let mut members = 0usize;
    let mut report = Report::pass("diamond_conjugation_check")
        .detail("group", group.label())
        .detail("prime", group.p)
        .detail("lambda", lambda)
        .detail("function", f.label())
        .detail("lift_level", level)
        .detail("denominator_bound", bound);
    for g in &elements {
        let conj = match conjugate_by_torus(g, group.p, &lam) {
            Ok(c) => c,
            Err(Error::NonIntegral { .. }) => continue,
            Err(e) => return Err(e),
        };
        if !group.contains_lifted(&conj)? {
            continue;
        }
        members += 1;
        let before = f.eval(group.p, &lifted(g, level))?;
        let after = f.eval(group.p, &conj)?;
        if before != after {
            let conj_vals: Vec<Vec<u64>> = conj.iter().map(|r| r.iter().map(|e| e.0).collect()).collect();
            report = report.fail(json!({
                "g": g,
                "conjugate": conj_vals,
                "F(g)": before,
                "F(conjugate)": after,
            }));
            break;
        }
    }
    Ok(report.detail("intersection_checked", members))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_structure() {
        let g = Guards::default();
        let q = DiamondQuotient::new(2, 3, 2, &g).unwrap();
        assert_eq!(q.order(), 9);
        assert_eq!(q.invariant_factors(), vec![3, 3]);
        assert_eq!(hom_group(&q, 1, &g).unwrap().order, 9);
        let q = DiamondQuotient::new(3, 2, 2, &g).unwrap();
        assert_eq!(hom_group(&q, 1, &g).unwrap().homs.len(), 8);
        let q = DiamondQuotient::new(2, 3, 1, &g).unwrap();
        assert_eq!(q.order(), 1);
        let h = hom_group(&q, 1, &g).unwrap();
        assert_eq!(h.homs.len(), 1);
        assert!(h.homs[0].is_trivial());
        // 1 + 2Z_2 mod 8 is Z/2 × Z/2, not cyclic
        let q = DiamondQuotient::new(1, 2, 3, &g).unwrap();
        assert_eq!(q.invariant_factors(), vec![2, 2]);
        assert_eq!(hom_group(&q, 2, &g).unwrap().order, 4);
        let q = DiamondQuotient::new(1, 3, 3, &g).unwrap();
        assert_eq!(q.invariant_factors(), vec![9]);
        assert_eq!(hom_group(&q, 1, &g).unwrap().order, 3);
        assert_eq!(hom_group(&q, 3, &g).unwrap().order, 9);
    }

    #[test]
    fn homs_are_homomorphisms() {
        let g = Guards::default();
        for (n, p, b, m) in [(2, 3, 2, 1), (1, 2, 4, 2), (2, 2, 3, 1), (2, 3, 3, 2)] {
            let q = DiamondQuotient::new(n, p, b, &g).unwrap();
            let hg = hom_group(&q, m, &g).unwrap();
            let els = q.elements();
            let mut seen = std::collections::BTreeSet::new();
            for h in &hg.homs {
                for x in &els {
                    for y in &els {
                        let lhs = h.eval(&q.mul(x, y)).unwrap();
                        assert_eq!(lhs, (h.eval(x).unwrap() + h.eval(y).unwrap()) % h.modulus);
                    }
                }
                let sig: Vec<u64> = els.iter().map(|x| h.eval(x).unwrap()).collect();
                assert!(seen.insert(sig), "duplicate homomorphism");
            }
        }
        let q = DiamondQuotient::new(1, 3, 2, &g).unwrap();
        assert!(TorusHom::from_generator_values(&q, 2, vec![1]).is_err());
        assert!(TorusHom::from_generator_values(&q, 2, vec![3]).is_ok());
    }

    #[test]
    fn conjugation_invariance() {
        let g = Guards::default();
        let group = CongSubgroup::new(2, 3, 1, 2, 2).unwrap();
        let q = DiamondQuotient::new(2, 3, 2, &g).unwrap();
        let lam = Coweight(vec![1, 0]);
        for h in hom_group(&q, 1, &g).unwrap().homs {
            let r = diamond_conjugation_check(&group, &lam, &DiamondFunction::Torus(h), &g).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = diamond_conjugation_check(&group, &lam, &DiamondFunction::UnipotentCoordinate, &g).unwrap();
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }
}
