//! The congruence subgroups `I(b,c)` and their finite images.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::modmat::{ModMatrix, MAX_DIM};
use crate::arith::{is_prime, mod_pow, pow_u64};
use crate::error::{Error, Result};
use crate::report::Report;

/// Hard limits keeping every computation exhaustive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    pub max_n: usize,
    /// Largest finite group image that will be enumerated.
    pub max_order: u64,
    /// Largest set of cosets an orbit computation may produce.
    pub max_orbit: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_n: 3,
            max_order: 1_000_000,
            max_orbit: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupKind {
    /// Mod `p^b` scalar times upper unitriangular, mod `p^c` upper triangular.
    Standard,
    /// Mod `p^c` upper triangular; `b` is ignored.
    Iwahori,
}

/// `I(b,c) ⊂ GL_n(Z_p)` together with the level `N` of its finite image in
/// `GL_n(Z/p^N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongSubgroup {
    pub n: usize,
    pub p: u64,
    pub b: u32,
    pub c: u32,
    pub level: u32,
    pub kind: SubgroupKind,
}

impl CongSubgroup {
    pub fn new(n: usize, p: u64, b: u32, c: u32, level: u32) -> Result<Self> {
        Self::with_kind(n, p, b, c, level, SubgroupKind::Standard)
    }

    pub fn iwahori(n: usize, p: u64, c: u32, level: u32) -> Result<Self> {
        Self::with_kind(n, p, 1, c, level, SubgroupKind::Iwahori)
    }

    pub fn with_kind(n: usize, p: u64, b: u32, c: u32, level: u32, kind: SubgroupKind) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidInput(format!("n = {n} outside 1..={MAX_DIM}")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1 <= b && b <= c && c <= level) {
            return Err(Error::InvalidInput(format!(
                "need 1 ≤ b ≤ c ≤ N, got b={b}, c={c}, N={level}"
            )));
        }
        if p.checked_pow(level).is_none_or(|q| q > u32::MAX as u64) {
            return Err(Error::InvalidInput(format!("p^N = {p}^{level} too large")));
        }
        Ok(CongSubgroup {
            n,
            p,
            b,
            c,
            level,
            kind,
        })
    }

    pub fn at_level(&self, level: u32) -> Result<Self> {
        Self::with_kind(self.n, self.p, self.b, self.c, level, self.kind)
    }

    /// The same kind with a different `c`, used for `I(b,c-1) ⊃ I(b,c)`.
    pub fn with_c(&self, c: u32) -> Result<Self> {
        Self::with_kind(self.n, self.p, self.b, c, self.level.max(c), self.kind)
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.level)
    }

    pub fn label(&self) -> String {
        match self.kind {
            SubgroupKind::Standard => format!("I({},{})", self.b, self.c),
            SubgroupKind::Iwahori => format!("Iw({})", self.c),
        }
    }

    /// Order of the image in `GL_n(Z/p^N)`.
    pub fn order(&self) -> u128 {
        let (p, n, big_n) = (self.p as u128, self.n as u32, self.level);
        let q = p.pow(big_n);
        let units = q - q / p;
        let off = n * (n - 1) / 2;
        let upper = q.pow(off);
        let lower = p.pow(big_n - self.c).pow(off);
        let diag = match self.kind {
            SubgroupKind::Standard => units * p.pow(big_n - self.b).pow(n - 1),
            SubgroupKind::Iwahori => units.pow(n),
        };
        diag * upper * lower
    }

    /// Membership for entries given with individual precisions: entry
    /// `(i, j)` is `value` modulo `p^prec`.
    pub fn contains_lifted(&self, entries: &[Vec<(u64, u32)>]) -> Result<bool> {
        let p = self.p;
        let pc = pow_u64(p, self.c);
        let pb = pow_u64(p, self.b);
        let n = self.n;
        for (i, row) in entries.iter().enumerate() {
            for (j, &(v, prec)) in row.iter().enumerate() {
                if i > j {
                    if prec < self.c {
                        return Err(Error::Precision(format!(
                            "entry ({i},{j}) known mod p^{prec}, need p^{}",
                            self.c
                        )));
                    }
                    if v % pc != 0 {
                        return Ok(false);
                    }
                } else if i == j {
                    if prec < 1 || (self.kind == SubgroupKind::Standard && prec < self.b) {
                        return Err(Error::Precision(format!(
                            "diagonal entry {i} known mod p^{prec}"
                        )));
                    }
                    if v % p == 0 {
                        return Ok(false);
                    }
                    if self.kind == SubgroupKind::Standard && i > 0 && (v + pb - entries[0][0].0 % pb) % pb != 0 {
                        return Ok(false);
                    }
                }
            }
        }
        debug_assert_eq!(entries.len(), n);
        Ok(true)
    }

    /// Membership of a matrix over `Z/p^L` with `L ≥ c`.
    pub fn contains(&self, g: &ModMatrix) -> Result<bool> {
        let prec = exponent_of(g.modulus(), self.p)?;
        let rows: Vec<Vec<(u64, u32)>> = g
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| (v, prec)).collect())
            .collect();
        self.contains_lifted(&rows)
    }

    /// Topological generators, reduced modulo `modulus`.
    pub fn generators(&self, modulus: u64) -> Vec<ModMatrix> {
        let (n, p) = (self.n, self.p);
        let unit_gens: Vec<u64> = if p == 2 {
            vec![modulus - 1, 3 % modulus]
        } else {
            vec![primitive_root_mod_p2(p) % modulus]
        };
        let mut gens = Vec::new();
        let diag_at = |i: usize, x: u64| {
            let mut d = vec![1 % modulus; n];
            d[i] = x;
            ModMatrix::diagonal(modulus, &d)
        };
        match self.kind {
            SubgroupKind::Standard => {
                for &u in &unit_gens {
                    gens.push(ModMatrix::diagonal(modulus, &vec![u; n]));
                }
                let one_unit = (1 + pow_u64(p, self.b)) % modulus;
                for i in 0..n {
                    gens.push(diag_at(i, one_unit));
                    if p == 2 && self.b == 1 {
                        gens.push(diag_at(i, modulus - 1));
                    }
                }
            }
            SubgroupKind::Iwahori => {
                for i in 0..n {
                    for &u in &unit_gens {
                        gens.push(diag_at(i, u));
                    }
                }
            }
        }
        let pc = pow_u64(p, self.c) % modulus;
        for i in 0..n {
            for j in i + 1..n {
                gens.push(ModMatrix::elementary(n, modulus, i, j, 1));
                gens.push(ModMatrix::elementary(n, modulus, j, i, pc));
            }
        }
        gens.sort();
        gens.dedup();
        gens.retain(|g| *g != ModMatrix::identity(n, modulus));
        gens
    }
}

/// `k` with `p^k = q`.
pub(crate) fn exponent_of(q: u64, p: u64) -> Result<u32> {
    let mut k = 0;
    let mut x = 1u64;
    while x < q {
        x *= p;
        k += 1;
    }
    if x == q {
        Ok(k)
    } else {
        Err(Error::InvalidInput(format!("modulus {q} is not a power of {p}")))
    }
}

fn multiplicative_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Smallest generator of `(Z/p^2)^×`, which then generates `(Z/p^k)^×` for
/// every `k` (p odd).
pub fn primitive_root_mod_p2(p: u64) -> u64 {
    let m = p * p;
    (2..m)
        .find(|&g| g % p != 0 && multiplicative_order(g, m) == p * (p - 1))
        .expect("odd primes have primitive roots")
}

fn units_below(q: u64, p: u64) -> Vec<u64> {
    (0..q).filter(|x| x % p != 0).collect()
}

/// Every element of the image of `group` in `GL_n(Z/p^N)`, in lexicographic
/// order of entry tuples.
pub fn enumerate_subgroup(group: &CongSubgroup, guards: &Guards) -> Result<Vec<ModMatrix>> {
    if group.n > guards.max_n {
        return Err(Error::SizeGuard(format!("n = {} exceeds {}", group.n, guards.max_n)));
    }
    let order = group.order();
    if order > guards.max_order as u128 {
        return Err(Error::SizeGuard(format!(
            "{} at level {} has {order} elements, limit {}",
            group.label(),
            group.level,
            guards.max_order
        )));
    }
    let (n, p, q) = (group.n, group.p, group.modulus());
    let pb = pow_u64(p, group.b);
    let pc = pow_u64(p, group.c);
    let units = units_below(q, p);
    let all: Vec<u64> = (0..q).collect();
    let lower: Vec<u64> = (0..q).step_by(pc as usize).collect();

    let mut out = Vec::with_capacity(order as usize);
    let mut cur = ModMatrix::zero(n, q);
    fn fill(
        pos: usize,
        cur: &mut ModMatrix,
        out: &mut Vec<ModMatrix>,
        ctx: &(&CongSubgroup, u64, &[u64], &[u64], &[u64]),
    ) {
        let (group, pb, units, all, lower) = *ctx;
        let n = group.n;
        if pos == n * n {
            out.push(*cur);
            return;
        }
        let (i, j) = (pos / n, pos % n);
        let tied: Vec<u64>;
        let choices: &[u64] = if i < j {
            all
        } else if i > j {
            lower
        } else if i > 0 && group.kind == SubgroupKind::Standard {
            let d0 = cur.get(0, 0) % pb;
            tied = units.iter().copied().filter(|x| x % pb == d0).collect();
            &tied
        } else {
            units
        };
        for &x in choices {
            cur.set(i, j, x);
            fill(pos + 1, cur, out, ctx);
        }
        cur.set(i, j, 0);
    }
    fill(0, &mut cur, &mut out, &(group, pb, &units, &all, &lower));
    if out.len() as u128 != order {
        return Err(Error::Internal(format!(
            "enumerated {} elements, order formula gives {order}",
            out.len()
        )));
    }
    Ok(out)
}

/// Membership of every element, closure under inversion (exhaustive) and
/// under multiplication on `samples` random pairs.
pub fn closure_report(group: &CongSubgroup, elements: &[ModMatrix], seed: u64, samples: usize) -> Result<Report> {
    let set: HashSet<&ModMatrix> = elements.iter().collect();
    let mut report = Report::pass("subgroup_closure")
        .detail("group", group.label())
        .detail("level", group.level)
        .detail("order", elements.len())
        .detail("sampled_products", samples)
        .detail("seed", seed);
    for g in elements {
        if !group.contains(g)? {
            return Ok(report.fail(json!({ "non_member": g })));
        }
        match g.inverse() {
            Some(inv) if set.contains(&inv) => {}
            _ => return Ok(report.fail(json!({ "inverse_missing": g }))),
        }
    }
    if elements.is_empty() {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = &elements[rng.gen_range(0..elements.len())];
        let b = &elements[rng.gen_range(0..elements.len())];
        let ab = a.mul(b);
        if !set.contains(&ab) {
            report = report.fail(json!({ "a": a, "b": b, "product": ab }));
            break;
        }
    }
    Ok(report)
}

/// The subgroup generated by `gens`, by breadth-first closure.
pub fn generated_subgroup(gens: &[ModMatrix], n: usize, modulus: u64, bound: usize) -> Result<Vec<ModMatrix>> {
    let id = ModMatrix::identity(n, modulus);
    let mut seen: HashSet<ModMatrix> = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.mul(&x);
            if seen.insert(y) {
                if seen.len() > bound {
                    return Err(Error::SizeGuard(format!("closure exceeds {bound} elements")));
                }
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<ModMatrix> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Diagonal torus projection onto the p-power part: `x ↦ x^e mod p^b`
/// with `e ≡ 0 mod (p-1)` and `e ≡ 1 mod p^{b-1}`.
pub fn pro_p_exponent(p: u64, b: u32) -> u64 {
    if p == 2 {
        1
    } else {
        crate::arith::crt(0, p - 1, 1 % pow_u64(p, b - 1), pow_u64(p, b - 1))
    }
}

pub fn pro_p_part(x: u64, p: u64, b: u32) -> u64 {
    let q = pow_u64(p, b);
    mod_pow(x % q, pro_p_exponent(p, b), q)
}
