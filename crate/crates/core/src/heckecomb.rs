//! Double-coset combinatorics for Iwahori-type subgroups.
//!
//! `|CλC/C| = p^{deg λ}` with representatives
//! `X(λ) = Π_{α>0} U_α(Z_p)/U_α(p^{<λ,α>} Z_p)`, stored as residue tuples
//! indexed by positive roots. The matrix realization of these tuples lives in
//! [`crate::finitegroup`]; this module never builds a matrix.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rootdata::{deg_coweight, is_dominant, pairing, Coweight, RootDatum, Weight};

/// Default bound on enumerated representative tuples.
pub const DEFAULT_REP_BOUND: u64 = 1_000_000;

/// A finite-level model able to count cosets independently.
pub trait CosetOracle {
    /// `|CλC/C|` computed without using the closed form.
    fn double_coset_count(&self, datum: &RootDatum, lambda: &Coweight, p: u64) -> Result<BigUint>;

    /// Set-level check of `CλCλ'C = C(λ+λ')C`.
    fn product_identity(
        &self,
        datum: &RootDatum,
        a: &Coweight,
        b: &Coweight,
        p: u64,
    ) -> Result<Report>;
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `p^{deg λ}` as an exact integer.
pub fn coset_count(datum: &RootDatum, lambda: &Coweight, p: u64) -> Result<BigUint> {
    check_prime(p)?;
    let deg = deg_coweight(datum, lambda)?;
    Ok(BigUint::from(p).pow(u32::try_from(deg).map_err(|_| {
        Error::InvalidInput(format!("degree {deg} too large"))
    })?))
}

/// One coordinate of a representative tuple: a copy of a positive root and
/// the modulus `p^{<λ,α>}` of its residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSlot {
    pub root: usize,
    pub copy: u32,
    pub exponent: u32,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetRepSet {
    pub lambda: Coweight,
    pub prime: u64,
    /// Slots with `<λ,α> > 0`, positive roots in nondecreasing height.
    pub slots: Vec<RepSlot>,
    /// Residue tuples in lexicographic order.
    pub reps: Vec<Vec<u64>>,
}

impl CosetRepSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

pub fn rep_slots(datum: &RootDatum, lambda: &Coweight, p: u64) -> Result<Vec<RepSlot>> {
    if !is_dominant(datum, lambda)? {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let mut slots = Vec::new();
    for &i in datum.positive_roots() {
        let k = pairing(datum, lambda, &Weight(datum.roots()[i].clone()))?;
        if k == 0 {
            continue;
        }
        let exponent = k as u32;
        let modulus = p
            .checked_pow(exponent)
            .ok_or_else(|| Error::InvalidInput(format!("p^{exponent} overflows")))?;
        for copy in 0..datum.dim_of(i) {
            slots.push(RepSlot {
                root: i,
                copy,
                exponent,
                modulus,
            });
        }
    }
    Ok(slots)
}

pub fn coset_representatives(datum: &RootDatum, lambda: &Coweight, p: u64) -> Result<CosetRepSet> {
    coset_representatives_bounded(datum, lambda, p, DEFAULT_REP_BOUND)
}

pub fn coset_representatives_bounded(
    datum: &RootDatum,
    lambda: &Coweight,
    p: u64,
    bound: u64,
) -> Result<CosetRepSet> {
    let count = coset_count(datum, lambda, p)?;
    if count > BigUint::from(bound) {
        return Err(Error::BoundExceeded {
            count: count.to_string(),
            bound,
        });
    }
    let slots = rep_slots(datum, lambda, p)?;
    let total = count.to_usize().expect("bounded count");
    let mut reps = Vec::with_capacity(total);
    let mut cur = vec![0u64; slots.len()];
    loop {
        reps.push(cur.clone());
        // odometer, last slot fastest, gives lexicographic order
        let mut i = slots.len();
        loop {
            if i == 0 {
                debug_assert_eq!(reps.len(), total);
                return Ok(CosetRepSet {
                    lambda: lambda.clone(),
                    prime: p,
                    slots,
                    reps,
                });
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < slots[i].modulus {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn big_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCountReport {
    pub lambda: Coweight,
    pub prime: u64,
    pub degree: u64,
    pub predicted: BigUint,
    pub oracle_count: Option<BigUint>,
    /// `None` when no oracle ran.
    pub matched: Option<bool>,
}

impl CosetCountReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "prime": self.prime,
            "degree": self.degree,
            "predicted": big_json(&self.predicted),
            "oracle_count": self.oracle_count.as_ref().map(big_json),
            "match": self.matched,
        })
    }

    pub fn to_report(&self) -> Report {
        let ok = self.matched.unwrap_or(true);
        let r = Report::with_verdict("coset_count", ok)
            .detail("lambda", &self.lambda)
            .detail("prime", self.prime)
            .detail("degree", self.degree)
            .detail("predicted", big_json(&self.predicted));
        match &self.oracle_count {
            Some(c) if !ok => r.fail(json!({ "oracle_count": big_json(c) })),
            Some(c) => r.detail("oracle_count", big_json(c)),
            None => r.note("no finite-level oracle ran"),
        }
    }
}

pub fn coset_count_report(
    datum: &RootDatum,
    lambda: &Coweight,
    p: u64,
    oracle: Option<&dyn CosetOracle>,
) -> Result<CosetCountReport> {
    let predicted = coset_count(datum, lambda, p)?;
    let degree = deg_coweight(datum, lambda)?;
    let oracle_count = oracle
        .map(|o| o.double_coset_count(datum, lambda, p))
        .transpose()?;
    let matched = oracle_count.as_ref().map(|c| *c == predicted);
    Ok(CosetCountReport {
        lambda: lambda.clone(),
        prime: p,
        degree,
        predicted,
        oracle_count,
        matched,
    })
}

/// Check `deg(λ+λ') = deg λ + deg λ'` and multiplicativity of the counts,
/// delegating the set-level identity to `oracle` when one is given.
pub fn product_identity_check(
    datum: &RootDatum,
    a: &Coweight,
    b: &Coweight,
    p: u64,
    oracle: Option<&dyn CosetOracle>,
) -> Result<Report> {
    for l in [a, b] {
        if !is_dominant(datum, l)? {
            return Err(Error::NotDominant(l.0.clone()));
        }
    }
    let sum = a.add(b);
    let (da, db, ds) = (
        deg_coweight(datum, a)?,
        deg_coweight(datum, b)?,
        deg_coweight(datum, &sum)?,
    );
    let (ca, cb, cs) = (
        coset_count(datum, a, p)?,
        coset_count(datum, b, p)?,
        coset_count(datum, &sum, p)?,
    );
    let additive = ds == da + db;
    let multiplicative = cs == &ca * &cb;
    let mut report = Report::with_verdict("product_identity", additive && multiplicative)
        .detail("lambda", a)
        .detail("lambda_prime", b)
        .detail("prime", p)
        .detail("degrees", [da, db, ds])
        .detail("counts", [big_json(&ca), big_json(&cb), big_json(&cs)]);
    if !report.passed() {
        report = report.fail(json!({ "deg_sum": ds, "deg_parts": [da, db] }));
    }
    match oracle {
        Some(o) => {
            let set_check = o.product_identity(datum, a, b, p)?;
            let ok = set_check.passed();
            report = report.detail("set_identity", set_check.to_json());
            if !ok {
                let w = set_check.witness.clone().unwrap_or(Value::Null);
                report = report.fail(json!({ "set_identity": w }));
            }
        }
        None => report = report.note("set-level identity not checked: no matrix realization"),
    }
    Ok(report)
}
