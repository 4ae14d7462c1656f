//! Sparse multivariate polynomials with packed exponent vectors.
//!
//! A monomial in at most [`MAX_VARS`] variables is a `u64`, one byte per
//! exponent with `X1` in the most significant byte, so integer order on the
//! keys is lexicographic order on exponent vectors. Products are truncated at
//! a total degree, which models the power-series ring modulo `m^{T+1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{Field, Rationals};

pub const MAX_VARS: usize = 8;
/// Default truncation order for power-series arithmetic.
pub const DEFAULT_TRUNCATION: u32 = 12;
const MAX_EXP: u32 = 255;

pub type Monomial = u64;

#[inline]
fn shift(j: usize) -> u32 {
    8 * (MAX_VARS - 1 - j) as u32
}

pub fn mono_from_exps(exps: &[u32]) -> Result<Monomial> {
    if exps.len() > MAX_VARS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_VARS} variables are supported"
        )));
    }
    let mut m = 0u64;
    for (j, &e) in exps.iter().enumerate() {
        if e > MAX_EXP {
            return Err(Error::InvalidInput(format!("exponent {e} too large")));
        }
        m |= (e as u64) << shift(j);
    }
    Ok(m)
}

#[inline]
pub fn mono_exp(m: Monomial, j: usize) -> u32 {
    ((m >> shift(j)) & 0xff) as u32
}

pub fn mono_exps(m: Monomial, r: usize) -> Vec<u32> {
    (0..r).map(|j| mono_exp(m, j)).collect()
}

#[inline]
pub fn mono_degree(m: Monomial) -> u32 {
    (0..MAX_VARS).map(|j| mono_exp(m, j)).sum()
}

/// The monomial `X_{j+1}`.
#[inline]
pub fn mono_var(j: usize) -> Monomial {
    1u64 << shift(j)
}

/// Highest variable index with a nonzero exponent, plus one.
pub fn mono_support_len(m: Monomial) -> usize {
    (0..MAX_VARS).rev().find(|&j| mono_exp(m, j) > 0).map_or(0, |j| j + 1)
}

/// `a * b`; exponents must stay below 256, which truncation guarantees.
#[inline]
pub fn mono_mul(a: Monomial, b: Monomial) -> Monomial {
    a + b
}

pub fn mono_divides(a: Monomial, b: Monomial) -> bool {
    (0..MAX_VARS).all(|j| mono_exp(a, j) <= mono_exp(b, j))
}

/// All monomials in `r` variables of total degree at most `d`, ascending.
pub fn monomials_up_to(r: usize, d: u32) -> Vec<Monomial> {
    fn rec(j: usize, r: usize, left: u32, acc: Monomial, out: &mut Vec<Monomial>) {
        if j == r {
            out.push(acc);
            return;
        }
        for e in 0..=left {
            rec(j + 1, r, left - e, acc | ((e as u64) << shift(j)), out);
        }
    }
    let mut out = Vec::new();
    rec(0, r, d, 0, &mut out);
    out.sort_unstable();
    out
}

pub fn format_monomial(m: Monomial, r: usize) -> String {
    let mut parts = Vec::new();
    for j in 0..r.max(mono_support_len(m)) {
        match mono_exp(m, j) {
            0 => {}
            1 => parts.push(format!("X{}", j + 1)),
            e => parts.push(format!("X{}^{e}", j + 1)),
        }
    }
    parts.join("*")
}

/// A polynomial over `F`: sorted `(monomial, coefficient)` pairs, no zeros.
pub struct Poly<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Self {
            terms: self.terms.clone(),
        }
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter()).finish()
    }
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::monomial(field, 0, c)
    }

    pub fn monomial(field: &F, m: Monomial, c: F::Elem) -> Self {
        if field.is_zero(&c) {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    /// `X_{j+1}`.
    pub fn var(field: &F, j: usize) -> Self {
        Self::monomial(field, mono_var(j), field.one())
    }

    /// Collect arbitrary terms, combining repeats and dropping zeros.
    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut map: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self {
            terms: map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, field: &F, m: Monomial) -> F::Elem {
        match self.terms.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => field.zero(),
        }
    }

    pub fn constant_term(&self, field: &F) -> F::Elem {
        self.coeff(field, 0)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| mono_degree(t.0)).max()
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|t| mono_degree(t.0)).min()
    }

    /// Number of variables actually used.
    pub fn support_len(&self) -> usize {
        self.terms.iter().map(|t| mono_support_len(t.0)).max().unwrap_or(0)
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add(&a[i].1, &b[j].1);
                    if !field.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { terms: out }
    }

    pub fn neg(&self, field: &F) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (*m, field.mul(x, c)))
                .filter(|(_, x)| !field.is_zero(x))
                .collect(),
        }
    }

    /// Product truncated above total degree `trunc`.
    pub fn mul(&self, field: &F, other: &Self, trunc: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: Vec<(Monomial, F::Elem)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            let d1 = mono_degree(*m1);
            for (m2, c2) in &other.terms {
                if d1 + mono_degree(*m2) > trunc {
                    continue;
                }
                acc.push((mono_mul(*m1, *m2), field.mul(c1, c2)));
            }
        }
        acc.sort_by_key(|t| t.0);
        let mut terms: Vec<(Monomial, F::Elem)> = Vec::with_capacity(acc.len());
        for (m, c) in acc {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(&last.1, &c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !field.is_zero(c));
        Self { terms }
    }

    /// `m * self`, truncated.
    pub fn mul_monomial(&self, m: Monomial, trunc: u32) -> Self {
        let dm = mono_degree(m);
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(x, _)| mono_degree(*x) + dm <= trunc)
                .map(|(x, c)| (mono_mul(*x, m), c.clone()))
                .collect(),
        }
    }

    /// Drop terms of total degree above `trunc`.
    pub fn truncate(&self, trunc: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(*m) <= trunc)
                .cloned()
                .collect(),
        }
    }

    /// Coefficients of `X_1, .., X_r`.
    pub fn linear_part(&self, field: &F, r: usize) -> Result<Vec<F::Elem>> {
        if !field.is_zero(&self.constant_term(field)) {
            return Err(Error::NonzeroConstant);
        }
        Ok((0..r).map(|j| self.coeff(field, mono_var(j))).collect())
    }

    pub fn format(&self, field: &F, r: usize) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest monomials first reads more naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = field.format(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(*m, r);
            match (mono.is_empty(), coeff == "1") {
                (true, _) => out.push_str(&coeff),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&coeff);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    /// Image of a rational polynomial in `F`.
    pub fn from_rational(field: &F, q: &Poly<Rationals>) -> Result<Self> {
        let mut terms = Vec::with_capacity(q.terms.len());
        for (m, c) in &q.terms {
            terms.push((*m, field.from_rational(c)?));
        }
        Ok(Self::from_terms(field, terms))
    }
}

/// Polynomial determinant by cofactor expansion along the first row.
pub fn poly_det<F: Field>(field: &F, m: &[Vec<Poly<F>>], trunc: u32) -> Poly<F> {
    match m.len() {
        0 => Poly::constant(field, field.one()),
        1 => m[0][0].clone(),
        2 => m[0][0]
            .mul(field, &m[1][1], trunc)
            .sub(field, &m[0][1].mul(field, &m[1][0], trunc)),
        n => {
            let mut acc = Poly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly<F>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(field, &poly_det(field, &minor, trunc), trunc);
                acc = if j % 2 == 0 {
                    acc.add(field, &term)
                } else {
                    acc.sub(field, &term)
                };
            }
            acc
        }
    }
}

/// Rational polynomial from `[coeff, [exps]]` terms.
pub fn qpoly_from_terms(terms: &[(BigRational, Vec<u32>)]) -> Result<Poly<Rationals>> {
    let mut out = Vec::with_capacity(terms.len());
    for (c, e) in terms {
        out.push((mono_from_exps(e)?, c.clone()));
    }
    Ok(Poly::from_terms(&Rationals, out))
}
