//! Exact fields and dense linear algebra over them.
//!
//! Two coefficient fields are supported: the rationals (arbitrary precision)
//! and prime fields `F_p` with a runtime modulus. Matrices are plain
//! row-major `Vec<Vec<Elem>>`; everything here is small enough that a dense
//! Gaussian elimination is the right tool.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime, mod_inv};
use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

/// The prime field `F_p`; elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            mod_inv(*a, self.p)
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let p = BigInt::from(self.p);
        let num = (q.numer() % &p + &p) % &p;
        let den = (q.denom() % &p + &p) % &p;
        let den = den.to_u64().unwrap_or(0);
        let inv = self
            .inv(&den)
            .ok_or_else(|| Error::NotInField(format!("{q} in F_{}", self.p)))?;
        Ok(num.to_u64().unwrap_or(0) * inv % self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("Fp:{}", self.p)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..nrows {
            if i != r && !field.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for j in c..ncols {
                    let t = field.mul(&factor, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

pub fn transpose<T: Clone>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Basis of the right kernel `{x : M x = 0}`.
pub fn kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&m[r][f]);
            }
            v
        })
        .collect()
}

/// Row-reduced basis of a span, for repeated membership queries.
pub struct RowSpace<F: Field> {
    field: F,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(field: &F, vectors: &[Vec<F::Elem>]) -> Self {
        let mut rows = vectors.to_vec();
        let pivots = rref(field, &mut rows);
        rows.truncate(pivots.len());
        Self {
            field: field.clone(),
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&w[pc]) {
                let factor = w[pc].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        w.iter().all(|x| f.is_zero(x))
    }
}

/// Determinant by cofactor expansion; only used on tiny matrices.
pub fn det<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    match n {
        0 => field.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = field.zero();
            for j in 0..n {
                if field.is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<F::Elem>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = field.mul(&m[0][j], &det(field, &minor));
                acc = if j % 2 == 0 {
                    field.add(&acc, &term)
                } else {
                    field.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

/// Parse an exact rational literal such as `3`, `-2/5`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational literal `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn rank_over_q_and_f2_differ() {
        // rows of (X1+X2, X1-X2): determinant -2
        let rows = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(rank(&Rationals, &rows), 2);
        let f2 = PrimeField::new(2).unwrap();
        let rows2 = vec![vec![1u64, 1], vec![1, f2.from_i64(-1)]];
        assert_eq!(rank(&f2, &rows2), 1);
        assert_eq!(det(&Rationals, &rows), q(-2));
    }

    #[test]
    fn kernel_is_annihilated() {
        let f5 = PrimeField::new(5).unwrap();
        let rows = vec![vec![1u64, 2, 3], vec![2, 4, 0]];
        let ker = kernel(&f5, &rows, 3);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for r in &rows {
                let s = r.iter().zip(v).fold(0, |acc, (a, b)| f5.add(&acc, &f5.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn rational_embedding_into_fp() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.from_rational(&parse_rational("1/2").unwrap()).unwrap(), 3);
        assert_eq!(f5.from_rational(&parse_rational("-3").unwrap()).unwrap(), 2);
        assert!(f5.from_rational(&parse_rational("1/5").unwrap()).is_err());
        assert!(PrimeField::new(6).is_err());
    }

    #[test]
    fn row_space_membership() {
        let rows = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        let span = RowSpace::new(&Rationals, &rows);
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&[q(2), q(3), q(5)]));
        assert!(!span.contains(&[q(0), q(0), q(1)]));
    }
}
