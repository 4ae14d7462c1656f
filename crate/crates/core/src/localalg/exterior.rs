//! Exterior powers of finite-dimensional vector spaces.
//!
//! `∧^k(F^n)` has the basis `e_S` for `k`-subsets `S`, encoded as bitmasks and
//! ordered lexicographically by their sorted index lists (see
//! [`crate::arith::subsets`]). Dual spaces use the dual basis, so a vector in
//! `(∧^k F^n)^∨` is also indexed by `k`-subsets.

use std::collections::HashMap;

use crate::arith::{mask_indices, subsets, wedge_sign};
use crate::linalg::{det, Field};

/// Lexicographic basis of `∧^k(F^n)` with reverse lookup.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    pub n: usize,
    pub k: usize,
    pub masks: Vec<u32>,
    index: HashMap<u32, usize>,
}

impl WedgeBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let masks = subsets(n, k);
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Self { n, k, masks, index }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn position(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }
}

/// Matrix of `∧^k M` for an `a × b` matrix `M`: rows are `k`-subsets of the
/// rows of `M`, columns `k`-subsets of its columns, entries the minors.
pub fn wedge_power<F: Field>(field: &F, m: &[Vec<F::Elem>], ncols: usize, k: usize) -> Vec<Vec<F::Elem>> {
    let rows = WedgeBasis::new(m.len(), k);
    let cols = WedgeBasis::new(ncols, k);
    rows.masks
        .iter()
        .map(|&rs| {
            let ri = mask_indices(rs);
            cols.masks
                .iter()
                .map(|&cs| {
                    let ci = mask_indices(cs);
                    let sub: Vec<Vec<F::Elem>> = ri
                        .iter()
                        .map(|&r| ci.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    det(field, &sub)
                })
                .collect()
        })
        .collect()
}

/// `x ∧ y` for `x ∈ ∧^i`, `y ∈ ∧^j` of an `n`-dimensional space, by
/// multiplying basis monomials.
pub fn wedge<F: Field>(field: &F, n: usize, i: usize, x: &[F::Elem], j: usize, y: &[F::Elem]) -> Vec<F::Elem> {
    let bi = WedgeBasis::new(n, i);
    let bj = WedgeBasis::new(n, j);
    let out_basis = WedgeBasis::new(n, i + j);
    let mut out = vec![field.zero(); out_basis.len()];
    for (a, xa) in bi.masks.iter().zip(x) {
        if field.is_zero(xa) {
            continue;
        }
        for (b, yb) in bj.masks.iter().zip(y) {
            if field.is_zero(yb) {
                continue;
            }
            let Some(sign) = wedge_sign(*a, *b) else {
                continue;
            };
            let pos = out_basis.position(a | b).expect("union is a basis subset");
            let mut t = field.mul(xa, yb);
            if sign < 0 {
                t = field.neg(&t);
            }
            out[pos] = field.add(&out[pos], &t);
        }
    }
    out
}

/// `α ∧ β` for functionals `α ∈ (∧^i)^∨`, `β ∈ (∧^j)^∨`, evaluated on each
/// basis vector `e_S` by the shuffle formula
/// `(α∧β)(e_S) = Σ_{T ⊂ S, |T| = i} ε(T, S∖T) α(e_T) β(e_{S∖T})`.
pub fn shuffle_wedge<F: Field>(
    field: &F,
    n: usize,
    i: usize,
    alpha: &[F::Elem],
    j: usize,
    beta: &[F::Elem],
) -> Vec<F::Elem> {
    let bi = WedgeBasis::new(n, i);
    let bj = WedgeBasis::new(n, j);
    let out_basis = WedgeBasis::new(n, i + j);
    out_basis
        .masks
        .iter()
        .map(|&s| {
            let mut acc = field.zero();
            let members = mask_indices(s);
            for t in subsets(members.len(), i) {
                let mask_t: u32 = mask_indices(t).iter().map(|&k| 1u32 << members[k]).sum();
                let rest = s & !mask_t;
                let a = &alpha[bi.position(mask_t).expect("subset")];
                let b = &beta[bj.position(rest).expect("subset")];
                if field.is_zero(a) || field.is_zero(b) {
                    continue;
                }
                let mut t = field.mul(a, b);
                if wedge_sign(mask_t, rest) == Some(-1) {
                    t = field.neg(&t);
                }
                acc = field.add(&acc, &t);
            }
            acc
        })
        .collect()
}

pub fn mat_vec<F: Field>(field: &F, m: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};

    #[test]
    fn wedge_is_anticommutative() {
        let q = Rationals;
        let x: Vec<_> = [1, 2, 3].iter().map(|&v| q.from_i64(v)).collect();
        let y: Vec<_> = [0, 1, -1].iter().map(|&v| q.from_i64(v)).collect();
        let xy = wedge(&q, 3, 1, &x, 1, &y);
        let yx = wedge(&q, 3, 1, &y, 1, &x);
        assert_eq!(xy, yx.iter().map(|v| -v).collect::<Vec<_>>());
        assert!(wedge(&q, 3, 1, &x, 1, &x).iter().all(|v| q.is_zero(v)));
        assert_eq!(shuffle_wedge(&q, 3, 1, &x, 1, &y), xy);
    }

    #[test]
    fn top_wedge_power_is_determinant() {
        let f5 = PrimeField::new(5).unwrap();
        let m = vec![vec![1u64, 2], vec![3, 4]];
        let top = wedge_power(&f5, &m, 2, 2);
        assert_eq!(top, vec![vec![f5.from_i64(-2)]]);
        let zeroth = wedge_power(&f5, &m, 2, 0);
        assert_eq!(zeroth, vec![vec![1]]);
    }
}
