//! Koszul complexes over the truncated power-series ring and the comparison
//! map `K(f) → K(X)` induced by writing `f_i = Σ_j a_ij X_j`.
//!
//! Matrices act on column vectors: the matrix of `d_k : K_k → K_{k-1}` has
//! rows indexed by `(k-1)`-subsets and columns by `k`-subsets.

use crate::arith::{binomial, mask_indices};
use crate::error::{Error, Result};
use crate::linalg::{rank, transpose, Field};

use super::exterior::WedgeBasis;
use super::poly::{mono_exp, mono_var, poly_det, Poly, MAX_VARS};

#[derive(Clone, Debug)]
pub struct KoszulComplex<F: Field> {
    pub n: usize,
    /// `differentials[k-1]` is the matrix of `d_k`, for `k = 1..=n`.
    pub differentials: Vec<Vec<Vec<Poly<F>>>>,
}

/// The Koszul complex on `gens`:
/// `d(e_S) = Σ_t (-1)^t f_{s_t} e_{S ∖ s_t}` for `S = {s_0 < s_1 < ..}`.
pub fn koszul_complex<F: Field>(field: &F, gens: &[Poly<F>]) -> KoszulComplex<F> {
    let n = gens.len();
    let mut differentials = Vec::with_capacity(n);
    for k in 1..=n {
        let src = WedgeBasis::new(n, k);
        let dst = WedgeBasis::new(n, k - 1);
        let mut d = vec![vec![Poly::zero(); src.len()]; dst.len()];
        for (col, &s) in src.masks.iter().enumerate() {
            for (t, &i) in mask_indices(s).iter().enumerate() {
                let row = dst.position(s & !(1 << i)).expect("face of a subset");
                d[row][col] = if t % 2 == 0 {
                    gens[i].clone()
                } else {
                    gens[i].neg(field)
                };
            }
        }
        differentials.push(d);
    }
    KoszulComplex { n, differentials }
}

pub fn poly_mat_mul<F: Field>(
    field: &F,
    a: &[Vec<Poly<F>>],
    b: &[Vec<Poly<F>>],
    trunc: u32,
) -> Vec<Vec<Poly<F>>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter().zip(b).fold(Poly::zero(), |acc, (x, brow)| {
                        if x.is_zero() || brow[j].is_zero() {
                            acc
                        } else {
                            acc.add(field, &x.mul(field, &brow[j], trunc))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

impl<F: Field> KoszulComplex<F> {
    /// First `(k, row, col)` where `d_{k-1} ∘ d_k` has a nonzero entry.
    pub fn square_defect(&self, field: &F, trunc: u32) -> Option<(usize, usize, usize)> {
        for k in 2..=self.n {
            let prod = poly_mat_mul(
                field,
                &self.differentials[k - 2],
                &self.differentials[k - 1],
                trunc,
            );
            for (r, row) in prod.iter().enumerate() {
                if let Some(c) = row.iter().position(|x| !x.is_zero()) {
                    return Some((k, r, c));
                }
            }
        }
        None
    }

    /// `dim_k H^i(Hom(K, k))` for `i = 0..=n`, by ranks of the reduced
    /// codifferentials `δ^i = (d_{i+1} mod m)^T`.
    pub fn hom_to_residue_dims(&self, field: &F) -> Vec<usize> {
        let n = self.n;
        let reduced_ranks: Vec<usize> = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let m: Vec<Vec<F::Elem>> = d
                    .iter()
                    .map(|row| row.iter().map(|x| x.constant_term(field)).collect())
                    .collect();
                rank(field, &transpose(&m, binomial(n, k + 1)))
            })
            .collect();
        (0..=n)
            .map(|i| {
                let out = if i < n { reduced_ranks[i] } else { 0 };
                let inc = if i > 0 { reduced_ranks[i - 1] } else { 0 };
                binomial(n, i) - out - inc
            })
            .collect()
    }
}

/// How monomials are distributed when writing `f = Σ_j a_j X_j`: each
/// monomial goes to the first variable in the priority list dividing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisionOrder {
    /// Smallest variable index first.
    Canonical,
    /// A permutation of `0..r`.
    Priority(Vec<usize>),
}

impl DivisionOrder {
    fn priority(&self, r: usize) -> Result<Vec<usize>> {
        match self {
            DivisionOrder::Canonical => Ok((0..r).collect()),
            DivisionOrder::Priority(p) => {
                let mut sorted = p.clone();
                sorted.sort_unstable();
                if sorted != (0..r).collect::<Vec<_>>() {
                    return Err(Error::InvalidInput(format!(
                        "division priority {p:?} is not a permutation of 0..{r}"
                    )));
                }
                Ok(p.clone())
            }
        }
    }
}

/// Quotients `a_j` with `f = Σ_j a_j X_j`.
pub fn divide_by_variables<F: Field>(
    field: &F,
    f: &Poly<F>,
    r: usize,
    order: &DivisionOrder,
) -> Result<Vec<Poly<F>>> {
    if r > MAX_VARS {
        return Err(Error::InvalidInput(format!("{r} variables")));
    }
    let priority = order.priority(r)?;
    let mut buckets: Vec<Vec<(u64, F::Elem)>> = vec![Vec::new(); r];
    for (m, c) in f.terms() {
        let j = priority
            .iter()
            .copied()
            .find(|&j| mono_exp(*m, j) > 0)
            .ok_or(Error::NonzeroConstant)?;
        buckets[j].push((m - mono_var(j), c.clone()));
    }
    Ok(buckets
        .into_iter()
        .map(|b| Poly::from_terms(field, b))
        .collect())
}

/// The chain map `∧^•(a) : K(f) → K(X_1..X_r)`.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    pub n: usize,
    pub r: usize,
    /// `quotients[i][j] = a_ij`.
    pub quotients: Vec<Vec<Poly<F>>>,
    /// `components[k][T][S] = det a[S, T]`, rows `k`-subsets of `0..r`,
    /// columns `k`-subsets of `0..n`.
    pub components: Vec<Vec<Vec<Poly<F>>>>,
}

pub fn chain_map<F: Field>(
    field: &F,
    gens: &[Poly<F>],
    r: usize,
    order: &DivisionOrder,
    trunc: u32,
) -> Result<ChainMap<F>> {
    let n = gens.len();
    let quotients: Vec<Vec<Poly<F>>> = gens
        .iter()
        .map(|f| divide_by_variables(field, f, r, order))
        .collect::<Result<_>>()?;
    let mut components = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let src = WedgeBasis::new(n, k);
        let dst = WedgeBasis::new(r, k);
        let comp: Vec<Vec<Poly<F>>> = dst
            .masks
            .iter()
            .map(|&t| {
                let ti = mask_indices(t);
                src.masks
                    .iter()
                    .map(|&s| {
                        let sub: Vec<Vec<Poly<F>>> = mask_indices(s)
                            .iter()
                            .map(|&i| ti.iter().map(|&j| quotients[i][j].clone()).collect())
                            .collect();
                        poly_det(field, &sub, trunc)
                    })
                    .collect()
            })
            .collect();
        components.push(comp);
    }
    Ok(ChainMap {
        n,
        r,
        quotients,
        components,
    })
}

impl<F: Field> ChainMap<F> {
    /// `φ_k mod m`, an `C(r,k) × C(n,k)` matrix over the residue field.
    pub fn reduced(&self, field: &F, k: usize) -> Vec<Vec<F::Elem>> {
        self.components[k]
            .iter()
            .map(|row| row.iter().map(|x| x.constant_term(field)).collect())
            .collect()
    }

    /// Check `d^X_k φ_k = φ_{k-1} d^f_k` for every `k`.
    pub fn commutes(&self, field: &F, source: &KoszulComplex<F>, trunc: u32) -> bool {
        let vars: Vec<Poly<F>> = (0..self.r).map(|j| Poly::var(field, j)).collect();
        let target = koszul_complex(field, &vars);
        (1..=self.n).all(|k| {
            let left = if k <= self.r {
                poly_mat_mul(field, &target.differentials[k - 1], &self.components[k], trunc)
            } else {
                Vec::new()
            };
            let right = poly_mat_mul(field, &self.components[k - 1], &source.differentials[k - 1], trunc);
            if k > self.r {
                // φ_k = 0, so φ_{k-1} d_k must vanish
                return right.iter().flatten().all(Poly::is_zero);
            }
            left == right
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rationals;
    use crate::localalg::parse::parse_poly;

    fn gens(src: &[&str], r: usize) -> Vec<Poly<Rationals>> {
        src.iter().map(|s| parse_poly(s, r).unwrap()).collect()
    }

    #[test]
    fn differentials_square_to_zero() {
        let q = Rationals;
        let g = gens(&["X1 + X2*X3", "X2 + X1^2", "X3^2"], 3);
        let k = koszul_complex(&q, &g);
        assert_eq!(k.differentials.len(), 3);
        assert_eq!(k.square_defect(&q, 12), None);
        assert_eq!(k.hom_to_residue_dims(&q), vec![1, 3, 3, 1]);
    }

    #[test]
    fn division_reconstructs_the_polynomial() {
        let q = Rationals;
        let f = parse_poly("X1*X2 + X2^2 - 3*X3", 3).unwrap();
        for order in [DivisionOrder::Canonical, DivisionOrder::Priority(vec![2, 1, 0])] {
            let a = divide_by_variables(&q, &f, 3, &order).unwrap();
            let back = (0..3).fold(Poly::zero(), |acc, j| {
                acc.add(&q, &a[j].mul(&q, &Poly::var(&q, j), 12))
            });
            assert_eq!(back, f);
        }
        let c = parse_poly("1 + X1", 1).unwrap();
        assert!(divide_by_variables(&q, &c, 1, &DivisionOrder::Canonical).is_err());
        assert!(divide_by_variables(&q, &f, 3, &DivisionOrder::Priority(vec![0, 0, 1])).is_err());
    }

    #[test]
    fn chain_map_commutes() {
        let q = Rationals;
        let g = gens(&["X1 + X2*X3", "X2 + X1^2"], 3);
        let k = koszul_complex(&q, &g);
        let phi = chain_map(&q, &g, 3, &DivisionOrder::Canonical, 12).unwrap();
        assert!(phi.commutes(&q, &k, 12));
        let phi = chain_map(&q, &g, 3, &DivisionOrder::Priority(vec![1, 2, 0]), 12).unwrap();
        assert!(phi.commutes(&q, &k, 12));
        // more generators than variables
        let g = gens(&["X1", "X1^2"], 1);
        let k = koszul_complex(&q, &g);
        let phi = chain_map(&q, &g, 1, &DivisionOrder::Canonical, 12).unwrap();
        assert!(phi.commutes(&q, &k, 12));
    }
}
