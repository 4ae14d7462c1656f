//! Koszul-complex Ext computations for `Λ/(f_1..f_n)` with
//! `Λ = k[[X_1..X_r]]`, and the action of `Ext^*(k,k) ⊇ ∧^*(m/m^2)^∨`.
//!
//! Every `f_i` lies in `m`, so the Koszul complex `K(f)` is a minimal
//! complex and `Ext^i(Λ/I, k) = (∧^i k^n)^∨`. Writing `f_i = Σ a_ij X_j`
//! gives a chain map `∧(a) : K(f) → K(X)` lifting `Λ/I → k`; pulling back
//! along it makes `Ext(Λ/I, k)` a module over `∧(k^r)^∨`. Modulo `m` that map
//! only depends on the linear-part matrix `A`, which is what the closed-form
//! route uses.

pub mod exterior;
pub mod koszul;
pub mod parse;
pub mod poly;
mod probe;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::linalg::{rank, Field, Rationals};

pub use exterior::{shuffle_wedge, wedge, wedge_power, WedgeBasis};
pub use koszul::{chain_map, divide_by_variables, koszul_complex, ChainMap, DivisionOrder, KoszulComplex};
pub use parse::{parse_generators, parse_poly};
pub use poly::{Poly, DEFAULT_TRUNCATION, MAX_VARS};
pub use probe::{graded_regularity_probe, RegularityStatus, PROBE_LIMITATION};

/// A sequence `f_1..f_n` in the maximal ideal of `k[[X_1..X_r]]`.
#[derive(Clone, Debug)]
pub struct LocalSequence<F: Field> {
    field: F,
    num_vars: usize,
    gens: Vec<Poly<F>>,
    trunc: u32,
}

impl<F: Field> LocalSequence<F> {
    pub fn new(field: F, num_vars: usize, gens: Vec<Poly<F>>) -> Result<Self> {
        if num_vars == 0 || num_vars > MAX_VARS {
            return Err(Error::InvalidInput(format!(
                "number of variables must be in 1..={MAX_VARS}, got {num_vars}"
            )));
        }
        for g in &gens {
            if g.support_len() > num_vars {
                return Err(Error::InvalidInput(format!(
                    "generator uses more than {num_vars} variables"
                )));
            }
            if !field.is_zero(&g.constant_term(&field)) {
                return Err(Error::NonzeroConstant);
            }
        }
        let trunc = DEFAULT_TRUNCATION;
        let gens = gens.into_iter().map(|g| g.truncate(trunc)).collect();
        Ok(Self {
            field,
            num_vars,
            gens,
            trunc,
        })
    }

    /// Reduce rational generators into `field`.
    pub fn from_rational(field: F, num_vars: usize, gens: &[Poly<Rationals>]) -> Result<Self> {
        let converted = gens
            .iter()
            .map(|g| Poly::from_rational(&field, g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, num_vars, converted)
    }

    pub fn with_truncation(mut self, trunc: u32) -> Self {
        self.trunc = trunc;
        self.gens = self.gens.iter().map(|g| g.truncate(trunc)).collect();
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn formatted(&self) -> Vec<String> {
        self.gens
            .iter()
            .map(|g| g.format(&self.field, self.num_vars))
            .collect()
    }

    pub fn koszul(&self) -> KoszulComplex<F> {
        koszul_complex(&self.field, &self.gens)
    }

    pub fn chain_map(&self, order: &DivisionOrder) -> Result<ChainMap<F>> {
        chain_map(&self.field, &self.gens, self.num_vars, order, self.trunc)
    }
}

/// Coefficient vector of the degree-one monomials.
pub fn linear_part<F: Field>(field: &F, f: &Poly<F>, num_vars: usize) -> Result<Vec<F::Elem>> {
    f.linear_part(field, num_vars)
}

/// The `n × r` matrix `A` whose rows are the linear parts.
pub fn linear_part_matrix<F: Field>(seq: &LocalSequence<F>) -> Vec<Vec<F::Elem>> {
    seq.gens
        .iter()
        .map(|g| linear_part(&seq.field, g, seq.num_vars).expect("validated generator"))
        .collect()
}

/// `rank A = n`: the sequence extends to a regular system of parameters.
pub fn is_part_of_regular_system<F: Field>(seq: &LocalSequence<F>) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq.len() > seq.num_vars {
        return Err(Error::TooManyGenerators {
            gens: seq.len(),
            vars: seq.num_vars,
        });
    }
    Ok(rank(&seq.field, &linear_part_matrix(seq)) == seq.len())
}

/// `dim_k Ext^i(Λ/I, k)` for `i = 0..=n` from the Koszul complex.
///
/// Fails with [`Error::Internal`] if the differentials do not square to zero
/// or the dimensions differ from `C(n, i)`.
pub fn koszul_ext_dims<F: Field>(seq: &LocalSequence<F>) -> Result<Vec<usize>> {
    let k = seq.koszul();
    if let Some((deg, r, c)) = k.square_defect(&seq.field, seq.trunc) {
        return Err(Error::Internal(format!(
            "d∘d != 0 at degree {deg}, entry ({r}, {c})"
        )));
    }
    let dims = k.hom_to_residue_dims(&seq.field);
    let n = seq.len();
    if dims.iter().enumerate().any(|(i, &d)| d != binomial(n, i)) {
        return Err(Error::Internal(format!(
            "Ext dimensions {dims:?} differ from binomial({n}, i)"
        )));
    }
    Ok(dims)
}

fn check_lengths<F: Field>(seq: &LocalSequence<F>, j: usize, omega: &[F::Elem], i: usize, class: &[F::Elem]) -> Result<()> {
    let (r, n) = (seq.num_vars, seq.len());
    if omega.len() != binomial(r, j) {
        return Err(Error::LengthMismatch(format!(
            "operator in degree {j} needs {} coordinates, got {}",
            binomial(r, j),
            omega.len()
        )));
    }
    if class.len() != binomial(n, i) {
        return Err(Error::LengthMismatch(format!(
            "class in Ext^{i} needs {} coordinates, got {}",
            binomial(n, i),
            class.len()
        )));
    }
    Ok(())
}

/// `ω · c` through the reduced chain map `φ̄_j`, with the product of
/// functionals evaluated by the shuffle formula.
pub fn action_via_chain_map<F: Field>(
    seq: &LocalSequence<F>,
    order: &DivisionOrder,
    j: usize,
    omega: &[F::Elem],
    i: usize,
    class: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    check_lengths(seq, j, omega, i, class)?;
    let f = &seq.field;
    let n = seq.len();
    if i + j > n {
        return Ok(Vec::new());
    }
    let phi = seq.chain_map(order)?;
    let reduced = phi.reduced(f, j);
    // (φ*ω)(e_S) = Σ_T ω(e_T) φ̄_j[T][S]
    let pulled: Vec<F::Elem> = (0..binomial(n, j))
        .map(|s| {
            reduced.iter().zip(omega).fold(f.zero(), |acc, (row, w)| {
                f.add(&acc, &f.mul(w, &row[s]))
            })
        })
        .collect();
    Ok(shuffle_wedge(f, n, j, &pulled, i, class))
}

/// `ω · c` as `(∧^j A) ω ∧ c`, using only the linear-part matrix.
pub fn action_via_linear_part<F: Field>(
    seq: &LocalSequence<F>,
    j: usize,
    omega: &[F::Elem],
    i: usize,
    class: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    check_lengths(seq, j, omega, i, class)?;
    let f = &seq.field;
    let n = seq.len();
    if i + j > n {
        return Ok(Vec::new());
    }
    let a = linear_part_matrix(seq);
    let power = wedge_power(f, &a, seq.num_vars, j);
    let pulled = exterior::mat_vec(f, &power, omega);
    Ok(wedge(f, n, j, &pulled, i, class))
}

/// The action of `ω ∈ ∧^j(k^r)^∨` on `c ∈ Ext^i(Λ/I, k)`, computed by both
/// routes; disagreement is an internal error.
pub fn yoneda_action_with<F: Field>(
    seq: &LocalSequence<F>,
    order: &DivisionOrder,
    j: usize,
    omega: &[F::Elem],
    i: usize,
    class: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let a = action_via_chain_map(seq, order, j, omega, i, class)?;
    let b = action_via_linear_part(seq, j, omega, i, class)?;
    if a != b {
        return Err(Error::Internal(
            "chain-map and linear-part Yoneda actions disagree".into(),
        ));
    }
    Ok(a)
}

/// The action of a degree-one `η ∈ (k^r)^∨` on `c ∈ Ext^i(Λ/I, k)`.
pub fn yoneda_action<F: Field>(
    seq: &LocalSequence<F>,
    eta: &[F::Elem],
    i: usize,
    class: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    yoneda_action_with(seq, &DivisionOrder::Canonical, 1, eta, i, class)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtReport<F: Field> {
    pub field: F,
    pub num_vars: usize,
    pub gens: Vec<String>,
    pub dims: Vec<usize>,
    /// The `n × r` matrix `A`.
    pub linear_part_matrix: Vec<Vec<F::Elem>>,
    pub rank_linear_part: usize,
    /// `action_matrices[i-1]` is the coordinate matrix of `∧^i A^T` in the
    /// dual bases, i.e. `∧^i A`, for `i = 1..=n`.
    pub action_matrices: Vec<Vec<Vec<F::Elem>>>,
    /// Ranks of the reduced chain-map components `φ̄_i`.
    pub action_ranks: Vec<usize>,
    pub generated_over_bottom: bool,
    pub failing_degree: Option<usize>,
}

pub const GENERATION_NOTE: &str = "surjectivity of A^T in degree 1 implies surjectivity of every exterior power of A^T";

impl<F: Field> ExtReport<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let fmt_mat = |m: &Vec<Vec<F::Elem>>| -> Vec<Vec<String>> {
            m.iter().map(|row| row.iter().map(|x| f.format(x)).collect()).collect()
        };
        json!({
            "field": f.name(),
            "num_vars": self.num_vars,
            "gens": self.gens,
            "dims": self.dims,
            "linear_part_matrix": fmt_mat(&self.linear_part_matrix),
            "rank_linear_part": self.rank_linear_part,
            "action_matrices": self.action_matrices.iter().map(fmt_mat).collect::<Vec<_>>(),
            "action_ranks": self.action_ranks,
            "verdict": {
                "generated_over_bottom": self.generated_over_bottom,
                "failing_degree": self.failing_degree,
            },
            "notes": [GENERATION_NOTE],
        })
    }
}

/// Decide generation over the bottom degree from the chain-map route:
/// `φ̄_i^*` must be surjective onto `Ext^i` for every `i`.
pub fn generation_verdict<F: Field>(seq: &LocalSequence<F>) -> Result<ExtReport<F>> {
    let f = &seq.field;
    let n = seq.len();
    let dims = koszul_ext_dims(seq)?;
    let a = linear_part_matrix(seq);
    let phi = seq.chain_map(&DivisionOrder::Canonical)?;
    let mut action_matrices = Vec::with_capacity(n);
    let mut action_ranks = Vec::with_capacity(n);
    let mut failing_degree = None;
    for i in 1..=n {
        let reduced = phi.reduced(f, i);
        let rk = rank(f, &reduced);
        action_ranks.push(rk);
        if rk != dims[i] && failing_degree.is_none() {
            failing_degree = Some(i);
        }
        let closed = wedge_power(f, &a, seq.num_vars, i);
        let from_chain = crate::linalg::transpose(&reduced, binomial(n, i));
        if i <= seq.num_vars && closed != from_chain {
            return Err(Error::Internal(format!(
                "reduced chain map differs from ∧^{i} A"
            )));
        }
        action_matrices.push(closed);
    }
    Ok(ExtReport {
        field: f.clone(),
        num_vars: seq.num_vars,
        gens: seq.formatted(),
        dims,
        rank_linear_part: rank(f, &a),
        linear_part_matrix: a,
        action_matrices,
        action_ranks,
        generated_over_bottom: failing_degree.is_none(),
        failing_degree,
    })
}

/// Ext degrees relabelled as cohomological degrees `q0 + i`, with the
/// pattern `dims[i] = m·C(l0, i)` checked for `m = dims[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    pub l0: usize,
    pub q0: i64,
    pub entries: BTreeMap<i64, usize>,
    pub multiplicity: usize,
    pub binomial_pattern: bool,
    pub flags: Vec<String>,
}

pub fn cohomology_degree_map(l0: usize, q0: i64, dims: &[usize]) -> Result<DegreeTable> {
    if dims.len() != l0 + 1 {
        return Err(Error::LengthMismatch(format!(
            "expected {} dimensions for l0 = {l0}, got {}",
            l0 + 1,
            dims.len()
        )));
    }
    let m = dims[0];
    let entries = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| (q0 + i as i64, d))
        .collect();
    let binomial_pattern = dims
        .iter()
        .enumerate()
        .all(|(i, &d)| d == m * binomial(l0, i));
    let mut flags = Vec::new();
    if m != 1 {
        flags.push(format!("multiplicity {m}"));
    }
    if !binomial_pattern {
        flags.push("dimensions do not follow m·C(l0, i)".into());
    }
    Ok(DegreeTable {
        l0,
        q0,
        entries,
        multiplicity: m,
        binomial_pattern,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;

    fn qseq(r: usize, src: &[&str]) -> LocalSequence<Rationals> {
        let gens: Vec<_> = src.iter().map(|s| parse_poly(s, r).unwrap()).collect();
        LocalSequence::new(Rationals, r, gens).unwrap()
    }

    fn q(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn linear_part_examples() {
        let r = Rationals;
        assert_eq!(linear_part(&r, &parse_poly("X1 + X2*X3", 3).unwrap(), 3).unwrap(), q(&[1, 0, 0]));
        assert_eq!(linear_part(&r, &parse_poly("X2^2", 3).unwrap(), 3).unwrap(), q(&[0, 0, 0]));
        assert_eq!(
            linear_part(&r, &parse_poly("3*X1 - X3 + X1^2", 3).unwrap(), 3).unwrap(),
            q(&[3, 0, -1])
        );
        assert_eq!(
            linear_part(&r, &parse_poly("1 + X1", 1).unwrap(), 1),
            Err(Error::NonzeroConstant)
        );
    }

    #[test]
    fn regular_system_examples() {
        assert!(is_part_of_regular_system(&qseq(3, &["X1 + X2*X3", "X2 + X1^2"])).unwrap());
        assert!(!is_part_of_regular_system(&qseq(1, &["X^2"])).unwrap());
        assert!(!is_part_of_regular_system(&qseq(2, &["X1", "X1 + X2^2"])).unwrap());
        assert!(matches!(
            is_part_of_regular_system(&qseq(1, &["X1", "X1^2"])),
            Err(Error::TooManyGenerators { gens: 2, vars: 1 })
        ));
        assert_eq!(is_part_of_regular_system(&qseq(1, &[])), Err(Error::EmptySequence));
        assert!(matches!(
            LocalSequence::new(Rationals, 1, vec![parse_poly("1 + X", 1).unwrap()]),
            Err(Error::NonzeroConstant)
        ));
    }

    #[test]
    fn ext_dimension_examples() {
        assert_eq!(koszul_ext_dims(&qseq(3, &["X1"])).unwrap(), vec![1, 1]);
        assert_eq!(koszul_ext_dims(&qseq(3, &["X1 + X2*X3", "X2 + X1^2"])).unwrap(), vec![1, 2, 1]);
        assert_eq!(koszul_ext_dims(&qseq(1, &["X^2"])).unwrap(), vec![1, 1]);
    }

    #[test]
    fn yoneda_examples() {
        let s = qseq(1, &["X"]);
        assert_eq!(yoneda_action(&s, &q(&[1]), 0, &q(&[1])).unwrap(), q(&[1]));
        let s = qseq(1, &["X^2"]);
        assert_eq!(yoneda_action(&s, &q(&[1]), 0, &q(&[1])).unwrap(), q(&[0]));
        let s = qseq(3, &["X1 + X2*X3", "X2 + X1^2"]);
        assert_eq!(yoneda_action(&s, &q(&[0, 0, 1]), 0, &q(&[1])).unwrap(), q(&[0, 0]));
        assert_eq!(yoneda_action(&s, &q(&[1, 0, 0]), 0, &q(&[1])).unwrap(), q(&[1, 0]));
        // X1^v · e_2^v = e_1^v ∧ e_2^v
        assert_eq!(yoneda_action(&s, &q(&[1, 0, 0]), 1, &q(&[0, 1])).unwrap(), q(&[1]));
        assert!(matches!(
            yoneda_action(&s, &q(&[1, 0]), 0, &q(&[1])),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn generation_examples() {
        let r = generation_verdict(&qseq(3, &["X1"])).unwrap();
        assert!(r.generated_over_bottom);
        let r = generation_verdict(&qseq(1, &["X^2"])).unwrap();
        assert!(!r.generated_over_bottom);
        assert_eq!(r.failing_degree, Some(1));
        let r = generation_verdict(&qseq(2, &["X1 + X2", "X1 - X2"])).unwrap();
        assert!(r.generated_over_bottom);
        let f2 = PrimeField::new(2).unwrap();
        let gens = [parse_poly("X1 + X2", 2).unwrap(), parse_poly("X1 - X2", 2).unwrap()];
        let s2 = LocalSequence::from_rational(f2, 2, &gens).unwrap();
        let r = generation_verdict(&s2).unwrap();
        assert!(!r.generated_over_bottom);
        assert_eq!(r.failing_degree, Some(1));
        assert_eq!(r.to_json()["field"], "Fp:2");
    }

    #[test]
    fn degree_map_examples() {
        let t = cohomology_degree_map(1, 1, &[1, 1]).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(1, 1), (2, 1)]));
        let t = cohomology_degree_map(2, 3, &[1, 2, 1]).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(3, 1), (4, 2), (5, 1)]));
        assert!(t.binomial_pattern);
        let t = cohomology_degree_map(1, 0, &[2, 2]).unwrap();
        assert!(t.binomial_pattern);
        assert_eq!(t.multiplicity, 2);
        assert_eq!(t.flags, vec!["multiplicity 2".to_string()]);
        assert!(!cohomology_degree_map(2, 0, &[1, 1, 1]).unwrap().binomial_pattern);
        assert!(matches!(
            cohomology_degree_map(2, 0, &[1, 1]),
            Err(Error::LengthMismatch(_))
        ));
    }
}
