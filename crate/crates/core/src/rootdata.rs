//! Split root data and their combinatorial invariants.
//!
//! A [`RootDatum`] stores the character lattice `X^*(T)` and cocharacter
//! lattice `X_*(T)` in dual bases of `Z^n`, so the perfect pairing is the dot
//! product. Roots live in `X^*`, coroots in `X_*`. All arithmetic is exact:
//! integer lattices and rational character values.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::gcd_i64;
use crate::error::{Error, Result};
use crate::linalg::{rref, Field, Rationals};

/// Safety bound on the breadth-first Weyl group closure.
pub const WEYL_BOUND: usize = 10_000;

/// An element of `X_*(T)` in the datum's lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight(pub Vec<i64>);

/// An element of `X^*(T)` in the datum's lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Coweight {
    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The presets shipped with the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresetKind {
    GL,
    SL,
    Sp4,
}

impl PresetKind {
    pub fn name(&self) -> &'static str {
        match self {
            PresetKind::GL => "GL",
            PresetKind::SL => "SL",
            PresetKind::Sp4 => "Sp",
        }
    }
}

/// Parse preset names such as `GL2`, `GL_3`, `SL2`, `Sp4`.
pub fn parse_preset(name: &str) -> Result<(PresetKind, usize)> {
    let trimmed = name.trim();
    let upper = trimmed.to_ascii_uppercase();
    let (kind, rest) = if let Some(r) = upper.strip_prefix("GL") {
        (PresetKind::GL, r)
    } else if let Some(r) = upper.strip_prefix("SL") {
        (PresetKind::SL, r)
    } else if let Some(r) = upper.strip_prefix("SP") {
        (PresetKind::Sp4, r)
    } else {
        return Err(Error::UnknownPreset(name.to_string()));
    };
    let digits = rest.trim_start_matches(['_', '-']);
    let n = digits
        .parse::<usize>()
        .map_err(|_| Error::UnknownPreset(name.to_string()))?;
    Ok((kind, n))
}

/// A split root datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    name: Option<String>,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    dims: Vec<u32>,
    torus_rank: usize,
    positive: Vec<usize>,
    heights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RootDatumDoc {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<u32>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    /// Validate and build a datum. `dims` defaults to all ones.
    pub fn new(
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        simple: Vec<usize>,
        dims: Option<Vec<u32>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedDatum(m));
        if rank == 0 {
            return bad("rank must be positive".into());
        }
        if roots.len() != coroots.len() {
            return bad("roots and coroots must be in bijection".into());
        }
        if roots.iter().chain(&coroots).any(|v| v.len() != rank) {
            return bad("every root and coroot needs `rank` coordinates".into());
        }
        let dims = dims.unwrap_or_else(|| vec![1; roots.len()]);
        if dims.len() != roots.len() || dims.contains(&0) {
            return bad("dims must list a positive integer per root".into());
        }
        if simple.iter().any(|&i| i >= roots.len()) {
            return bad("simple index out of range".into());
        }
        let index: HashMap<&Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        if index.len() != roots.len() {
            return bad("duplicate root".into());
        }
        for (a, c) in roots.iter().zip(&coroots) {
            if dot(c, a) != 2 {
                return bad(format!("<coroot, root> != 2 for root {a:?}"));
            }
        }
        for (i, a) in roots.iter().enumerate() {
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            match index.get(&neg) {
                Some(&j) => {
                    if coroots[j].iter().zip(&coroots[i]).any(|(x, y)| *x != -y) {
                        return bad(format!("coroot of -{a:?} is not the negative coroot"));
                    }
                    if dims[i] != dims[j] {
                        return bad(format!("d_alpha != d_-alpha for {a:?}"));
                    }
                }
                None => return bad(format!("root {a:?} has no negative")),
            }
            for &s in &simple {
                let k = dot(&coroots[s], a);
                let image: Vec<i64> = a.iter().zip(&roots[s]).map(|(x, y)| x - k * y).collect();
                let Some(&j) = index.get(&image) else {
                    return bad(format!("roots not closed under simple reflection {s}"));
                };
                let k2 = dot(&coroots[i], &roots[s]);
                let co: Vec<i64> = coroots[i]
                    .iter()
                    .zip(&coroots[s])
                    .map(|(x, y)| x - k2 * y)
                    .collect();
                if co != coroots[j] {
                    return bad(format!("coroots not compatible with reflection {s}"));
                }
            }
        }

        // Express every root in the simple-root basis.
        let coords = simple_coordinates(rank, &roots, &simple)?;
        let mut positive = Vec::new();
        let mut heights = vec![0; roots.len()];
        for (i, c) in coords.iter().enumerate() {
            let nonneg = c.iter().all(|&x| x >= 0);
            let nonpos = c.iter().all(|&x| x <= 0);
            if !(nonneg || nonpos) || c.iter().all(|&x| x == 0) {
                return bad(format!("root {:?} is not a signed sum of simple roots", roots[i]));
            }
            heights[i] = c.iter().sum();
            if nonneg {
                positive.push(i);
            }
        }
        positive.sort_by_key(|&i| (heights[i], i));

        Ok(Self {
            name: None,
            rank,
            roots,
            coroots,
            simple,
            dims,
            torus_rank: rank,
            positive,
            heights,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RootDatumDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(doc.rank, doc.roots, doc.coroots, doc.simple, doc.dims)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(RootDatumDoc {
            rank: self.rank,
            roots: self.roots.clone(),
            coroots: self.coroots.clone(),
            simple: self.simple.clone(),
            dims: Some(self.dims.clone()),
        })
        .expect("serializable")
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `r`, the rank of the torus.
    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn dim_of(&self, root: usize) -> u32 {
        self.dims[root]
    }

    /// Positive roots in nondecreasing order of height.
    pub fn positive_roots(&self) -> &[usize] {
        &self.positive
    }

    pub fn height(&self, root: usize) -> i64 {
        self.heights[root]
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == root)
    }

    /// `dim U = Σ_{α>0} d_α`.
    pub fn dim_unipotent(&self) -> u64 {
        self.positive.iter().map(|&i| self.dims[i] as u64).sum()
    }

    fn check_rank(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `2ρ^∨`, the sum of the positive coroots; strictly dominant.
    pub fn two_rho_check(&self) -> Coweight {
        let mut acc = vec![0; self.rank];
        for &i in &self.positive {
            for (a, c) in acc.iter_mut().zip(&self.coroots[i]) {
                *a += c;
            }
        }
        Coweight(acc)
    }
}

fn simple_coordinates(rank: usize, roots: &[Vec<i64>], simple: &[usize]) -> Result<Vec<Vec<i64>>> {
    let q = Rationals;
    let k = simple.len();
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        // Solve S c = root where the columns of S are the simple roots.
        let mut rows: Vec<Vec<BigRational>> = (0..rank)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    simple.iter().map(|&s| q.from_i64(roots[s][r])).collect();
                row.push(q.from_i64(root[r]));
                row
            })
            .collect();
        let pivots = rref(&q, &mut rows);
        if pivots.contains(&k) {
            return Err(Error::MalformedDatum(format!(
                "root {root:?} is outside the span of the simple roots"
            )));
        }
        if pivots.len() != k {
            return Err(Error::MalformedDatum("simple roots are dependent".into()));
        }
        let mut c = vec![0i64; k];
        for (r, &pc) in pivots.iter().enumerate() {
            let v = &rows[r][k];
            if !v.is_integer() {
                return Err(Error::MalformedDatum(format!(
                    "root {root:?} has non-integral simple coordinates"
                )));
            }
            c[pc] = i64::try_from(v.to_integer()).expect("small coordinate");
        }
        out.push(c);
    }
    Ok(out)
}

/// Build one of the preset data: `GL_n`, `SL_n` (n ≥ 2) or `Sp_4`.
pub fn build_preset(kind: PresetKind, n: usize) -> Result<RootDatum> {
    let range_err = || Error::PresetRange {
        name: kind.name().to_string(),
        n,
    };
    let mut datum = match kind {
        PresetKind::GL => {
            if !(2..=8).contains(&n) {
                return Err(range_err());
            }
            let (roots, simple) = type_a_roots(n);
            RootDatum::new(n, roots.clone(), roots, simple, None)?
        }
        PresetKind::SL => {
            if !(2..=8).contains(&n) {
                return Err(range_err());
            }
            // X^* = Z^n / Z(1,..,1) with basis the images of e_1..e_{n-1};
            // X_* = sum-zero vectors with dual basis e_k - e_n.
            let (ambient, simple) = type_a_roots(n);
            let roots: Vec<Vec<i64>> = ambient
                .iter()
                .map(|r| (0..n - 1).map(|k| r[k] - r[n - 1]).collect())
                .collect();
            let coroots: Vec<Vec<i64>> = ambient.iter().map(|r| r[..n - 1].to_vec()).collect();
            RootDatum::new(n - 1, roots, coroots, simple, None)?
        }
        PresetKind::Sp4 => {
            if n != 4 {
                return Err(range_err());
            }
            let pos_roots = vec![vec![1, -1], vec![0, 2], vec![1, 1], vec![2, 0]];
            let pos_coroots = vec![vec![1, -1], vec![0, 1], vec![1, 1], vec![1, 0]];
            let neg = |v: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
                v.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
            };
            let roots = [pos_roots.clone(), neg(&pos_roots)].concat();
            let coroots = [pos_coroots.clone(), neg(&pos_coroots)].concat();
            RootDatum::new(2, roots, coroots, vec![0, 1], None)?
        }
    };
    datum.name = Some(format!("{}{}", kind.name(), n));
    Ok(datum)
}

/// Roots `e_i - e_j` of `GL_n`, positive ones first (lexicographic in `(i, j)`),
/// and the simple indices `e_i - e_{i+1}`.
fn type_a_roots(n: usize) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut pos = Vec::new();
    let mut simple = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            if j == i + 1 {
                simple.push(pos.len());
            }
            pos.push(v);
        }
    }
    let neg: Vec<Vec<i64>> = pos.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    ([pos, neg].concat(), simple)
}

pub fn pairing(d: &RootDatum, lambda: &Coweight, mu: &Weight) -> Result<i64> {
    d.check_rank(&lambda.0)?;
    d.check_rank(&mu.0)?;
    Ok(dot(&lambda.0, &mu.0))
}

/// An element of the Weyl group, acting on both lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on `X^*(T)` (column vectors).
    pub matrix: Vec<Vec<i64>>,
    /// Contragredient action on `X_*(T)`.
    pub coweight_matrix: Vec<Vec<i64>>,
    /// A shortest word in the simple reflections (indices into `simple`).
    pub word: Vec<usize>,
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

impl WeylElement {
    pub fn act_weight(&self, mu: &Weight) -> Weight {
        Weight(mat_vec(&self.matrix, &mu.0))
    }

    pub fn act_coweight(&self, lambda: &Coweight) -> Coweight {
        Coweight(mat_vec(&self.coweight_matrix, &lambda.0))
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// The Weyl group, by breadth-first closure over the simple reflections.
pub fn weyl_group(d: &RootDatum) -> Result<Vec<WeylElement>> {
    weyl_group_bounded(d, WEYL_BOUND)
}

pub fn weyl_group_bounded(d: &RootDatum, bound: usize) -> Result<Vec<WeylElement>> {
    let n = d.rank;
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let gens: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = d
        .simple
        .iter()
        .map(|&s| {
            let (a, c) = (&d.roots[s], &d.coroots[s]);
            // s(x) = x - <c, x> a on weights, s(λ) = λ - <λ, a> c on coweights
            let on_weights = (0..n)
                .map(|r| (0..n).map(|col| identity[r][col] - a[r] * c[col]).collect())
                .collect();
            let on_coweights = (0..n)
                .map(|r| (0..n).map(|col| identity[r][col] - c[r] * a[col]).collect())
                .collect();
            (on_weights, on_coweights)
        })
        .collect();

    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut elements = vec![WeylElement {
        matrix: identity.clone(),
        coweight_matrix: identity.clone(),
        word: vec![],
    }];
    seen.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for (g, (gw, gc)) in gens.iter().enumerate() {
            let w = &elements[idx];
            let m = mat_mul(gw, &w.matrix);
            if seen.contains_key(&m) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::WeylBound(bound));
            }
            let mut word = vec![g];
            word.extend(&w.word);
            let cm = mat_mul(gc, &w.coweight_matrix);
            seen.insert(m.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(WeylElement {
                matrix: m,
                coweight_matrix: cm,
                word,
            });
        }
    }
    for w in &elements {
        for r in &d.roots {
            if d.root_index(&mat_vec(&w.matrix, r)).is_none() {
                return Err(Error::MalformedDatum(
                    "Weyl element does not permute the roots".into(),
                ));
            }
        }
    }
    Ok(elements)
}

pub fn is_dominant(d: &RootDatum, lambda: &Coweight) -> Result<bool> {
    d.check_rank(&lambda.0)?;
    Ok(d.positive.iter().all(|&i| dot(&lambda.0, &d.roots[i]) >= 0))
}

pub fn is_strictly_dominant(d: &RootDatum, lambda: &Coweight) -> Result<bool> {
    d.check_rank(&lambda.0)?;
    Ok(d.positive.iter().all(|&i| dot(&lambda.0, &d.roots[i]) > 0))
}

/// `deg λ = Σ_{α>0} <λ, α> d_α` for nonstrictly dominant `λ`.
///
/// The sign is chosen so that `|CξC/C| = p^{deg λ}` holds literally.
pub fn deg_coweight(d: &RootDatum, lambda: &Coweight) -> Result<u64> {
    if !is_dominant(d, lambda)? {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    Ok(d.positive
        .iter()
        .map(|&i| dot(&lambda.0, &d.roots[i]) as u64 * d.dims[i] as u64)
        .sum())
}

/// `m_α` and `α* = m_α · α^∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaStar {
    pub m: i64,
    pub coweight: Coweight,
}

pub fn alpha_star(d: &RootDatum, alpha: &Weight) -> Result<AlphaStar> {
    let idx = d
        .root_index(&alpha.0)
        .ok_or_else(|| Error::NotARoot(alpha.0.clone()))?;
    let m = alpha.0.iter().fold(0, |g, &x| gcd_i64(g, x)).abs();
    let coweight = Coweight(d.coroots[idx].iter().map(|c| c * m).collect());
    Ok(AlphaStar { m, coweight })
}

/// A finitely supported integer combination of cocharacters `e^λ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<Vec<i64>, i64>,
}

impl GroupAlgebraElement {
    pub fn monomial(exp: Vec<i64>, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], 1)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, i64> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[i64]) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(e);
            }
        }
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                acc = acc.add(&Self::monomial(e, c1 * c2));
            }
        }
        acc
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        let mut acc = Self::default();
        for (e, c) in &self.terms {
            acc = acc.add(&Self::monomial(mat_vec(&w.coweight_matrix, e), *c));
        }
        acc
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*e^{}", Coweight(e.clone())))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `f = Π_{α ∈ Φ} (1 - e^{α*})`.
pub fn discriminant(d: &RootDatum) -> GroupAlgebraElement {
    let mut acc = GroupAlgebraElement::one(d.rank);
    for root in &d.roots {
        let star = alpha_star(d, &Weight(root.clone())).expect("root of the datum");
        let factor = GroupAlgebraElement::one(d.rank)
            .add(&GroupAlgebraElement::monomial(star.coweight.0, -1));
        acc = acc.mul(&factor);
    }
    acc
}

/// An unramified character of `T(Q_p)`, given by its values on the basis
/// cocharacters `λ_i(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedCharacter {
    values: Vec<BigRational>,
}

impl UnramifiedCharacter {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.iter().any(Zero::is_zero) {
            return Err(Error::ZeroCharacter);
        }
        Ok(Self { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn eval(&self, lambda: &Coweight) -> BigRational {
        let mut acc = BigRational::one();
        for (v, &e) in self.values.iter().zip(&lambda.0) {
            let base = if e >= 0 { v.clone() } else { v.recip() };
            for _ in 0..e.unsigned_abs() {
                acc *= &base;
            }
        }
        acc
    }

    /// `(wχ)(λ) = χ(w^{-1} λ)`; equality with `χ` is tested on the basis.
    fn fixed_by(&self, inverse: &WeylElement) -> bool {
        let n = self.values.len();
        (0..n).all(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            self.eval(&inverse.act_coweight(&Coweight(e))) == self.values[i]
        })
    }
}

/// Outcome of the strong-regularity test by both criteria.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongRegularity {
    /// `χ(α*) ≠ 1` for every root.
    pub reflection_test: bool,
    /// Only the identity of `W` fixes `χ`.
    pub stabilizer_test: bool,
    pub agree: bool,
    /// Roots with `χ(α*) = 1`.
    pub fixed_roots: Vec<Vec<i64>>,
    /// Words of nontrivial Weyl elements fixing `χ`.
    pub stabilizer_words: Vec<Vec<usize>>,
}

pub fn is_strongly_regular(chi: &UnramifiedCharacter, d: &RootDatum) -> Result<StrongRegularity> {
    if chi.values.len() != d.rank {
        return Err(Error::RankMismatch {
            expected: d.rank,
            got: chi.values.len(),
        });
    }
    let mut fixed_roots = Vec::new();
    for root in &d.roots {
        let star = alpha_star(d, &Weight(root.clone()))?;
        if chi.eval(&star.coweight).is_one() {
            fixed_roots.push(root.clone());
        }
    }
    let group = weyl_group(d)?;
    let lookup: HashMap<&Vec<Vec<i64>>, usize> =
        group.iter().enumerate().map(|(i, w)| (&w.matrix, i)).collect();
    let mut stabilizer_words = Vec::new();
    for w in group.iter().filter(|w| !w.is_identity()) {
        let inverse = group
            .iter()
            .find(|u| {
                let prod = mat_mul(&u.matrix, &w.matrix);
                lookup.get(&prod) == Some(&0)
            })
            .expect("group is closed under inverses");
        if chi.fixed_by(inverse) {
            stabilizer_words.push(w.word.clone());
        }
    }
    let reflection_test = fixed_roots.is_empty();
    let stabilizer_test = stabilizer_words.is_empty();
    Ok(StrongRegularity {
        reflection_test,
        stabilizer_test,
        agree: reflection_test == stabilizer_test,
        fixed_roots,
        stabilizer_words,
    })
}

/// All nonstrictly dominant coweights with coordinates in `[-bound, bound]`.
pub fn dominant_coweights_in_box(d: &RootDatum, bound: i64) -> Vec<Coweight> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; d.rank];
    loop {
        let c = Coweight(cur.clone());
        if is_dominant(d, &c).unwrap_or(false) {
            out.push(c);
        }
        let mut i = 0;
        loop {
            if i == d.rank {
                return out;
            }
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = -bound;
            i += 1;
        }
    }
}
