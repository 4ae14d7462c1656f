//! Square matrices of size at most 3 over `Z/p^N`.

use serde::ser::{Serialize, Serializer};

use crate::arith::mod_inv;
use crate::error::{Error, Result};

/// Largest matrix size the fixed-width storage holds.
pub const MAX_DIM: usize = 3;

/// An `n × n` matrix with entries reduced into `[0, modulus)`.
///
/// Entries are stored row-major in a fixed array, so the derived ordering is
/// lexicographic on the entry tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: u8,
    modulus: u64,
    e: [u64; MAX_DIM * MAX_DIM],
}

impl ModMatrix {
    pub fn zero(n: usize, modulus: u64) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix size {n} unsupported");
        assert!(modulus >= 1);
        ModMatrix {
            n: n as u8,
            modulus,
            e: [0; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zero(n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(modulus: u64, d: &[u64]) -> Self {
        let mut m = Self::zero(d.len(), modulus);
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// `1 + x·E_ij`.
    pub fn elementary(n: usize, modulus: u64, i: usize, j: usize, x: u64) -> Self {
        let mut m = Self::identity(n, modulus);
        let v = (m.get(i, j) + x % modulus) % modulus;
        m.set(i, j, v);
        m
    }

    /// Build from row-major integer entries, reducing each.
    pub fn from_entries(n: usize, modulus: u64, entries: &[i64]) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) || entries.len() != n * n {
            return Err(Error::LengthMismatch(format!(
                "{} entries for a {n}×{n} matrix",
                entries.len()
            )));
        }
        let mut m = Self::zero(n, modulus);
        for (k, &x) in entries.iter().enumerate() {
            m.e[k] = x.rem_euclid(modulus as i64) as u64;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.n() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        let n = self.n();
        self.e[i * n + j] = x % self.modulus;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.n();
        let q = self.modulus as u128;
        let mut out = Self::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                let s: u128 = (0..n)
                    .map(|k| self.get(i, k) as u128 * other.get(k, j) as u128)
                    .sum();
                out.e[i * n + j] = (s % q) as u64;
            }
        }
        out
    }

    fn signed(&self, i: usize, j: usize) -> i128 {
        self.get(i, j) as i128
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> i128 {
        let n = self.n();
        let rs: Vec<usize> = (0..n).filter(|&r| r != skip_r).collect();
        let cs: Vec<usize> = (0..n).filter(|&c| c != skip_c).collect();
        match rs.len() {
            0 => 1,
            1 => self.signed(rs[0], cs[0]),
            2 => {
                self.signed(rs[0], cs[0]) * self.signed(rs[1], cs[1])
                    - self.signed(rs[0], cs[1]) * self.signed(rs[1], cs[0])
            }
            _ => unreachable!("n ≤ 3"),
        }
    }

    fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn det(&self) -> u64 {
        let n = self.n();
        let s: i128 = (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * self.signed(0, j) * self.minor(0, j)
            })
            .sum();
        self.reduce_i128(s)
    }

    /// Classical adjugate, `adj(g)·g = det(g)·1`.
    pub fn adjugate(&self) -> Self {
        let n = self.n();
        let mut out = Self::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                out.e[j * n + i] = self.reduce_i128(sign * self.minor(i, j));
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        mod_inv(self.det(), self.modulus).is_some()
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = mod_inv(self.det(), self.modulus)?;
        let adj = self.adjugate();
        let mut out = adj;
        for x in out.e.iter_mut().take(self.n() * self.n()) {
            *x = (*x as u128 * d as u128 % self.modulus as u128) as u64;
        }
        Some(out)
    }

    /// Image under `Z/modulus → Z/target`; `target` must divide the modulus.
    pub fn reduce(&self, target: u64) -> Self {
        assert_eq!(self.modulus % target, 0, "{target} does not divide {}", self.modulus);
        let mut out = *self;
        out.modulus = target;
        for x in out.e.iter_mut() {
            *x %= target;
        }
        out
    }

    /// Reinterpret the entries as residues modulo a multiple of the modulus,
    /// using the lifts in `[0, modulus)`.
    pub fn lift(&self, target: u64) -> Self {
        assert_eq!(target % self.modulus, 0);
        let mut out = *self;
        out.modulus = target;
        out
    }
}

impl Serialize for ModMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}
