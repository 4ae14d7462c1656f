//! Exact computations around Iwahori–Hecke combinatorics and the Ext
//! modules of Koszul complexes.
//!
//! * [`rootdata`]: root data, Weyl groups, dominance, `deg λ`, `α*`, the
//!   discriminant and strong regularity of unramified characters.
//! * [`heckecomb`]: the double-coset count `p^{deg λ}`, explicit coset
//!   representatives and the product identity, with an optional oracle.
//! * [`finitegroup`]: `GL_n(Z/p^N)` for `n ≤ 3`, the congruence subgroups
//!   `I(b,c)`, diamond quotients and exhaustive checks of the coset and
//!   conjugation identities.
//! * [`localalg`]: sequences in `k[[X_1..X_r]]`, Koszul Ext dimensions, the
//!   Yoneda action by two routes and the generation verdict.
//! * [`galdim`]: dimension ledgers for Selmer-type groups, checked against
//!   the Euler, Greenberg–Wiles and Poitou–Tate counts.
//! * [`report`] and [`cli`]: verdicts, canonical JSON reports and the
//!   `dhecke` command line.
//!
//! Shared pieces: [`arith`] (modular arithmetic), [`linalg`] (exact fields and
//! rank), [`snf`] (Smith normal form) and [`error`].

pub mod arith;
pub mod error;
pub mod linalg;
pub mod snf;
pub mod rootdata;
pub mod heckecomb;
pub mod report;
pub mod localalg;
pub mod galdim;
pub mod finitegroup;
pub mod cli;
