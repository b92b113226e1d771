//! Exact arithmetic in graded polynomial and exterior algebras over F₂.

pub mod json;
mod monomial;
mod poly;
mod table;

pub use monomial::{canonical_cmp, revlex, term_cmp, Monomial, MonomialDisplay};
pub use poly::Poly;
pub(crate) use poly::same_table;
pub use table::{Parity, VarKind, Variable, VariableTable, MAX_VARIABLES};

use crate::error::Result;

pub fn poly_add(p: &Poly, q: &Poly) -> Result<Poly> {
    p.add(q)
}

pub fn poly_mul(p: &Poly, q: &Poly) -> Result<Poly> {
    p.mul(q)
}

pub fn poly_pow(p: &Poly, n: u64) -> Result<Poly> {
    p.pow(n)
}

pub fn adams_leading_part(p: &Poly) -> Result<Poly> {
    p.adams_leading_part()
}

/// `binom(j, i) mod 2`, by Lucas: 1 iff every binary digit of `i` is at most
/// the corresponding digit of `j`.
pub fn binom_mod2(j: u64, i: u64) -> bool {
    i & !j == 0
}
