use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::polycore::table::VariableTable;

/// An exponent vector aligned to a [`VariableTable`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    /// Validates length and exterior exponents against `table`.
    pub fn new(table: &VariableTable, exps: Vec<u32>) -> Result<Monomial> {
        if exps.len() != table.len() {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} for a table of {} variables",
                exps.len(),
                table.len()
            )));
        }
        for (e, v) in exps.iter().zip(table.vars()) {
            if v.is_exterior() && *e > 1 {
                return Err(Error::InvalidArgument(format!(
                    "exterior variable {} raised to {e}",
                    v.name
                )));
            }
        }
        Ok(Monomial {
            exps: exps.into_boxed_slice(),
        })
    }

    pub(crate) fn from_exps_unchecked(exps: Vec<u32>) -> Monomial {
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, table: &VariableTable) -> i64 {
        self.exps
            .iter()
            .zip(table.vars())
            .map(|(&e, v)| e as i64 * v.degree)
            .sum()
    }

    /// Adams weight: Σ exponent × variable weight.
    pub fn weight(&self, table: &VariableTable) -> u64 {
        self.exps
            .iter()
            .zip(table.vars())
            .map(|(&e, v)| e as u64 * v.weight as u64)
            .sum()
    }

    pub fn order_weight(&self, table: &VariableTable) -> u64 {
        self.exps
            .iter()
            .zip(table.order_weights())
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    /// Total exponent count.
    pub fn total_exponent(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// The product, or `None` when an exterior variable would be squared.
    pub fn mul(&self, other: &Monomial, table: &VariableTable) -> Result<Option<Monomial>> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for ((&a, &b), v) in self.exps.iter().zip(other.exps.iter()).zip(table.vars()) {
            let e = a.checked_add(b).ok_or_else(|| {
                Error::ExponentOverflow(format!("{} exponent {a} + {b}", v.name))
            })?;
            if v.is_exterior() && e > 1 {
                return Ok(None);
            }
            exps.push(e);
        }
        Ok(Some(Monomial {
            exps: exps.into_boxed_slice(),
        }))
    }

    /// Product for tables without exterior variables.
    pub(crate) fn mul_poly(&self, other: &Monomial) -> Result<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(
                a.checked_add(b)
                    .ok_or_else(|| Error::ExponentOverflow(format!("{a} + {b}")))?,
            );
        }
        Ok(Monomial {
            exps: exps.into_boxed_slice(),
        })
    }

    /// Every exponent multiplied by `2^j`.
    pub fn frobenius(&self, j: u32) -> Result<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for &e in self.exps.iter() {
            let shifted = if e == 0 {
                0
            } else {
                1u32.checked_shl(j)
                    .and_then(|p| e.checked_mul(p))
                    .ok_or_else(|| Error::ExponentOverflow(format!("{e} * 2^{j}")))?
            };
            exps.push(shifted);
        }
        Ok(Monomial {
            exps: exps.into_boxed_slice(),
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(self.exps.iter())
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// If this is a pure power `x_i^e` with `e > 0`, returns `(i, e)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub fn display<'a>(&'a self, table: &'a VariableTable) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, table }
    }
}

/// Reverse lexicographic tie-break: the monomial with the smaller exponent in
/// the last differing variable is the larger one.
pub fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// The term order of `table`: weighted degree, then reverse lexicographic.
pub fn term_cmp(table: &VariableTable, a: &Monomial, b: &Monomial) -> Ordering {
    a.order_weight(table)
        .cmp(&b.order_weight(table))
        .then_with(|| revlex(a, b))
}

/// Canonical serialization order: topological degree, then reverse lexicographic.
pub fn canonical_cmp(table: &VariableTable, a: &Monomial, b: &Monomial) -> Ordering {
    a.degree(table)
        .cmp(&b.degree(table))
        .then_with(|| revlex(a, b))
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    table: &'a VariableTable,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (e, v) in self.mono.exps.iter().zip(self.table.vars()) {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", v.name)?;
            } else {
                write!(f, "{}^{}", v.name, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::table::Variable;

    #[test]
    fn exterior_square_vanishes() {
        let t = VariableTable::new(vec![Variable::xi(1), Variable::beta(-2)]).unwrap();
        let b = Monomial::var(2, 1, 1);
        assert_eq!(b.mul(&b, &t).unwrap(), None);
        assert!(Monomial::new(&t, vec![0, 2]).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let t = VariableTable::xi(1);
        let a = Monomial::var(1, 0, u32::MAX);
        let b = Monomial::var(1, 0, 1);
        assert!(matches!(a.mul(&b, &t), Err(Error::ExponentOverflow(_))));
        assert!(matches!(a.frobenius(1), Err(Error::ExponentOverflow(_))));
    }

    #[test]
    fn grevlex_ties() {
        let t = VariableTable::xi(2);
        // xi1^3 and xi2 both have degree 3; xi1^3 has the smaller last exponent.
        let a = Monomial::var(2, 0, 3);
        let b = Monomial::var(2, 1, 1);
        assert_eq!(term_cmp(&t, &a, &b), Ordering::Greater);
        assert_eq!(a.display(&t).to_string(), "xi1^3");
    }
}
