use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::monomial::{canonical_cmp, revlex, Monomial};
use crate::polycore::table::VariableTable;

/// A polynomial over F₂: a finite set of distinct monomials.
///
/// Terms are kept sorted in decreasing term order of the table, so the
/// leading term is `terms()[0]`.
#[derive(Clone, Debug)]
pub struct Poly {
    table: Arc<VariableTable>,
    terms: Vec<Monomial>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for Poly {}

pub(crate) fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sorts into decreasing term order and cancels repeated monomials in pairs.
fn normalize(table: &VariableTable, terms: Vec<Monomial>) -> Vec<Monomial> {
    let mut keyed: Vec<(u64, Monomial)> = terms
        .into_iter()
        .map(|m| (m.order_weight(table), m))
        .collect();
    keyed.sort_unstable_by(|(wa, a), (wb, b)| wb.cmp(wa).then_with(|| revlex(b, a)));
    let mut out: Vec<Monomial> = Vec::with_capacity(keyed.len());
    let mut iter = keyed.into_iter().map(|(_, m)| m).peekable();
    while let Some(m) = iter.next() {
        let mut count = 1usize;
        while iter.peek() == Some(&m) {
            iter.next();
            count += 1;
        }
        if count % 2 == 1 {
            out.push(m);
        }
    }
    out
}

impl Poly {
    pub fn zero(table: Arc<VariableTable>) -> Poly {
        Poly {
            table,
            terms: Vec::new(),
        }
    }

    pub fn one(table: Arc<VariableTable>) -> Poly {
        let n = table.len();
        Poly {
            table,
            terms: vec![Monomial::one(n)],
        }
    }

    pub fn monomial(table: Arc<VariableTable>, m: Monomial) -> Poly {
        Poly {
            table,
            terms: vec![m],
        }
    }

    /// The variable at index `i`.
    pub fn var(table: Arc<VariableTable>, i: usize) -> Poly {
        let n = table.len();
        Poly::monomial(table, Monomial::var(n, i, 1))
    }

    /// Builds a polynomial from monomials, cancelling repeats in pairs.
    pub fn from_terms(table: Arc<VariableTable>, terms: Vec<Monomial>) -> Poly {
        let terms = normalize(&table, terms);
        Poly { table, terms }
    }

    /// `terms` must already be distinct and in decreasing term order.
    pub(crate) fn from_sorted_unchecked(table: Arc<VariableTable>, terms: Vec<Monomial>) -> Poly {
        Poly { table, terms }
    }

    /// Parses expressions such as `xi1^3 + xi2` or `xi1*xi2^2 + 1`.
    pub fn parse(table: Arc<VariableTable>, text: &str) -> Result<Poly> {
        let text = text.trim();
        let mut terms = Vec::new();
        if text.is_empty() || text == "0" {
            return Ok(Poly::zero(table));
        }
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let mut exps = vec![0u32; table.len()];
            let mut zero = false;
            for factor in term.split(|c: char| c == '*' || c.is_whitespace()) {
                if factor.is_empty() || factor == "1" {
                    continue;
                }
                if factor == "0" {
                    zero = true;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let i = table
                    .index_of(name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                exps[i] = exps[i]
                    .checked_add(e)
                    .ok_or_else(|| Error::ExponentOverflow(factor.into()))?;
            }
            if zero {
                continue;
            }
            let vanishes = exps
                .iter()
                .zip(table.vars())
                .any(|(&e, v)| v.is_exterior() && e > 1);
            if !vanishes {
                terms.push(Monomial::new(&table, exps)?);
            }
        }
        Ok(Poly::from_terms(table, terms))
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn leading_term(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    fn check_table(&self, other: &Poly) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    /// Symmetric difference of the monomial sets.
    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_table(other)?;
        Ok(Poly {
            table: self.table.clone(),
            terms: merge_xor(&self.table, &self.terms, &other.terms),
        })
    }

    pub fn add_assign(&mut self, other: &Poly) -> Result<()> {
        self.check_table(other)?;
        self.terms = merge_xor(&self.table, &self.terms, &other.terms);
        Ok(())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_table(other)?;
        let exterior = self.table.has_exterior();
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if exterior {
                    if let Some(m) = a.mul(b, &self.table)? {
                        products.push(m);
                    }
                } else {
                    products.push(a.mul_poly(b)?);
                }
            }
        }
        Ok(Poly::from_terms(self.table.clone(), products))
    }

    /// Multiplication by a single monomial; the term order is multiplicative,
    /// so no re-sorting is needed.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(p) = t.mul(m, &self.table)? {
                terms.push(p);
            }
        }
        Ok(Poly {
            table: self.table.clone(),
            terms,
        })
    }

    /// `p²` via the Frobenius: in characteristic 2 cross terms cancel, so the
    /// square is the sum of squared monomials (exterior monomials square to zero).
    pub fn square(&self) -> Result<Poly> {
        self.frobenius(1)
    }

    /// `p^(2^j)` by multiplying every exponent by `2^j`.
    pub fn frobenius(&self, j: u32) -> Result<Poly> {
        if j == 0 {
            return Ok(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let has_ext = t
                .exps()
                .iter()
                .zip(self.table.vars())
                .any(|(&e, v)| e > 0 && v.is_exterior());
            if !has_ext {
                terms.push(t.frobenius(j)?);
            }
        }
        Ok(Poly {
            table: self.table.clone(),
            terms,
        })
    }

    pub fn pow(&self, n: u64) -> Result<Poly> {
        let mut result = Poly::one(self.table.clone());
        if n == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.square()?;
        }
        Ok(result)
    }

    /// The common degree of all terms, or `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let d = self.terms.first()?.degree(&self.table);
        self.terms
            .iter()
            .all(|t| t.degree(&self.table) == d)
            .then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// The terms of minimal Adams weight.
    pub fn adams_leading_part(&self) -> Result<Poly> {
        let min = self
            .terms
            .iter()
            .map(|t| t.weight(&self.table))
            .min()
            .ok_or(Error::ZeroInput)?;
        Ok(Poly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.weight(&self.table) == min)
                .cloned()
                .collect(),
        })
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    /// Terms involving variables absent from `target` are dropped (set to zero).
    pub fn restrict_to(&self, target: &Arc<VariableTable>) -> Result<Poly> {
        self.map_to(target, true)
    }

    /// Like [`Poly::restrict_to`] but every variable that occurs must exist in `target`.
    pub fn transport(&self, target: &Arc<VariableTable>) -> Result<Poly> {
        self.map_to(target, false)
    }

    fn map_to(&self, target: &Arc<VariableTable>, drop_missing: bool) -> Result<Poly> {
        let mapping: Vec<Option<usize>> = self
            .table
            .vars()
            .iter()
            .map(|v| target.index_of(&v.name))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        'terms: for t in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in t.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => exps[j] += e,
                    None if drop_missing => continue 'terms,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "variable {} missing from target table",
                            self.table.var(i).name
                        )))
                    }
                }
            }
            if exps
                .iter()
                .zip(target.vars())
                .any(|(&e, v)| v.is_exterior() && e > 1)
            {
                continue;
            }
            terms.push(Monomial::new(target, exps)?);
        }
        Ok(Poly::from_terms(target.clone(), terms))
    }

    /// Terms in canonical serialization order (descending).
    pub fn canonical_terms(&self) -> Vec<Monomial> {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| canonical_cmp(&self.table, b, a));
        terms
    }
}

fn merge_xor(table: &VariableTable, a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let wa: Vec<u64> = a.iter().map(|m| m.order_weight(table)).collect();
    let wb: Vec<u64> = b.iter().map(|m| m.order_weight(table)).collect();
    while i < a.len() && j < b.len() {
        let ord = wa[i].cmp(&wb[j]).then_with(|| revlex(&a[i], &b[j]));
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let terms = self.canonical_terms();
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.display(&self.table))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::table::Variable;

    fn xi2() -> Arc<VariableTable> {
        Arc::new(VariableTable::xi(2))
    }

    fn p(t: &Arc<VariableTable>, s: &str) -> Poly {
        Poly::parse(t.clone(), s).unwrap()
    }

    #[test]
    fn addition_examples() {
        let t = xi2();
        let s = p(&t, "xi1 + xi2");
        assert!(s.add(&s).unwrap().is_zero());
        assert_eq!(p(&t, "xi1").add(&Poly::zero(t.clone())).unwrap(), p(&t, "xi1"));
        assert_eq!(p(&t, "xi2 + xi1^3").add(&p(&t, "xi2")).unwrap(), p(&t, "xi1^3"));
    }

    #[test]
    fn multiplication_examples() {
        let t = xi2();
        let z2 = p(&t, "xi2 + xi1^3");
        assert_eq!(z2.mul(&z2).unwrap(), p(&t, "xi2^2 + xi1^6"));
        let prod = p(&t, "xi1").mul(&p(&t, "xi2^2")).unwrap();
        assert_eq!(prod, p(&t, "xi1 xi2^2"));
        assert_eq!(prod.homogeneous_degree(), Some(7));

        let ext = Arc::new(VariableTable::new(vec![Variable::beta(-2)]).unwrap());
        let b = p(&ext, "beta-2");
        assert!(b.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn power_examples() {
        let t = xi2();
        assert_eq!(p(&t, "xi1 + xi2").pow(2).unwrap(), p(&t, "xi1^2 + xi2^2"));
        assert!(p(&t, "xi1").pow(0).unwrap().is_one());
        assert_eq!(p(&t, "xi2 + xi1^3").pow(4).unwrap(), p(&t, "xi2^4 + xi1^12"));
        assert_eq!(
            p(&t, "xi1 + xi2").pow(3).unwrap(),
            p(&t, "xi1^3 + xi1^2 xi2 + xi1 xi2^2 + xi2^3")
        );
    }

    #[test]
    fn leading_part_examples() {
        let t = xi2();
        let z = p(&t, "xi1 xi2^2 + xi1^4 xi2 + xi1^7");
        assert_eq!(z.adams_leading_part().unwrap(), p(&t, "xi1 xi2^2"));
        assert_eq!(p(&t, "xi2").adams_leading_part().unwrap(), p(&t, "xi2"));
        let z4 = p(&t, "xi2^5 + xi1^3 xi2^4 + xi1^9 xi2^2 + xi1^12 xi2 + xi1^15");
        assert_eq!(z4.adams_leading_part().unwrap(), p(&t, "xi2^5"));
        assert_eq!(Poly::zero(t).adams_leading_part(), Err(Error::ZeroInput));
    }

    #[test]
    fn table_mismatch() {
        let a = p(&xi2(), "xi1");
        let b = Poly::one(Arc::new(VariableTable::xi(3)));
        assert_eq!(a.add(&b), Err(Error::TableMismatch));
        assert_eq!(a.mul(&b), Err(Error::TableMismatch));
    }

    #[test]
    fn restrict_drops_higher_generators() {
        let full = Arc::new(VariableTable::xi(3));
        let z3 = p(&full, "xi3 + xi1 xi2^2 + xi1^4 xi2 + xi1^7");
        assert_eq!(
            z3.restrict_to(&xi2()).unwrap(),
            p(&xi2(), "xi1 xi2^2 + xi1^4 xi2 + xi1^7")
        );
        assert!(z3.transport(&xi2()).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let t = xi2();
        assert_eq!(p(&t, "xi2 + xi1^3").to_string(), "xi1^3 + xi2");
        assert_eq!(Poly::zero(t).to_string(), "0");
    }
}
