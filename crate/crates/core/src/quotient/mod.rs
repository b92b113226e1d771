//! The quotients `A⟨k⟩* / (ζ_{m+1}, …, ζ_{m+k})` and finite quotient rings in general.

mod presented;
mod series;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use parking_lot::Mutex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{rank, BitVec};
use crate::groebner::{buchberger, GroebnerBasis, GroebnerConfig};
use crate::milnor::{xi_table, zeta, TruncationSpec};
use crate::polycore::{Monomial, Poly, VariableTable};

pub use presented::{
    end_mk_algebra, end_module_algebra, PresentedAlgebra, PresentedAlgebraBuilder,
};
pub use series::{closed_form_poincare, delta, gaussian_binomial_q2, IntSeries};

/// Feasibility caps for building quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientLimits {
    pub max_dim: u64,
    pub max_degree: i64,
}

impl Default for QuotientLimits {
    fn default() -> Self {
        QuotientLimits {
            max_dim: 100_000,
            max_degree: 1 << 14,
        }
    }
}

/// A finite-dimensional quotient of a positively graded polynomial ring.
#[derive(Debug)]
pub struct QuotientRing {
    params: Option<(u32, u32)>,
    gb: GroebnerBasis,
    basis: BTreeMap<i64, Vec<Monomial>>,
    index: HashMap<Monomial, usize>,
    top_degree: i64,
    nf_cache: Mutex<HashMap<Monomial, Poly>>,
}

fn ideal_generators(k: u32, m: u32) -> Result<Vec<Poly>> {
    (m + 1..=m + k)
        .map(|n| zeta(n, TruncationSpec::Trunc(k)))
        .collect()
}

fn check_feasible(k: u32, m: u32, limits: &QuotientLimits) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if m + k > 30 {
        return Err(Error::ResourceLimit(format!("(k, m) = ({k}, {m}) is far beyond any cap")));
    }
    let dim = gaussian_binomial_q2(m + k, k)?;
    if dim > BigUint::from(limits.max_dim) {
        return Err(Error::ResourceLimit(format!(
            "predicted dimension {dim} exceeds the cap {}",
            limits.max_dim
        )));
    }
    let top = delta(k, m, 0)?;
    if top > limits.max_degree {
        return Err(Error::ResourceLimit(format!(
            "top degree {top} exceeds the cap {}",
            limits.max_degree
        )));
    }
    Ok(())
}

/// `A⟨k⟩* / (ζ_{m+1}, …, ζ_{m+k})` with its invariants verified.
pub fn build_quotient(k: u32, m: u32, limits: &QuotientLimits) -> Result<QuotientRing> {
    check_feasible(k, m, limits)?;
    let mut qr = QuotientRing::from_generators(&ideal_generators(k, m)?, limits)?;
    qr.params = Some((k, m));
    let expected_top = delta(k, m, 0)?;
    if qr.top_degree != expected_top {
        return Err(Error::Invariant(format!(
            "top degree {} but expected {expected_top}",
            qr.top_degree
        )));
    }
    if qr.dim_in(expected_top) != 1 {
        return Err(Error::Invariant("top degree is not one-dimensional".into()));
    }
    if !qr.poincare_series().is_palindromic() {
        return Err(Error::Invariant("dimensions are not palindromic".into()));
    }
    if BigUint::from(qr.total_dim()) != gaussian_binomial_q2(m + k, k)? {
        return Err(Error::Invariant("total dimension differs from the Gaussian binomial".into()));
    }
    Ok(qr)
}

impl QuotientRing {
    /// The quotient by an arbitrary ideal; fails unless it is finite-dimensional.
    pub fn from_generators(gens: &[Poly], limits: &QuotientLimits) -> Result<QuotientRing> {
        let gb = buchberger(gens, &GroebnerConfig::default())?;
        QuotientRing::from_basis(gb, limits)
    }

    pub fn from_basis(gb: GroebnerBasis, limits: &QuotientLimits) -> Result<QuotientRing> {
        let (finite, top) = gb.is_finite_dimensional()?;
        if !finite {
            return Err(Error::InvalidArgument("quotient is infinite-dimensional".into()));
        }
        let top = top.unwrap_or(0);
        if top > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "top degree {top} exceeds the cap {}",
                limits.max_degree
            )));
        }
        let basis = gb.standard_monomials(top)?;
        let total: usize = basis.values().map(Vec::len).sum();
        if total as u64 > limits.max_dim {
            return Err(Error::ResourceLimit(format!(
                "dimension {total} exceeds the cap {}",
                limits.max_dim
            )));
        }
        let index = basis
            .values()
            .flat_map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)))
            .collect();
        Ok(QuotientRing {
            params: None,
            gb,
            basis,
            index,
            top_degree: top,
            nf_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> Option<(u32, u32)> {
        self.params
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        self.gb.table()
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn basis(&self) -> &BTreeMap<i64, Vec<Monomial>> {
        &self.basis
    }

    pub fn basis_in(&self, degree: i64) -> &[Monomial] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim_in(&self, degree: i64) -> usize {
        self.basis_in(degree).len()
    }

    pub fn total_dim(&self) -> u64 {
        self.basis.values().map(|v| v.len() as u64).sum()
    }

    pub fn top_degree(&self) -> i64 {
        self.top_degree
    }

    /// Dimension per degree, including zeros, from 0 to the top degree.
    pub fn dims(&self) -> BTreeMap<i64, u64> {
        (0..=self.top_degree)
            .map(|d| (d, self.dim_in(d) as u64))
            .collect()
    }

    pub fn poincare_series(&self) -> IntSeries {
        IntSeries::new((0..=self.top_degree).map(|d| self.dim_in(d) as i64).collect())
    }

    /// Position of a standard monomial within its degree.
    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Normal form of a monomial, memoized across calls.
    pub fn normal_form_monomial(&self, m: &Monomial) -> Result<Poly> {
        if let Some(p) = self.nf_cache.lock().get(m) {
            return Ok(p.clone());
        }
        let table = self.table().clone();
        let result = match self.gb.basis().iter().find(|g| g.terms()[0].divides(m)) {
            None => Poly::monomial(table, m.clone()),
            Some(g) => {
                let q = g.terms()[0].quotient_of(m);
                let mut acc = Poly::zero(table);
                for t in &g.terms()[1..] {
                    acc.add_assign(&self.normal_form_monomial(&t.mul_poly(&q)?)?)?;
                }
                acc
            }
        };
        self.nf_cache.lock().insert(m.clone(), result.clone());
        Ok(result)
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        if !crate::polycore::same_table(p.table(), self.table()) {
            return Err(Error::TableMismatch);
        }
        let mut acc = Poly::zero(self.table().clone());
        for t in p.terms() {
            acc.add_assign(&self.normal_form_monomial(t)?)?;
        }
        Ok(acc)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        self.normal_form(&a.mul(b)?)
    }

    /// Rank of the multiplication pairing between degrees `t` and `top − t`,
    /// read off as the coefficient of the first top-degree basis monomial.
    fn pairing_rank(&self, t: i64) -> Result<usize> {
        let Some(top) = self.basis_in(self.top_degree).first() else {
            return Ok(0);
        };
        let cols = self.basis_in(self.top_degree - t);
        let rows = self.basis_in(t);
        let mut vectors = Vec::with_capacity(rows.len());
        for x in rows {
            let mut v = BitVec::zeros(cols.len());
            for (j, y) in cols.iter().enumerate() {
                if self.normal_form_monomial(&x.mul_poly(y)?)?.contains(top) {
                    v.set(j, true);
                }
            }
            vectors.push(v);
        }
        Ok(rank(&vectors))
    }

    pub fn frobenius_check(&self) -> Result<FrobeniusReport> {
        let mut degrees = Vec::new();
        for t in 0..=self.top_degree {
            let (a, b) = (self.dim_in(t), self.dim_in(self.top_degree - t));
            let r = self.pairing_rank(t)?;
            degrees.push(PairingEntry {
                degree: t,
                dim: a,
                dual_dim: b,
                rank: r,
                nonsingular: a == b && r == a,
            });
        }
        let top_dim = self.dim_in(self.top_degree);
        Ok(FrobeniusReport {
            top_degree: self.top_degree,
            top_dim,
            all_nonsingular: top_dim == 1 && degrees.iter().all(|e| e.nonsingular),
            degrees,
        })
    }

    /// The smallest exponent `e` with `x^e = 0`, searching up to the top degree.
    pub fn nilpotency_order(&self, var: usize) -> Result<Option<u32>> {
        let table = self.table().clone();
        let deg = table.var(var).degree;
        if deg <= 0 {
            return Err(Error::InvalidArgument("variable of non-positive degree".into()));
        }
        let n = table.len();
        for e in 1..=(self.top_degree / deg + 1) as u32 {
            if self.normal_form_monomial(&Monomial::var(n, var, e))?.is_zero() {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingEntry {
    pub degree: i64,
    pub dim: usize,
    pub dual_dim: usize,
    pub rank: usize,
    pub nonsingular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub top_degree: i64,
    pub top_dim: usize,
    pub degrees: Vec<PairingEntry>,
    pub all_nonsingular: bool,
}

impl FrobeniusReport {
    pub fn flagged_degrees(&self) -> Vec<i64> {
        self.degrees
            .iter()
            .filter(|e| !e.nonsingular)
            .map(|e| e.degree)
            .collect()
    }
}

pub fn poincare_series(qr: &QuotientRing) -> IntSeries {
    qr.poincare_series()
}

pub fn frobenius_check(qr: &QuotientRing) -> Result<FrobeniusReport> {
    qr.frobenius_check()
}

/// Whether `(ζ_{m+1}, …, ζ_{m+k})` is a regular sequence in `A⟨k⟩*`,
/// certified by finiteness plus the Hilbert-series identity.
pub fn regularity_check(k: u32, m: u32, limits: &QuotientLimits) -> Result<bool> {
    check_feasible(k, m, limits)?;
    regularity_check_generators(&ideal_generators(k, m)?, limits)
}

/// The same criterion for homogeneous generators of a positively graded
/// polynomial ring with as many generators as variables.
pub fn regularity_check_generators(gens: &[Poly], limits: &QuotientLimits) -> Result<bool> {
    let table = gens
        .first()
        .map(|g| g.table().clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    if gens.len() != table.len() {
        return Ok(false);
    }
    let gb = buchberger(gens, &GroebnerConfig::default())?;
    if !gb.is_finite_dimensional()?.0 {
        return Ok(false);
    }
    let qr = QuotientRing::from_basis(gb, limits)?;
    let mut expected = IntSeries::one();
    for g in gens {
        let d = g.homogeneous_degree().ok_or(Error::Inhomogeneous)?;
        if d <= 0 {
            return Ok(false);
        }
        expected = expected.mul(&IntSeries::one_minus_power(d as usize))?;
    }
    for v in table.vars() {
        if v.degree <= 0 {
            return Err(Error::InvalidArgument("variables must have positive degree".into()));
        }
        expected = match expected.div_exact(&IntSeries::one_minus_power(v.degree as usize)) {
            Ok(s) => s,
            Err(Error::InexactDivision) => return Ok(false),
            Err(e) => return Err(e),
        };
    }
    Ok(qr.poincare_series() == expected)
}

/// Dimensions of `quotient(k, m) ⊗ F₂{e_{j·2^{m+k+1}} : 0 ≤ j < 2ⁿ}`.
pub fn split_dims(k: u32, m: u32, n: u32, limits: &QuotientLimits) -> Result<BTreeMap<i64, u64>> {
    let qr = build_quotient(k, m, limits)?;
    split_dims_of(&qr, k, m, n)
}

pub fn split_dims_of(qr: &QuotientRing, k: u32, m: u32, n: u32) -> Result<BTreeMap<i64, u64>> {
    if n > 20 {
        return Err(Error::ResourceLimit(format!("2^{n} shifted copies")));
    }
    let step = 1i64 << (m + k + 1);
    let mut out = BTreeMap::new();
    for j in 0..(1i64 << n) {
        for (d, dim) in qr.dims() {
            *out.entry(d + j * step).or_insert(0) += dim;
        }
    }
    out.retain(|_, v| *v > 0);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingEntry {
    pub j: u32,
    pub smallest_vanishing_power: Option<u32>,
    pub predicted: u32,
    pub holds: bool,
}

/// Outcome of testing two observed patterns in `Ã⟨k⟩*`: the nilpotency order
/// of `ξ_j` for `j < k` is `2^{2k−j+1}`, and `ξ_k^{2^{k+1}−2}` spans the top degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub k: u32,
    pub vanishing: Vec<VanishingEntry>,
    pub top_exponent: u32,
    pub top_power_degree: i64,
    pub top_power_spans_top: bool,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.top_power_spans_top && self.vanishing.iter().all(|v| v.holds)
    }
}

pub fn conjecture_report(k: u32, limits: &QuotientLimits) -> Result<ConjectureReport> {
    let qr = build_quotient(k, k, limits)?;
    let table = xi_table(k);
    let mut vanishing = Vec::new();
    for j in 1..k {
        let smallest = qr.nilpotency_order(table.xi_index(j).unwrap())?;
        let predicted = 1u32 << (2 * k - j + 1);
        vanishing.push(VanishingEntry {
            j,
            smallest_vanishing_power: smallest,
            predicted,
            holds: smallest == Some(predicted),
        });
    }
    let top_exponent = (1u32 << (k + 1)) - 2;
    let xk = Monomial::var(table.len(), table.xi_index(k).unwrap(), top_exponent);
    let top_power_degree = xk.degree(&table);
    let nf = qr.normal_form_monomial(&xk)?;
    Ok(ConjectureReport {
        k,
        vanishing,
        top_exponent,
        top_power_degree,
        top_power_spans_top: top_power_degree == qr.top_degree() && !nf.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{Parity, Variable};

    #[test]
    fn k1_m1() {
        let qr = build_quotient(1, 1, &QuotientLimits::default()).unwrap();
        assert_eq!(qr.total_dim(), 3);
        assert_eq!(qr.top_degree(), 2);
        assert_eq!(qr.poincare_series().coeffs(), &[1, 1, 1]);
        assert!(qr.frobenius_check().unwrap().all_nonsingular);
    }

    #[test]
    fn k2_m2() {
        let qr = build_quotient(2, 2, &QuotientLimits::default()).unwrap();
        assert_eq!(qr.total_dim(), 35);
        assert_eq!(qr.top_degree(), 18);
        assert_eq!(qr.poincare_series(), closed_form_poincare(2, 2).unwrap());
        let report = qr.frobenius_check().unwrap();
        assert_eq!(report.degrees.len(), 19);
        assert!(report.all_nonsingular);
    }

    #[test]
    fn higher_zetas_vanish() {
        for (k, m) in [(1, 1), (2, 2), (2, 3)] {
            let qr = build_quotient(k, m, &QuotientLimits::default()).unwrap();
            for n in m + 1..=m + k + 3 {
                let z = zeta(n, TruncationSpec::Trunc(k)).unwrap();
                assert!(qr.normal_form(&z).unwrap().is_zero(), "zeta_{n} in ({k}, {m})");
            }
        }
    }

    #[test]
    fn non_frobenius_counterexample_is_flagged() {
        let t = Arc::new(
            VariableTable::new(vec![
                Variable::custom("x", 1, Parity::Polynomial, 0),
                Variable::custom("y", 1, Parity::Polynomial, 0),
            ])
            .unwrap(),
        );
        let gens: Vec<Poly> = ["x^2", "x y", "y^2"]
            .iter()
            .map(|s| Poly::parse(t.clone(), s).unwrap())
            .collect();
        let qr = QuotientRing::from_generators(&gens, &QuotientLimits::default()).unwrap();
        let report = qr.frobenius_check().unwrap();
        assert!(!report.all_nonsingular);
        assert!(report.flagged_degrees().contains(&1));
    }

    #[test]
    fn regularity_and_control() {
        let limits = QuotientLimits::default();
        assert!(regularity_check(2, 2, &limits).unwrap());
        assert!(regularity_check(2, 3, &limits).unwrap());
        let t = xi_table(2);
        let gens = vec![
            Poly::parse(t.clone(), "xi1 xi2^2").unwrap(),
            Poly::parse(t, "xi2^5").unwrap(),
        ];
        assert!(!regularity_check_generators(&gens, &limits).unwrap());
    }

    #[test]
    fn split_examples() {
        let limits = QuotientLimits::default();
        let s = split_dims(1, 1, 0, &limits).unwrap();
        assert_eq!(s, BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        let s = split_dims(1, 1, 1, &limits).unwrap();
        assert_eq!(
            s,
            BTreeMap::from([(0, 1), (1, 1), (2, 1), (8, 1), (9, 1), (10, 1)])
        );
        let s = split_dims(2, 2, 1, &limits).unwrap();
        assert_eq!(s.values().sum::<u64>(), 70);
        assert_eq!(*s.keys().next_back().unwrap(), delta(2, 2, 1).unwrap());
    }

    #[test]
    fn caps_are_explicit() {
        let tight = QuotientLimits {
            max_dim: 10,
            max_degree: 1 << 14,
        };
        assert!(build_quotient(2, 2, &tight).unwrap_err().is_resource());
    }

    #[test]
    fn conjecture_k2() {
        let r = conjecture_report(2, &QuotientLimits::default()).unwrap();
        assert_eq!(r.vanishing[0].smallest_vanishing_power, Some(16));
        assert!(r.holds());
    }
}
