//! Algebras given by generators (polynomial and exterior) and relations.
//!
//! Exterior generators are handled by computing a Gröbner basis in the
//! polynomial ring on the same names with every exterior square adjoined as
//! a relation; standard monomials then have exterior exponents at most one.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, enumerate_monomials, GroebnerBasis, GroebnerConfig};
use crate::polycore::{Monomial, Poly, Variable, VariableTable};

#[derive(Debug)]
pub struct PresentedAlgebra {
    table: Arc<VariableTable>,
    relations: Vec<Poly>,
    trusted_weight: Option<u32>,
    poly_table: Arc<VariableTable>,
    gb: Option<GroebnerBasis>,
    nf_cache: Mutex<HashMap<Monomial, Poly>>,
}

pub struct PresentedAlgebraBuilder {
    table: Arc<VariableTable>,
    relations: Vec<Poly>,
    trusted_weight: Option<u32>,
}

impl PresentedAlgebraBuilder {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        Ok(PresentedAlgebraBuilder {
            table: Arc::new(VariableTable::new(vars)?),
            relations: Vec::new(),
            trusted_weight: None,
        })
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn relation(mut self, text: &str) -> Result<Self> {
        let p = Poly::parse(self.table.clone(), text)?;
        self.relations.push(p);
        Ok(self)
    }

    pub fn relation_poly(mut self, p: Poly) -> Result<Self> {
        self.relations.push(p.transport(&self.table)?);
        Ok(self)
    }

    /// Marks the relations as known only modulo monomials of Adams weight
    /// above `w`; queries reaching beyond `w` are refused.
    pub fn trusted_weight(mut self, w: u32) -> Self {
        self.trusted_weight = Some(w);
        self
    }

    pub fn build(self) -> Result<PresentedAlgebra> {
        for r in &self.relations {
            if !r.is_zero() && !r.is_homogeneous() {
                return Err(Error::Inhomogeneous);
            }
        }
        let poly_table = Arc::new(self.table.with_polynomial_parity());
        let mut gens = Vec::new();
        for r in &self.relations {
            gens.push(r.transport(&poly_table)?);
        }
        for (i, v) in self.table.vars().iter().enumerate() {
            if v.is_exterior() {
                gens.push(Poly::monomial(
                    poly_table.clone(),
                    Monomial::var(poly_table.len(), i, 2),
                ));
            }
        }
        gens.retain(|g| !g.is_zero());
        let gb = if gens.is_empty() {
            None
        } else {
            Some(buchberger(&gens, &GroebnerConfig::default())?)
        };
        Ok(PresentedAlgebra {
            table: self.table,
            relations: self.relations,
            trusted_weight: self.trusted_weight,
            poly_table,
            gb,
            nf_cache: Mutex::new(HashMap::new()),
        })
    }
}

impl PresentedAlgebra {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn trusted_weight(&self) -> Option<u32> {
        self.trusted_weight
    }

    fn check_weight(&self, w: u64) -> Result<()> {
        match self.trusted_weight {
            Some(t) if w > t as u64 => Err(Error::PrecisionExceeded(format!(
                "Adams weight {w} is above the trusted weight {t}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.gb.as_ref().is_none_or(|gb| gb.is_standard(m))
    }

    /// Standard monomials with degree in `[lower, upper]`, grouped by degree.
    pub fn basis(&self, lower: i64, upper: i64) -> Result<BTreeMap<i64, Vec<Monomial>>> {
        let out = enumerate_monomials(&self.table, lower, upper, &|m| self.is_standard(m))?;
        for ms in out.values() {
            for m in ms {
                self.check_weight(m.weight(&self.table))?;
            }
        }
        Ok(out)
    }

    /// Standard monomials grouped by (degree, Adams weight).
    pub fn bigraded_basis(&self, lower: i64, upper: i64) -> Result<BTreeMap<(i64, u32), Vec<Monomial>>> {
        let mut out: BTreeMap<(i64, u32), Vec<Monomial>> = BTreeMap::new();
        for (d, ms) in self.basis(lower, upper)? {
            for m in ms {
                out.entry((d, m.weight(&self.table) as u32)).or_default().push(m);
            }
        }
        Ok(out)
    }

    pub fn dims(&self, lower: i64, upper: i64) -> Result<BTreeMap<i64, u64>> {
        Ok(self
            .basis(lower, upper)?
            .into_iter()
            .map(|(d, v)| (d, v.len() as u64))
            .collect())
    }

    fn nf_poly_monomial(&self, m: &Monomial) -> Result<Poly> {
        if let Some(p) = self.nf_cache.lock().get(m) {
            return Ok(p.clone());
        }
        let table = self.poly_table.clone();
        let hit = self
            .gb
            .as_ref()
            .and_then(|gb| gb.basis().iter().find(|g| g.terms()[0].divides(m)));
        let result = match hit {
            None => Poly::monomial(table, m.clone()),
            Some(g) => {
                let q = g.terms()[0].quotient_of(m);
                let mut acc = Poly::zero(table);
                for t in &g.terms()[1..] {
                    acc.add_assign(&self.nf_poly_monomial(&t.mul_poly(&q)?)?)?;
                }
                acc
            }
        };
        self.nf_cache.lock().insert(m.clone(), result.clone());
        Ok(result)
    }

    /// Normal form of `p`, which may live over any table whose variables
    /// all occur here (matched by name).
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        let lifted = p.transport(&self.poly_table)?;
        let mut acc = Poly::zero(self.poly_table.clone());
        for t in lifted.terms() {
            self.check_weight(t.weight(&self.poly_table))?;
            acc.add_assign(&self.nf_poly_monomial(t)?)?;
        }
        acc.transport(&self.table)
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        self.normal_form(&Poly::parse(self.poly_table.clone(), text)?)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let a = a.transport(&self.poly_table)?;
        let b = b.transport(&self.poly_table)?;
        self.normal_form(&a.mul(&b)?)
    }
}

/// E₂-data of `Ã⟨k⟩`-type quotients smashed with `End(M_{≤j})`:
/// `F₂[ξ₁,…,ξ_k] ⊗ E(β_{−2},…,β_{−2^j}) ⊗ F₂[e_{2^{m+1}}] / e^{2^{n+k}}`
/// modulo `ξ_i + ξ_{i+1}β_{−2^i}` and `ξ_iβ_{−2^i}` for `i ≤ j`.
///
/// `j = 0` gives the E₂-term `F₂[ξ₁,…,ξ_k] ⊗ F₂[e]/e^{2^{n+k}}` itself.
pub fn end_module_algebra(k: u32, m: u32, n: u32, j: u32) -> Result<PresentedAlgebra> {
    if k == 0 || j >= k {
        return Err(Error::InvalidArgument(format!(
            "need k >= 1 and j < k, got k = {k}, j = {j}"
        )));
    }
    if m + 1 > 40 || n + k > 20 {
        return Err(Error::ResourceLimit("generator degrees too large".into()));
    }
    let mut vars: Vec<Variable> = (1..=k).map(Variable::xi).collect();
    for i in 1..=j {
        vars.push(Variable::beta(-(1i64 << i)));
    }
    let e = Variable::e(1i64 << (m + 1));
    let e_name = e.name.clone();
    vars.push(e);
    let mut b = PresentedAlgebraBuilder::new(vars)?;
    for i in 1..=j {
        let beta = format!("beta-{}", 1u64 << i);
        b = b.relation(&format!("xi{i} + xi{} {beta}", i + 1))?;
        b = b.relation(&format!("xi{i} {beta}"))?;
    }
    b = b.relation(&format!("{e_name}^{}", 1u64 << (n + k)))?;
    b.build()
}

/// `A* ⊗ E(β_{−2^k}) / (ξ_k β, r_k)` on `ξ₁,…,ξ_N`, with `r_k = ξ_k + ξ_{k+1}β`.
///
/// For `k > 1`, `r_k` is only known modulo monomials of higher Adams weight,
/// so the algebra is marked trusted through weight 1.
pub fn end_mk_algebra(k: u32, generators: u32) -> Result<PresentedAlgebra> {
    if k == 0 || generators <= k {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k < N, got k = {k}, N = {generators}"
        )));
    }
    let mut vars: Vec<Variable> = (1..=generators).map(Variable::xi).collect();
    vars.push(Variable::beta(-(1i64 << k)));
    let beta = format!("beta-{}", 1u64 << k);
    let mut b = PresentedAlgebraBuilder::new(vars)?
        .relation(&format!("xi{k} {beta}"))?
        .relation(&format!("xi{k} + xi{} {beta}", k + 1))?;
    if k > 1 {
        b = b.trusted_weight(1);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Parity;

    fn count(a: &PresentedAlgebra, lo: i64, hi: i64) -> BTreeMap<i64, u64> {
        a.dims(lo, hi).unwrap()
    }

    #[test]
    fn exterior_alone() {
        let a = PresentedAlgebraBuilder::new(vec![Variable::custom("b", 3, Parity::Exterior, 0)])
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(count(&a, -10, 10), BTreeMap::from([(0, 1), (3, 1)]));
    }

    #[test]
    fn one_cell_end_algebra() {
        // F₂[ξ₁,ξ₂] ⊗ E(β₋₂)/(ξ₁β, ξ₁ + ξ₂β) ≅ F₂[ξ₂] ⊗ E(β₋₂)
        let a = end_module_algebra(2, 2, 0, 1).unwrap();
        let dims = count(&a, -2, 30);
        // oracle: F₂[ξ₂] ⊗ E(β₋₂) ⊗ {1, e, e², e³} with |e| = 8
        let mut oracle: BTreeMap<i64, u64> = BTreeMap::new();
        for c in 0..=11i64 {
            for b in 0..=1i64 {
                for e in 0..4i64 {
                    let d = 3 * c - 2 * b + 8 * e;
                    if (-2..=30).contains(&d) {
                        *oracle.entry(d).or_default() += 1;
                    }
                }
            }
        }
        assert_eq!(dims, oracle);
        let xi1 = a.parse("xi1").unwrap();
        assert_eq!(xi1, a.parse("xi2 beta-2").unwrap());
        assert!(a.parse("xi1^2").unwrap().is_zero());
    }

    #[test]
    fn two_cell_end_algebra() {
        let a = end_module_algebra(3, 3, 0, 2).unwrap();
        let dims = count(&a, -6, 104);
        let mut oracle: BTreeMap<i64, u64> = BTreeMap::new();
        for c in 0..=16i64 {
            for b2 in 0..=1i64 {
                for b4 in 0..=1i64 {
                    for e in 0..8i64 {
                        let d = 7 * c - 2 * b2 - 4 * b4 + 16 * e;
                        if (-6..=104).contains(&d) {
                            *oracle.entry(d).or_default() += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(dims, oracle);
        assert_eq!(a.parse("xi1").unwrap(), a.parse("xi3 beta-2 beta-4").unwrap());
    }

    #[test]
    fn precision_marker_refuses_high_weight() {
        let a = end_mk_algebra(2, 4).unwrap();
        assert_eq!(a.trusted_weight(), Some(1));
        assert!(a.parse("xi3 + xi1").is_ok());
        assert!(matches!(a.parse("xi1 xi3"), Err(Error::PrecisionExceeded(_))));
        assert!(matches!(a.basis(0, 10), Err(Error::PrecisionExceeded(_))));
        let exact = end_mk_algebra(1, 3).unwrap();
        assert_eq!(exact.trusted_weight(), None);
        assert_eq!(exact.parse("xi1").unwrap(), exact.parse("xi2 beta-2").unwrap());
    }

    #[test]
    fn inhomogeneous_relations_rejected() {
        let b = PresentedAlgebraBuilder::new(vec![Variable::xi(1), Variable::xi(2)])
            .unwrap()
            .relation("xi1 + xi2")
            .unwrap();
        assert_eq!(b.build().unwrap_err(), Error::Inhomogeneous);
    }
}
