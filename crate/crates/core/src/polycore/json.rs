//! Polynomial JSON format.
//!
//! ```json
//! {"vars": [["xi1", 1, "polynomial", 1], ["xi2", 3, "polynomial", 1]],
//!  "terms": [[3, 0], [0, 1]]}
//! ```
//!
//! Terms are written in canonical order (descending topological degree, ties
//! broken reverse lexicographically), so serializing a parsed canonical
//! document reproduces it byte for byte.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::monomial::Monomial;
use crate::polycore::poly::Poly;
use crate::polycore::table::{Parity, Variable, VariableTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<(String, i64, Parity, u32)>,
    pub terms: Vec<Vec<u32>>,
}

pub fn table_to_json(table: &VariableTable) -> Vec<(String, i64, Parity, u32)> {
    table
        .vars()
        .iter()
        .map(|v| (v.name.clone(), v.degree, v.parity, v.weight))
        .collect()
}

pub fn table_from_json(vars: &[(String, i64, Parity, u32)]) -> Result<VariableTable> {
    VariableTable::new(
        vars.iter()
            .map(|(name, degree, parity, weight)| Variable::custom(name, *degree, *parity, *weight))
            .collect(),
    )
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> PolyJson {
        PolyJson {
            vars: table_to_json(p.table()),
            terms: p
                .canonical_terms()
                .iter()
                .map(|m| m.exps().to_vec())
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let table = Arc::new(table_from_json(&self.vars)?);
        self.to_poly_over(&table)
    }

    /// Parses the terms over an existing table, which must match `vars`.
    pub fn to_poly_over(&self, table: &Arc<VariableTable>) -> Result<Poly> {
        if table_to_json(table) != self.vars {
            return Err(Error::TableMismatch);
        }
        let terms = self
            .terms
            .iter()
            .map(|e| Monomial::new(table, e.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_terms(table.clone(), terms))
    }
}

pub fn poly_to_json(p: &Poly) -> String {
    serde_json::to_string(&PolyJson::from_poly(p)).expect("polynomial JSON serializes")
}

pub fn poly_from_json(text: &str) -> Result<Poly> {
    let doc: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_poly()
}

/// A list of polynomials sharing one table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyListJson {
    pub vars: Vec<(String, i64, Parity, u32)>,
    pub polys: Vec<Vec<Vec<u32>>>,
}

impl PolyListJson {
    pub fn from_polys(table: &VariableTable, polys: &[Poly]) -> PolyListJson {
        PolyListJson {
            vars: table_to_json(table),
            polys: polys
                .iter()
                .map(|p| p.canonical_terms().iter().map(|m| m.exps().to_vec()).collect())
                .collect(),
        }
    }

    pub fn to_polys(&self) -> Result<(Arc<VariableTable>, Vec<Poly>)> {
        let table = Arc::new(table_from_json(&self.vars)?);
        let polys = self
            .polys
            .iter()
            .map(|terms| {
                PolyJson {
                    vars: self.vars.clone(),
                    terms: terms.clone(),
                }
                .to_poly_over(&table)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((table, polys))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip_is_bit_exact() {
        let t = Arc::new(VariableTable::xi(2));
        let p = Poly::parse(t, "xi2^5 + xi1^3 xi2^4 + xi1^9 xi2^2 + xi1^12 xi2 + xi1^15").unwrap();
        let text = poly_to_json(&p);
        assert_eq!(
            text,
            r#"{"vars":[["xi1",1,"polynomial",1],["xi2",3,"polynomial",1]],"terms":[[15,0],[12,1],[9,2],[3,4],[0,5]]}"#
        );
        let back = poly_from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(poly_to_json(&back), text);
    }

    #[test]
    fn rejects_exterior_violation() {
        let text = r#"{"vars":[["beta-2",-2,"exterior",0]],"terms":[[2]]}"#;
        assert!(poly_from_json(text).is_err());
    }
}
