use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of variables in a single table.
pub const MAX_VARIABLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Polynomial,
    Exterior,
}

/// What a variable name says about the class it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `xi<i>`: a Milnor generator.
    Xi(u32),
    /// `u`: the polynomial generator of the coefficient coalgebra.
    U,
    /// `e<d>`: an even class in Adams filtration 0.
    E(i64),
    /// `beta<d>`: an exterior class in Adams filtration 0.
    Beta(i64),
    Custom,
}

impl VarKind {
    pub fn of(name: &str) -> VarKind {
        if name == "u" {
            return VarKind::U;
        }
        if let Some(rest) = name.strip_prefix("xi") {
            if let Ok(i) = rest.parse::<u32>() {
                if i >= 1 {
                    return VarKind::Xi(i);
                }
            }
        }
        if let Some(rest) = name.strip_prefix("beta") {
            if let Ok(d) = rest.parse::<i64>() {
                return VarKind::Beta(d);
            }
        }
        if let Some(rest) = name.strip_prefix('e') {
            if let Ok(d) = rest.parse::<i64>() {
                return VarKind::E(d);
            }
        }
        VarKind::Custom
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub degree: i64,
    pub parity: Parity,
    /// Adams weight (monomial filtration).
    pub weight: u32,
}

impl Variable {
    pub fn xi(i: u32) -> Variable {
        Variable {
            name: format!("xi{i}"),
            degree: (1i64 << i) - 1,
            parity: Parity::Polynomial,
            weight: 1,
        }
    }

    pub fn e(degree: i64) -> Variable {
        Variable {
            name: format!("e{degree}"),
            degree,
            parity: Parity::Polynomial,
            weight: 0,
        }
    }

    pub fn beta(degree: i64) -> Variable {
        Variable {
            name: format!("beta{degree}"),
            degree,
            parity: Parity::Exterior,
            weight: 0,
        }
    }

    pub fn u() -> Variable {
        Variable {
            name: "u".into(),
            degree: 2,
            parity: Parity::Polynomial,
            weight: 0,
        }
    }

    pub fn custom(name: &str, degree: i64, parity: Parity, weight: u32) -> Variable {
        Variable {
            name: name.into(),
            degree,
            parity,
            weight,
        }
    }

    pub fn kind(&self) -> VarKind {
        VarKind::of(&self.name)
    }

    pub fn is_exterior(&self) -> bool {
        self.parity == Parity::Exterior
    }
}

/// An ordered list of graded variables. Every polynomial refers to exactly one table.
///
/// The table also fixes the term order: monomials are compared by a positive
/// weighted degree (the topological degree when every variable has positive
/// degree, `max(|degree|, 1)` otherwise) and ties are broken reverse
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableTable {
    vars: Vec<Variable>,
    order_weights: Vec<u64>,
}

impl VariableTable {
    pub fn new(vars: Vec<Variable>) -> Result<VariableTable> {
        if vars.len() > MAX_VARIABLES {
            return Err(Error::InvalidTable(format!(
                "{} variables exceeds the limit of {MAX_VARIABLES}",
                vars.len()
            )));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if v.name.is_empty() || v.name.contains(|c: char| c.is_whitespace() || "+*^()".contains(c)) {
                return Err(Error::InvalidTable(format!("bad variable name {:?}", v.name)));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(Error::InvalidTable(format!("duplicate variable {}", v.name)));
            }
            match v.kind() {
                VarKind::Xi(i) => {
                    if i >= 63 || v.degree != (1i64 << i) - 1 {
                        return Err(Error::InvalidTable(format!(
                            "{} must have degree 2^{i} - 1",
                            v.name
                        )));
                    }
                    if v.weight != 1 || v.parity != Parity::Polynomial {
                        return Err(Error::InvalidTable(format!(
                            "{} must be polynomial of Adams weight 1",
                            v.name
                        )));
                    }
                }
                VarKind::U => {
                    if v.degree != 2 {
                        return Err(Error::InvalidTable("u must have degree 2".into()));
                    }
                }
                VarKind::E(d) | VarKind::Beta(d) => {
                    if v.degree != d || v.weight != 0 {
                        return Err(Error::InvalidTable(format!(
                            "{} must have degree {d} and Adams weight 0",
                            v.name
                        )));
                    }
                }
                VarKind::Custom => {}
            }
        }
        let all_positive = vars.iter().all(|v| v.degree > 0);
        let order_weights = vars
            .iter()
            .map(|v| {
                if all_positive {
                    v.degree as u64
                } else {
                    v.degree.unsigned_abs().max(1)
                }
            })
            .collect();
        Ok(VariableTable {
            vars,
            order_weights,
        })
    }

    /// `F₂[ξ₁, …, ξ_k]`.
    pub fn xi(k: u32) -> VariableTable {
        VariableTable::new((1..=k).map(Variable::xi).collect()).expect("xi table is valid")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Index of `ξ_i`, if present.
    pub fn xi_index(&self, i: u32) -> Option<usize> {
        self.vars.iter().position(|v| v.kind() == VarKind::Xi(i))
    }

    pub fn order_weights(&self) -> &[u64] {
        &self.order_weights
    }

    pub fn has_exterior(&self) -> bool {
        self.vars.iter().any(Variable::is_exterior)
    }

    /// Whether every variable is a Milnor generator `ξ_i`.
    pub fn is_xi_only(&self) -> bool {
        self.vars.iter().all(|v| matches!(v.kind(), VarKind::Xi(_)))
    }

    /// The same variables with every exterior variable made polynomial.
    pub fn with_polynomial_parity(&self) -> VariableTable {
        let vars = self
            .vars
            .iter()
            .map(|v| Variable {
                parity: Parity::Polynomial,
                ..v.clone()
            })
            .collect();
        VariableTable {
            vars,
            order_weights: self.order_weights.clone(),
        }
    }
}

impl fmt::Display for VariableTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_degrees() {
        let t = VariableTable::xi(4);
        let degs: Vec<i64> = t.vars().iter().map(|v| v.degree).collect();
        assert_eq!(degs, vec![1, 3, 7, 15]);
    }

    #[test]
    fn rejects_bad_tables() {
        let dup = VariableTable::new(vec![Variable::xi(1), Variable::xi(1)]);
        assert!(matches!(dup, Err(Error::InvalidTable(_))));
        let wrong = VariableTable::new(vec![Variable::custom("xi2", 4, Parity::Polynomial, 1)]);
        assert!(matches!(wrong, Err(Error::InvalidTable(_))));
    }

    #[test]
    fn kinds() {
        assert_eq!(VarKind::of("beta-2"), VarKind::Beta(-2));
        assert_eq!(VarKind::of("e16"), VarKind::E(16));
        assert_eq!(VarKind::of("xi3"), VarKind::Xi(3));
        assert_eq!(VarKind::of("x"), VarKind::Custom);
    }

    #[test]
    fn negative_degrees_get_positive_order_weights() {
        let t = VariableTable::new(vec![Variable::xi(1), Variable::beta(-2), Variable::e(8)]).unwrap();
        assert_eq!(t.order_weights(), &[1, 2, 8]);
    }
}
