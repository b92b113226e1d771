//! Comodules over `F₂[u]` (|u| = 2, `Δ(uⁿ) = Σ binom(n,i) uⁱ ⊗ u^{n−i}`) and
//! its quotients `F₂[u]/(u^{2^k})`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::binom_mod2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coalgebra {
    /// `F₂[u]`.
    Polynomial,
    /// `F₂[u]/(u^{2^k})`.
    Truncated(u32),
}

impl Coalgebra {
    pub const U_DEGREE: i64 = 2;

    /// Whether `uⁿ` is a basis element.
    pub fn has_power(&self, n: u64) -> bool {
        match *self {
            Coalgebra::Polynomial => true,
            Coalgebra::Truncated(k) => k < 64 && n < 1u64 << k,
        }
    }

    /// Terms `(i, n − i)` of `Δ(uⁿ)`.
    pub fn coproduct(&self, n: u64) -> Vec<(u64, u64)> {
        if !self.has_power(n) {
            return Vec::new();
        }
        (0..=n).filter(|&i| binom_mod2(n, i)).map(|i| (i, n - i)).collect()
    }

    /// Checks `(Δ⊗1)Δ = (1⊗Δ)Δ` and the counit laws on `uⁿ`, `n ≤ max_power`.
    pub fn check_laws(&self, max_power: u64) -> bool {
        for n in 0..=max_power {
            if !self.has_power(n) {
                continue;
            }
            let mut left = BTreeMap::<(u64, u64, u64), u8>::new();
            let mut right = BTreeMap::<(u64, u64, u64), u8>::new();
            for (a, b) in self.coproduct(n) {
                for (a1, a2) in self.coproduct(a) {
                    *left.entry((a1, a2, b)).or_default() ^= 1;
                }
                for (b1, b2) in self.coproduct(b) {
                    *right.entry((a, b1, b2)).or_default() ^= 1;
                }
            }
            left.retain(|_, v| *v == 1);
            right.retain(|_, v| *v == 1);
            if left != right {
                return false;
            }
            let cp = self.coproduct(n);
            if !cp.contains(&(0, n)) || !cp.contains(&(n, 0)) {
                return false;
            }
        }
        true
    }
}

/// A comodule with basis `b_0, b_1, …`; `ψ(b) = Σ u^p ⊗ b_target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comodule {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// `coaction[j]` lists `(p, target)` pairs.
    pub coaction: Vec<Vec<(u64, usize)>>,
}

impl Comodule {
    /// The trivial comodule `F₂` in degree 0.
    pub fn trivial() -> Comodule {
        Comodule {
            names: vec!["1".into()],
            degrees: vec![0],
            coaction: vec![vec![(0, 0)]],
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Counit, degree, and coassociativity checks.
    pub fn check(&self, coalgebra: Coalgebra) -> Result<()> {
        let n = self.len();
        if self.names.len() != n || self.coaction.len() != n {
            return Err(Error::InvalidArgument("ragged comodule description".into()));
        }
        for (j, terms) in self.coaction.iter().enumerate() {
            let units: Vec<usize> = terms.iter().filter(|t| t.0 == 0).map(|t| t.1).collect();
            if units != [j] {
                return Err(Error::Invariant(format!("counit fails on {}", self.names[j])));
            }
            for &(p, c) in terms {
                if c >= n {
                    return Err(Error::InvalidArgument(format!("target {c} out of range")));
                }
                if !coalgebra.has_power(p) {
                    return Err(Error::Invariant(format!("u^{p} is zero in the coalgebra")));
                }
                if self.degrees[c] + Coalgebra::U_DEGREE * p as i64 != self.degrees[j] {
                    return Err(Error::Invariant(format!("coaction on {} is not homogeneous", self.names[j])));
                }
            }
            let mut left = BTreeMap::<(u64, u64, usize), u8>::new();
            let mut right = BTreeMap::<(u64, u64, usize), u8>::new();
            for &(p, c) in terms {
                for (a, b) in coalgebra.coproduct(p) {
                    *left.entry((a, b, c)).or_default() ^= 1;
                }
                for &(q, d) in &self.coaction[c] {
                    *right.entry((p, q, d)).or_default() ^= 1;
                }
            }
            left.retain(|_, v| *v == 1);
            right.retain(|_, v| *v == 1);
            if left != right {
                return Err(Error::Invariant(format!("coassociativity fails on {}", self.names[j])));
            }
        }
        Ok(())
    }
}

/// `D_I`: sums of distinct `2^i`, `i ∈ I`.
pub fn dyadic_span(i_set: &BTreeSet<u32>) -> Result<Vec<u64>> {
    if i_set.len() > 20 || i_set.iter().any(|&i| i == 0 || i > 40) {
        return Err(Error::InvalidArgument(
            "I must be a set of at most 20 positive integers, each at most 40".into(),
        ));
    }
    let powers: Vec<u64> = i_set.iter().map(|&i| 1u64 << i).collect();
    let mut out: Vec<u64> = (0..1u64 << powers.len())
        .map(|mask| {
            powers
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, p)| p)
                .sum()
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// The comodule `H(M_I)` with basis `b_j`, `j ∈ D_I`, and
/// `ψ(b_j) = Σ_{i ∈ D_I} binom(j, i) u^{(j−i)/2} ⊗ b_i`.
pub fn comodule_mi(i_set: &BTreeSet<u32>) -> Result<Comodule> {
    let d = dyadic_span(i_set)?;
    let pos: BTreeMap<u64, usize> = d.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let coaction = d
        .iter()
        .map(|&j| {
            let mut terms: Vec<(u64, usize)> = d
                .iter()
                .filter(|&&i| i <= j && binom_mod2(j, i))
                .map(|&i| ((j - i) / 2, pos[&i]))
                .collect();
            terms.sort_unstable();
            terms
        })
        .collect();
    let m = Comodule {
        names: d.iter().map(|j| format!("b{j}")).collect(),
        degrees: d.iter().map(|&j| j as i64).collect(),
        coaction,
    };
    m.check(Coalgebra::Polynomial)?;
    Ok(m)
}

/// A subset of the positive integers, given by its members or by its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexSet {
    Finite(BTreeSet<u32>),
    Cofinite(BTreeSet<u32>),
}

impl IndexSet {
    pub fn contains(&self, i: u32) -> bool {
        i >= 1
            && match self {
                IndexSet::Finite(s) => s.contains(&i),
                IndexSet::Cofinite(missing) => !missing.contains(&i),
            }
    }
}

/// Indices `i ∈ I` with `i + 1 ∉ I`; each one rules out a unital ring structure on `M_I`.
pub fn nogo_check(set: &IndexSet) -> Vec<u32> {
    let candidates: Vec<u32> = match set {
        IndexSet::Finite(s) => s.iter().copied().collect(),
        IndexSet::Cofinite(missing) => missing
            .iter()
            .filter_map(|&j| j.checked_sub(1))
            .collect(),
    };
    let mut out: Vec<u32> = candidates
        .into_iter()
        .filter(|&i| set.contains(i) && !set.contains(i + 1))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
