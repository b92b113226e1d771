//! Conjugate classes ζₙ of the dual Steenrod algebra, their truncations,
//! the Dyer–Lashof operation Q₁, and the leading-term closed form.
//!
//! Throughout, ξ₀ = ζ₀ = 1.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use parking_lot::{Mutex, RwLock};

use crate::error::{Error, Result};
use crate::polycore::{Monomial, Poly, VarKind, VariableTable};

/// Which polynomial ring the conjugates are computed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationSpec {
    /// `F₂[ξ₁, …, ξ_N]` with every ξ an honest generator.
    Full(u32),
    /// `A⟨k⟩* = F₂[ξ₁, …, ξ_k]` with `ξ_{k+1} = ξ_{k+2} = … = 0`.
    Trunc(u32),
}

impl TruncationSpec {
    pub fn generators(&self) -> u32 {
        match *self {
            TruncationSpec::Full(n) | TruncationSpec::Trunc(n) => n,
        }
    }

    pub fn table(&self) -> Arc<VariableTable> {
        xi_table(self.generators())
    }
}

/// The shared table `[ξ₁, …, ξ_k]`.
pub fn xi_table(k: u32) -> Arc<VariableTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<VariableTable>>>> = OnceLock::new();
    TABLES
        .get_or_init(Default::default)
        .lock()
        .entry(k)
        .or_insert_with(|| Arc::new(VariableTable::xi(k)))
        .clone()
}

type ZetaMemo = RwLock<HashMap<TruncationSpec, Vec<Poly>>>;

fn memo() -> &'static ZetaMemo {
    static MEMO: OnceLock<ZetaMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// The conjugate `ζₙ`, by the recursion `ζₙ = Σ_{i ≥ 1} ξ_i^{2^{n−i}} ζ_{n−i}`
/// (the sum stops at `i = k` under `Trunc(k)`).
pub fn zeta(n: u32, spec: TruncationSpec) -> Result<Poly> {
    if n == 0 {
        return Ok(Poly::one(spec.table()));
    }
    match spec {
        TruncationSpec::Full(big_n) if n > big_n => {
            return Err(Error::TruncationBound(format!(
                "zeta_{n} needs at least {n} generators, Full({big_n}) has {big_n}"
            )))
        }
        TruncationSpec::Trunc(0) | TruncationSpec::Full(0) => {
            return Err(Error::TruncationBound("need at least one generator".into()))
        }
        _ => {}
    }
    if let Some(list) = memo().read().get(&spec) {
        if let Some(z) = list.get(n as usize) {
            return Ok(z.clone());
        }
    }
    let mut list = memo()
        .read()
        .get(&spec)
        .cloned()
        .unwrap_or_else(|| vec![Poly::one(spec.table())]);
    let table = spec.table();
    let k = spec.generators();
    while list.len() <= n as usize {
        let m = list.len() as u32;
        let mut acc = Poly::zero(table.clone());
        for i in 1..=m.min(k) {
            let xi = Poly::var(table.clone(), (i - 1) as usize).frobenius(m - i)?;
            acc.add_assign(&xi.mul(&list[(m - i) as usize])?)?;
        }
        list.push(acc);
    }
    let result = list[n as usize].clone();
    let mut guard = memo().write();
    let entry = guard.entry(spec).or_default();
    if entry.len() < list.len() {
        *entry = list;
    }
    Ok(result)
}

/// Checks Milnor's identity for `ζₙ` two ways in `F₂[ξ₁, …, ξ_N]`:
/// `Σ_{i+j=n} ξ_i^{2^j} ζ_j = 0`, and, independently, that composing
/// `f(x) = Σ ξ_i x^{2^i}` after `g(x) = Σ ζ_j x^{2^j}` gives `x` through `x^{2^n}`.
pub fn verify_milnor_identity(n: u32, big_n: u32) -> Result<bool> {
    if big_n < n || n == 0 {
        return Err(Error::TruncationBound(format!("need 1 <= n <= N, got n={n}, N={big_n}")));
    }
    let spec = TruncationSpec::Full(big_n);
    let table = spec.table();
    let zetas: Vec<Poly> = (0..=n).map(|j| zeta(j, spec)).collect::<Result<_>>()?;
    let xi = |i: u32| -> Poly {
        if i == 0 {
            Poly::one(table.clone())
        } else {
            Poly::var(table.clone(), (i - 1) as usize)
        }
    };

    let mut sum = Poly::zero(table.clone());
    for i in 0..=n {
        let j = n - i;
        sum.add_assign(&xi(i).frobenius(j)?.mul(&zetas[j as usize])?)?;
    }
    let recursion_ok = sum.is_zero();

    let cap = 1u64 << n;
    let mut g: Series = BTreeMap::new();
    for (j, z) in zetas.iter().enumerate() {
        g.insert(1u64 << j, z.clone());
    }
    let mut composite: Series = BTreeMap::new();
    let mut power = g;
    for i in 0..=n {
        if i > 0 {
            power = series_mul(&power, &power, cap)?;
        }
        for (&e, c) in &power {
            let term = xi(i).mul(c)?;
            series_add_term(&mut composite, e, &term)?;
        }
    }
    let mut expected: Series = BTreeMap::new();
    expected.insert(1, Poly::one(table.clone()));
    let series_ok = composite == expected;
    Ok(recursion_ok && series_ok)
}

type Series = BTreeMap<u64, Poly>;

fn series_add_term(s: &mut Series, e: u64, c: &Poly) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    let vanished = match s.get_mut(&e) {
        Some(existing) => {
            existing.add_assign(c)?;
            existing.is_zero()
        }
        None => {
            s.insert(e, c.clone());
            false
        }
    };
    if vanished {
        s.remove(&e);
    }
    Ok(())
}

/// Product of power series with polynomial coefficients, dropping `x^e` for `e > cap`.
fn series_mul(a: &Series, b: &Series, cap: u64) -> Result<Series> {
    let mut out = BTreeMap::new();
    for (&ea, ca) in a {
        for (&eb, cb) in b {
            if ea + eb > cap {
                continue;
            }
            series_add_term(&mut out, ea + eb, &ca.mul(cb)?)?;
        }
    }
    Ok(out)
}

/// The Dyer–Lashof operation `Q₁` on a homogeneous polynomial in the ξ's.
///
/// On generators `Q₁ξ_j = ξ_{j+1} + ξ₁ξ_j²`; on products the Cartan formula
/// `Q₁(xy) = Q₁(x)y² + x²Q₁(y)` applies. Expanding a monomial factor by factor,
/// a variable of even multiplicity contributes twice and cancels, leaving
/// `Q₁(m) = Σ_{j : e_j odd} (m²/ξ_j²)·Q₁(ξ_j)`.
pub fn q1(p: &Poly) -> Result<Poly> {
    let table = p.table().clone();
    if !table.is_xi_only() {
        return Err(Error::InvalidArgument("q1 expects a polynomial in the xi's only".into()));
    }
    if !p.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let xi1 = table
        .xi_index(1)
        .ok_or_else(|| Error::GeneratorOverflow("xi1 missing from table".into()))?;
    let mut out = Vec::new();
    for m in p.terms() {
        let square = m.frobenius(1)?;
        let mut odd = 0u32;
        for (idx, &e) in m.exps().iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            odd += 1;
            let VarKind::Xi(j) = table.var(idx).kind() else {
                unreachable!("table checked to be xi-only")
            };
            let next = table.xi_index(j + 1).ok_or_else(|| {
                Error::GeneratorOverflow(format!("Q1 of xi{j} needs xi{} in the table", j + 1))
            })?;
            let mut exps = square.exps().to_vec();
            exps[idx] -= 2;
            exps[next] = exps[next]
                .checked_add(1)
                .ok_or_else(|| Error::ExponentOverflow("Q1".into()))?;
            out.push(Monomial::new(&table, exps)?);
        }
        if odd % 2 == 1 {
            let mut exps = square.exps().to_vec();
            exps[xi1] = exps[xi1]
                .checked_add(1)
                .ok_or_else(|| Error::ExponentOverflow("Q1".into()))?;
            out.push(Monomial::new(&table, exps)?);
        }
    }
    Ok(Poly::from_terms(table, out))
}

/// Writes `n = kq + r` with `q ≥ 1` and `1 ≤ r ≤ k`.
pub fn split_index(n: u32, k: u32) -> Option<(u32, u32)> {
    if k == 0 || n <= k {
        return None;
    }
    let r = (n - 1) % k + 1;
    Some(((n - r) / k, r))
}

/// Closed form for the minimal-weight term of `ζₙ` in `A⟨k⟩*`:
/// `ξ_r ξ_k^{2^r + 2^{r+k} + ⋯ + 2^{n−k}}` where `n = kq + r`, `q ≥ 1`, `1 ≤ r ≤ k`.
pub fn zeta_leading_term(n: u32, k: u32) -> Result<Monomial> {
    let (q, r) = split_index(n, k).ok_or_else(|| {
        Error::InvalidArgument(format!("leading term needs n > k >= 1, got n={n}, k={k}"))
    })?;
    let mut exp: u64 = 0;
    for l in 0..q {
        let shift = r + l * k;
        if shift >= 32 {
            return Err(Error::ExponentOverflow(format!("2^{shift}")));
        }
        exp += 1u64 << shift;
    }
    let mut exps = vec![0u64; k as usize];
    exps[(r - 1) as usize] += 1;
    exps[(k - 1) as usize] += exp;
    let exps = exps
        .into_iter()
        .map(|e| u32::try_from(e).map_err(|_| Error::ExponentOverflow(format!("{e}"))))
        .collect::<Result<Vec<u32>>>()?;
    Monomial::new(&xi_table(k), exps)
}
