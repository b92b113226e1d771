//! Relative Adams spectral sequences for the quotients `Ã`-type rings and
//! their smash products with endomorphism algebras of `M_{≤j}`.

pub mod chart;
mod cobar;
mod comodule;
mod page;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::milnor::{zeta, TruncationSpec};
use crate::polycore::{Monomial, Poly, Variable, VariableTable};
use crate::quotient::{
    build_quotient, delta, end_module_algebra, split_dims_of, PresentedAlgebra, QuotientLimits,
};

pub use chart::{render_svg, render_text, ChartOptions};
pub use cobar::{cobar_ext, ExtTable};
pub use comodule::{comodule_mi, dyadic_span, nogo_check, Coalgebra, Comodule, IndexSet};
pub use page::{
    run_differential, run_schedule, Bidegree, DifferentialAssignment, Page, PageSnapshot, Ranks,
    RunStep,
};

fn check_range(k: u32, m: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument(
            "m = 0 is not supported: the quotient by ζ₁,…,ζ_k changes the homology".into(),
        ));
    }
    if m < k {
        return Err(Error::InvalidArgument(format!(
            "need m >= k, got (k, m) = ({k}, {m})"
        )));
    }
    if m + k > 12 {
        return Err(Error::ResourceLimit(format!("(k, m) = ({k}, {m}) is too large")));
    }
    Ok(())
}

/// The variables `ξ₁, …, ξ_k, e_{2^{m+1}}` in which schedules are written.
pub fn schedule_table(k: u32, m: u32) -> Result<Arc<VariableTable>> {
    let mut vars: Vec<Variable> = (1..=k).map(Variable::xi).collect();
    vars.push(Variable::e(1i64 << (m + 1)));
    Ok(Arc::new(VariableTable::new(vars)?))
}

/// Default stem bound `δ(k, m, n) + 8`.
pub fn default_stem_bound(k: u32, m: u32, n: u32) -> Result<i64> {
    Ok(delta(k, m, n)? + 8)
}

/// `E₂ = F₂[ξ₁,…,ξ_k] ⊗ F₂[e_{2^{m+1}}]/(e^{2^{n+k}})`.
pub fn e2_page(k: u32, m: u32, n: u32, stem_bound: i64) -> Result<Page> {
    check_range(k, m)?;
    Page::e2(Arc::new(end_module_algebra(k, m, n, 0)?), stem_bound)
}

/// `d_r(e^{2^{i−1}}) = ` the minimal-weight part of `ζ_{m+i}` in `A⟨k⟩*`,
/// with `r` its Adams weight, for `i = 1, …, k`.
pub fn differential_schedule(k: u32, m: u32) -> Result<Vec<DifferentialAssignment>> {
    check_range(k, m)?;
    let table = schedule_table(k, m)?;
    let e = table.len() - 1;
    let mut out = Vec::new();
    for i in 1..=k {
        let lead = zeta(m + i, TruncationSpec::Trunc(k))?.adams_leading_part()?;
        if lead.len() != 1 {
            return Err(Error::Invariant(format!(
                "leading part of zeta_{} is {lead}, not a monomial",
                m + i
            )));
        }
        let r = lead.terms()[0].weight(lead.table()) as u32;
        let source = Poly::monomial(table.clone(), Monomial::var(table.len(), e, 1 << (i - 1)));
        out.push(DifferentialAssignment::new(r, source, lead.transport(&table)?));
    }
    Ok(out)
}

/// Differentials not predicted by the leading-term schedule but forced by
/// comparison with the abutment. Only the `(2, 2)` family is known:
/// `d₁₅(ξ₁e₈²) = ξ₁¹⁶`.
pub fn abutment_differentials(k: u32, m: u32) -> Result<Vec<DifferentialAssignment>> {
    let table = schedule_table(k, m)?;
    Ok(match (k, m) {
        (2, 2) => vec![DifferentialAssignment::parse(&table, "15:xi1 e8^2:xi1^16")?],
        _ => Vec::new(),
    })
}

/// Runs the spectral sequence for `A⟨k⟩*/(ζ_{m+1},…,ζ_{m+k}) ⊗ F₂[e_{2^{m+k+1}}]/e^{2ⁿ}`.
pub fn quotient_run(
    k: u32,
    m: u32,
    n: u32,
    stem_bound: i64,
    extra: &[DifferentialAssignment],
) -> Result<Vec<RunStep>> {
    let mut schedule = differential_schedule(k, m)?;
    schedule.extend_from_slice(extra);
    run_schedule(e2_page(k, m, n, stem_bound)?, &schedule)
}

/// The algebra for `Ã⟨k⟩`-type quotients smashed with `End(M_{≤j})`.
pub fn end_algebra(k: u32, m: u32, j: u32) -> Result<Arc<PresentedAlgebra>> {
    check_range(k, m)?;
    Ok(Arc::new(end_module_algebra(k, m, 0, j)?))
}

/// Runs the schedule (plus `extra`), base-changed into `End(M_{≤j})`.
pub fn end_run(
    k: u32,
    m: u32,
    j: u32,
    stem_bound: i64,
    extra: &[DifferentialAssignment],
) -> Result<Vec<RunStep>> {
    let algebra = end_algebra(k, m, j)?;
    let mut schedule = differential_schedule(k, m)?;
    schedule.extend_from_slice(extra);
    run_schedule(Page::e2(algebra, stem_bound)?, &schedule)
}

/// Page dimension minus abutment dimension in each trusted stem.
/// A negative value means a differential killed too much and is an error.
pub fn reconcile_with_abutment(page: &Page, target: &BTreeMap<i64, u64>) -> Result<Vec<(i64, i64)>> {
    let dims = page.stem_dims();
    let lo = page.min_stem().min(target.keys().next().copied().unwrap_or(0));
    let mut out = Vec::new();
    for d in lo..=page.trusted_max_stem() {
        let have = dims.get(&d).copied().unwrap_or(0) as i64;
        let want = target.get(&d).copied().unwrap_or(0) as i64;
        if have < want {
            return Err(Error::Abutment(format!(
                "stem {d}: page has {have} classes but the abutment has {want}"
            )));
        }
        out.push((d, have - want));
    }
    Ok(out)
}

/// Nonzero entries of a reconciliation.
pub fn deficits(reconciliation: &[(i64, i64)]) -> Vec<(i64, i64)> {
    reconciliation.iter().copied().filter(|d| d.1 != 0).collect()
}

/// Abutment dimensions `quotient(k, m) ⊗ F₂{e_{j·2^{m+k+1}}}` for a run.
pub fn abutment_dims(k: u32, m: u32, n: u32) -> Result<BTreeMap<i64, u64>> {
    let qr = build_quotient(k, m, &QuotientLimits::default())?;
    split_dims_of(&qr, k, m, n)
}

/// Whether every page of the `(k, m, n)` run is the `(k, m, 0)` page tensored
/// with `F₂[E]/E^{2ⁿ}`, `E = e^{2^k}` in stem `2^{m+k+1}`, with `E` a permanent cycle.
pub fn page_factorization_check(
    k: u32,
    m: u32,
    n: u32,
    stem_bound: i64,
    extra: &[DifferentialAssignment],
) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let base = quotient_run(k, m, 0, stem_bound, extra)?;
    let full = quotient_run(k, m, n, stem_bound, extra)?;
    if base.len() != full.len() {
        return Ok(false);
    }
    let step = 1i64 << (m + k + 1);
    let table = full[0].page.algebra().table().clone();
    let e_power = Monomial::var(table.len(), table.len() - 1, 1 << k);
    for (b, f) in base.iter().zip(&full) {
        if b.page.r() != f.page.r() {
            return Ok(false);
        }
        let bd = b.page.dims();
        let fd = f.page.dims();
        let mut expected: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for j in 0..(1i64 << n) {
            for (&(x, s), &d) in &bd {
                if b.page.is_trusted(x) {
                    *expected.entry((x + j * step, s)).or_default() += d;
                }
            }
        }
        let trusted = b.page.trusted_max_stem().min(f.page.trusted_max_stem());
        let restrict = |m: &BTreeMap<Bidegree, usize>| -> BTreeMap<Bidegree, usize> {
            m.iter()
                .filter(|(k, v)| k.0 <= trusted && **v > 0)
                .map(|(k, v)| (*k, *v))
                .collect()
        };
        if restrict(&expected) != restrict(&fd) {
            return Ok(false);
        }
        if step <= f.page.trusted_max_stem() && !f.page.is_nonzero_class(&e_power) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub shift: i64,
    pub lo: i64,
    pub hi: i64,
    /// `(d, dim_d, dim_{shift−d})` wherever they differ.
    pub mismatches: Vec<(i64, u64, u64)>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `dim_d = dim_{shift−d}` for `lo ≤ d ≤ hi`.
pub fn duality_check(dims: &BTreeMap<i64, u64>, shift: i64, lo: i64, hi: i64) -> DualityReport {
    let get = |d: i64| dims.get(&d).copied().unwrap_or(0);
    DualityReport {
        shift,
        lo,
        hi,
        mismatches: (lo..=hi)
            .filter(|&d| get(d) != get(shift - d))
            .map(|d| (d, get(d), get(shift - d)))
            .collect(),
    }
}

/// A multiplicative extension that is invisible on E∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HiddenExtension {
    pub multiplier: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub into_degree: i64,
}

pub const HIDDEN_EXTENSIONS_NOTE: &str =
    "documented data derived by duality and Massey product arguments; not machine-verified";

/// Hidden extensions for `Ã⟨k⟩ ∧ End(M_{≤k−1})`, `k = 2, 3`.
pub fn hidden_extensions(k: u32) -> &'static [HiddenExtension] {
    const fn h(multiplier: &'static str, source: &'static str, target: &'static str, into_degree: i64) -> HiddenExtension {
        HiddenExtension {
            multiplier,
            source,
            target,
            into_degree,
        }
    }
    const K2: &[HiddenExtension] = &[
        h("xi1", "e8^2 beta-2", "xi2^3 e8 beta-2", 15),
        h("xi1", "xi2 e8^2 beta-2", "xi2^4 e8 beta-2", 18),
    ];
    const K3: &[HiddenExtension] = &[
        h("xi1", "e16^2 beta-2", "xi3^3 e16 beta-2 beta-4", 31),
        h("xi1", "xi3 e16^2 beta-2", "xi3^4 e16 beta-2 beta-4", 38),
        h("xi1", "e16^4 beta-4", "xi3^7 e16 beta-4", 61),
        h("xi1", "xi3 e16^4 beta-4", "xi3^8 e16 beta-4", 68),
        h("xi1", "e16^6 beta-2 beta-4", "xi3^7 e16^3 beta-2 beta-4", 91),
        h("xi1", "xi3 e16^6 beta-2 beta-4", "xi3^8 e16^3 beta-2 beta-4", 98),
        h("xi2", "e16^4 beta-2 beta-4", "xi3^7 e16 beta-4", 61),
        h("xi2", "xi3 e16^4 beta-2 beta-4", "xi3^8 e16 beta-4", 68),
        h("xi2", "e16^4 beta-4", "xi3^5 e16^2 beta-4", 63),
        h("xi2", "xi3 e16^4 beta-4", "xi3^6 e16^2 beta-4", 70),
        h("xi2", "xi3^2 e16^4 beta-4", "xi3^7 e16^2 beta-4", 77),
        h("xi2", "xi3^3 e16^4 beta-4", "xi3^8 e16^2 beta-4", 84),
        h("xi2", "e16^5 beta-2 beta-4", "xi3^5 e16^3 beta-2 beta-4", 77),
        h("xi2", "xi3 e16^5 beta-2 beta-4", "xi3^6 e16^3 beta-2 beta-4", 84),
        h("xi2", "xi3^2 e16^5 beta-2 beta-4", "xi3^7 e16^3 beta-2 beta-4", 91),
        h("xi2", "xi3^3 e16^5 beta-2 beta-4", "xi3^8 e16^3 beta-2 beta-4", 98),
        h("xi2", "e16^6 beta-2 beta-4", "xi3^7 e16^3 beta-4", 93),
        h("xi2", "xi3 e16^6 beta-2 beta-4", "xi3^8 e16^3 beta-4", 100),
    ];
    match k {
        2 => K2,
        3 => K3,
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::zeta_leading_term;

    fn targets(k: u32, m: u32) -> Vec<(u32, String)> {
        differential_schedule(k, m)
            .unwrap()
            .iter()
            .map(|a| (a.r, a.target.to_string()))
            .collect()
    }

    #[test]
    fn schedules() {
        assert_eq!(
            targets(2, 2),
            vec![(3, "xi1 xi2^2".to_string()), (5, "xi2^5".to_string())]
        );
        assert_eq!(
            targets(3, 3),
            vec![
                (3, "xi1 xi3^2".to_string()),
                (5, "xi2 xi3^4".to_string()),
                (9, "xi3^9".to_string())
            ]
        );
        assert_eq!(
            targets(2, 3),
            vec![(5, "xi2^5".to_string()), (11, "xi1 xi2^10".to_string())]
        );
    }

    #[test]
    fn schedule_matches_closed_form() {
        for k in 1..=3 {
            for m in k..=5 {
                let sched = differential_schedule(k, m).unwrap();
                for (i, a) in sched.iter().enumerate() {
                    let lead = zeta_leading_term(m + i as u32 + 1, k).unwrap();
                    let t = a.target.restrict_to(&crate::milnor::xi_table(k)).unwrap();
                    assert_eq!(t.terms(), std::slice::from_ref(&lead));
                    assert_eq!(a.r as u64, lead.weight(t.table()));
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(differential_schedule(3, 2).is_err());
        assert!(differential_schedule(1, 0).is_err());
        assert!(e2_page(2, 1, 0, 10).is_err());
    }

    #[test]
    fn k1_single_differential_resolves() {
        let steps = quotient_run(1, 1, 0, 12, &[]).unwrap();
        let last = &steps.last().unwrap().page;
        assert_eq!(last.r(), 4);
        let rec = reconcile_with_abutment(last, &abutment_dims(1, 1, 0).unwrap()).unwrap();
        assert!(deficits(&rec).is_empty(), "{rec:?}");
    }

    #[test]
    fn e2_dims_match_presentation() {
        let page = e2_page(2, 2, 0, 20).unwrap();
        let mut count = 0;
        for a in 0..=20i64 {
            for b in 0..=6i64 {
                for e in 0..4i64 {
                    if a + 3 * b + 8 * e <= 20 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(page.dims().values().sum::<usize>(), count);
    }

    #[test]
    fn bad_differential_rejected() {
        // ξ₂² sits in bidegree (6, 2), not (7, 3)
        let table = schedule_table(2, 2).unwrap();
        let page = e2_page(2, 2, 0, 20).unwrap().advance_to(3).unwrap();
        let wrong = DifferentialAssignment::parse(&table, "3:e8:xi2^2").unwrap();
        assert!(page.apply(&[wrong]).is_err());
    }

    #[test]
    fn hidden_extension_degrees_add_up() {
        for k in [2, 3] {
            let alg = end_algebra(k, k, k - 1).unwrap();
            for h in hidden_extensions(k) {
                let src = alg.parse(h.source).unwrap();
                let tgt = alg.parse(h.target).unwrap();
                let mult = Poly::parse(crate::milnor::xi_table(k), h.multiplier).unwrap();
                let d = |p: &Poly| p.homogeneous_degree().unwrap();
                assert_eq!(d(&tgt), h.into_degree, "{h:?}");
                assert_eq!(d(&src) + d(&mult), h.into_degree, "{h:?}");
            }
        }
    }
}
