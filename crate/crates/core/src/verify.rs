//! Self-verification suite: each check recomputes a known algebraic fact and
//! reports pass/fail with a short detail line.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::groebner::{buchberger_tracked, GroebnerConfig, Membership};
use crate::milnor::{q1, verify_milnor_identity, xi_table, zeta, zeta_leading_term, TruncationSpec};
use crate::polycore::{Monomial, Poly};
use crate::quotient::{
    build_quotient, closed_form_poincare, conjecture_report, delta, gaussian_binomial_q2,
    regularity_check, regularity_check_generators, split_dims, QuotientLimits, QuotientRing,
};
use crate::sseq::{
    abutment_differentials, abutment_dims, cobar_ext, deficits, differential_schedule,
    duality_check, end_run, page_factorization_check, quotient_run, reconcile_with_abutment,
    Coalgebra, Comodule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Sseq,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u32] {
        match self {
            Suite::Core => &[1, 2, 3, 4, 5, 12],
            Suite::Sseq => &[6, 7, 8, 9, 10, 11],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "milnor identity",
        2 => "q1 laws",
        3 => "quotient numerology",
        4 => "regularity",
        5 => "membership of xi1^16",
        6 => "A<2> spectral sequence",
        7 => "differential schedules",
        8 => "cobar ext",
        9 => "splitting and delta",
        10 => "A<2> ^ End(M<=1) duality",
        11 => "A<3> ^ End(M<=2) duality",
        12 => "nilpotency patterns",
        _ => "unknown",
    }
}

/// Runs one check. Errors inside a check count as failures.
pub fn run_check(id: u32) -> CheckOutcome {
    let start = Instant::now();
    let result = match id {
        1 => milnor_identity(),
        2 => q1_laws(),
        3 => quotient_numerology(),
        4 => regularity(),
        5 => membership(),
        6 => a2_sequence(),
        7 => schedules(),
        8 => cobar(),
        9 => splitting(),
        10 => end_duality_k2(),
        11 => end_duality_k3(),
        12 => nilpotency_patterns(),
        _ => Ok((false, format!("no check numbered {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        id,
        name: name(id),
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    suite.criteria().iter().map(|&id| run_check(id)).collect()
}

pub fn format_line(o: &CheckOutcome) -> String {
    format!(
        "{:>2} {:<26} {} {:>7}ms  {}",
        o.id,
        o.name,
        if o.passed { "PASS" } else { "FAIL" },
        o.millis,
        o.detail
    )
}

type Check = Result<(bool, String)>;

const PAIRS: [(u32, u32); 5] = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)];

fn milnor_identity() -> Check {
    for n in 1..=10 {
        if !verify_milnor_identity(n, 10)? {
            return Ok((false, format!("fails at n = {n}")));
        }
    }
    Ok((true, "n = 1..10".into()))
}

fn q1_laws() -> Check {
    let table = xi_table(7);
    for j in 1..=6u32 {
        let xj = Poly::var(table.clone(), (j - 1) as usize);
        let expected = Poly::var(table.clone(), j as usize)
            .add(&Poly::var(table.clone(), 0).mul(&xj.square()?)?)?;
        if q1(&xj)? != expected {
            return Ok((false, format!("Q1(xi{j}) = {}", q1(&xj)?)));
        }
        let spec = TruncationSpec::Full(7);
        if q1(&zeta(j, spec)?)? != zeta(j + 1, spec)? {
            return Ok((false, format!("Q1(zeta{j}) != zeta{}", j + 1)));
        }
    }
    Ok((true, "j = 1..6".into()))
}

fn quotient_numerology() -> Check {
    let limits = QuotientLimits::default();
    let mut parts = Vec::new();
    for (k, m) in PAIRS {
        let qr = build_quotient(k, m, &limits)?;
        let gauss = gaussian_binomial_q2(m + k, k)?;
        let top = 2 * ((1i64 << m) - 1) * ((1i64 << k) - 1);
        let series = qr.poincare_series();
        let frob = qr.frobenius_check()?;
        let ok = gauss == qr.total_dim().into()
            && series == closed_form_poincare(k, m)?
            && qr.top_degree() == top
            && frob.all_nonsingular
            && series.is_palindromic();
        if !ok {
            return Ok((false, format!("({k},{m}): dim {} top {}", qr.total_dim(), qr.top_degree())));
        }
        parts.push(format!("({k},{m}) dim {} top {}", qr.total_dim(), top));
    }
    Ok((true, parts.join(", ")))
}

fn regularity() -> Check {
    let limits = QuotientLimits::default();
    for (k, m) in PAIRS {
        if !regularity_check(k, m, &limits)? {
            return Ok((false, format!("({k},{m}) not regular")));
        }
    }
    let table = xi_table(2);
    let control = [
        Poly::parse(table.clone(), "xi1 xi2^2")?,
        Poly::parse(table, "xi2^5")?,
    ];
    let control_regular = regularity_check_generators(&control, &limits)?;
    Ok((
        !control_regular,
        format!("five pairs regular; leading-term control regular = {control_regular}"),
    ))
}

fn membership() -> Check {
    let spec = TruncationSpec::Trunc(2);
    let gens = [zeta(3, spec)?, zeta(4, spec)?];
    let gb = buchberger_tracked(&gens, &GroebnerConfig::default())?;
    let table = xi_table(2);
    let p16 = Poly::parse(table.clone(), "xi1^16")?;
    let p15 = Poly::parse(table, "xi1^15")?;
    let certified = match gb.membership(&p16)? {
        Membership::Member(cert) => cert.verify()?,
        Membership::NotMember(_) => false,
    };
    let nf15 = gb.normal_form(&p15)?;
    Ok((
        certified && !nf15.is_zero(),
        format!("xi1^16 certified = {certified}; NF(xi1^15) = {nf15}"),
    ))
}

fn a2_sequence() -> Check {
    let extra = abutment_differentials(2, 2)?;
    let steps = quotient_run(2, 2, 0, 27, &extra)?;
    let last = &steps.last().expect("run has a final page").page;
    if last.r() != 16 {
        return Ok((false, format!("final page is E{}", last.r())));
    }
    let table = xi_table(2);
    let relations = [
        Poly::parse(table.clone(), "xi1 xi2^2")?,
        Poly::parse(table.clone(), "xi2^5")?,
        Poly::parse(table, "xi1^16")?,
    ];
    let model = QuotientRing::from_generators(&relations, &QuotientLimits::default())?;
    let page_dims = last.stem_dims();
    let mismatched: Vec<i64> = (0..=last.trusted_max_stem())
        .filter(|d| page_dims.get(d).copied().unwrap_or(0) != model.dims().get(d).copied().unwrap_or(0))
        .collect();
    let residual = deficits(&reconcile_with_abutment(last, &abutment_dims(2, 2, 0)?)?);
    Ok((
        mismatched.is_empty() && residual.is_empty(),
        format!(
            "E16 stems <= {}: model mismatches {:?}, deficits {:?}",
            last.trusted_max_stem(),
            mismatched,
            residual
        ),
    ))
}

fn schedules() -> Check {
    let targets = |k, m| -> Result<Vec<(u32, String)>> {
        Ok(differential_schedule(k, m)?
            .iter()
            .map(|a| (a.r, a.target.to_string()))
            .collect())
    };
    let a2 = targets(2, 2)?;
    let a3 = targets(3, 3)?;
    let want2 = vec![(3, "xi1 xi2^2".to_string()), (5, "xi2^5".to_string())];
    let want3 = vec![
        (3, "xi1 xi3^2".to_string()),
        (5, "xi2 xi3^4".to_string()),
        (9, "xi3^9".to_string()),
    ];
    if a2 != want2 || a3 != want3 {
        return Ok((false, format!("(2,2) {a2:?}; (3,3) {a3:?}")));
    }
    let mut count = 0;
    for k in 1..=3u32 {
        for m in k..=5u32 {
            let sched = differential_schedule(k, m)?;
            for (i, a) in sched.iter().enumerate() {
                let n = m + i as u32 + 1;
                let lead = zeta(n, TruncationSpec::Trunc(k))?.adams_leading_part()?;
                let closed = Poly::monomial(xi_table(k), zeta_leading_term(n, k)?);
                let target = a.target.restrict_to(&xi_table(k))?;
                if target != lead || lead != closed {
                    return Ok((false, format!("(k,m) = ({k},{m}), zeta{n}")));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} scheduled targets match")))
}

/// Number of monomials in generators at bidegrees `(1, t_i)` landing in `(s, t)`.
fn polynomial_count(gen_t: &[i64], t_bound: i64) -> BTreeMap<(u32, i64), usize> {
    let mut out = BTreeMap::new();
    out.insert((0u32, 0i64), 1usize);
    for &g in gen_t {
        let mut next = BTreeMap::new();
        for (&(s, t), &c) in &out {
            let mut j = 0;
            while t + j * g <= t_bound {
                *next.entry((s + j as u32, t + j * g)).or_default() += c;
                j += 1;
            }
        }
        out = next;
    }
    out
}

fn cobar() -> Check {
    let trivial = Comodule::trivial();
    let ext = cobar_ext(&trivial, Coalgebra::Polynomial, 31, Some(1))?;
    let ones: Vec<i64> = (0..=31).filter(|&t| ext.dim(1, t) > 0).collect();
    let ones_ok = ones == [2, 4, 8, 16] && ones.iter().all(|&t| ext.dim(1, t) == 1);

    let ext = cobar_ext(&trivial, Coalgebra::Polynomial, 20, None)?;
    let poly_ok = ext.dims == polynomial_count(&[2, 4, 8, 16], 20);

    let ext = cobar_ext(&trivial, Coalgebra::Truncated(2), 16, None)?;
    let trunc_ok = ext.dims == polynomial_count(&[2, 4], 16);
    Ok((
        ones_ok && poly_ok && trunc_ok,
        format!("Ext^1 at t = {ones:?}; polynomial through 20: {poly_ok}; u^4 truncation through 16: {trunc_ok}"),
    ))
}

fn splitting() -> Check {
    let limits = QuotientLimits::default();
    let mut parts = Vec::new();
    for (k, m, n) in [(1, 1, 1), (2, 2, 1), (2, 3, 2)] {
        let dims = split_dims(k, m, n, &limits)?;
        let top = dims.keys().next_back().copied().unwrap_or(0);
        let want = delta(k, m, n)?;
        if top != want || dims[&top] != 1 {
            return Ok((false, format!("({k},{m},{n}) top {top}, delta {want}")));
        }
        parts.push(format!("delta({k},{m},{n}) = {want}"));
    }
    let f2 = page_factorization_check(2, 2, 1, 40, &abutment_differentials(2, 2)?)?;
    let f1 = page_factorization_check(1, 1, 1, 20, &[])?;
    parts.push(format!("factorization (2,2,1) {f2}, (1,1,1) {f1}"));
    Ok((f1 && f2, parts.join("; ")))
}

fn end_duality(k: u32, j: u32, stem_bound: i64, shift: i64, lo: i64, hi: i64) -> Check {
    let extra = abutment_differentials(k, k)?;
    let steps = end_run(k, k, j, stem_bound, &extra)?;
    let last = &steps.last().expect("run has a final page").page;
    let dims: BTreeMap<i64, u64> = last
        .stem_dims()
        .into_iter()
        .filter(|(d, _)| last.is_trusted(*d))
        .collect();
    let report = duality_check(&dims, shift, lo, hi);
    let total: u64 = dims.values().sum();
    Ok((
        report.holds(),
        format!(
            "E{} total {total}, shift {shift} over {lo}..{hi}: mismatches {:?}",
            last.r(),
            report.mismatches
        ),
    ))
}

fn end_duality_k2() -> Check {
    end_duality(2, 1, 22, 18, -2, 20)
}

fn end_duality_k3() -> Check {
    end_duality(3, 2, 106, 98, -6, 104)
}

fn nilpotency_patterns() -> Check {
    let limits = QuotientLimits::default();
    let mut parts = Vec::new();
    for k in [2, 3] {
        let report = conjecture_report(k, &limits)?;
        parts.push(format!("k={k} {}", if report.holds() { "holds" } else { "fails" }));
    }
    let qr = build_quotient(2, 2, &limits)?;
    let table = xi_table(2);
    let x1 = |e| Monomial::var(2, 0, e);
    let x2_6 = Monomial::var(2, 1, 6);
    let derived = qr.normal_form_monomial(&x1(16))?.is_zero()
        && !qr.normal_form_monomial(&x1(15))?.is_zero()
        && !qr.normal_form_monomial(&x2_6)?.is_zero()
        && x2_6.degree(&table) == 18;
    parts.push(format!("k=2 derived facts {derived}"));
    Ok((derived, parts.join("; ")))
}
