//! Buchberger's algorithm over F₂ in weighted-graded polynomial rings.
//!
//! The term order is the one fixed by the [`VariableTable`]: weighted degree
//! (the topological degree for positively graded tables) with reverse
//! lexicographic tie-breaks. S-pairs are processed by the normal strategy,
//! lowest lcm first, so the run is deterministic; the final basis is reduced
//! and sorted by leading term, which makes it unique.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::{revlex, same_table, term_cmp, Monomial, Poly, VariableTable};

/// The graded reverse lexicographic order of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    weights: Vec<u64>,
}

impl TermOrder {
    pub fn of(table: &VariableTable) -> TermOrder {
        TermOrder {
            weights: table.order_weights().to_vec(),
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, m: &Monomial) -> u64 {
        m.exps().iter().zip(&self.weights).map(|(&e, &w)| e as u64 * w).sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.weight(a).cmp(&self.weight(b)).then_with(|| revlex(a, b))
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    /// Largest weighted degree of an S-pair lcm that may be reduced.
    pub max_degree: Option<u64>,
    /// Largest number of S-pair reductions.
    pub max_steps: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_degree: None,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    table: Arc<VariableTable>,
    order: TermOrder,
    basis: Vec<Poly>,
    generators: Vec<Poly>,
    /// For each basis element, cofactors expressing it in the generators.
    cofactors: Option<Vec<Vec<Poly>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    weight: u64,
    lcm: RevlexKey,
    i: usize,
    j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct RevlexKey(Monomial);

impl PartialOrd for RevlexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RevlexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        revlex(&self.0, &other.0)
    }
}

struct Engine {
    table: Arc<VariableTable>,
    order: TermOrder,
    polys: Vec<Poly>,
    reps: Option<Vec<Vec<Poly>>>,
    active: Vec<bool>,
    ngens: usize,
}

impl Engine {
    fn zero_rep(&self) -> Vec<Poly> {
        vec![Poly::zero(self.table.clone()); self.ngens]
    }

    fn find_divisor(&self, m: &Monomial) -> Option<usize> {
        (0..self.polys.len())
            .find(|&l| self.active[l] && self.polys[l].terms()[0].divides(m))
    }

    /// Full reduction of `p` by the active elements, optionally tracking the
    /// multiples subtracted as a combination of the generators.
    fn reduce(&self, p: Poly, mut rep: Option<Vec<Poly>>) -> Result<(Poly, Option<Vec<Poly>>)> {
        let mut p = p;
        let mut rem: Vec<Monomial> = Vec::new();
        let mut steps = 0usize;
        while let Some(lt) = p.leading_term().cloned() {
            match self.find_divisor(&lt) {
                Some(l) => {
                    let q = self.polys[l].terms()[0].quotient_of(&lt);
                    p.add_assign(&self.polys[l].mul_monomial(&q)?)?;
                    if let (Some(acc), Some(reps)) = (rep.as_mut(), self.reps.as_ref()) {
                        for (a, r) in acc.iter_mut().zip(&reps[l]) {
                            a.add_assign(&r.mul_monomial(&q)?)?;
                        }
                    }
                }
                None => {
                    let mut terms = p.into_terms();
                    terms.remove(0);
                    p = Poly::from_sorted_unchecked(self.table.clone(), terms);
                    rem.push(lt);
                }
            }
            steps += 1;
            if steps > 50_000_000 {
                return Err(Error::ResourceLimit("reduction did not terminate".into()));
            }
        }
        Ok((Poly::from_sorted_unchecked(self.table.clone(), rem), rep))
    }
}

fn check_inputs(gens: &[Poly]) -> Result<Arc<VariableTable>> {
    let table = gens
        .first()
        .map(|g| g.table().clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    for g in gens {
        if !same_table(g.table(), &table) {
            return Err(Error::TableMismatch);
        }
    }
    if table.has_exterior() {
        return Err(Error::ExteriorVariables);
    }
    Ok(table)
}

/// A reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Poly], config: &GroebnerConfig) -> Result<GroebnerBasis> {
    run(gens, config, false)
}

/// As [`buchberger`], also recording how each basis element is built from `gens`.
pub fn buchberger_tracked(gens: &[Poly], config: &GroebnerConfig) -> Result<GroebnerBasis> {
    run(gens, config, true)
}

fn run(gens: &[Poly], config: &GroebnerConfig, track: bool) -> Result<GroebnerBasis> {
    let table = check_inputs(gens)?;
    let order = TermOrder::of(&table);
    let ngens = gens.len();
    let mut engine = Engine {
        table: table.clone(),
        order: order.clone(),
        polys: Vec::new(),
        reps: track.then(Vec::new),
        active: Vec::new(),
        ngens,
    };
    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let push_pairs = |engine: &Engine,
                      n: usize,
                      queue: &mut BTreeSet<PairKey>,
                      pending: &mut HashSet<(usize, usize)>| {
        let ln = &engine.polys[n].terms()[0];
        for i in 0..n {
            if !engine.active[i] {
                continue;
            }
            let lcm = engine.polys[i].terms()[0].lcm(ln);
            queue.insert(PairKey {
                weight: engine.order.weight(&lcm),
                lcm: RevlexKey(lcm),
                i,
                j: n,
            });
            pending.insert((i, n));
        }
    };

    for (gi, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let rep = track.then(|| {
            let mut r = engine.zero_rep();
            r[gi] = Poly::one(table.clone());
            r
        });
        let (reduced, rep) = engine.reduce(g.clone(), rep)?;
        if reduced.is_zero() {
            continue;
        }
        engine.polys.push(reduced);
        engine.active.push(true);
        if let (Some(reps), Some(rep)) = (engine.reps.as_mut(), rep) {
            reps.push(rep);
        }
        let n = engine.polys.len() - 1;
        push_pairs(&engine, n, &mut queue, &mut pending);
    }

    let mut steps = 0usize;
    while let Some(pair) = queue.pop_first() {
        pending.remove(&(pair.i, pair.j));
        let (i, j) = (pair.i, pair.j);
        let li = engine.polys[i].terms()[0].clone();
        let lj = engine.polys[j].terms()[0].clone();
        if li.is_coprime(&lj) {
            continue;
        }
        let lcm = &pair.lcm.0;
        let chain = (0..engine.polys.len()).any(|l| {
            l != i
                && l != j
                && engine.active[l]
                && engine.polys[l].terms()[0].divides(lcm)
                && !pending.contains(&(i.min(l), i.max(l)))
                && !pending.contains(&(j.min(l), j.max(l)))
        });
        if chain {
            continue;
        }
        if let Some(cap) = config.max_degree {
            if pair.weight > cap {
                return Err(Error::ResourceLimit(format!(
                    "S-pair of degree {} exceeds the cap {cap}",
                    pair.weight
                )));
            }
        }
        steps += 1;
        if steps > config.max_steps {
            return Err(Error::ResourceLimit(format!(
                "more than {} S-pair reductions",
                config.max_steps
            )));
        }
        let qi = li.quotient_of(lcm);
        let qj = lj.quotient_of(lcm);
        let s = engine.polys[i]
            .mul_monomial(&qi)?
            .add(&engine.polys[j].mul_monomial(&qj)?)?;
        let rep = match engine.reps.as_ref() {
            Some(reps) => {
                let mut r = engine.zero_rep();
                for (k, slot) in r.iter_mut().enumerate() {
                    *slot = reps[i][k].mul_monomial(&qi)?.add(&reps[j][k].mul_monomial(&qj)?)?;
                }
                Some(r)
            }
            None => None,
        };
        let (reduced, rep) = engine.reduce(s, rep)?;
        if reduced.is_zero() {
            continue;
        }
        engine.polys.push(reduced);
        engine.active.push(true);
        if let (Some(reps), Some(rep)) = (engine.reps.as_mut(), rep) {
            reps.push(rep);
        }
        let n = engine.polys.len() - 1;
        push_pairs(&engine, n, &mut queue, &mut pending);
    }

    interreduce(engine, gens.to_vec())
}

fn interreduce(mut engine: Engine, generators: Vec<Poly>) -> Result<GroebnerBasis> {
    let n = engine.polys.len();
    // Drop elements whose leading term is divisible by another's.
    for i in 0..n {
        let li = engine.polys[i].terms()[0].clone();
        let redundant = (0..n).any(|j| {
            j != i && engine.active[j] && engine.polys[j].terms()[0].divides(&li)
        });
        if redundant {
            engine.active[i] = false;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| engine.active[i]).collect();
    let mut basis = Vec::with_capacity(keep.len());
    let mut reps = engine.reps.as_ref().map(|_| Vec::with_capacity(keep.len()));
    for &i in &keep {
        engine.active[i] = false;
        let lt = engine.polys[i].terms()[0].clone();
        let tail = Poly::from_sorted_unchecked(
            engine.table.clone(),
            engine.polys[i].terms()[1..].to_vec(),
        );
        let tail_rep = engine.reps.as_ref().map(|r| r[i].clone());
        let (reduced_tail, rep) = engine.reduce(tail, tail_rep)?;
        engine.active[i] = true;
        let mut terms = vec![lt];
        terms.extend(reduced_tail.into_terms());
        basis.push(Poly::from_sorted_unchecked(engine.table.clone(), terms));
        if let (Some(out), Some(rep)) = (reps.as_mut(), rep) {
            out.push(rep);
        }
    }
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| engine.order.cmp(&basis[a].terms()[0], &basis[b].terms()[0]));
    let basis_sorted = idx.iter().map(|&i| basis[i].clone()).collect();
    let reps_sorted = reps.map(|r| idx.iter().map(|&i| r[i].clone()).collect());
    Ok(GroebnerBasis {
        table: engine.table,
        order: engine.order,
        basis: basis_sorted,
        generators,
        cofactors: reps_sorted,
    })
}

impl GroebnerBasis {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn leading_terms(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().map(|g| &g.terms()[0])
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_terms().any(|l| l.divides(m))
    }

    fn engine(&self) -> Engine {
        Engine {
            table: self.table.clone(),
            order: self.order.clone(),
            polys: self.basis.clone(),
            reps: self.cofactors.clone(),
            active: vec![true; self.basis.len()],
            ngens: self.generators.len(),
        }
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        if !same_table(p.table(), &self.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self.engine().reduce(p.clone(), None)?.0)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Standard monomials of degree at most `bound`, grouped by degree.
    pub fn standard_monomials(&self, bound: i64) -> Result<BTreeMap<i64, Vec<Monomial>>> {
        let leads: Vec<Monomial> = self.leading_terms().cloned().collect();
        enumerate_monomials(&self.table, i64::MIN, bound, &|m| {
            !leads.iter().any(|l| l.divides(m))
        })
    }

    /// Whether the quotient is finite-dimensional: every variable has a pure
    /// power among the leading terms. Returns the top degree of a standard
    /// monomial when it is.
    pub fn is_finite_dimensional(&self) -> Result<(bool, Option<i64>)> {
        let n = self.table.len();
        let mut powers = vec![None; n];
        for l in self.leading_terms() {
            if let Some((i, e)) = l.as_pure_power() {
                powers[i] = Some(powers[i].map_or(e, |p: u32| p.min(e)));
            }
        }
        if powers.iter().any(Option::is_none) {
            return Ok((false, None));
        }
        let bound: i64 = powers
            .iter()
            .zip(self.table.vars())
            .map(|(p, v)| (p.unwrap() as i64 - 1) * v.degree.max(0))
            .sum();
        let top = self.standard_monomials(bound)?.keys().next_back().copied();
        Ok((true, top))
    }

    /// Writes `p` as a combination of the generators when it lies in the
    /// ideal. Requires a basis built by [`buchberger_tracked`].
    pub fn membership(&self, p: &Poly) -> Result<Membership> {
        let cofactors = self
            .cofactors
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("basis was built without cofactor tracking".into()))?;
        if !same_table(p.table(), &self.table) {
            return Err(Error::TableMismatch);
        }
        let engine = self.engine();
        let zero = vec![Poly::zero(self.table.clone()); self.generators.len()];
        let (rem, rep) = engine.reduce(p.clone(), Some(zero))?;
        debug_assert_eq!(cofactors.len(), self.basis.len());
        if rem.is_zero() {
            let cert = CofactorCertificate::new(p.clone(), self.generators.clone(), rep.unwrap())?;
            Ok(Membership::Member(cert))
        } else {
            Ok(Membership::NotMember(rem))
        }
    }
}

/// Cofactors `c_i` with `p = Σ c_i g_i`, verified exactly on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorCertificate {
    target: Poly,
    generators: Vec<Poly>,
    cofactors: Vec<Poly>,
}

impl CofactorCertificate {
    pub fn new(target: Poly, generators: Vec<Poly>, cofactors: Vec<Poly>) -> Result<Self> {
        let cert = CofactorCertificate {
            target,
            generators,
            cofactors,
        };
        if !cert.verify()? {
            return Err(Error::Invariant("cofactor identity does not hold".into()));
        }
        Ok(cert)
    }

    pub fn verify(&self) -> Result<bool> {
        if self.generators.len() != self.cofactors.len() {
            return Ok(false);
        }
        let mut acc = self.target.clone();
        for (c, g) in self.cofactors.iter().zip(&self.generators) {
            acc.add_assign(&c.mul(g)?)?;
        }
        Ok(acc.is_zero())
    }

    pub fn target(&self) -> &Poly {
        &self.target
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn cofactors(&self) -> &[Poly] {
        &self.cofactors
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(CofactorCertificate),
    NotMember(Poly),
}

pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Result<Poly> {
    gb.normal_form(p)
}

pub fn standard_monomials(gb: &GroebnerBasis, degree_bound: i64) -> Result<BTreeMap<i64, Vec<Monomial>>> {
    gb.standard_monomials(degree_bound)
}

pub fn is_finite_dimensional(gb: &GroebnerBasis) -> Result<(bool, Option<i64>)> {
    gb.is_finite_dimensional()
}

/// Membership of `p` in the ideal of `gens`, with an exact certificate when it holds.
pub fn reduce_with_cofactors(p: &Poly, gens: &[Poly], config: &GroebnerConfig) -> Result<Membership> {
    buchberger_tracked(gens, config)?.membership(p)
}

/// All monomials of degree in `[lower, upper]` accepted by `keep`, grouped by degree.
///
/// `keep` must be closed under division (an order ideal): once a partial
/// monomial is rejected its multiples are skipped. Exterior variables take
/// exponents 0 or 1 and may have any degree; polynomial variables must have
/// positive degree.
pub fn enumerate_monomials(
    table: &VariableTable,
    lower: i64,
    upper: i64,
    keep: &dyn Fn(&Monomial) -> bool,
) -> Result<BTreeMap<i64, Vec<Monomial>>> {
    let n = table.len();
    for v in table.vars() {
        if !v.is_exterior() && v.degree <= 0 {
            return Err(Error::InvalidArgument(format!(
                "polynomial variable {} of degree {} has infinitely many powers in a degree",
                v.name, v.degree
            )));
        }
    }
    // Most negative degree still reachable from variables at index >= i.
    let mut slack = vec![0i64; n + 1];
    for i in (0..n).rev() {
        let v = table.var(i);
        slack[i] = slack[i + 1] + if v.is_exterior() { v.degree.min(0) } else { 0 };
    }
    let mut out: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    let mut exps = vec![0u32; n];
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        table: &VariableTable,
        i: usize,
        degree: i64,
        exps: &mut Vec<u32>,
        slack: &[i64],
        lower: i64,
        upper: i64,
        keep: &dyn Fn(&Monomial) -> bool,
        out: &mut BTreeMap<i64, Vec<Monomial>>,
    ) {
        if i == table.len() {
            if degree >= lower {
                out.entry(degree)
                    .or_default()
                    .push(Monomial::from_exps_unchecked(exps.clone()));
            }
            return;
        }
        let v = table.var(i);
        let max_e = if v.is_exterior() { 1 } else { u32::MAX };
        let mut e = 0u32;
        loop {
            let d = degree + e as i64 * v.degree;
            if d + slack[i + 1] > upper {
                break;
            }
            exps[i] = e;
            if e > 0 && !keep(&Monomial::from_exps_unchecked(exps.clone())) {
                break;
            }
            dfs(table, i + 1, d, exps, slack, lower, upper, keep, out);
            if e == max_e {
                break;
            }
            e += 1;
        }
        exps[i] = 0;
    }
    if keep(&Monomial::one(n)) {
        dfs(table, 0, 0, &mut exps, &slack, lower, upper, keep, &mut out);
    }
    for monos in out.values_mut() {
        monos.sort_by(|a, b| term_cmp(table, a, b));
    }
    Ok(out)
}
