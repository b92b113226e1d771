//! Bigraded pages with explicit cycles and boundaries.
//!
//! A page `E_r` is stored as subspaces `B_r ⊆ Z_r` of the E₂-term in each
//! bidegree `(stem, s)`. Differentials are given on E₂ basis monomials and
//! applied to cycle representatives, so modules that are not cyclic (pages
//! after the first differential) need no presentation of their own.
//!
//! The E₂ basis is truncated at a stem bound `T`. Since `d_r` lowers the stem
//! by one, truncation only loses boundaries entering stem `T`; every stem
//! below `T` is computed exactly and is the trusted region.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{kernel, BitVec, Subspace};
use crate::polycore::{Monomial, Poly, VarKind, VariableTable};
use crate::quotient::PresentedAlgebra;

/// `(stem, Adams filtration)`.
pub type Bidegree = (i64, u32);

/// `d_r(source) = target`, extended linearly and by the Leibniz rule over
/// classes that survive to `E_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialAssignment {
    pub r: u32,
    pub source: Poly,
    pub target: Poly,
}

impl DifferentialAssignment {
    pub fn new(r: u32, source: Poly, target: Poly) -> Self {
        DifferentialAssignment { r, source, target }
    }

    /// Parses `r:source:target`, e.g. `15:xi1 e8^2:xi1^16`.
    pub fn parse(table: &Arc<VariableTable>, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.splitn(3, ':').collect();
        let [r, s, t] = parts[..] else {
            return Err(Error::Parse(format!("expected r:source:target, got {text:?}")));
        };
        let r = r
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad page index {r:?}")))?;
        Ok(DifferentialAssignment {
            r,
            source: Poly::parse(table.clone(), s)?,
            target: Poly::parse(table.clone(), t)?,
        })
    }
}

impl fmt::Display for DifferentialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}({}) = {}", self.r, self.source, self.target)
    }
}

#[derive(Clone, Debug)]
struct Cell {
    basis: Vec<Monomial>,
    z: Subspace,
    b: Subspace,
}

impl Cell {
    fn dim(&self) -> usize {
        self.z.dim() - self.b.dim()
    }
}

#[derive(Clone, Debug)]
pub struct Page {
    algebra: Arc<PresentedAlgebra>,
    stem_bound: i64,
    r: u32,
    cells: BTreeMap<Bidegree, Cell>,
    index: Arc<HashMap<Monomial, (Bidegree, usize)>>,
}

/// The effect of one differential: its rank out of each source bidegree.
pub type Ranks = BTreeMap<Bidegree, usize>;

fn stem_of(table: &VariableTable, m: &Monomial) -> Bidegree {
    (m.degree(table), m.weight(table) as u32)
}

/// `x` with `x·g = m`, where exponents of `e`-classes must combine without
/// carries (`e^a·e^b` with disjoint binary digits), so that `x` is a product
/// of classes that are cycles whenever `g` is.
fn multiplier(table: &VariableTable, m: &Monomial, g: &Monomial) -> Option<Monomial> {
    let mut exps = Vec::with_capacity(m.exps().len());
    for (i, (&a, &b)) in m.exps().iter().zip(g.exps()).enumerate() {
        let ok = match table.var(i).kind() {
            VarKind::E(_) => b & !a == 0,
            _ => b <= a,
        };
        if !ok {
            return None;
        }
        exps.push(a - b);
    }
    Monomial::new(table, exps).ok()
}

impl Page {
    /// The E₂ page: every standard monomial of degree at most `stem_bound`.
    pub fn e2(algebra: Arc<PresentedAlgebra>, stem_bound: i64) -> Result<Page> {
        let basis = algebra.bigraded_basis(i64::MIN, stem_bound)?;
        let mut index = HashMap::new();
        let mut cells = BTreeMap::new();
        for (key, ms) in basis {
            for (i, m) in ms.iter().enumerate() {
                index.insert(m.clone(), (key, i));
            }
            let n = ms.len();
            cells.insert(
                key,
                Cell {
                    basis: ms,
                    z: Subspace::full(n),
                    b: Subspace::zero(n),
                },
            );
        }
        Ok(Page {
            algebra,
            stem_bound,
            r: 2,
            cells,
            index: Arc::new(index),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn stem_bound(&self) -> i64 {
        self.stem_bound
    }

    pub fn trusted_max_stem(&self) -> i64 {
        self.stem_bound - 1
    }

    pub fn is_trusted(&self, stem: i64) -> bool {
        stem <= self.trusted_max_stem()
    }

    pub fn min_stem(&self) -> i64 {
        self.cells.keys().next().map_or(0, |k| k.0)
    }

    pub fn dim(&self, at: Bidegree) -> usize {
        self.cells.get(&at).map_or(0, Cell::dim)
    }

    /// Nonzero dimensions per bidegree.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.cells
            .iter()
            .map(|(k, c)| (*k, c.dim()))
            .filter(|(_, d)| *d > 0)
            .collect()
    }

    /// Dimensions summed over filtration, for every stem up to the bound.
    pub fn stem_dims(&self) -> BTreeMap<i64, u64> {
        let mut out: BTreeMap<i64, u64> = (self.min_stem()..=self.stem_bound).map(|d| (d, 0)).collect();
        for (k, c) in &self.cells {
            *out.entry(k.0).or_default() += c.dim() as u64;
        }
        out
    }

    /// Whether the class of the E₂ monomial `m` survives to this page as a cycle.
    pub fn is_cycle(&self, m: &Monomial) -> bool {
        match self.index.get(m) {
            Some((key, i)) => {
                let cell = &self.cells[key];
                cell.z.contains(&BitVec::unit(cell.basis.len(), *i))
            }
            None => false,
        }
    }

    /// Whether `m` represents a nonzero class on this page.
    pub fn is_nonzero_class(&self, m: &Monomial) -> bool {
        match self.index.get(m) {
            Some((key, i)) => {
                let cell = &self.cells[key];
                let v = BitVec::unit(cell.basis.len(), *i);
                cell.z.contains(&v) && !cell.b.contains(&v)
            }
            None => false,
        }
    }

    /// The same page relabelled as `E_r` for a later `r` (no differentials in between).
    pub fn advance_to(&self, r: u32) -> Result<Page> {
        if r < self.r {
            return Err(Error::Differential(format!("page E{} cannot go back to E{r}", self.r)));
        }
        let mut p = self.clone();
        p.r = r;
        Ok(p)
    }

    fn vectorize(&self, p: &Poly, at: Bidegree) -> Result<BitVec> {
        let len = self.cells.get(&at).map_or(0, |c| c.basis.len());
        let mut v = BitVec::zeros(len);
        for t in p.terms() {
            match self.index.get(t) {
                Some((key, i)) if *key == at => v.flip(*i),
                _ => {
                    if at.0 > self.stem_bound {
                        continue;
                    }
                    return Err(Error::Invariant(format!(
                        "{} is not a basis class in bidegree {at:?}",
                        t.display(p.table())
                    )));
                }
            }
        }
        Ok(v)
    }

    fn prepare(&self, assignments: &[DifferentialAssignment]) -> Result<Vec<(Monomial, Poly)>> {
        let table = self.algebra.table().clone();
        let mut out = Vec::new();
        for a in assignments {
            if a.r != self.r {
                return Err(Error::Differential(format!("{a} applied to page E{}", self.r)));
            }
            let src = self.algebra.normal_form(&a.source)?;
            let tgt = self.algebra.normal_form(&a.target)?;
            if src.is_zero() {
                if tgt.is_zero() {
                    continue;
                }
                return Err(Error::Differential(format!("{a}: source is zero but target is not")));
            }
            if src.len() != 1 {
                return Err(Error::Differential(format!(
                    "{a}: source normalizes to {src}, not a single monomial"
                )));
            }
            let g = src.terms()[0].clone();
            let (stem, s) = stem_of(&table, &g);
            for t in tgt.terms() {
                if stem_of(&table, t) != (stem - 1, s + self.r) {
                    return Err(Error::Differential(format!(
                        "{a}: target term {} is not in bidegree ({}, {})",
                        t.display(&table),
                        stem - 1,
                        s + self.r
                    )));
                }
            }
            if stem <= self.stem_bound && !self.is_cycle(&g) {
                return Err(Error::Differential(format!(
                    "{a}: source does not survive to E{}",
                    self.r
                )));
            }
            out.push((g, tgt));
        }
        Ok(out)
    }

    fn d_monomial(&self, m: &Monomial, prepared: &[(Monomial, Poly)]) -> Result<Poly> {
        let table = self.algebra.table();
        let mut acc = Poly::zero(table.clone());
        for (g, t) in prepared {
            if let Some(x) = multiplier(table, m, g) {
                if t.is_zero() {
                    continue;
                }
                let xt = self.algebra.mul(&Poly::monomial(table.clone(), x), t)?;
                acc.add_assign(&xt)?;
            }
        }
        Ok(acc)
    }

    fn apply_vec(rows: &[BitVec], v: &BitVec, target_len: usize) -> BitVec {
        let mut out = BitVec::zeros(target_len);
        for i in v.ones() {
            out.xor_assign(&rows[i]);
        }
        out
    }

    /// Applies `d_r` given by `assignments` (all with index `r` equal to this
    /// page's), checking that it preserves cycles and boundaries and squares
    /// to zero, and returns `E_{r+1}` with the rank of `d_r` per source bidegree.
    pub fn apply(&self, assignments: &[DifferentialAssignment]) -> Result<(Page, Ranks)> {
        let prepared = self.prepare(assignments)?;
        let r = self.r;
        let target_of = |k: Bidegree| (k.0 - 1, k.1 + r);
        let len_of = |k: Bidegree| self.cells.get(&k).map_or(0, |c| c.basis.len());

        let mut matrices: HashMap<Bidegree, Vec<BitVec>> = HashMap::new();
        for (key, cell) in &self.cells {
            if cell.z.dim() == 0 {
                continue;
            }
            let tkey = target_of(*key);
            let rows = cell
                .basis
                .iter()
                .map(|m| self.vectorize(&self.d_monomial(m, &prepared)?, tkey))
                .collect::<Result<Vec<_>>>()?;
            matrices.insert(*key, rows);
        }

        let mut next = self.clone();
        next.r = r + 1;
        let mut ranks = Ranks::new();
        let mut new_boundaries: BTreeMap<Bidegree, Vec<BitVec>> = BTreeMap::new();
        for (key, cell) in &self.cells {
            let Some(rows) = matrices.get(key) else {
                continue;
            };
            let tkey = target_of(*key);
            let tlen = len_of(tkey);
            let empty_z = Subspace::zero(tlen);
            let empty_b = Subspace::zero(tlen);
            let (tz, tb) = self
                .cells
                .get(&tkey)
                .map_or((&empty_z, &empty_b), |c| (&c.z, &c.b));
            let images: Vec<BitVec> = cell
                .z
                .basis()
                .iter()
                .map(|z| Page::apply_vec(rows, z, tlen))
                .collect();
            for (img, z) in images.iter().zip(cell.z.basis()) {
                if !tz.contains(img) {
                    return Err(Error::Differential(format!(
                        "d{r} sends a cycle at {key:?} to a non-cycle at {tkey:?} ({z:?})"
                    )));
                }
                if img.is_zero() {
                    continue;
                }
                let t2 = target_of(tkey);
                let t2len = len_of(t2);
                let second = match matrices.get(&tkey) {
                    Some(rows2) => Page::apply_vec(rows2, img, t2len),
                    None => BitVec::zeros(t2len),
                };
                let b2 = self.cells.get(&t2).map(|c| &c.b);
                if !second.is_zero() && !b2.is_some_and(|b| b.contains(&second)) {
                    return Err(Error::Differential(format!("d{r} ∘ d{r} is nonzero on {key:?}")));
                }
            }
            for b in cell.b.basis() {
                if !tb.contains(&Page::apply_vec(rows, b, tlen)) {
                    return Err(Error::Differential(format!(
                        "d{r} does not preserve boundaries at {key:?}"
                    )));
                }
            }
            let reduced: Vec<BitVec> = images.iter().map(|v| tb.reduce(v)).collect();
            let mut z_next = Subspace::zero(cell.basis.len());
            for coeffs in kernel(&reduced, tlen) {
                let mut v = BitVec::zeros(cell.basis.len());
                for i in coeffs.ones() {
                    v.xor_assign(&cell.z.basis()[i]);
                }
                z_next.insert(v);
            }
            let rank = cell.z.dim() - z_next.dim();
            if rank > 0 {
                ranks.insert(*key, rank);
                new_boundaries.insert(tkey, images);
            }
            next.cells.get_mut(key).unwrap().z = z_next;
        }
        for (tkey, images) in new_boundaries {
            let source = (tkey.0 + 1, tkey.1 - r);
            let Some(cell) = next.cells.get_mut(&tkey) else {
                return Err(Error::Invariant(format!("d{r} hits empty bidegree {tkey:?}")));
            };
            let before = cell.b.dim();
            for v in images {
                cell.b.insert(v);
            }
            if cell.b.dim() - before != ranks[&source] {
                return Err(Error::Invariant(format!(
                    "rank bookkeeping fails between {source:?} and {tkey:?}"
                )));
            }
            if !cell.b.is_subspace_of(&cell.z) {
                return Err(Error::Invariant(format!("boundaries escape cycles at {tkey:?}")));
            }
        }
        Ok((next, ranks))
    }

    pub fn snapshot(&self, ranks: Option<&Ranks>) -> PageSnapshot {
        let r = self.r;
        PageSnapshot {
            r,
            stem_bound: self.stem_bound,
            trusted_max_stem: self.trusted_max_stem(),
            entries: self.dims().into_iter().map(|((x, s), d)| (x, s, d)).collect(),
            differentials: ranks
                .into_iter()
                .flatten()
                .flat_map(|(&(x, s), &n)| std::iter::repeat_n(((x, s), (x - 1, s + r)), n))
                .collect(),
        }
    }
}

/// Serializable summary of a page and the differential leaving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSnapshot {
    pub r: u32,
    pub stem_bound: i64,
    pub trusted_max_stem: i64,
    /// `(stem, filtration, dim)` for every nonzero bidegree.
    pub entries: Vec<(i64, u32, usize)>,
    /// One `(source, target)` pair per unit of rank.
    pub differentials: Vec<(Bidegree, Bidegree)>,
}

impl PageSnapshot {
    pub fn stem_dims(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for &(x, _, d) in &self.entries {
            *out.entry(x).or_insert(0) += d as u64;
        }
        out
    }
}

/// A page together with the differential applied to it (if any).
#[derive(Clone, Debug)]
pub struct RunStep {
    pub page: Page,
    pub ranks: Option<Ranks>,
}

/// Applies the assignments in order of page index, starting from `e2`.
/// Returns every page with a differential plus the final page.
pub fn run_schedule(e2: Page, assignments: &[DifferentialAssignment]) -> Result<Vec<RunStep>> {
    let mut by_r: BTreeMap<u32, Vec<DifferentialAssignment>> = BTreeMap::new();
    for a in assignments {
        by_r.entry(a.r).or_default().push(a.clone());
    }
    let mut steps = Vec::new();
    let mut page = e2;
    for (r, group) in by_r {
        page = page.advance_to(r)?;
        let (next, ranks) = page.apply(&group)?;
        steps.push(RunStep {
            page,
            ranks: Some(ranks),
        });
        page = next;
    }
    steps.push(RunStep { page, ranks: None });
    Ok(steps)
}

/// Applies one differential to `page`, first passing through to its index.
pub fn run_differential(page: &Page, assignments: &[DifferentialAssignment]) -> Result<Page> {
    let r = assignments.first().map_or(page.r(), |a| a.r);
    Ok(page.advance_to(r)?.apply(assignments)?.0)
}
