//! `Ext_C(F₂, M)` from the reduced cobar complex `C̄^{⊗s} ⊗ M`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{rank, BitVec};
use crate::sseq::comodule::{Coalgebra, Comodule};

/// Nonzero `dim Ext^{s,t}`, keyed by `(s, t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub t_bound: i64,
    pub s_max: u32,
    pub dims: BTreeMap<(u32, i64), usize>,
}

impl ExtTable {
    pub fn dim(&self, s: u32, t: i64) -> usize {
        self.dims.get(&(s, t)).copied().unwrap_or(0)
    }
}

type Cell = (Vec<u64>, usize);

struct Complex<'a> {
    module: &'a Comodule,
    coalgebra: Coalgebra,
}

impl Complex<'_> {
    /// Basis of `C̄^{⊗s} ⊗ M` in internal degree `t`.
    fn basis(&self, s: u32, t: i64) -> Vec<Cell> {
        let mut out = Vec::new();
        for (j, &d) in self.module.degrees.iter().enumerate() {
            let rest = t - d;
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            let total = (rest / 2) as u64;
            let mut parts = Vec::with_capacity(s as usize);
            self.compositions(total, s, &mut parts, &mut |p| out.push((p.to_vec(), j)));
        }
        out.sort();
        out
    }

    fn compositions(&self, total: u64, s: u32, parts: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if s == 0 {
            if total == 0 {
                f(parts);
            }
            return;
        }
        if total < s as u64 {
            return;
        }
        for first in 1..=total - (s as u64 - 1) {
            if !self.coalgebra.has_power(first) {
                break;
            }
            parts.push(first);
            self.compositions(total - first, s - 1, parts, f);
            parts.pop();
        }
    }

    fn differential(&self, cell: &Cell) -> Vec<Cell> {
        let (parts, j) = cell;
        let mut out = Vec::new();
        for (i, &n) in parts.iter().enumerate() {
            for (a, b) in self.coalgebra.coproduct(n) {
                if a == 0 || b == 0 {
                    continue;
                }
                let mut p = Vec::with_capacity(parts.len() + 1);
                p.extend_from_slice(&parts[..i]);
                p.push(a);
                p.push(b);
                p.extend_from_slice(&parts[i + 1..]);
                out.push((p, *j));
            }
        }
        for &(p, c) in &self.module.coaction[*j] {
            if p == 0 {
                continue;
            }
            let mut q = parts.clone();
            q.push(p);
            out.push((q, c));
        }
        out
    }

    fn matrix(&self, source: &[Cell], target: &[Cell]) -> Vec<BitVec> {
        let index: HashMap<&Cell, usize> = target.iter().enumerate().map(|(i, c)| (c, i)).collect();
        source
            .iter()
            .map(|c| {
                let mut v = BitVec::zeros(target.len());
                for img in self.differential(c) {
                    v.flip(index[&img]);
                }
                v
            })
            .collect()
    }
}

/// `Ext^{s,t}_C(F₂, M)` for `t ≤ t_bound` and `s ≤ s_max` (default: every
/// `s` that can occur below the bound).
pub fn cobar_ext(
    module: &Comodule,
    coalgebra: Coalgebra,
    t_bound: i64,
    s_max: Option<u32>,
) -> Result<ExtTable> {
    module.check(coalgebra)?;
    let min_deg = module.degrees.iter().copied().min().unwrap_or(0);
    let reachable = ((t_bound - min_deg).max(0) / 2) as u32;
    let s_max = s_max.unwrap_or(reachable).min(reachable + 1);
    if t_bound - min_deg > 200 {
        return Err(Error::ResourceLimit(format!("t bound {t_bound} is too large for the cobar complex")));
    }
    let cx = Complex { module, coalgebra };
    let mut table = ExtTable {
        t_bound,
        s_max,
        dims: BTreeMap::new(),
    };
    for t in min_deg..=t_bound {
        let mut prev_rank = 0usize;
        let mut basis = cx.basis(0, t);
        for s in 0..=s_max {
            let next = cx.basis(s + 1, t);
            let r = rank(&cx.matrix(&basis, &next));
            let dim = basis.len() - r - prev_rank;
            if dim > 0 {
                table.dims.insert((s, t), dim);
            }
            prev_rank = r;
            basis = next;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differential_squares_to_zero() {
        let m = crate::sseq::comodule::comodule_mi(&[1, 2].into_iter().collect()).unwrap();
        let cx = Complex {
            module: &m,
            coalgebra: Coalgebra::Polynomial,
        };
        for t in 0..16 {
            for s in 0..4 {
                let a = cx.basis(s, t);
                let b = cx.basis(s + 1, t);
                let c = cx.basis(s + 2, t);
                let d1 = cx.matrix(&a, &b);
                let d2 = cx.matrix(&b, &c);
                for v in d1 {
                    let mut acc = BitVec::zeros(c.len());
                    for i in v.ones() {
                        acc.xor_assign(&d2[i]);
                    }
                    assert!(acc.is_zero());
                }
            }
        }
    }

    #[test]
    fn trivial_module_low_degrees() {
        let ext = cobar_ext(&Comodule::trivial(), Coalgebra::Polynomial, 16, None).unwrap();
        assert_eq!(ext.dim(0, 0), 1);
        let ones: Vec<i64> = ext.dims.keys().filter(|(s, _)| *s == 1).map(|k| k.1).collect();
        assert_eq!(ones, vec![2, 4, 8, 16]);
    }
}
