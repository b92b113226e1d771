//! Cobar Ext against the Koszul complex of the dual algebra.
//!
//! The dual of `F₂[u]` is `⊗_j F₂[x_j]/(x_j²)` with `x_j` dual to `u^{2^j}`,
//! so `Ext(F₂, M)` is the homology of `M ⊗ F₂[h_j]`, `|h_j| = (1, 2^{j+1})`,
//! with `d(n ⊗ p) = Σ_j x_j n ⊗ h_j p`.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use common::rank_f2;
use dualsteenrod::sseq::{cobar_ext, comodule_mi, Coalgebra, Comodule};

type Cell = (usize, Vec<u32>);

fn koszul_basis(m: &Comodule, gens: &[i64], s: u32, t: i64) -> Vec<Cell> {
    fn go(gens: &[i64], i: usize, s: u32, t: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == gens.len() {
            if s == 0 && t == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut a = 0u32;
        while a <= s && a as i64 * gens[i] <= t {
            cur.push(a);
            go(gens, i + 1, s - a, t - a as i64 * gens[i], cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    for (b, &d) in m.degrees.iter().enumerate() {
        if t < d {
            continue;
        }
        let mut exps = Vec::new();
        go(gens, 0, s, t - d, &mut Vec::new(), &mut exps);
        out.extend(exps.into_iter().map(|e| (b, e)));
    }
    out
}

fn koszul_ext(m: &Comodule, levels: u32, t_bound: i64, s_max: u32) -> BTreeMap<(u32, i64), usize> {
    let gens: Vec<i64> = (0..levels).map(|j| 2i64 << j).collect();
    let act = |j: usize, b: usize| -> Vec<usize> {
        m.coaction[b]
            .iter()
            .filter(|&&(p, _)| p == 1u64 << j)
            .map(|&(_, c)| c)
            .collect()
    };
    let mut out = BTreeMap::new();
    for t in 0..=t_bound {
        let mut prev_rank = 0;
        for s in 0..=s_max {
            let src = koszul_basis(m, &gens, s, t);
            let tgt = koszul_basis(m, &gens, s + 1, t);
            let index: HashMap<&Cell, usize> = tgt.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let rows: Vec<BTreeSet<usize>> = src
                .iter()
                .map(|(b, e)| {
                    let mut row = BTreeSet::new();
                    for j in 0..gens.len() {
                        for c in act(j, *b) {
                            let mut e2 = e.clone();
                            e2[j] += 1;
                            let i = index[&(c, e2)];
                            if !row.remove(&i) {
                                row.insert(i);
                            }
                        }
                    }
                    row
                })
                .collect();
            let r = rank_f2(rows);
            let dim = src.len() - r - prev_rank;
            if dim > 0 {
                out.insert((s, t), dim);
            }
            prev_rank = r;
        }
    }
    out
}

fn cobar_restricted(m: &Comodule, c: Coalgebra, t_bound: i64, s_max: u32) -> BTreeMap<(u32, i64), usize> {
    let ext = cobar_ext(m, c, t_bound, Some(s_max)).unwrap();
    ext.dims.into_iter().filter(|((s, _), _)| *s <= s_max).collect()
}

#[test]
fn trivial_module() {
    let m = Comodule::trivial();
    assert_eq!(cobar_restricted(&m, Coalgebra::Polynomial, 20, 6), koszul_ext(&m, 4, 20, 6));
}

#[test]
fn truncated_coalgebras() {
    let m = Comodule::trivial();
    for k in 1..=3 {
        assert_eq!(
            cobar_restricted(&m, Coalgebra::Truncated(k), 18, 6),
            koszul_ext(&m, k, 18, 6),
            "u^(2^{k})"
        );
    }
}

#[test]
fn mapping_cone_comodules() {
    for set in [vec![1u32], vec![1, 2], vec![2], vec![1, 3]] {
        let m = comodule_mi(&set.iter().copied().collect()).unwrap();
        assert_eq!(
            cobar_restricted(&m, Coalgebra::Polynomial, 12, 5),
            koszul_ext(&m, 3, 12, 5),
            "I = {set:?}"
        );
    }
}

#[test]
fn one_cell_kills_h0() {
    // With I = {1} the class h₀ at (1, 2) is hit from b₂.
    let m = comodule_mi(&[1].into_iter().collect()).unwrap();
    let ext = cobar_ext(&m, Coalgebra::Polynomial, 12, Some(3)).unwrap();
    assert_eq!(ext.dim(1, 2), 0);
    assert_eq!(ext.dim(0, 0), 1);
    assert_eq!(ext.dim(1, 4), 1);
}
