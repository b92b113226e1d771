#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Rank over F₂ of rows given as sets of column indices.
pub fn rank_f2(rows: Vec<BTreeSet<usize>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut rank = 0;
    for mut row in rows {
        while let Some(&lead) = row.iter().next_back() {
            match pivots.get(&lead) {
                Some(p) => {
                    row = row.symmetric_difference(p).copied().collect();
                }
                None => {
                    pivots.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Sparse polynomial over F₂ in `k` variables: set of exponent vectors.
pub type SPoly = BTreeSet<Vec<u64>>;

pub fn smul(a: &SPoly, b: &SPoly) -> SPoly {
    let mut out = SPoly::new();
    for x in a {
        for y in b {
            let m: Vec<u64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            if !out.remove(&m) {
                out.insert(m);
            }
        }
    }
    out
}

pub fn sadd(a: &SPoly, b: &SPoly) -> SPoly {
    a.symmetric_difference(b).cloned().collect()
}

/// `ζ₁, …, ζ_n` in `F₂[ξ₁, …, ξ_k]` with `ξ_i = 0` for `i > k`, from
/// `ζ_n = Σ_{i ≥ 1} ξ_i^{2^{n−i}} ζ_{n−i}`.
pub fn zetas(n: u32, k: usize) -> Vec<SPoly> {
    let one: SPoly = [vec![0; k]].into_iter().collect();
    let mut z = vec![one];
    for m in 1..=n as usize {
        let mut acc = SPoly::new();
        for i in 1..=m.min(k) {
            let mut e = vec![0; k];
            e[i - 1] = 1u64 << (m - i);
            let term: SPoly = [e].into_iter().collect();
            acc = sadd(&acc, &smul(&term, &z[m - i]));
        }
        z.push(acc);
    }
    z
}

/// Degree of `ξ₁^{a₁}⋯ξ_k^{a_k}`.
pub fn xi_degree(e: &[u64]) -> i64 {
    e.iter()
        .enumerate()
        .map(|(i, &a)| a as i64 * ((1i64 << (i + 1)) - 1))
        .sum()
}

/// Exponent vectors of every monomial in `ξ₁..ξ_k` of degree exactly `d`.
pub fn monomials_of_degree(k: usize, d: i64) -> Vec<Vec<u64>> {
    fn go(i: usize, k: usize, left: i64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = (1i64 << (i + 1)) - 1;
        let mut a = 0;
        while a * w <= left {
            cur.push(a as u64);
            go(i + 1, k, left - a * w, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    go(0, k, d, &mut Vec::new(), &mut out);
    out
}

/// `dim_d F₂[ξ₁..ξ_k]/(gens)` for `d ≤ max_degree`, by ranking `{monomial · g}`.
pub fn quotient_dims_by_rank(k: usize, gens: &[SPoly], max_degree: i64) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for d in 0..=max_degree {
        let monos = monomials_of_degree(k, d);
        let index: std::collections::HashMap<&Vec<u64>, usize> =
            monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut rows = Vec::new();
        for g in gens {
            let gd = xi_degree(g.iter().next().unwrap());
            if gd > d {
                continue;
            }
            for mult in monomials_of_degree(k, d - gd) {
                let single: SPoly = [mult].into_iter().collect();
                rows.push(smul(&single, g).iter().map(|e| index[e]).collect::<BTreeSet<usize>>());
            }
        }
        let dim = monos.len() - rank_f2(rows);
        if dim > 0 {
            out.insert(d, dim as u64);
        }
    }
    out
}

pub fn mono(e: &[u64]) -> SPoly {
    [e.to_vec()].into_iter().collect()
}
