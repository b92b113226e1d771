//! Quotient dimensions against brute-force linear algebra in each degree.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use common::*;
use dualsteenrod::milnor::{zeta, TruncationSpec};
use dualsteenrod::quotient::{build_quotient, QuotientLimits};

fn to_spoly(p: &dualsteenrod::polycore::Poly) -> SPoly {
    p.terms().iter().map(|m| m.exps().iter().map(|&e| e as u64).collect()).collect()
}

/// `dim_d A⟨k⟩*/(ζ_{m+1},…,ζ_{m+k})` by ranking `{monomial · ζ}` in each degree.
fn brute_force_dims(k: usize, m: u32, max_degree: i64) -> BTreeMap<i64, u64> {
    let z = zetas(m + k as u32, k);
    let gens: Vec<(i64, &SPoly)> = (1..=k)
        .map(|i| {
            let g = &z[m as usize + i];
            (xi_degree(g.iter().next().unwrap()), g)
        })
        .collect();
    let mut out = BTreeMap::new();
    for d in 0..=max_degree {
        let monos = monomials_of_degree(k, d);
        let index: HashMap<&Vec<u64>, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut rows = Vec::new();
        for &(gd, g) in &gens {
            if gd > d {
                continue;
            }
            for mult in monomials_of_degree(k, d - gd) {
                let single: SPoly = [mult].into_iter().collect();
                let prod = smul(&single, g);
                rows.push(prod.iter().map(|e| index[e]).collect::<BTreeSet<usize>>());
            }
        }
        let dim = monos.len() - rank_f2(rows);
        if dim > 0 {
            out.insert(d, dim as u64);
        }
    }
    out
}

/// `[n choose k]_q` at `q = 2` from the product formula.
fn gaussian(n: u32, k: u32) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

#[test]
fn zeta_matches_recursion_oracle() {
    for k in 1..=3usize {
        let z = zetas(8, k);
        for n in 1..=8u32 {
            let lib = zeta(n, TruncationSpec::Trunc(k as u32)).unwrap();
            assert_eq!(to_spoly(&lib), z[n as usize], "zeta{n} in A<{k}>");
        }
    }
}

#[test]
fn dimensions_match_brute_force() {
    for (k, m) in [(1usize, 1u32), (1, 2), (2, 2), (2, 3)] {
        let qr = build_quotient(k as u32, m, &QuotientLimits::default()).unwrap();
        let top = 2 * ((1i64 << m) - 1) * ((1i64 << k) - 1);
        let oracle = brute_force_dims(k, m, top + 6);
        assert_eq!(qr.dims(), oracle, "({k},{m})");
        assert_eq!(oracle.keys().next_back().copied(), Some(top));
        assert_eq!(oracle[&top], 1);
        let total: u64 = oracle.values().sum();
        assert_eq!(total as u128, gaussian(m + k as u32, k as u32));
    }
}

#[test]
fn gaussian_values() {
    assert_eq!(gaussian(4, 2), 35);
    assert_eq!(gaussian(6, 3), 1395);
    let lib = dualsteenrod::quotient::gaussian_binomial_q2(6, 3).unwrap();
    assert_eq!(lib.to_string(), "1395");
}

#[test]
fn poincare_is_product_of_cyclotomic_ratios() {
    // Π (1 − t^{2^{m+i}−1}) / Π (1 − t^{2^i−1}), expanded by long division in i128.
    for (k, m) in [(1u32, 1u32), (2, 2), (2, 3), (3, 3)] {
        let qr = build_quotient(k, m, &QuotientLimits::default()).unwrap();
        let top = qr.top_degree() as usize;
        let mut num = vec![0i128; top + 1];
        num[0] = 1;
        for i in 1..=k {
            let d = (1usize << (m + i)) - 1;
            for j in (0..=top).rev() {
                if j >= d {
                    num[j] -= num[j - d];
                }
            }
        }
        for i in 1..=k {
            let d = (1usize << i) - 1;
            for j in d..=top {
                num[j] += num[j - d];
            }
        }
        let lib: Vec<i128> = qr.poincare_series().coeffs().iter().map(|&c| c as i128).collect();
        assert_eq!(lib, num, "({k},{m})");
    }
}
