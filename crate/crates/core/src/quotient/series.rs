use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer polynomial in `t`, coefficient `i` at `t^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSeries {
    coeffs: Vec<i64>,
}

impl IntSeries {
    pub fn new(mut coeffs: Vec<i64>) -> IntSeries {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntSeries { coeffs }
    }

    pub fn one() -> IntSeries {
        IntSeries::new(vec![1])
    }

    /// `1 − t^d`.
    pub fn one_minus_power(d: usize) -> IntSeries {
        let mut c = vec![0; d + 1];
        c[0] += 1;
        c[d] -= 1;
        IntSeries::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn mul(&self, other: &IntSeries) -> Result<IntSeries> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(IntSeries::default());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .ok_or_else(|| Error::ResourceLimit("series coefficient overflow".into()))?;
            }
        }
        Ok(IntSeries::new(out))
    }

    /// Exact division by a polynomial with constant term ±1.
    pub fn div_exact(&self, divisor: &IntSeries) -> Result<IntSeries> {
        let lead = divisor.coeff(0);
        if lead != 1 && lead != -1 {
            return Err(Error::InvalidArgument("divisor must have unit constant term".into()));
        }
        let (Some(n), Some(d)) = (self.degree(), divisor.degree()) else {
            return if self.coeffs.is_empty() {
                Ok(IntSeries::default())
            } else {
                Err(Error::InexactDivision)
            };
        };
        if n < d {
            return Err(Error::InexactDivision);
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![0i64; n - d + 1];
        for i in 0..=n - d {
            let c = rem[i] * lead;
            q[i] = c;
            if c != 0 {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= c * b;
                }
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::InexactDivision);
        }
        Ok(IntSeries::new(q))
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `∏_{i=1}^{k} (1 − t^{2^{m+i}−1}) / ∏_{i=1}^{k} (1 − t^{2^i−1})`, divided exactly.
pub fn closed_form_poincare(k: u32, m: u32) -> Result<IntSeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if m + k > 40 {
        return Err(Error::ResourceLimit(format!("degree 2^{} is too large", m + k)));
    }
    let mut num = IntSeries::one();
    for i in 1..=k {
        num = num.mul(&IntSeries::one_minus_power((1usize << (m + i)) - 1))?;
    }
    for i in 1..=k {
        num = num.div_exact(&IntSeries::one_minus_power((1usize << i) - 1))?;
    }
    Ok(num)
}

/// `∏_{i=1}^{k} (2^{n−k+i} − 1)/(2^i − 1)`.
pub fn gaussian_binomial_q2(n: u32, k: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidArgument(format!("need k <= n, got ({n}, {k})")));
    }
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 1..=k {
        num *= (&one << (n - k + i)) - &one;
        den *= (&one << i) - &one;
    }
    Ok(num / den)
}

/// `δ(k, m, n) = 2^{m+k+n+1} − 2^{m+1} − 2^{k+1} + 2`.
pub fn delta(k: u32, m: u32, n: u32) -> Result<i64> {
    if m + k + n + 1 > 62 {
        return Err(Error::InvalidArgument("delta overflows 64 bits".into()));
    }
    Ok((1i64 << (m + k + n + 1)) - (1i64 << (m + 1)) - (1i64 << (k + 1)) + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closed_forms() {
        assert_eq!(closed_form_poincare(1, 1).unwrap().coeffs(), &[1, 1, 1]);
        let p = closed_form_poincare(2, 2).unwrap();
        assert_eq!(p.degree(), Some(18));
        assert_eq!(p.eval_at_one(), 35);
        assert!(p.is_palindromic());
        assert_eq!(closed_form_poincare(2, 3).unwrap().degree(), Some(42));
        assert_eq!(closed_form_poincare(3, 3).unwrap().eval_at_one(), 1395);
    }

    #[test]
    fn inexact_division_detected() {
        let p = IntSeries::new(vec![1, 0, 1]);
        assert_eq!(p.div_exact(&IntSeries::one_minus_power(1)), Err(Error::InexactDivision));
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial_q2(2, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(gaussian_binomial_q2(4, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(gaussian_binomial_q2(6, 3).unwrap(), BigUint::from(1395u32));
        assert_eq!(gaussian_binomial_q2(9, 0).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(2, 2, 0).unwrap(), 18);
        assert_eq!(delta(3, 3, 0).unwrap(), 98);
        assert_eq!(delta(1, 1, 1).unwrap(), 10);
        for k in 1..5 {
            for m in 0..5 {
                assert_eq!(delta(k, m, 0).unwrap(), 2 * ((1 << m) - 1) * ((1 << k) - 1));
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(IntSeries::new(vec![1, 1, 0, 2]).to_string(), "1 + t + 2t^3");
        assert_eq!(IntSeries::one_minus_power(3).to_string(), "1 - t^3");
    }
}
