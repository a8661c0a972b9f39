//! The one-dimensional rational inversion pair of Krattenthaler,
//! generic over any field so it can be checked in exact arithmetic.
//!
//! `f_{nk} = ∏_{j=k}^{n-1}(a_j - c_k) / ∏_{j=k+1}^{n}(c_j - c_k)` and
//! `g_{kl} = (a_l - c_l) ∏_{j=l+1}^{k}(a_j - c_k) / ((a_k - c_k) ∏_{j=l}^{k-1}(c_j - c_k))`.
//! Sequences are indexed from 0; entries above the diagonal are zero.

use num_traits::Num;

use crate::error::{Error, Result};

fn check_len<F>(a: &[F], c: &[F], n: usize) -> Result<()> {
    if a.len() <= n || c.len() <= n {
        return Err(Error::Domain(format!(
            "sequences of length {}/{} cannot index row {n}",
            a.len(),
            c.len()
        )));
    }
    Ok(())
}

fn checked_div<F: Num + Clone>(num: F, den: F) -> Result<F> {
    if den.is_zero() {
        return Err(Error::Degenerate("vanishing denominator in rational inversion".into()));
    }
    Ok(num / den)
}

pub fn krattenthaler_f<F: Num + Clone>(a: &[F], c: &[F], n: usize, k: usize) -> Result<F> {
    check_len(a, c, n)?;
    if k > n {
        return Ok(F::zero());
    }
    let ck = &c[k];
    let num = (k..n).fold(F::one(), |acc, j| acc * (a[j].clone() - ck.clone()));
    let den = (k + 1..=n).fold(F::one(), |acc, j| acc * (c[j].clone() - ck.clone()));
    checked_div(num, den)
}

pub fn krattenthaler_g<F: Num + Clone>(a: &[F], c: &[F], k: usize, l: usize) -> Result<F> {
    check_len(a, c, k)?;
    if l > k {
        return Ok(F::zero());
    }
    let ck = &c[k];
    let num = (l + 1..=k).fold(a[l].clone() - c[l].clone(), |acc, j| acc * (a[j].clone() - ck.clone()));
    let den = (l..k).fold(a[k].clone() - ck.clone(), |acc, j| acc * (c[j].clone() - ck.clone()));
    checked_div(num, den)
}

/// `Σ_{l≤k≤n} f_{nk} g_{kl} - δ_{nl}`.
pub fn krattenthaler_delta<F: Num + Clone>(a: &[F], c: &[F], n: usize, l: usize) -> Result<F> {
    let mut acc = if n == l { F::zero() - F::one() } else { F::zero() };
    for k in l..=n {
        acc = acc + krattenthaler_f(a, c, n, k)? * krattenthaler_g(a, c, k, l)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_mutual_inversion() {
        let a = vec![q(3, 7), q(-2, 5), q(11, 3), q(1, 9), q(-8, 13)];
        let c = vec![q(5, 2), q(-1, 4), q(7, 6), q(13, 5), q(2, 11)];
        for n in 0..5 {
            for l in 0..=n {
                assert_eq!(krattenthaler_delta(&a, &c, n, l).unwrap(), q(0, 1), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn diagonal_and_upper() {
        let a = vec![2.0, 3.0];
        let c = vec![5.0, 7.0];
        assert_eq!(krattenthaler_f(&a, &c, 1, 1).unwrap(), 1.0);
        assert_eq!(krattenthaler_g(&a, &c, 1, 1).unwrap(), 1.0);
        assert_eq!(krattenthaler_f(&a, &c, 0, 1).unwrap(), 0.0);
        // f_{10} = (a_0 - c_0)/(c_1 - c_0)
        assert_eq!(krattenthaler_f(&a, &c, 1, 0).unwrap(), -3.0 / 2.0);
    }

    #[test]
    fn degenerate_denominator() {
        let a = vec![2.0, 3.0];
        let c = vec![5.0, 5.0];
        assert!(matches!(krattenthaler_f(&a, &c, 1, 0), Err(Error::Degenerate(_))));
    }
}
