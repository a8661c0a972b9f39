//! Multi-indices, their summation domains, and the Weyl denominator
//! `Δ(x;p) = ∏_{i<j} x_j θ(x_i/x_j; p)`.

use std::fmt;
use std::ops::{Add, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ipow, Scalar};
use crate::theta::{theta_eval, EllipticContext, ScaledProduct, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zeros(r: usize) -> Self {
        Self(vec![0; r])
    }

    /// Unit vector `e_i`.
    pub fn unit(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// `|k| = Σ k_i`.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `e_2(k) = Σ_{i<j} k_i k_j`.
    pub fn e2(&self) -> i64 {
        let mut acc = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                acc += self.0[i] * self.0[j];
            }
        }
        acc
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&k| k >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Parses `"1,2,0"`.
    pub fn parse_csv(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Usage(format!("bad multi-index `{s}`: {e}")))?;
        if entries.is_empty() {
            return Err(Error::Usage("empty multi-index".into()));
        }
        Ok(Self(entries))
    }

    /// Entries with positions `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i, j);
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const R: usize> From<[i64; R]> for MultiIndex {
    fn from(v: [i64; R]) -> Self {
        Self(v.to_vec())
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `(|k|, e_2(k))`.
pub fn weights(k: &MultiIndex) -> (i64, i64) {
    (k.total(), k.e2())
}

/// `0 ≤ k ≤ n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct BoxIter {
    upper: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.upper[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(MultiIndex(current))
    }
}

pub fn iterate_box(n: &MultiIndex) -> BoxIter {
    let empty = n.dim() == 0 || !n.is_nonnegative();
    BoxIter {
        upper: n.0.clone(),
        next: if empty { None } else { Some(vec![0; n.dim()]) },
    }
}

/// `k ≥ 0` with `|k| ≤ cap` in lexicographic order.
#[derive(Debug, Clone)]
pub struct SimplexIter {
    cap: i64,
    next: Option<Vec<i64>>,
}

impl Iterator for SimplexIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ.iter().sum::<i64>() <= self.cap {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(MultiIndex(current))
    }
}

/// Simplex domain `|k| ≤ cap`, or `2|k| ≤ cap` when `half_cap` is set.
pub fn iterate_simplex(r: usize, cap: i64, half_cap: bool) -> SimplexIter {
    let effective = if half_cap { cap.div_euclid(2) } else { cap };
    SimplexIter {
        cap: effective,
        next: if r == 0 || effective < 0 { None } else { Some(vec![0; r]) },
    }
}

/// Summation domain of an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Box(MultiIndex),
    Simplex { dim: usize, cap: i64, half_cap: bool },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box(n) => n.dim(),
            Domain::Simplex { dim, .. } => *dim,
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = MultiIndex> + Send> {
        match self {
            Domain::Box(n) => Box::new(iterate_box(n)),
            Domain::Simplex { dim, cap, half_cap } => Box::new(iterate_simplex(*dim, *cap, *half_cap)),
        }
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Δ(x;p)`; the empty product for `r = 1`.
pub fn weyl_delta<T: Scalar>(x: &[Complex<T>], ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    let mut acc = ScaledProduct::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[j].norm() == T::zero() {
                return Err(Error::Domain("Weyl denominator with x_j = 0".into()));
            }
            acc.mul(x[j] * theta_eval(x[i] / x[j], ctx)?);
        }
    }
    acc.value()
}

/// `Δ(x q^{m k}; p)`, the Weyl denominator at the points `x_i q^{m k_i}`.
pub fn delta_shift<T: Scalar>(
    x: &[Complex<T>],
    q: Complex<T>,
    m: i64,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    if x.len() != k.dim() {
        return Err(Error::Domain(format!(
            "delta_shift: {} points but multi-index of length {}",
            x.len(),
            k.dim()
        )));
    }
    let shifted: Vec<Complex<T>> = x
        .iter()
        .zip(k.entries())
        .map(|(&xi, &ki)| xi * ipow(q, m * ki))
        .collect();
    weyl_delta(&shifted, ctx)
}

/// Multiplies `term` by `Δ(x base^k)/Δ(x)`, screening the denominator.
pub fn mul_delta_ratio<T: Scalar>(
    term: &mut Term<'_, T>,
    x: &[Complex<T>],
    base: Complex<T>,
    k: &MultiIndex,
) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let xi = x[i] * ipow(base, k.get(i));
            let xj = x[j] * ipow(base, k.get(j));
            term.mul_ratio(xj, x[j])?.theta_ratio(xi / xj, x[i] / x[j])?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn box_counts_and_order() {
        assert_eq!(iterate_box(&mi(&[2, 1])).count(), 6);
        assert_eq!(iterate_box(&mi(&[0, 0, 0])).collect::<Vec<_>>(), vec![mi(&[0, 0, 0])]);
        assert_eq!(
            iterate_box(&mi(&[1, 1])).collect::<Vec<_>>(),
            vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0]), mi(&[1, 1])]
        );
        let pts: Vec<_> = iterate_box(&mi(&[2, 0, 3])).collect();
        assert_eq!(pts.first(), Some(&mi(&[0, 0, 0])));
        assert_eq!(pts.last(), Some(&mi(&[2, 0, 3])));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn simplex_counts_and_order() {
        assert_eq!(iterate_simplex(2, 2, false).count(), 6);
        assert_eq!(
            iterate_simplex(1, 3, false).collect::<Vec<_>>(),
            (0..=3).map(|k| mi(&[k])).collect::<Vec<_>>()
        );
        assert_eq!(
            iterate_simplex(2, 3, true).collect::<Vec<_>>(),
            vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0])]
        );
        let pts: Vec<_> = iterate_simplex(3, 4, false).collect();
        assert_eq!(pts.len(), 35);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(iterate_simplex(3, 0, false).count(), 1);
    }

    #[test]
    fn weights_examples() {
        assert_eq!(weights(&mi(&[1, 2, 3])), (6, 11));
        assert_eq!(weights(&mi(&[5])), (5, 0));
        assert_eq!(weights(&mi(&[0, 0])), (0, 0));
    }

    fn ctx(p: C) -> EllipticContext<f64> {
        EllipticContext::new(p, C::new(0.75, 0.2)).unwrap()
    }

    #[test]
    fn weyl_delta_cases() {
        let c = ctx(C::new(0.2, 0.0));
        assert_eq!(weyl_delta(&[C::new(0.4, 0.1)], &c).unwrap(), C::new(1.0, 0.0));
        let x = [C::new(0.4, 0.0), C::new(0.9, 0.0)];
        let want = 0.9 * theta_eval(C::new(0.4 / 0.9, 0.0), &c).unwrap();
        assert!((weyl_delta(&x, &c).unwrap() - want).norm() < 1e-15);

        let c0 = ctx(C::new(0.0, 0.0));
        let x = [C::new(0.4, 0.2), C::new(-0.9, 0.1), C::new(1.3, -0.5)];
        let mut want = C::new(1.0, 0.0);
        for i in 0..3 {
            for j in i + 1..3 {
                want *= x[j] - x[i];
            }
        }
        assert!((weyl_delta(&x, &c0).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn delta_shift_cases() {
        let c = ctx(C::new(0.25, 0.1));
        let x = [C::new(0.4, 0.2), C::new(-0.9, 0.1)];
        let q = c.q();
        assert_eq!(
            delta_shift(&x, q, 3, &mi(&[0, 0]), &c).unwrap(),
            weyl_delta(&x, &c).unwrap()
        );
        assert_eq!(delta_shift(&x[..1], q, 2, &mi(&[4]), &c).unwrap(), C::new(1.0, 0.0));
        let shifted = [x[0] * ipow(q, 2), x[1]];
        assert_eq!(
            delta_shift(&x, q, 2, &mi(&[1, 0]), &c).unwrap(),
            weyl_delta(&shifted, &c).unwrap()
        );
        assert!(delta_shift(&x, q, 2, &mi(&[1]), &c).is_err());
    }

    #[test]
    fn delta_ratio_matches_two_evaluations() {
        let c = ctx(C::new(0.3, -0.2));
        let x = [C::new(0.4, 0.2), C::new(-0.9, 0.1), C::new(1.1, 0.6)];
        let k = mi(&[2, 0, 1]);
        let q2 = c.q() * c.q();
        let mut t = Term::new(&c);
        mul_delta_ratio(&mut t, &x, q2, &k).unwrap();
        let want = delta_shift(&x, c.q(), 2, &k, &c).unwrap() / weyl_delta(&x, &c).unwrap();
        assert!((t.value().unwrap() - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn parse_csv() {
        assert_eq!(MultiIndex::parse_csv("1, 2,0").unwrap(), mi(&[1, 2, 0]));
        assert!(MultiIndex::parse_csv("1,x").is_err());
    }
}
