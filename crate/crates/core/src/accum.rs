//! Compensated accumulation of complex terms.

use num_complex::Complex;

use crate::scalar::Scalar;

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Neumaier-style running sum of complex values that also tracks the sum of
/// term magnitudes, so callers can report cancellation-aware residuals.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: Complex<T>,
    carry: Complex<T>,
    magnitude: T,
    terms: usize,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            carry: Complex::new(T::zero(), T::zero()),
            magnitude: T::zero(),
            terms: 0,
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        let (re, ce) = two_sum(self.sum.re, z.re);
        let (im, ci) = two_sum(self.sum.im, z.im);
        self.sum = Complex::new(re, im);
        self.carry = self.carry + Complex::new(ce, ci);
        self.magnitude = self.magnitude + z.norm();
        self.terms += 1;
    }

    /// Merges a partial sum computed on another block of the same domain.
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        // `add` counted the partial as one term of magnitude |sum|; undo that.
        self.magnitude = self.magnitude - other.sum.norm() + other.magnitude;
        self.terms = self.terms - 1 + other.terms;
        self.carry = self.carry + other.carry;
    }

    pub fn value(&self) -> Complex<T> {
        self.sum + self.carry
    }

    /// Sum of `|term|` over everything added so far.
    pub fn magnitude(&self) -> T {
        self.magnitude
    }

    pub fn len(&self) -> usize {
        self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms == 0
    }
}

impl<T: Scalar> FromIterator<Complex<T>> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// A raw residual together with the scale it should be judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual<T> {
    pub raw: Complex<T>,
    pub scale: T,
}

impl<T: Scalar> Residual<T> {
    pub fn from_sum(sum: &CompensatedSum<T>) -> Self {
        Self {
            raw: sum.value(),
            scale: sum.magnitude(),
        }
    }

    /// `|raw| / scale`; an exactly vanishing residual is 0 even at zero scale.
    pub fn normalized(&self) -> T {
        let r = self.raw.norm();
        if r == T::zero() {
            T::zero()
        } else {
            r / self.scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let big = Complex::new(1e16_f64, -1e16);
        let terms = [big, Complex::new(1.0, 1.0), -big, Complex::new(1.0, 1.0)];
        let acc: CompensatedSum<f64> = terms.iter().copied().collect();
        assert_eq!(acc.value(), Complex::new(2.0, 2.0));
        let naive: Complex<f64> = terms.iter().sum();
        assert_ne!(naive, Complex::new(2.0, 2.0));
    }

    #[test]
    fn merge_matches_sequential() {
        let zs: Vec<Complex<f64>> = (0..20)
            .map(|i| Complex::new((i as f64).sin() * 1e3, (i as f64).cos()))
            .collect();
        let whole: CompensatedSum<f64> = zs.iter().copied().collect();
        let mut left: CompensatedSum<f64> = zs[..7].iter().copied().collect();
        let right: CompensatedSum<f64> = zs[7..].iter().copied().collect();
        left.merge(&right);
        assert!((left.value() - whole.value()).norm() < 1e-12);
        assert!((left.magnitude() - whole.magnitude()).abs() < 1e-9);
        assert_eq!(left.len(), 20);
    }
}
