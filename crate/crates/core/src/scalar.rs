//! Real scalar abstraction shared by every evaluator.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the evaluators are generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Magnitude window outside of which scaled products renormalize.
    const RESCALE_LO: f64;
    const RESCALE_HI: f64;

    /// Converts an `f64` literal; every literal used by this crate is representable.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const RESCALE_LO: f64 = 1e-15;
    const RESCALE_HI: f64 = 1e15;
}

impl Scalar for f64 {
    const RESCALE_LO: f64 = 1e-150;
    const RESCALE_HI: f64 = 1e150;
}

/// `z^n` for any integer `n` by binary powering.
pub fn ipow<T: Scalar>(z: Complex<T>, n: i64) -> Complex<T> {
    if n == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mut base = if n < 0 { z.inv() } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

#[inline]
pub fn is_finite<T: Scalar>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub fn cplx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn one<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff<T: Scalar>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = a.norm().max(b.norm());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).norm() / scale
    }
}
