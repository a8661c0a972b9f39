//! Theta functions `θ(x;p) = ∏_{j≥0} (1 - p^j x)(1 - p^{j+1}/x)` and the
//! elliptic shifted factorials built from them.
//!
//! Every evaluator takes an [`EllipticContext`] that fixes the nome `p`, the
//! base `q`, the truncation threshold of the infinite product and the
//! threshold below which a theta value sitting in a denominator is treated
//! as a vanishing (degenerate) factor.

use num_complex::Complex;

use crate::accum::{CompensatedSum, Residual};
use crate::error::{Error, Result};
use crate::scalar::{ipow, is_finite, one, Scalar};

pub const DEFAULT_TRUNC_EPS: f64 = 1e-17;
pub const DEFAULT_ZERO_GUARD: f64 = 1e-13;

/// Extra product factors taken past the geometric tail bound.
const GUARD_FACTORS: usize = 4;

/// The constructor rejects `q` with `|q^k - p^m| < zero_guard` for
/// `1 ≤ k ≤ SCREEN_Q_POWERS` and `|m| ≤ SCREEN_P_POWERS`.
pub const SCREEN_Q_POWERS: i64 = 12;
pub const SCREEN_P_POWERS: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductMode {
    #[default]
    Plain,
    /// Carries a first-order error term through the theta product.
    Compensated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticContext<T> {
    p: Complex<T>,
    q: Complex<T>,
    trunc_eps: T,
    zero_guard: T,
    mode: ProductMode,
}

impl<T: Scalar> EllipticContext<T> {
    pub fn new(p: Complex<T>, q: Complex<T>) -> Result<Self> {
        Self::with_tolerances(p, q, T::lit(DEFAULT_TRUNC_EPS), T::lit(DEFAULT_ZERO_GUARD))
    }

    pub fn with_tolerances(p: Complex<T>, q: Complex<T>, trunc_eps: T, zero_guard: T) -> Result<Self> {
        if !is_finite(p) || p.norm() >= T::one() {
            return Err(Error::InvalidContext(format!("nome must satisfy |p| < 1, got {p}")));
        }
        if !is_finite(q) || q.norm() == T::zero() {
            return Err(Error::InvalidContext(format!("base q must be finite and nonzero, got {q}")));
        }
        if !(trunc_eps > T::zero()) || !(zero_guard > T::zero()) {
            return Err(Error::InvalidContext("trunc_eps and zero_guard must be positive".into()));
        }
        let ctx = Self {
            p,
            q,
            trunc_eps,
            zero_guard,
            mode: ProductMode::Plain,
        };
        ctx.screen_base()?;
        Ok(ctx)
    }

    /// Genericity screen for `q^k ∉ p^Z`.
    fn screen_base(&self) -> Result<()> {
        let p_zero = self.p.norm() == T::zero();
        for k in 1..=SCREEN_Q_POWERS {
            let qk = ipow(self.q, k);
            for m in -SCREEN_P_POWERS..=SCREEN_P_POWERS {
                if p_zero && m < 0 {
                    continue;
                }
                let pm = if p_zero && m > 0 {
                    Complex::new(T::zero(), T::zero())
                } else {
                    ipow(self.p, m)
                };
                if (qk - pm).norm() < self.zero_guard {
                    return Err(Error::InvalidContext(format!(
                        "q^{k} lies within {} of p^{m}",
                        self.zero_guard
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: ProductMode) -> Self {
        self.mode = mode;
        self
    }

    /// Same nome and tolerances with a different base; re-runs the screen.
    pub fn with_base(&self, q: Complex<T>) -> Result<Self> {
        Self::with_tolerances(self.p, q, self.trunc_eps, self.zero_guard).map(|c| c.with_mode(self.mode))
    }

    /// Same base and tolerances with a different nome; re-runs the screen.
    pub fn with_nome(&self, p: Complex<T>) -> Result<Self> {
        Self::with_tolerances(p, self.q, self.trunc_eps, self.zero_guard).map(|c| c.with_mode(self.mode))
    }

    pub fn p(&self) -> Complex<T> {
        self.p
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    pub fn trunc_eps(&self) -> T {
        self.trunc_eps
    }

    pub fn zero_guard(&self) -> T {
        self.zero_guard
    }

    pub fn mode(&self) -> ProductMode {
        self.mode
    }

    pub fn is_trigonometric(&self) -> bool {
        self.p.norm() == T::zero()
    }

    /// `q^n`.
    pub fn q_pow(&self, n: i64) -> Complex<T> {
        ipow(self.q, n)
    }

    /// Number of factor pairs taken for `θ(x;p)`.
    pub fn truncation_len(&self, x: Complex<T>) -> usize {
        let ap = self.p.norm();
        if ap == T::zero() {
            return 1;
        }
        let ax = x.norm();
        let mut bound = ax.max(ax.recip());
        let mut j = 0usize;
        while bound >= self.trunc_eps {
            bound = bound * ap;
            j += 1;
        }
        j + GUARD_FACTORS
    }
}

/// Degree and norm of a theta function: `f(pz) = (-1)^k t z^{-k} f(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaProfile<T> {
    degree: u32,
    norm: Complex<T>,
}

impl<T: Scalar> ThetaProfile<T> {
    pub fn new(degree: u32, norm: Complex<T>) -> Result<Self> {
        if norm.norm() == T::zero() || !is_finite(norm) {
            return Err(Error::Domain("theta norm must be finite and nonzero".into()));
        }
        Ok(Self { degree, norm })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn norm(&self) -> Complex<T> {
        self.norm
    }
}

/// Complex product with a separate power-of-two exponent so long chains of
/// factors cannot overflow or underflow before the final recombination.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledProduct<T> {
    mantissa: Complex<T>,
    exp2: i32,
}

impl<T: Scalar> ScaledProduct<T> {
    pub(crate) fn new() -> Self {
        Self {
            mantissa: one(),
            exp2: 0,
        }
    }

    #[inline]
    pub(crate) fn mul(&mut self, z: Complex<T>) {
        self.mantissa = self.mantissa * z;
        self.renormalize();
    }

    #[inline]
    fn renormalize(&mut self) {
        let a = self.mantissa.norm();
        if a == T::zero() || !a.is_finite() {
            return;
        }
        if a > T::lit(T::RESCALE_HI) || a < T::lit(T::RESCALE_LO) {
            let k = a.log2().floor();
            let shift = k.to_i32().unwrap_or(0);
            self.mantissa = self.mantissa * pow2::<T>(-shift);
            self.exp2 += shift;
        }
    }

    /// Divides by another scaled product without materializing it.
    pub(crate) fn div_scaled(&mut self, other: &Self) -> Result<()> {
        if !is_finite(other.mantissa) || other.mantissa.norm() == T::zero() {
            return Err(Error::Overflow("denominator product is zero or non-finite".into()));
        }
        self.mantissa = self.mantissa / other.mantissa;
        self.exp2 -= other.exp2;
        self.renormalize();
        Ok(())
    }

    pub(crate) fn value(&self) -> Result<Complex<T>> {
        if !is_finite(self.mantissa) {
            return Err(Error::Overflow("non-finite factor in product".into()));
        }
        let half = self.exp2 / 2;
        let z = self.mantissa * pow2::<T>(half) * pow2::<T>(self.exp2 - half);
        // A nonzero product flushed to zero is as lost as one that overflowed.
        if !is_finite(z) || (z.norm() == T::zero() && self.mantissa.norm() != T::zero()) {
            return Err(Error::Overflow(format!(
                "product magnitude 2^{} out of range; rescale inputs",
                self.exp2
            )));
        }
        Ok(z)
    }
}

fn pow2<T: Scalar>(e: i32) -> T {
    T::lit(2.0).powi(e)
}

#[inline]
fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Product `hi + lo` where `lo` collects the rounding error of each step.
struct CompensatedProduct<T> {
    hi: Complex<T>,
    lo: Complex<T>,
}

impl<T: Scalar> CompensatedProduct<T> {
    fn new() -> Self {
        Self {
            hi: one(),
            lo: Complex::new(T::zero(), T::zero()),
        }
    }

    fn mul(&mut self, f: Complex<T>) {
        let a = self.hi;
        let (p1, e1) = two_prod(a.re, f.re);
        let (p2, e2) = two_prod(a.im, f.im);
        let (re, e3) = two_sum(p1, -p2);
        let (p3, e4) = two_prod(a.re, f.im);
        let (p4, e5) = two_prod(a.im, f.re);
        let (im, e6) = two_sum(p3, p4);
        self.hi = Complex::new(re, im);
        self.lo = self.lo * f + Complex::new(e1 - e2 + e3, e4 + e5 + e6);
        let mag = self.hi.norm();
        if mag > T::lit(T::RESCALE_HI) {
            // Compensated mode is for accuracy at moderate magnitudes only.
            self.hi = self.hi + self.lo;
            self.lo = Complex::new(T::zero(), T::zero());
        }
    }

    fn value(&self) -> Complex<T> {
        self.hi + self.lo
    }
}

/// `θ(x;p)`, truncated once the geometric tail drops below `trunc_eps`.
pub fn theta_eval<T: Scalar>(x: Complex<T>, ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    if x.norm() == T::zero() {
        return Err(Error::Domain("theta_eval at x = 0".into()));
    }
    if !is_finite(x) {
        return Err(Error::Overflow(format!("theta_eval argument {x} is not finite")));
    }
    if ctx.is_trigonometric() {
        return Ok(one::<T>() - x);
    }
    let len = ctx.truncation_len(x);
    let p = ctx.p();
    let xinv = x.inv();
    match ctx.mode() {
        ProductMode::Plain => {
            let mut acc = ScaledProduct::new();
            let mut pj = one::<T>();
            for _ in 0..len {
                let left = one::<T>() - pj * x;
                pj = pj * p;
                acc.mul(left * (one::<T>() - pj * xinv));
            }
            acc.value()
        }
        ProductMode::Compensated => {
            let mut acc = CompensatedProduct::new();
            let mut pj = one::<T>();
            for _ in 0..len {
                acc.mul(one::<T>() - pj * x);
                pj = pj * p;
                acc.mul(one::<T>() - pj * xinv);
            }
            let z = acc.value();
            if is_finite(z) {
                Ok(z)
            } else {
                Err(Error::Overflow(format!("theta product at {x} overflowed")))
            }
        }
    }
}

/// `θ(x_1,…,x_n;p)`, or `∏ θ(x_i y; p) θ(x_i/y; p)` when `y_pm` is given.
pub fn theta_product<T: Scalar>(
    xs: &[Complex<T>],
    y_pm: Option<Complex<T>>,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let mut acc = ScaledProduct::new();
    match y_pm {
        None => {
            for &x in xs {
                acc.mul(theta_eval(x, ctx)?);
            }
        }
        Some(y) => {
            if y.norm() == T::zero() {
                return Err(Error::Domain("theta_product with y = 0".into()));
            }
            for &x in xs {
                acc.mul(theta_eval(x * y, ctx)?);
                acc.mul(theta_eval(x / y, ctx)?);
            }
        }
    }
    acc.value()
}

/// Elliptic shifted factorial `(a; base, p)_k` for any integer `k`, with
/// `(a; base, p)_{-n} = 1 / (a base^{-n}; base, p)_n`.
pub fn pochhammer_base<T: Scalar>(
    a: Complex<T>,
    base: Complex<T>,
    k: i64,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let mut t = Term::new(ctx);
    t.poch(a, base, k)?;
    t.value()
}

/// `(a; q, p)_k` in the context base.
pub fn elliptic_pochhammer<T: Scalar>(a: Complex<T>, k: i64, ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    pochhammer_base(a, ctx.q(), k, ctx)
}

/// `(a_1, …, a_m; q, p)_k`.
pub fn pochhammer_multi<T: Scalar>(as_: &[Complex<T>], k: i64, ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    let mut t = Term::new(ctx);
    for &a in as_ {
        t.poch(a, ctx.q(), k)?;
    }
    t.value()
}

/// Accumulates a product of theta factors, shifted factorials and scalars,
/// screening every factor that lands in a denominator.
#[derive(Debug, Clone)]
pub struct Term<'c, T> {
    ctx: &'c EllipticContext<T>,
    acc: ScaledProduct<T>,
}

impl<'c, T: Scalar> Term<'c, T> {
    pub fn new(ctx: &'c EllipticContext<T>) -> Self {
        Self {
            ctx,
            acc: ScaledProduct::new(),
        }
    }

    pub fn ctx(&self) -> &'c EllipticContext<T> {
        self.ctx
    }

    pub fn mul(&mut self, z: Complex<T>) -> &mut Self {
        self.acc.mul(z);
        self
    }

    pub fn div(&mut self, z: Complex<T>) -> Result<&mut Self> {
        if z.norm() == T::zero() {
            return Err(Error::Degenerate("division by an exactly zero scalar".into()));
        }
        self.acc.mul(z.inv());
        Ok(self)
    }

    pub fn theta(&mut self, x: Complex<T>) -> Result<&mut Self> {
        let v = theta_eval(x, self.ctx)?;
        self.acc.mul(v);
        Ok(self)
    }

    pub fn div_theta(&mut self, x: Complex<T>) -> Result<&mut Self> {
        let v = self.guarded_theta(x)?;
        self.acc.mul(v.inv());
        Ok(self)
    }

    /// Multiplies by `θ(z)/θ(w)`; equal arguments leave the product untouched
    /// once `θ(w)` passes the screen.
    pub fn theta_ratio(&mut self, z: Complex<T>, w: Complex<T>) -> Result<&mut Self> {
        if z == w {
            self.guarded_theta(w)?;
            return Ok(self);
        }
        self.theta(z)?.div_theta(w)
    }

    /// Multiplies by `z/w`, exactly 1 when `z == w`.
    pub fn mul_ratio(&mut self, z: Complex<T>, w: Complex<T>) -> Result<&mut Self> {
        if z == w {
            return Ok(self);
        }
        self.mul(z).div(w)
    }

    fn guarded_theta(&self, x: Complex<T>) -> Result<Complex<T>> {
        let v = theta_eval(x, self.ctx)?;
        if v.norm() < self.ctx.zero_guard() {
            return Err(Error::Degenerate(format!(
                "denominator theta({x}) has magnitude {:e} below guard",
                v.norm()
            )));
        }
        Ok(v)
    }

    /// Multiplies by `(a; base, p)_k`.
    pub fn poch(&mut self, a: Complex<T>, base: Complex<T>, k: i64) -> Result<&mut Self> {
        if a.norm() == T::zero() {
            return Err(Error::Domain("shifted factorial with a = 0".into()));
        }
        if k >= 0 {
            for j in 0..k {
                self.theta(a * ipow(base, j))?;
            }
        } else {
            let mut den = ScaledProduct::new();
            for j in 0..-k {
                den.mul(self.guarded_theta(a * ipow(base, k + j))?);
            }
            self.acc.div_scaled(&den)?;
        }
        Ok(self)
    }

    /// Divides by `(a; base, p)_k`.
    pub fn div_poch(&mut self, a: Complex<T>, base: Complex<T>, k: i64) -> Result<&mut Self> {
        if a.norm() == T::zero() {
            return Err(Error::Domain("shifted factorial with a = 0".into()));
        }
        if k >= 0 {
            let mut den = ScaledProduct::new();
            for j in 0..k {
                den.mul(self.guarded_theta(a * ipow(base, j))?);
            }
            self.acc.div_scaled(&den)?;
        } else {
            for j in 0..-k {
                self.theta(a * ipow(base, k + j))?;
            }
        }
        Ok(self)
    }

    pub fn mul_term(&mut self, other: &Term<'_, T>) -> &mut Self {
        self.acc.mantissa = self.acc.mantissa * other.acc.mantissa;
        self.acc.exp2 += other.acc.exp2;
        self.acc.renormalize();
        self
    }

    pub fn div_term(&mut self, other: &Term<'_, T>) -> Result<&mut Self> {
        self.acc.div_scaled(&other.acc)?;
        Ok(self)
    }

    pub fn value(&self) -> Result<Complex<T>> {
        self.acc.value()
    }
}

/// Raw value and term magnitudes of a sum that vanishes identically.
#[derive(Debug, Clone)]
pub struct VanishingSum<T> {
    pub terms: Vec<Complex<T>>,
    pub residual: Residual<T>,
}

impl<T: Scalar> VanishingSum<T> {
    pub(crate) fn from_terms(terms: Vec<Complex<T>>) -> Self {
        let acc: CompensatedSum<T> = terms.iter().copied().collect();
        Self {
            residual: Residual::from_sum(&acc),
            terms,
        }
    }

    pub fn value(&self) -> Complex<T> {
        self.residual.raw
    }

    pub fn normalized(&self) -> T {
        self.residual.normalized()
    }
}

/// Gustafson's vanishing sum over `k = as_.len()` terms with `k - 2` extra
/// parameters `bs`.
///
/// With `lambda = None` this is
/// `Σ_l a_l ∏_j θ(a_l b_j^±) / ∏_{j≠l} θ(a_l a_j^±)`; with `Some(λ)` it is the
/// rescaled form `Σ_l ∏_j θ(b_j a_l, b_j λ/a_l) / (a_l ∏_{j≠l} θ(a_j a_l/λ, a_j/a_l))`.
pub fn gustafson_sum<T: Scalar>(
    as_: &[Complex<T>],
    bs: &[Complex<T>],
    lambda: Option<Complex<T>>,
    ctx: &EllipticContext<T>,
) -> Result<VanishingSum<T>> {
    let k = as_.len();
    if k < 2 {
        return Err(Error::Domain(format!("Gustafson sum needs k >= 2, got {k}")));
    }
    if bs.len() != k - 2 {
        return Err(Error::Domain(format!(
            "Gustafson sum with k = {k} needs {} b-parameters, got {}",
            k - 2,
            bs.len()
        )));
    }
    let mut terms = Vec::with_capacity(k);
    for (l, &al) in as_.iter().enumerate() {
        let mut t = Term::new(ctx);
        match lambda {
            None => {
                t.mul(al);
                for &b in bs {
                    t.theta(al * b)?.theta(al / b)?;
                }
                for (j, &aj) in as_.iter().enumerate() {
                    if j != l {
                        t.div_theta(al * aj)?.div_theta(al / aj)?;
                    }
                }
            }
            Some(lam) => {
                t.div(al)?;
                for &b in bs {
                    t.theta(b * al)?.theta(b * lam / al)?;
                }
                for (j, &aj) in as_.iter().enumerate() {
                    if j != l {
                        t.div_theta(aj * al / lam)?.div_theta(aj / al)?;
                    }
                }
            }
        }
        terms.push(t.value()?);
    }
    Ok(VanishingSum::from_terms(terms))
}

/// Deterministic sample points on the annulus `0.6 ≤ |z| ≤ 1.4`.
fn annulus_points<T: Scalar>(samples: usize) -> impl Iterator<Item = Complex<T>> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    const PLASTIC: f64 = 0.754_877_666_246_692_8;
    (1..=samples).map(|s| {
        let radius = 0.6 + 0.8 * ((s as f64 * GOLDEN).fract());
        let phase = std::f64::consts::TAU * (s as f64 * PLASTIC).fract();
        Complex::from_polar(T::lit(radius), T::lit(phase))
    })
}

/// Largest relative deviation from `f(pz) = (-1)^k t z^{-k} f(z)` over the
/// sample points.
pub fn degree_norm_check<T, F>(f: F, profile: ThetaProfile<T>, ctx: &EllipticContext<T>, samples: usize) -> Result<T>
where
    T: Scalar,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    if ctx.is_trigonometric() {
        return Err(Error::Domain("degree/norm check needs 0 < |p| < 1".into()));
    }
    if samples == 0 {
        return Err(Error::Sampling("need at least one sample point".into()));
    }
    let sign = if profile.degree().is_multiple_of(2) { T::one() } else { -T::one() };
    let mut worst = T::zero();
    let mut usable = 0usize;
    for z in annulus_points::<T>(samples) {
        let fz = f(z)?;
        if fz.norm() < ctx.zero_guard() {
            continue;
        }
        usable += 1;
        let fpz = f(ctx.p() * z)?;
        let factor = profile.norm() * ipow(z, -i64::from(profile.degree())) * sign;
        let predicted = factor * fz;
        let scale = fpz.norm().max(fz.norm() * factor.norm());
        worst = worst.max((fpz - predicted).norm() / scale);
    }
    if usable == 0 {
        return Err(Error::Sampling("every sample point hit a zero of f".into()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    type C = Complex<f64>;

    fn ctx(p: C, q: C) -> EllipticContext<f64> {
        EllipticContext::new(p, q).unwrap()
    }

    /// Independent reference: fixed 60 factor pairs, no truncation logic.
    fn theta_fixed(x: C, p: C) -> C {
        let mut acc = C::new(1.0, 0.0);
        for j in 0..60 {
            acc *= (1.0 - p.powi(j) * x) * (1.0 - p.powi(j + 1) / x);
        }
        acc
    }

    #[test]
    fn trigonometric_case_is_one_minus_x() {
        let c = ctx(C::new(0.0, 0.0), C::new(0.7, 0.1));
        assert_eq!(theta_eval(C::new(0.3, 0.0), &c).unwrap(), C::new(0.7, 0.0));
    }

    #[test]
    fn vanishes_at_one() {
        let c = ctx(C::new(0.2, 0.0), C::new(0.7, 0.1));
        assert_eq!(theta_eval(C::new(1.0, 0.0), &c).unwrap().norm(), 0.0);
    }

    #[test]
    fn matches_fixed_length_product() {
        let p = C::new(0.1, 0.0);
        let c = ctx(p, C::new(0.7, 0.1));
        let got = theta_eval(C::new(0.5, 0.0), &c).unwrap();
        let want = theta_fixed(C::new(0.5, 0.0), p);
        assert!((got - want).norm() < 1e-15 * want.norm());
        // Complex nome and argument.
        let p = C::new(-0.3, 0.35);
        let c = ctx(p, C::new(0.7, 0.1));
        let x = C::new(1.3, -0.4);
        assert!((theta_eval(x, &c).unwrap() - theta_fixed(x, p)).norm() < 1e-13);
    }

    #[test]
    fn compensated_mode_agrees() {
        let p = C::new(0.45, -0.1);
        let plain = ctx(p, C::new(0.8, 0.2));
        let comp = plain.with_mode(ProductMode::Compensated);
        for x in [C::new(0.3, 0.9), C::new(2.0, -1.0), C::new(-0.7, 0.1)] {
            let a = theta_eval(x, &plain).unwrap();
            let b = theta_eval(x, &comp).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn rejects_zero_argument() {
        let c = ctx(C::new(0.2, 0.0), C::new(0.7, 0.1));
        assert!(matches!(theta_eval(C::new(0.0, 0.0), &c), Err(Error::Domain(_))));
    }

    #[test]
    fn context_validation() {
        assert!(EllipticContext::new(C::new(1.0, 0.0), C::new(0.5, 0.0)).is_err());
        assert!(EllipticContext::new(C::new(0.2, 0.0), C::new(0.0, 0.0)).is_err());
        // q a root of unity: q^4 = 1 = p^0.
        assert!(EllipticContext::new(C::new(0.2, 0.0), C::new(0.0, 1.0)).is_err());
        // q^2 = p.
        let p = C::new(0.25, 0.0);
        assert!(EllipticContext::new(p, C::new(0.5, 0.0)).is_err());
        assert!(EllipticContext::with_tolerances(p, C::new(0.7, 0.0), 0.0, 1e-13).is_err());
    }

    #[test]
    fn theta_product_cases() {
        let c = ctx(C::new(0.2, 0.0), C::new(0.7, 0.1));
        assert_eq!(theta_product(&[], None, &c).unwrap(), C::new(1.0, 0.0));
        let x = C::new(0.4, 0.3);
        let t = theta_eval(x, &c).unwrap();
        let sq = theta_product(&[x], Some(C::new(1.0, 0.0)), &c).unwrap();
        assert!((sq - t * t).norm() < 1e-15);
        let want = theta_eval(C::new(0.24, 0.0), &c).unwrap() * theta_eval(C::new(0.4 / 0.6, 0.0), &c).unwrap();
        let got = theta_product(&[C::new(0.4, 0.0)], Some(C::new(0.6, 0.0)), &c).unwrap();
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn pochhammer_cases() {
        let c = ctx(C::new(0.1, 0.0), C::new(0.7, 0.0));
        let a = C::new(0.3, 0.0);
        assert_eq!(elliptic_pochhammer(a, 0, &c).unwrap(), C::new(1.0, 0.0));
        assert_eq!(elliptic_pochhammer(a, 1, &c).unwrap(), theta_eval(a, &c).unwrap());
        let neg = elliptic_pochhammer(a, -1, &c).unwrap();
        assert!((neg - theta_eval(a / c.q(), &c).unwrap().inv()).norm() < 1e-15);
        let q = c.q();
        let want = theta_fixed(a, c.p()) * theta_fixed(a * q, c.p()) * theta_fixed(a * q * q, c.p());
        let got = elliptic_pochhammer(a, 3, &c).unwrap();
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn pochhammer_multi_cases() {
        let c = ctx(C::new(0.15, 0.05), C::new(0.8, -0.2));
        let (a, b) = (C::new(0.4, 0.2), C::new(-0.9, 0.5));
        assert_eq!(pochhammer_multi(&[], 5, &c).unwrap(), C::new(1.0, 0.0));
        assert_eq!(
            pochhammer_multi(&[a], 4, &c).unwrap(),
            elliptic_pochhammer(a, 4, &c).unwrap()
        );
        let q = c.q();
        let p = c.p();
        let want = theta_fixed(a, p) * theta_fixed(a * q, p) * theta_fixed(b, p) * theta_fixed(b * q, p);
        let got = pochhammer_multi(&[a, b], 2, &c).unwrap();
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn pochhammer_recurrence() {
        let c = ctx(C::new(0.3, -0.1), C::new(0.9, 0.3));
        let a = C::new(0.6, 0.7);
        for k in -5i64..=5 {
            let lhs = elliptic_pochhammer(a, k + 1, &c).unwrap();
            let rhs = elliptic_pochhammer(a, k, &c).unwrap() * theta_eval(a * c.q_pow(k), &c).unwrap();
            if k >= 0 {
                assert_eq!(lhs, rhs, "k = {k}");
            } else {
                assert!((lhs - rhs).norm() <= 1e-14 * lhs.norm(), "k = {k}");
            }
        }
    }

    #[test]
    fn negative_pochhammer_guards_denominator() {
        let q = C::new(0.7, 0.0);
        let c = ctx(C::new(0.2, 0.0), q);
        // a q^{-1} = 1 makes the single denominator factor vanish.
        assert!(matches!(elliptic_pochhammer(q, -1, &c), Err(Error::Degenerate(_))));
    }

    #[test]
    fn two_term_gustafson_cancels() {
        let c = ctx(C::new(0.3, 0.1), C::new(0.8, 0.1));
        let s = gustafson_sum(&[C::new(0.7, 0.4), C::new(-1.1, 0.2)], &[], None, &c).unwrap();
        assert!(s.normalized() < 1e-14);
    }

    #[test]
    fn gustafson_unit_lambda_is_rescaled_classic_form() {
        let c = ctx(C::new(0.3, 0.0), C::new(0.8, 0.1));
        let a: Vec<C> = vec![cplx(0.7, 0.4), cplx(-1.1, 0.2), cplx(0.3, -0.9), cplx(1.2, 0.5)];
        let b: Vec<C> = vec![cplx(0.5, 0.5), cplx(-0.6, 1.0)];
        let classic = gustafson_sum(&a, &b, None, &c).unwrap();
        let shifted = gustafson_sum(&a, &b, Some(C::new(1.0, 0.0)), &c).unwrap();
        let ratio = -b.iter().product::<C>() / a.iter().product::<C>();
        for (x, y) in classic.terms.iter().zip(&shifted.terms) {
            assert!((x * ratio - y).norm() < 1e-12 * y.norm());
        }
        assert!(classic.normalized() < 1e-12);
    }

    #[test]
    fn gustafson_rejects_bad_arity() {
        let c = ctx(C::new(0.3, 0.0), C::new(0.8, 0.1));
        assert!(gustafson_sum(&[C::new(0.5, 0.0)], &[], None, &c).is_err());
        assert!(gustafson_sum(&[C::new(0.5, 0.0), C::new(0.9, 0.1), C::new(1.1, 0.0)], &[], None, &c).is_err());
    }

    #[test]
    fn degree_norm_of_theta_and_products() {
        let c = ctx(C::new(0.3, 0.2), C::new(0.8, 0.1));
        let dev = degree_norm_check(|z| theta_eval(z, &c), ThetaProfile::new(1, C::new(1.0, 0.0)).unwrap(), &c, 16)
            .unwrap();
        assert!(dev < 1e-12);
        let (a1, a2) = (C::new(0.5, 0.4), C::new(-1.2, 0.3));
        let f = |z: C| Ok(theta_eval(z / a1, &c)? * theta_eval(z / a2, &c)?);
        let dev = degree_norm_check(f, ThetaProfile::new(2, a1 * a2).unwrap(), &c, 16).unwrap();
        assert!(dev < 1e-12);
        let dev = degree_norm_check(|_| Ok(C::new(1.0, 0.0)), ThetaProfile::new(0, C::new(1.0, 0.0)).unwrap(), &c, 8)
            .unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn degree_norm_detects_wrong_profile() {
        let c = ctx(C::new(0.3, 0.2), C::new(0.8, 0.1));
        let dev = degree_norm_check(|z| theta_eval(z, &c), ThetaProfile::new(2, C::new(1.0, 0.0)).unwrap(), &c, 16)
            .unwrap();
        assert!(dev > 1e-3);
        let err = degree_norm_check(|_| Ok(C::new(0.0, 0.0)), ThetaProfile::new(0, C::new(1.0, 0.0)).unwrap(), &c, 4);
        assert!(matches!(err, Err(Error::Sampling(_))));
    }

    #[test]
    fn scaled_products_survive_transient_overflow() {
        let c = ctx(C::new(0.2, 0.0), C::new(0.7, 0.0));
        let mut t = Term::new(&c);
        for _ in 0..40 {
            t.mul(C::new(1e20, 0.0));
        }
        for _ in 0..40 {
            t.div(C::new(1e20, 0.0)).unwrap();
        }
        assert!((t.value().unwrap() - 1.0).norm() < 1e-12);
        let mut t = Term::new(&c);
        for _ in 0..40 {
            t.mul(C::new(1e20, 0.0));
        }
        assert!(matches!(t.value(), Err(Error::Overflow(_))));
    }

    #[test]
    fn single_precision_instantiation() {
        let c = EllipticContext::<f32>::new(Complex::new(0.2, 0.1), Complex::new(0.8, 0.1)).unwrap();
        let x = Complex::new(0.6f32, 0.3);
        let inv = theta_eval(x.inv(), &c).unwrap();
        let direct = -theta_eval(x, &c).unwrap() / x;
        assert!((inv - direct).norm() < 1e-5 * direct.norm());
    }
}
