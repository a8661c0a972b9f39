//! Bailey pairs `Σ_{0≤k≤n} F_{nk} a_k = b_n` over the geometric kernels.

use num_complex::Complex;

use super::params::Params;
use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::inversions::{entry, GeomParams, InversionKind, MatrixEntryRequest, Which};
use crate::multiindex::{iterate_box, MultiIndex};
use crate::scalar::{ipow, Scalar};
use crate::theta::{EllipticContext, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaileyPair {
    NewArJacksonPair,
    ArQuadraticIPair,
    ArQuadraticIIPair,
    DrQuadraticPair,
    DrCubicPair,
    DrQuarticPair,
}

impl BaileyPair {
    pub const ALL: [BaileyPair; 6] = [
        BaileyPair::NewArJacksonPair,
        BaileyPair::ArQuadraticIPair,
        BaileyPair::ArQuadraticIIPair,
        BaileyPair::DrQuadraticPair,
        BaileyPair::DrCubicPair,
        BaileyPair::DrQuarticPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaileyPair::NewArJacksonPair => "new-ar-jackson-pair",
            BaileyPair::ArQuadraticIPair => "ar-quadratic-i-pair",
            BaileyPair::ArQuadraticIIPair => "ar-quadratic-ii-pair",
            BaileyPair::DrQuadraticPair => "dr-quadratic-pair",
            BaileyPair::DrCubicPair => "dr-cubic-pair",
            BaileyPair::DrQuarticPair => "dr-quartic-pair",
        }
    }

    /// Kernel supplying `F`.
    pub fn kernel(self) -> &'static str {
        match self {
            BaileyPair::NewArJacksonPair => "ar-geom-pos, m = 1",
            BaileyPair::ArQuadraticIPair => "ar-geom-pos, m = 2",
            BaileyPair::ArQuadraticIIPair => "ar-geom-neg, m = 2",
            BaileyPair::DrQuadraticPair => "bcr-geom, m = 2",
            BaileyPair::DrCubicPair => "bcr-geom, m = 3",
            BaileyPair::DrQuarticPair => "bcr-geom, m = 4, a = i q^(-1/2)",
        }
    }

    /// Scalar parameters besides `x1..xr`.
    pub fn scalars(self) -> &'static [&'static str] {
        match self {
            BaileyPair::NewArJacksonPair => &["a", "b", "d"],
            BaileyPair::ArQuadraticIPair => &["a", "d"],
            BaileyPair::ArQuadraticIIPair => &["a", "b", "c"],
            BaileyPair::DrQuadraticPair => &["a", "b"],
            BaileyPair::DrCubicPair => &["a"],
            BaileyPair::DrQuarticPair => &[],
        }
    }

    pub fn constraint(self) -> Option<&'static str> {
        match self {
            BaileyPair::ArQuadraticIIPair => Some("a^2 b c = X^2 q, X = x1...xr"),
            BaileyPair::DrQuarticPair => Some("a = i q^(-1/2)"),
            _ => None,
        }
    }

    /// Parameter solved for by [`BaileyPairSpec::complete`].
    pub fn free_param(self) -> Option<&'static str> {
        (self == BaileyPair::ArQuadraticIIPair).then_some("c")
    }
}

/// Sign of `q^{1/2}` relative to the principal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    #[default]
    Principal,
    Negated,
}

/// Which displayed expression of `b_k` the quartic pair uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BkForm {
    #[default]
    First,
    Second,
}

#[derive(Debug, Clone)]
pub struct BaileyPairSpec<T> {
    pub derivation: BaileyPair,
    pub r: usize,
    pub params: Params<T>,
    pub branch: SqrtBranch,
    pub bk_form: BkForm,
}

impl<T: Scalar> BaileyPairSpec<T> {
    /// Solves the pair's constraint when its free parameter is absent and
    /// checks it otherwise.
    pub fn complete(mut self, ctx: &EllipticContext<T>) -> Result<Self> {
        let x = self.params.vec("x", self.r)?;
        for name in self.derivation.scalars() {
            if Some(*name) != self.derivation.free_param() {
                self.params.get(name)?;
            }
        }
        if self.derivation == BaileyPair::ArQuadraticIIPair {
            let (a, b) = (self.params.get("a")?, self.params.get("b")?);
            let xx = prod(&x);
            let target = xx * xx * ctx.q() / (a * a * b);
            if self.params.contains("c") {
                let ratio = target / self.params.get("c")?;
                if (ratio - T::one()).norm() > T::lit(super::CONSTRAINT_TOL) {
                    return Err(Error::ConstraintViolation(format!(
                        "{} requires {}",
                        self.derivation.name(),
                        self.derivation.constraint().unwrap_or_default()
                    )));
                }
            } else {
                self.params.set("c", target);
            }
        }
        Ok(self)
    }
}

fn prod<T: Scalar>(zs: &[Complex<T>]) -> Complex<T> {
    zs.iter().fold(Complex::new(T::one(), T::zero()), |acc, z| acc * z)
}

fn i_unit<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `q^{1/2}` on the requested branch.
fn half<T: Scalar>(q: Complex<T>, branch: SqrtBranch) -> Complex<T> {
    let s = q.sqrt();
    match branch {
        SqrtBranch::Principal => s,
        SqrtBranch::Negated => -s,
    }
}

struct PairEnv<'s, T> {
    spec: &'s BaileyPairSpec<T>,
    ctx: &'s EllipticContext<T>,
    x: Vec<Complex<T>>,
    xx: Complex<T>,
    q: Complex<T>,
}

impl<'s, T: Scalar> PairEnv<'s, T> {
    fn new(spec: &'s BaileyPairSpec<T>, ctx: &'s EllipticContext<T>) -> Result<Self> {
        let x = spec.params.vec("x", spec.r)?;
        let xx = prod(&x);
        Ok(Self { spec, ctx, x, xx, q: ctx.q() })
    }

    fn s(&self, name: &str) -> Result<Complex<T>> {
        self.spec.params.get(name)
    }

    fn qp(&self, e: i64) -> Complex<T> {
        self.ctx.q_pow(e)
    }

    /// `q^{e/2}`.
    fn hp(&self, e: i64) -> Complex<T> {
        ipow(half(self.q, self.spec.branch), e)
    }

    fn kernel(&self) -> Result<InversionKind<T>> {
        let geom = |m: i64, a: Complex<T>| GeomParams { m, a, x: self.x.clone() };
        Ok(match self.spec.derivation {
            BaileyPair::NewArJacksonPair => InversionKind::GeomArPos(geom(1, self.s("a")?)),
            BaileyPair::ArQuadraticIPair => InversionKind::GeomArPos(geom(2, self.s("a")?)),
            BaileyPair::ArQuadraticIIPair => InversionKind::GeomArNeg(geom(2, self.s("a")?)),
            BaileyPair::DrQuadraticPair => InversionKind::GeomBCr(geom(2, self.s("a")?)),
            BaileyPair::DrCubicPair => InversionKind::GeomBCr(geom(3, self.s("a")?)),
            BaileyPair::DrQuarticPair => InversionKind::GeomBCr(geom(4, i_unit::<T>() / self.hp(1))),
        })
    }

    fn term(&self) -> Term<'s, T> {
        Term::new(self.ctx)
    }
}

/// `∏_{i,j} (x_i x_j c; base)_{k_i} / ∏_{i<j} (x_i x_j c; base)_{k_i+k_j}`.
fn pair_block<T: Scalar>(t: &mut Term<'_, T>, x: &[Complex<T>], c: Complex<T>, base: Complex<T>, k: &MultiIndex) -> Result<()> {
    for i in 0..x.len() {
        for j in 0..x.len() {
            t.poch(x[i] * x[j] * c, base, k.get(i))?;
        }
        for j in i + 1..x.len() {
            t.div_poch(x[i] * x[j] * c, base, k.get(i) + k.get(j))?;
        }
    }
    Ok(())
}

fn seq_a<T: Scalar>(e: &PairEnv<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (q, x, xx) = (e.q, &e.x, e.xx);
    let (q2, q3) = (e.qp(2), e.qp(3));
    let kk = k.total();
    let mut t = e.term();
    match e.spec.derivation {
        BaileyPair::NewArJacksonPair => {
            let (a, b, d) = (e.s("a")?, e.s("b")?, e.s("d")?);
            t.poch(a * xx * q, q, kk)?.poch(b, q, kk)?;
            t.div_poch(xx * q / d, q, kk)?.div_poch(a * b * d, q, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(d * xi, q, ki)?.poch(xx * xi * q / (a * b * d), q, ki)?;
                t.div_poch(xi / a, q, ki)?.div_poch(xx * xi * q / b, q, ki)?;
            }
        }
        BaileyPair::ArQuadraticIPair => {
            let (a, d) = (e.s("a")?, e.s("d")?);
            t.poch(a * xx * q, q, 2 * kk)?;
            t.div_poch(xx * q2 / d, q2, kk)?.div_poch(a * a * d * xx * q, q2, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(d * xi, q2, ki)?.poch(xi * q / (a * a * d), q2, ki)?;
                t.div_poch(xi / a, q, 2 * ki)?;
            }
        }
        BaileyPair::ArQuadraticIIPair => {
            let (a, b, c) = (e.s("a")?, e.s("b")?, e.s("c")?);
            t.poch(b, q2, kk)?.poch(c, q2, kk)?.div_poch(xx / a, q, 2 * kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(a * xi * q, q, 2 * ki)?;
                t.div_poch(xx * xi * q2 / b, q2, ki)?.div_poch(xx * xi * q2 / c, q2, ki)?;
            }
        }
        BaileyPair::DrQuadraticPair => {
            let (a, b) = (e.s("a")?, e.s("b")?);
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(a * xi * q, q, 2 * ki)?.poch(xi * q / (a * b), q2, ki)?.poch(b * xi / a, q2, ki)?;
                t.div_poch(xi / a, q, 2 * ki)?.div_poch(a * b * xi * q, q2, ki)?.div_poch(a * xi * q2 / b, q2, ki)?;
            }
        }
        BaileyPair::DrCubicPair => {
            let a = e.s("a")?;
            let a3 = a * a * a;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(a * xi * q, q, 3 * ki)?.poch(xi / a3, q3, ki)?;
                t.div_poch(xi / a, q, 3 * ki)?.div_poch(a3 * xi * q3, q3, ki)?;
            }
        }
        BaileyPair::DrQuarticPair => {
            let iu = i_unit::<T>();
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(iu * xi * e.hp(1), q, 4 * ki)?.div_poch(-iu * xi * e.hp(1), q, 4 * ki)?;
            }
        }
    }
    t.value()
}

fn seq_b<T: Scalar>(e: &PairEnv<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (q, x, xx) = (e.q, &e.x, e.xx);
    let (q2, q3, q4) = (e.qp(2), e.qp(3), e.qp(4));
    let kk = k.total();
    let mut t = e.term();
    match e.spec.derivation {
        BaileyPair::NewArJacksonPair => {
            let (a, b, d) = (e.s("a")?, e.s("b")?, e.s("d")?);
            t.poch(xx * q / (b * d), q, kk)?.poch(a * d, q, kk)?;
            t.div_poch(xx * q / d, q, kk)?.div_poch(a * b * d, q, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(xx * xi * q, q, ki)?.poch(a * b * e.qp(kk - ki) / xi, q, ki)?;
                t.div_poch(xx * xi * q / b, q, ki)?.div_poch(a * e.qp(kk - ki) / xi, q, ki)?;
            }
        }
        BaileyPair::ArQuadraticIPair => {
            let (a, d) = (e.s("a")?, e.s("d")?);
            t.mul(e.qp(-k.e2()));
            t.poch(a * d, q, kk)?.poch(q / (a * d), q, kk)?;
            t.div_poch(xx * q2 / d, q2, kk)?.div_poch(a * a * d * xx * q, q2, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(xx * xi * q2, q2, ki)?.poch(a * a * xx * e.qp(2 * kk - 2 * ki + 1) / xi, q2, ki)?;
                t.div_poch(a * e.qp(kk - ki) / xi, q, ki)?.div_poch(xi * e.qp(ki - kk + 1) / a, q, ki)?;
            }
        }
        BaileyPair::ArQuadraticIIPair => {
            let (a, b, c) = (e.s("a")?, e.s("b")?, e.s("c")?);
            t.poch(a * b / xx, q, kk)?.poch(xx * q / (a * b), q, kk)?;
            t.div_poch(a / xx, q, kk)?.div_poch(xx * q / a, q, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.poch(xx * xi * q2, q2, ki)?.poch(xx * xi * q2 / (b * c), q2, ki)?;
                t.div_poch(xx * xi * q2 / b, q2, ki)?.div_poch(xx * xi * q2 / c, q2, ki)?;
            }
        }
        BaileyPair::DrQuadraticPair => {
            let (a, b) = (e.s("a")?, e.s("b")?);
            t.poch(b * e.qp(1 - kk), q2, kk)?.poch(e.qp(2 - kk) / b, q2, kk)?.poch(a * a * q, q2, kk)?;
            pair_block(&mut t, x, q2, q2, k)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.div_poch(a * b * xi * q, q2, ki)?.div_poch(a * xi * q2 / b, q2, ki)?;
                t.div_poch(xi * e.qp(2 - kk) / a, q2, ki)?.div_poch(a * e.qp(1 + kk - 2 * ki) / xi, q2, ki)?;
            }
        }
        BaileyPair::DrCubicPair => {
            let a = e.s("a")?;
            let (a2, a3) = (a * a, a * a * a);
            pair_block(&mut t, x, q3, q3, k)?;
            t.poch(e.qp(1 - 2 * kk) / a2, q3, kk)?.poch(a2 * e.qp(3 - kk), q3, kk)?.poch(a2 * e.qp(1 - kk), q3, kk)?;
            for (i, &xi) in x.iter().enumerate() {
                let ki = k.get(i);
                t.div_poch(xi * e.qp(1 - kk) / a, q3, ki)?.div_poch(xi * e.qp(3 - kk) / a, q3, ki)?;
                t.div_poch(a3 * xi * q3, q3, ki)?.div_poch(a * e.qp(1 + kk - 3 * ki) / xi, q3, ki)?;
            }
        }
        BaileyPair::DrQuarticPair => {
            let iu = i_unit::<T>();
            pair_block(&mut t, x, q4, q4, k)?;
            match e.spec.bk_form {
                BkForm::First => {
                    for s in [2, 3, 4] {
                        t.poch(-e.qp(s - 2 * kk), q4, kk)?;
                    }
                    for (i, &xi) in x.iter().enumerate() {
                        let ki = k.get(i);
                        for h in [5, 7, 9] {
                            t.div_poch(-iu * xi * e.hp(h - 2 * kk), q4, ki)?;
                        }
                        t.div_poch(iu * e.hp(2 * kk - 8 * ki + 5) / xi, q4, ki)?;
                    }
                }
                BkForm::Second => {
                    t.mul(e.qp(-3 * kk - 3 * k.e2()));
                    let one = Complex::new(T::one(), T::zero());
                    t.poch(-one, q2, kk)?.poch(-q, q2, kk)?.poch(-q2, q2, kk)?;
                    for (i, &xi) in x.iter().enumerate() {
                        let ki = k.get(i);
                        t.theta(iu * e.hp(-1) / xi)?.div_theta(iu * e.hp(2 * kk - 8 * ki - 1) / xi)?;
                        t.poch(iu * e.hp(1) / xi, q, kk - ki)?;
                        t.div_poch(iu * e.hp(-1) / xi, q, kk)?;
                        t.div_poch(-iu * xi * e.hp(2 * ki - 2 * kk + 1), q, 3 * ki)?;
                    }
                }
            }
        }
    }
    t.value()
}

/// `a_k` of the pair.
pub fn pair_a<T: Scalar>(spec: &BaileyPairSpec<T>, k: &MultiIndex, ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    seq_a(&PairEnv::new(spec, ctx)?, k)
}

/// `b_k` of the pair.
pub fn pair_b<T: Scalar>(spec: &BaileyPairSpec<T>, k: &MultiIndex, ctx: &EllipticContext<T>) -> Result<Complex<T>> {
    seq_b(&PairEnv::new(spec, ctx)?, k)
}

/// `|Σ_k F_{nk} a_k − b_n| / Σ_k |F_{nk} a_k|`.
pub fn bailey_pair_residual<T: Scalar>(spec: &BaileyPairSpec<T>, n: &MultiIndex, ctx: &EllipticContext<T>) -> Result<T> {
    if n.dim() != spec.r || !n.is_nonnegative() {
        return Err(Error::Domain(format!("row {n} for dimension {}", spec.r)));
    }
    let env = PairEnv::new(spec, ctx)?;
    let kind = env.kernel()?;
    let mut sum = CompensatedSum::new();
    for k in iterate_box(n) {
        let req = MatrixEntryRequest {
            kind: kind.clone(),
            row: n.clone(),
            col: k.clone(),
            which: Which::ForwardNormalized,
        };
        sum.add(entry(&req, None, ctx)? * seq_a(&env, &k)?);
    }
    let scale = sum.magnitude();
    let raw = sum.value() - seq_b(&env, n)?;
    Ok(if scale == T::zero() { raw.norm() } else { raw.norm() / scale })
}

/// Relative gap between the two displayed quartic `b_k` expressions.
pub fn quartic_form_gap<T: Scalar>(spec: &BaileyPairSpec<T>, k: &MultiIndex, ctx: &EllipticContext<T>) -> Result<T> {
    if spec.derivation != BaileyPair::DrQuarticPair {
        return Err(Error::Domain(format!("{} has a single b_k form", spec.derivation.name())));
    }
    let with = |bk_form| BaileyPairSpec { bk_form, ..spec.clone() };
    let u = pair_b(&with(BkForm::First), k, ctx)?;
    let v = pair_b(&with(BkForm::Second), k, ctx)?;
    Ok(super::relative_error(u, v))
}
