//! Catalog of multiple elliptic summation formulas, with constraint
//! completion, direct evaluation of both sides, Bailey-pair checks and the
//! simplex/box specialization checks.

mod bailey;
mod params;
mod simplex;
mod terms;

#[cfg(test)]
mod tests;

use num_complex::Complex;

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::multiindex::{Domain, MultiIndex};
use crate::scalar::Scalar;
use crate::theta::EllipticContext;

pub use bailey::{bailey_pair_residual, pair_a, pair_b, quartic_form_gap, BaileyPair, BaileyPairSpec, BkForm, SqrtBranch};
pub use params::{indexed, Params};
pub use simplex::{simplex_specialization_residual, Specialization, SpecializationPair};

/// Relative tolerance for a caller-supplied balancing constraint.
pub const CONSTRAINT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    ArJackson,
    CrJackson,
    NewArJackson,
    NewArJacksonSimplex,
    ArQuadraticI,
    ArQuadraticISimplex,
    ArQuadraticII,
    ArQuadraticIISimplex,
    DrQuadratic,
    DrQuadraticSimplex1,
    DrQuadraticSimplex2,
    DrCubic,
    DrCubicSimplexA,
    DrCubicSimplexB,
    DrQuartic,
    QuarticR1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// `0 ≤ k ≤ n`.
    Box,
    /// `|k| ≤ N`.
    Simplex,
    /// `2|k| ≤ N`.
    HalfSimplex,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Box => "box",
            DomainKind::Simplex => "simplex",
            DomainKind::HalfSimplex => "half-simplex",
        }
    }
}

/// Multiplicative balancing relation `target = ∏ factors`, solved for `free`.
struct Balance<T> {
    target: Complex<T>,
    factors: Vec<String>,
    free: String,
}

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::ArJackson,
        IdentityId::CrJackson,
        IdentityId::NewArJackson,
        IdentityId::NewArJacksonSimplex,
        IdentityId::ArQuadraticI,
        IdentityId::ArQuadraticISimplex,
        IdentityId::ArQuadraticII,
        IdentityId::ArQuadraticIISimplex,
        IdentityId::DrQuadratic,
        IdentityId::DrQuadraticSimplex1,
        IdentityId::DrQuadraticSimplex2,
        IdentityId::DrCubic,
        IdentityId::DrCubicSimplexA,
        IdentityId::DrCubicSimplexB,
        IdentityId::DrQuartic,
        IdentityId::QuarticR1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::ArJackson => "ar-jackson",
            IdentityId::CrJackson => "cr-jackson",
            IdentityId::NewArJackson => "new-ar-jackson",
            IdentityId::NewArJacksonSimplex => "new-ar-jackson-simplex",
            IdentityId::ArQuadraticI => "ar-quadratic-i",
            IdentityId::ArQuadraticISimplex => "ar-quadratic-i-simplex",
            IdentityId::ArQuadraticII => "ar-quadratic-ii",
            IdentityId::ArQuadraticIISimplex => "ar-quadratic-ii-simplex",
            IdentityId::DrQuadratic => "dr-quadratic",
            IdentityId::DrQuadraticSimplex1 => "dr-quadratic-simplex1",
            IdentityId::DrQuadraticSimplex2 => "dr-quadratic-simplex2",
            IdentityId::DrCubic => "dr-cubic",
            IdentityId::DrCubicSimplexA => "dr-cubic-simplex-a",
            IdentityId::DrCubicSimplexB => "dr-cubic-simplex-b",
            IdentityId::DrQuartic => "dr-quartic",
            IdentityId::QuarticR1 => "quartic-r1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown identity `{s}`")))
    }

    /// Descriptive anchor shown by the catalog listing.
    pub fn anchor(self) -> &'static str {
        match self {
            IdentityId::ArJackson => "A_r elliptic Jackson summation",
            IdentityId::CrJackson => "C_r elliptic Jackson summation",
            IdentityId::NewArJackson => "new A_r Jackson summation",
            IdentityId::NewArJacksonSimplex => "new A_r Jackson summation, simplex form",
            IdentityId::ArQuadraticI => "quadratic A_r summation, first kind",
            IdentityId::ArQuadraticISimplex => "quadratic A_r summation, first kind, simplex form",
            IdentityId::ArQuadraticII => "quadratic A_r summation, second kind",
            IdentityId::ArQuadraticIISimplex => "quadratic A_r summation, second kind, simplex form",
            IdentityId::DrQuadratic => "quadratic D_r summation",
            IdentityId::DrQuadraticSimplex1 => "quadratic D_r summation, simplex form in b",
            IdentityId::DrQuadraticSimplex2 => "quadratic D_r summation, simplex form in c",
            IdentityId::DrCubic => "cubic D_r summation",
            IdentityId::DrCubicSimplexA => "cubic D_r summation, simplex form",
            IdentityId::DrCubicSimplexB => "cubic D_r summation, half-simplex form",
            IdentityId::DrQuartic => "quartic D_r summation",
            IdentityId::QuarticR1 => "one-dimensional quartic summation",
        }
    }

    pub fn domain_kind(self) -> DomainKind {
        use IdentityId::*;
        match self {
            NewArJacksonSimplex | ArQuadraticISimplex | ArQuadraticIISimplex | DrQuadraticSimplex1
            | DrQuadraticSimplex2 | DrCubicSimplexA => DomainKind::Simplex,
            DrCubicSimplexB => DomainKind::HalfSimplex,
            _ => DomainKind::Box,
        }
    }

    pub fn is_simplex(self) -> bool {
        self.domain_kind() != DomainKind::Box
    }

    /// Dimension the identity is restricted to, if any.
    pub fn fixed_dim(self) -> Option<usize> {
        (self == IdentityId::QuarticR1).then_some(1)
    }

    /// Parameter names for dimension `r`, in catalog order.
    pub fn schema(self, r: usize) -> Vec<String> {
        use IdentityId::*;
        let names = |s: &[&str]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        let mut out = match self {
            ArJackson | CrJackson => names(&["a", "b", "c", "d", "e"]),
            NewArJackson | ArQuadraticI | ArQuadraticII => names(&["a", "b", "c", "d"]),
            NewArJacksonSimplex => [names(&["a", "b", "d"]), indexed("c", r + 1)].concat(),
            ArQuadraticISimplex => [names(&["a"]), indexed("b", r + 1), names(&["c"])].concat(),
            ArQuadraticIISimplex => [names(&["a"]), indexed("b", r + 2)].concat(),
            DrQuadratic => names(&["a", "b"]),
            DrQuadraticSimplex1 | DrCubicSimplexA | DrCubicSimplexB => [names(&["a"]), indexed("b", r)].concat(),
            DrQuadraticSimplex2 => [names(&["a", "b"]), indexed("c", r)].concat(),
            DrCubic | DrQuartic | QuarticR1 => names(&["a"]),
        };
        if self != QuarticR1 {
            out.extend(indexed("x", r));
        }
        out
    }

    /// Human-readable balancing relation.
    pub fn constraint(self) -> Option<&'static str> {
        use IdentityId::*;
        match self {
            ArJackson | CrJackson => Some("a^2 q^(|n|+1) = b c d e"),
            ArQuadraticI | ArQuadraticII => Some("a^2 q^(2|n|+1) = c d"),
            NewArJacksonSimplex => Some("a^2 q^(N+1) = b c1...c(r+1) d x1...xr"),
            ArQuadraticISimplex => Some("a^2 q = b1...b(r+1) c x1...xr"),
            ArQuadraticIISimplex => Some("a^2 q = b1...b(r+2) x1...xr"),
            _ => None,
        }
    }

    /// Parameter solved for by [`complete_params`].
    pub fn free_param(self, r: usize) -> Option<String> {
        use IdentityId::*;
        match self {
            ArJackson | CrJackson => Some("e".into()),
            ArQuadraticI | ArQuadraticII | NewArJacksonSimplex => Some("d".into()),
            ArQuadraticISimplex => Some("c".into()),
            ArQuadraticIISimplex => Some(format!("b{}", r + 2)),
            _ => None,
        }
    }

    fn balance<T: Scalar>(self, r: usize, extent: &Extent, params: &Params<T>, ctx: &EllipticContext<T>) -> Result<Option<Balance<T>>> {
        use IdentityId::*;
        let Some(free) = self.free_param(r) else {
            return Ok(None);
        };
        let a = params.get("a")?;
        let size = extent.size();
        let x = indexed("x", r);
        let (exp, factors) = match self {
            ArJackson | CrJackson => (size + 1, vec!["b".into(), "c".into(), "d".into(), "e".into()]),
            ArQuadraticI | ArQuadraticII => (2 * size + 1, vec!["c".into(), "d".into()]),
            NewArJacksonSimplex => (size + 1, [vec!["b".into(), "d".into()], indexed("c", r + 1), x].concat()),
            ArQuadraticISimplex => (1, [indexed("b", r + 1), vec!["c".into()], x].concat()),
            ArQuadraticIISimplex => (1, [indexed("b", r + 2), x].concat()),
            _ => unreachable!("identity without a free parameter"),
        };
        Ok(Some(Balance {
            target: a * a * ctx.q_pow(exp),
            factors,
            free,
        }))
    }
}

/// Summation extent: the box corner `n` or the simplex size `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    Box(MultiIndex),
    Simplex(i64),
}

impl Extent {
    /// `|n|` or `N`.
    pub fn size(&self) -> i64 {
        match self {
            Extent::Box(n) => n.total(),
            Extent::Simplex(n) => *n,
        }
    }
}

impl std::fmt::Display for Extent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extent::Box(n) => write!(f, "n={n}"),
            Extent::Simplex(n) => write!(f, "N={n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityInstance<T> {
    pub id: IdentityId,
    pub r: usize,
    pub extent: Extent,
    pub params: Params<T>,
    pub ctx: EllipticContext<T>,
}

impl<T: Scalar> IdentityInstance<T> {
    pub fn domain(&self) -> Domain {
        match (&self.extent, self.id.domain_kind()) {
            (Extent::Box(n), _) => Domain::Box(n.clone()),
            (Extent::Simplex(cap), kind) => Domain::Simplex {
                dim: self.r,
                cap: *cap,
                half_cap: kind == DomainKind::HalfSimplex,
            },
        }
    }
}

/// Validates the parameter set and solves the balancing relation for the
/// designated free parameter when it is absent.
pub fn complete_params<T: Scalar>(
    id: IdentityId,
    r: usize,
    extent: Extent,
    mut params: Params<T>,
    ctx: &EllipticContext<T>,
) -> Result<IdentityInstance<T>> {
    if r == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if let Some(fixed) = id.fixed_dim() {
        if r != fixed {
            return Err(Error::Domain(format!("{} is defined for r = {fixed} only", id.name())));
        }
    }
    match (&extent, id.is_simplex()) {
        (Extent::Box(n), false) => {
            if n.dim() != r || !n.is_nonnegative() {
                return Err(Error::Domain(format!("box corner {n} for dimension {r}")));
            }
        }
        (Extent::Simplex(cap), true) => {
            if *cap < 0 {
                return Err(Error::Domain(format!("simplex size {cap} is negative")));
            }
        }
        _ => return Err(Error::Domain(format!("{} needs a {} extent", id.name(), id.domain_kind().name()))),
    }
    let free = id.free_param(r);
    for name in id.schema(r) {
        if Some(&name) != free.as_ref() {
            let z = params.get(&name)?;
            if z.norm() == T::zero() {
                return Err(Error::Degenerate(format!("parameter `{name}` is zero")));
            }
        }
    }
    if let Some(bal) = id.balance(r, &extent, &params, ctx)? {
        let others = bal
            .factors
            .iter()
            .filter(|f| **f != bal.free)
            .map(|f| params.get(f))
            .try_fold(Complex::new(T::one(), T::zero()), |acc, z| z.map(|z| acc * z))?;
        if params.contains(&bal.free) {
            let ratio = bal.target / (others * params.get(&bal.free)?);
            if (ratio - T::one()).norm() > T::lit(CONSTRAINT_TOL) {
                return Err(Error::ConstraintViolation(format!(
                    "{} requires {}",
                    id.name(),
                    id.constraint().unwrap_or_default()
                )));
            }
        } else {
            params.set(&bal.free, bal.target / others);
        }
    }
    Ok(IdentityInstance {
        id,
        r,
        extent,
        params,
        ctx: *ctx,
    })
}

pub fn summand<T: Scalar>(inst: &IdentityInstance<T>, k: &MultiIndex) -> Result<Complex<T>> {
    terms::summand(inst, k)
}

fn lhs_sum<T: Scalar>(inst: &IdentityInstance<T>) -> Result<CompensatedSum<T>> {
    let mut sum = CompensatedSum::new();
    for k in inst.domain().iter() {
        sum.add(summand(inst, &k)?);
    }
    Ok(sum)
}

pub fn lhs<T: Scalar>(inst: &IdentityInstance<T>) -> Result<Complex<T>> {
    Ok(lhs_sum(inst)?.value())
}

/// The left-hand side with its condition `Σ|summand| / |lhs|`.
pub(crate) fn lhs_condition<T: Scalar>(inst: &IdentityInstance<T>) -> Result<(Complex<T>, T)> {
    let sum = lhs_sum(inst)?;
    let value = sum.value();
    let condition = if value.norm() == T::zero() {
        T::infinity()
    } else {
        sum.magnitude() / value.norm()
    };
    Ok((value, condition))
}

pub fn rhs<T: Scalar>(inst: &IdentityInstance<T>) -> Result<Complex<T>> {
    terms::closed_form(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Verification<T> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub rel_error: T,
    /// `Σ|summand| / |lhs|`.
    pub condition: T,
    pub status: Status,
}

impl<T: Scalar> Verification<T> {
    fn degenerate() -> Self {
        let nan = T::nan();
        Self {
            lhs: Complex::new(nan, nan),
            rhs: Complex::new(nan, nan),
            rel_error: nan,
            condition: nan,
            status: Status::Degenerate,
        }
    }
}

/// `|u − v| / max(|u|, |v|)`, zero when both vanish.
pub fn relative_error<T: Scalar>(u: Complex<T>, v: Complex<T>) -> T {
    let scale = u.norm().max(v.norm());
    if scale == T::zero() {
        T::zero()
    } else {
        (u - v).norm() / scale
    }
}

/// Degenerate parameters yield a `Degenerate` status rather than an error.
pub fn verify<T: Scalar>(inst: &IdentityInstance<T>, tol: T) -> Result<Verification<T>> {
    let evaluated = lhs_sum(inst).and_then(|s| Ok((s, rhs(inst)?)));
    let (sum, rhs) = match evaluated {
        Ok(v) => v,
        Err(e) if e.is_degenerate() => return Ok(Verification::degenerate()),
        Err(e) => return Err(e),
    };
    let lhs = sum.value();
    let rel_error = relative_error(lhs, rhs);
    let condition = if lhs.norm() == T::zero() {
        T::infinity()
    } else {
        sum.magnitude() / lhs.norm()
    };
    let status = if rel_error <= tol { Status::Pass } else { Status::Fail };
    Ok(Verification {
        lhs,
        rhs,
        rel_error,
        condition,
        status,
    })
}
