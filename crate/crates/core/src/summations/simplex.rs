//! Box theorems terminated by a parameter against their simplex companions
//! with the companion parameters pinned to the box corner.

use num_complex::Complex;

use super::params::{indexed, Params};
use super::{complete_params, lhs_condition, relative_error, Extent, IdentityId};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{ipow, Scalar};
use crate::theta::EllipticContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecializationPair {
    NewArJackson,
    ArQuadraticI,
    ArQuadraticII,
    DrQuadratic,
    DrCubic,
}

impl SpecializationPair {
    pub const ALL: [SpecializationPair; 5] = [
        SpecializationPair::NewArJackson,
        SpecializationPair::ArQuadraticI,
        SpecializationPair::ArQuadraticII,
        SpecializationPair::DrQuadratic,
        SpecializationPair::DrCubic,
    ];

    /// `(box theorem, simplex companion)`.
    pub fn ids(self) -> (IdentityId, IdentityId) {
        match self {
            SpecializationPair::NewArJackson => (IdentityId::NewArJackson, IdentityId::NewArJacksonSimplex),
            SpecializationPair::ArQuadraticI => (IdentityId::ArQuadraticI, IdentityId::ArQuadraticISimplex),
            SpecializationPair::ArQuadraticII => (IdentityId::ArQuadraticII, IdentityId::ArQuadraticIISimplex),
            SpecializationPair::DrQuadratic => (IdentityId::DrQuadratic, IdentityId::DrQuadraticSimplex1),
            SpecializationPair::DrCubic => (IdentityId::DrCubic, IdentityId::DrCubicSimplexA),
        }
    }

    pub fn name(self) -> String {
        let (b, s) = self.ids();
        format!("{}/{}", b.name(), s.name())
    }

    /// Parameters the caller supplies; the rest are fixed by the pinning.
    pub fn inputs(self, r: usize) -> Vec<String> {
        let mut out: Vec<String> = match self {
            SpecializationPair::NewArJackson => vec!["a".into(), "b".into(), "d".into()],
            SpecializationPair::ArQuadraticI | SpecializationPair::ArQuadraticII => vec!["a".into(), "c".into()],
            SpecializationPair::DrQuadratic | SpecializationPair::DrCubic => vec!["a".into()],
        };
        out.extend(indexed("x", r));
        out
    }
}

/// `b_j = q^{-m n_j} / x_j`.
fn pinned<T: Scalar>(x: &[Complex<T>], n: &MultiIndex, m: i64, ctx: &EllipticContext<T>) -> Vec<Complex<T>> {
    x.iter().enumerate().map(|(j, xj)| ctx.q_pow(-m * n.get(j)) / xj).collect()
}

/// Both left-hand sides compared.
#[derive(Debug, Clone, Copy)]
pub struct Specialization<T> {
    pub rel_error: T,
    /// The worse of the two term-magnitude conditions.
    pub condition: T,
}

/// Relative difference of the two left-hand sides.
pub fn simplex_specialization_residual<T: Scalar>(
    pair: SpecializationPair,
    n: &MultiIndex,
    big_n: i64,
    params: &Params<T>,
    ctx: &EllipticContext<T>,
) -> Result<Specialization<T>> {
    let r = n.dim();
    if big_n < 0 {
        return Err(Error::Domain(format!("simplex size {big_n} is negative")));
    }
    let a = params.get("a")?;
    let x = params.vec("x", r)?;
    let q = ctx.q();
    let terminator = ctx.q_pow(-big_n);
    let (box_id, simplex_id) = pair.ids();
    let (box_params, simplex_params) = match pair {
        SpecializationPair::NewArJackson => {
            let (b, d) = (params.get("b")?, params.get("d")?);
            let base = Params::new().with("a", a).with("b", b).with("d", d).with_vec("x", &x);
            let mut cs = pinned(&x, n, 1, ctx);
            cs.push(a * a * ctx.q_pow(n.total() + big_n + 1) / (b * d));
            (base.clone().with("c", terminator), base.with_vec("c", &cs))
        }
        SpecializationPair::ArQuadraticI => {
            let c = params.get("c")?;
            let thm = complete_params(
                box_id,
                r,
                Extent::Box(n.clone()),
                Params::new().with("a", a).with("b", terminator).with("c", c).with_vec("x", &x),
                ctx,
            )?;
            let mut bs = pinned(&x, n, 2, ctx);
            bs.push(c);
            let d = thm.params.get("d")?;
            (thm.params, Params::new().with("a", a).with("c", d).with_vec("b", &bs).with_vec("x", &x))
        }
        SpecializationPair::ArQuadraticII => {
            let c = params.get("c")?;
            let thm = complete_params(
                box_id,
                r,
                Extent::Box(n.clone()),
                Params::new().with("a", a).with("b", terminator).with("c", c).with_vec("x", &x),
                ctx,
            )?;
            let mut bs = pinned(&x, n, 2, ctx);
            bs.push(c);
            bs.push(thm.params.get("d")?);
            (thm.params, Params::new().with("a", a).with_vec("b", &bs).with_vec("x", &x))
        }
        SpecializationPair::DrQuadratic => (
            Params::new().with("a", a).with("b", terminator).with_vec("x", &x),
            Params::new().with("a", a).with_vec("b", &pinned(&x, n, 2, ctx)).with_vec("x", &x),
        ),
        SpecializationPair::DrCubic => {
            let root = ipow(q.sqrt(), big_n);
            let xs: Vec<_> = x.iter().map(|xi| a * xi / root).collect();
            (
                Params::new().with("a", root).with_vec("x", &xs),
                Params::new().with("a", a).with_vec("b", &pinned(&x, n, 3, ctx)).with_vec("x", &x),
            )
        }
    };
    let boxed = complete_params(box_id, r, Extent::Box(n.clone()), box_params, ctx)?;
    let simplex = complete_params(simplex_id, r, Extent::Simplex(big_n), simplex_params, ctx)?;
    let (u, cu) = lhs_condition(&boxed)?;
    let (v, cv) = lhs_condition(&simplex)?;
    Ok(Specialization {
        rel_error: relative_error(u, v),
        condition: if cu > cv { cu } else { cv },
    })
}
