//! Numerical evaluation and verification of elliptic hypergeometric
//! identities: theta functions and elliptic shifted factorials,
//! multidimensional matrix inversions of `A_r`, `BC_r` and `C_r` type,
//! root-system summation formulas, and a randomized verification harness.
//!
//! All evaluators are generic over the real type through [`Scalar`]; the
//! aliases below fix the usual double-precision instantiation.

pub mod accum;
pub mod error;
pub mod harness;
pub mod inversions;
pub mod multiindex;
pub mod scalar;
pub mod summations;
pub mod theta;

pub use accum::{CompensatedSum, Residual};
pub use error::{Error, Result};
pub use multiindex::{iterate_box, iterate_simplex, weights, weyl_delta, Domain, MultiIndex};
pub use scalar::Scalar;
pub use summations::{
    bailey_pair_residual, complete_params, lhs, rhs, simplex_specialization_residual, summand, Specialization, verify, BaileyPair, BaileyPairSpec,
    Extent, IdentityId, IdentityInstance, Params, SpecializationPair, Status, Verification,
};
pub use theta::{
    elliptic_pochhammer, gustafson_sum, pochhammer_base, pochhammer_multi, theta_eval, theta_product,
    EllipticContext, ProductMode, Term, ThetaProfile,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type Context64 = EllipticContext<f64>;
pub type Context32 = EllipticContext<f32>;
