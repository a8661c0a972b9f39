//! Multidimensional elliptic matrix inversions.
//!
//! Three general lower-triangular pairs `(f, g)` driven by arbitrary
//! sequences, their geometric specializations `(F, G)`, the identity
//! `Σ_{l≤k≤n} f_{nk} g_{kl} = δ_{nl}` as a numerical residual, and the two
//! vanishing sums underlying the proofs.
//!
//! ```
//! use ehs_core::inversions::{delta_residual, GeomParams, InversionKind, Order};
//! use ehs_core::{Complex64, Context64, MultiIndex};
//!
//! let ctx = Context64::new(Complex64::new(0.2, 0.1), Complex64::new(0.6, 0.3)).unwrap();
//! let kind = InversionKind::GeomBCr(GeomParams {
//!     m: 2,
//!     a: Complex64::new(0.8, 0.4),
//!     x: vec![Complex64::new(1.1, -0.2), Complex64::new(0.7, 0.5)],
//! });
//! let n = MultiIndex::from([2, 1]);
//! let res = delta_residual(&kind, None, &n, &MultiIndex::zeros(2), Order::FG, &ctx).unwrap();
//! assert!(res.normalized() < 1e-10);
//! ```

mod general;
mod geometric;
pub mod krattenthaler;
mod oracle;

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::accum::{CompensatedSum, Residual};
use crate::error::{Error, Result};
use crate::multiindex::{iterate_box, MultiIndex};
use crate::scalar::{one, rel_diff, Scalar};
use crate::theta::{EllipticContext, Term, VanishingSum};

pub use geometric::GeomParams;
pub use krattenthaler::{krattenthaler_delta, krattenthaler_f, krattenthaler_g};
pub use oracle::{ClosureOracle, GeometricOracle, SequenceOracle, ShiftedOracle, Table, TableOracle};

#[derive(Debug, Clone, PartialEq)]
pub enum InversionKind<T> {
    GeneralAr,
    GeneralBCr,
    GeneralCr { b: Complex<T> },
    GeomArPos(GeomParams<T>),
    GeomArNeg(GeomParams<T>),
    GeomBCr(GeomParams<T>),
}

/// Discriminant of [`InversionKind`], used for catalogs and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindTag {
    Ar,
    Bcr,
    Cr,
    ArGeomPos,
    ArGeomNeg,
    BcrGeom,
}

impl KindTag {
    pub const ALL: [KindTag; 6] = [
        KindTag::Ar,
        KindTag::Bcr,
        KindTag::Cr,
        KindTag::ArGeomPos,
        KindTag::ArGeomNeg,
        KindTag::BcrGeom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KindTag::Ar => "ar",
            KindTag::Bcr => "bcr",
            KindTag::Cr => "cr",
            KindTag::ArGeomPos => "ar-geom-pos",
            KindTag::ArGeomNeg => "ar-geom-neg",
            KindTag::BcrGeom => "bcr-geom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown inversion kind `{s}`")))
    }

    pub fn is_geometric(self) -> bool {
        matches!(self, KindTag::ArGeomPos | KindTag::ArGeomNeg | KindTag::BcrGeom)
    }

    pub fn description(self) -> &'static str {
        match self {
            KindTag::Ar => "general A_r pair in sequences a(t), c_j(k)",
            KindTag::Bcr => "general BC_r pair in sequences a(t), c_j(k)",
            KindTag::Cr => "general C_r pair in sequences c_j(k) and a scalar b",
            KindTag::ArGeomPos => "A_r pair at a(t) = a q^t, c_j(k) = x_j q^{mk}",
            KindTag::ArGeomNeg => "A_r pair at a(t) = a q^t, c_j(k) = x_j^{-1} q^{-mk}",
            KindTag::BcrGeom => "BC_r pair at a(t) = a q^t, c_j(k) = x_j q^{mk}",
        }
    }
}

impl fmt::Display for KindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<T: Scalar> InversionKind<T> {
    pub fn tag(&self) -> KindTag {
        match self {
            InversionKind::GeneralAr => KindTag::Ar,
            InversionKind::GeneralBCr => KindTag::Bcr,
            InversionKind::GeneralCr { .. } => KindTag::Cr,
            InversionKind::GeomArPos(_) => KindTag::ArGeomPos,
            InversionKind::GeomArNeg(_) => KindTag::ArGeomNeg,
            InversionKind::GeomBCr(_) => KindTag::BcrGeom,
        }
    }

    pub fn geom(&self) -> Option<&GeomParams<T>> {
        match self {
            InversionKind::GeomArPos(g) | InversionKind::GeomArNeg(g) | InversionKind::GeomBCr(g) => Some(g),
            _ => None,
        }
    }

    /// The general kind and oracle that this geometric kind specializes.
    pub fn general_counterpart(&self, q: Complex<T>) -> Option<(InversionKind<T>, GeometricOracle<T>)> {
        let oracle = |g: &GeomParams<T>, inverted| GeometricOracle {
            a: g.a,
            q,
            m: g.m,
            x: g.x.clone(),
            inverted,
        };
        match self {
            InversionKind::GeomArPos(g) => Some((InversionKind::GeneralAr, oracle(g, false))),
            InversionKind::GeomArNeg(g) => Some((InversionKind::GeneralAr, oracle(g, true))),
            InversionKind::GeomBCr(g) => Some((InversionKind::GeneralBCr, oracle(g, false))),
            _ => None,
        }
    }
}

/// Which matrix of a pair to read.
///
/// For general kinds `Forward`/`Inverse` are `f`/`g` and the normalized
/// variants are `F_{nk} = g_{k0} f_{nk} / f_{n0}`, `G_{kl} = f_{l0} g_{kl} / g_{k0}`.
/// For geometric kinds the normalized variants are the closed forms and
/// `Forward`/`Inverse` read the general counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Forward,
    Inverse,
    ForwardNormalized,
    InverseNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEntryRequest<T> {
    pub kind: InversionKind<T>,
    pub row: MultiIndex,
    pub col: MultiIndex,
    pub which: Which,
}

fn validate<T: Scalar>(kind: &InversionKind<T>, seqs: Option<&dyn SequenceOracle<T>>, r: usize) -> Result<()> {
    match kind.geom() {
        Some(g) => {
            if g.m < 1 {
                return Err(Error::Domain(format!("progression step m = {} must be positive", g.m)));
            }
            if g.x.len() != r {
                return Err(Error::Domain(format!("{} x values for dimension {r}", g.x.len())));
            }
            if g.a.norm() == T::zero() || g.x.iter().any(|x| x.norm() == T::zero()) {
                return Err(Error::Domain("geometric parameters must be nonzero".into()));
            }
        }
        None => {
            let s = seqs.ok_or_else(|| Error::MissingParameter(format!("{} needs a sequence oracle", kind.tag())))?;
            if s.dim() != r {
                return Err(Error::Domain(format!("oracle of dimension {} for dimension {r}", s.dim())));
            }
            match kind {
                InversionKind::GeneralCr { b } => {
                    if s.has_a() {
                        return Err(Error::InvalidOracle("the C_r inversion takes no a(t) sequence".into()));
                    }
                    if b.norm() == T::zero() {
                        return Err(Error::Domain("b must be nonzero".into()));
                    }
                }
                _ => {
                    if !s.has_a() {
                        return Err(Error::MissingParameter(format!("{} needs an a(t) sequence", kind.tag())));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Entry of `f` (`forward`) or `g`; assumes validated, `col ≤ row`, `col ≠ row`.
fn raw_general<'c, T: Scalar>(
    kind: &InversionKind<T>,
    seqs: &dyn SequenceOracle<T>,
    forward: bool,
    row: &MultiIndex,
    col: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    if row == col {
        return Ok(Term::new(ctx));
    }
    match (kind, forward) {
        (InversionKind::GeneralAr, true) => general::ar_f(seqs, row, col, ctx),
        (InversionKind::GeneralAr, false) => general::ar_g(seqs, row, col, ctx),
        (InversionKind::GeneralBCr, true) => general::bcr_f(seqs, row, col, ctx),
        (InversionKind::GeneralBCr, false) => general::bcr_g(seqs, row, col, ctx),
        (InversionKind::GeneralCr { b }, true) => general::cr_f(seqs, *b, row, col, ctx),
        (InversionKind::GeneralCr { b }, false) => general::cr_g(seqs, *b, row, col, ctx),
        _ => unreachable!("raw_general called with a geometric kind"),
    }
}

fn general_entry<T: Scalar>(
    kind: &InversionKind<T>,
    seqs: &dyn SequenceOracle<T>,
    forward: bool,
    row: &MultiIndex,
    col: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    if !col.le(row) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    raw_general(kind, seqs, forward, row, col, ctx)?.value()
}

fn normalized_general<T: Scalar>(
    kind: &InversionKind<T>,
    seqs: &dyn SequenceOracle<T>,
    forward: bool,
    row: &MultiIndex,
    col: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    if !col.le(row) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    if col.is_zero() {
        return Ok(one());
    }
    let zero = MultiIndex::zeros(row.dim());
    let (outer, inner) = if forward { (false, true) } else { (true, false) };
    // F_{nk} = g_{k0} f_{nk} / f_{n0};  G_{kl} = f_{l0} g_{kl} / g_{k0}
    // Kept scaled throughout: the raw entries may lie outside the float range.
    let mut acc = raw_general(kind, seqs, outer, col, &zero, ctx)?;
    acc.mul_term(&raw_general(kind, seqs, inner, row, col, ctx)?);
    let den = raw_general(kind, seqs, inner, row, &zero, ctx)?;
    acc.div_term(&den).map_err(|_| Error::Degenerate("normalizing entry vanishes".into()))?;
    acc.value()
}

fn closed_form<T: Scalar>(
    kind: &InversionKind<T>,
    forward: bool,
    row: &MultiIndex,
    col: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    if !col.le(row) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    match (kind, forward) {
        (InversionKind::GeomArPos(g), true) => geometric::ar_pos_f(g, row, col, ctx),
        (InversionKind::GeomArPos(g), false) => geometric::ar_pos_g(g, row, col, ctx),
        (InversionKind::GeomArNeg(g), true) => geometric::ar_neg_f(g, row, col, ctx),
        (InversionKind::GeomArNeg(g), false) => geometric::ar_neg_g(g, row, col, ctx),
        (InversionKind::GeomBCr(g), true) => geometric::bcr_f(g, row, col, ctx),
        (InversionKind::GeomBCr(g), false) => geometric::bcr_g(g, row, col, ctx),
        _ => unreachable!("closed_form called with a general kind"),
    }
}

/// One matrix entry. General kinds require `seqs`; geometric kinds ignore it.
pub fn entry<T: Scalar>(
    req: &MatrixEntryRequest<T>,
    seqs: Option<&dyn SequenceOracle<T>>,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let r = req.row.dim();
    if req.col.dim() != r || r == 0 {
        return Err(Error::Domain(format!(
            "row {} and column {} must share a positive dimension",
            req.row, req.col
        )));
    }
    validate(&req.kind, seqs, r)?;
    let forward = matches!(req.which, Which::Forward | Which::ForwardNormalized);
    let normalized = matches!(req.which, Which::ForwardNormalized | Which::InverseNormalized);
    match req.kind.general_counterpart(ctx.q()) {
        Some((general, oracle)) => {
            if normalized {
                closed_form(&req.kind, forward, &req.row, &req.col, ctx)
            } else {
                general_entry(&general, &oracle, forward, &req.row, &req.col, ctx)
            }
        }
        None => {
            let seqs = seqs.expect("validated");
            if normalized {
                normalized_general(&req.kind, seqs, forward, &req.row, &req.col, ctx)
            } else {
                general_entry(&req.kind, seqs, forward, &req.row, &req.col, ctx)
            }
        }
    }
}

/// Order of the product in the δ-identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// `Σ f_{nk} g_{kl}`.
    FG,
    /// `Σ g_{nk} f_{kl}`.
    GF,
}

/// `Σ_{l≤k≤n} f_{nk} g_{kl} - δ_{nl}` (or the `g f` order), normalized by
/// `Σ_k |f_{nk} g_{kl}| + δ_{nl}`. Geometric kinds use their `(F, G)` pair.
pub fn delta_residual<T: Scalar>(
    kind: &InversionKind<T>,
    seqs: Option<&dyn SequenceOracle<T>>,
    n: &MultiIndex,
    l: &MultiIndex,
    order: Order,
    ctx: &EllipticContext<T>,
) -> Result<Residual<T>> {
    if !l.le(n) || !l.is_nonnegative() {
        return Err(Error::Domain(format!("delta residual needs 0 ≤ l ≤ n, got l = {l}, n = {n}")));
    }
    let (first, second) = if kind.geom().is_some() {
        (Which::ForwardNormalized, Which::InverseNormalized)
    } else {
        (Which::Forward, Which::Inverse)
    };
    let (left, right) = match order {
        Order::FG => (first, second),
        Order::GF => (second, first),
    };
    let mut acc = CompensatedSum::new();
    for off in iterate_box(&(n - l)) {
        let k = &off + l;
        let lhs = MatrixEntryRequest {
            kind: kind.clone(),
            row: n.clone(),
            col: k.clone(),
            which: left,
        };
        let rhs = MatrixEntryRequest {
            kind: kind.clone(),
            row: k,
            col: l.clone(),
            which: right,
        };
        acc.add(entry(&lhs, seqs, ctx)? * entry(&rhs, seqs, ctx)?);
    }
    if n == l {
        acc.add(-one::<T>());
    }
    Ok(Residual::from_sum(&acc))
}

/// Largest relative gap between the closed-form `F_{nk}`, `G_{nk}` of a
/// geometric kind and the normalized general entries at its oracle.
pub fn normalization_link<T: Scalar>(
    kind: &InversionKind<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<T> {
    let (general, oracle) = kind
        .general_counterpart(ctx.q())
        .ok_or_else(|| Error::Domain(format!("{} is not a geometric kind", kind.tag())))?;
    let mut worst = T::zero();
    for which in [Which::ForwardNormalized, Which::InverseNormalized] {
        let closed = entry(
            &MatrixEntryRequest {
                kind: kind.clone(),
                row: n.clone(),
                col: k.clone(),
                which,
            },
            None,
            ctx,
        )?;
        let via = entry(
            &MatrixEntryRequest {
                kind: general.clone(),
                row: n.clone(),
                col: k.clone(),
                which,
            },
            Some(&oracle),
            ctx,
        )?;
        worst = worst.max(rel_diff(closed, via));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma<T> {
    /// The `A_r` sum; reads `a(1..|n|-1)` and `c_j(0..=n_j)`.
    Afg,
    /// The `C_r` sum with scalar `b`; reads `c_j(0..=n_j)` only.
    Cfg { b: Complex<T> },
}

/// The vanishing sum over `0 ≤ k ≤ n` of the chosen lemma.
pub fn vanishing_lemma_sum<T: Scalar>(
    lemma: Lemma<T>,
    n: &MultiIndex,
    seqs: &dyn SequenceOracle<T>,
    ctx: &EllipticContext<T>,
) -> Result<VanishingSum<T>> {
    if !n.is_nonnegative() || n.total() < 1 {
        return Err(Error::Domain(format!("vanishing sum needs n ≥ 0 with |n| ≥ 1, got {n}")));
    }
    if seqs.dim() != n.dim() {
        return Err(Error::Domain(format!("oracle of dimension {} for n = {n}", seqs.dim())));
    }
    let terms = iterate_box(n)
        .map(|k| match lemma {
            Lemma::Afg => general::afg_term(seqs, n, &k, ctx),
            Lemma::Cfg { b } => general::cfg_term(seqs, b, n, &k, ctx),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VanishingSum::from_terms(terms))
}

#[cfg(test)]
mod tests;
