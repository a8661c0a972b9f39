//! Closed-form entries `F`, `G` of the geometric specializations
//! `a(t) = a q^t`, `c_j(k) = x_j q^{±mk}`, normalized so `F_{n0} = G_{n0} = 1`.
//!
//! Callers guarantee `col ≤ row`, `row ≠ col` and matching dimensions.

use num_complex::Complex;

use crate::error::Result;
use crate::multiindex::{mul_delta_ratio, MultiIndex};
use crate::scalar::{ipow, Scalar};
use crate::theta::{EllipticContext, Term};

/// Base point and progression shared by the three geometric kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct GeomParams<T> {
    pub m: i64,
    pub a: Complex<T>,
    pub x: Vec<Complex<T>>,
}

impl<T: Scalar> GeomParams<T> {
    /// `X = x_1 ⋯ x_r`.
    pub fn x_prod(&self) -> Complex<T> {
        self.x.iter().fold(Complex::new(T::one(), T::zero()), |acc, v| acc * v)
    }
}

/// `∏_{i,j} (q^{-m s_j} x_i/x_j; q^m)_{k_i} / (q^m x_i/x_j; q^m)_{k_i}`.
fn cross_factor<T: Scalar>(
    term: &mut Term<'_, T>,
    x: &[Complex<T>],
    qm: Complex<T>,
    s: &MultiIndex,
    k: &MultiIndex,
) -> Result<()> {
    for i in 0..x.len() {
        for j in 0..x.len() {
            let ratio = x[i] / x[j];
            term.poch(ipow(qm, -s.get(j)) * ratio, qm, k.get(i))?;
            term.div_poch(qm * ratio, qm, k.get(i))?;
        }
    }
    Ok(())
}

pub(crate) fn ar_pos_f<T: Scalar>(
    g: &GeomParams<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let big_x = g.x_prod();
    let (nn, kk) = (n.total(), k.total());
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, k)?;
    term.poch(a * big_x * ctx.q_pow(nn), q, m * kk)?;
    term.div_poch(a * big_x * q, q, m * kk)?;
    term.mul(ctx.q_pow(m * kk));
    cross_factor(&mut term, x, qm, n, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        term.theta_ratio(big_x * xi * ctx.q_pow(m * (kk + ki)), big_x * xi)?;
        term.poch(xi / a, q, m * ki)?.poch(big_x * xi, qm, kk)?;
        term.div_poch(xi * ctx.q_pow(1 - nn) / a, q, m * ki)?;
        term.div_poch(big_x * xi * ctx.q_pow(m * (n.get(i) + 1)), qm, kk)?;
    }
    term.value()
}

pub(crate) fn ar_pos_g<T: Scalar>(
    g: &GeomParams<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let big_x = g.x_prod();
    let (kk, ll) = (k.total(), l.total());
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, l)?;
    term.theta_ratio(a * big_x * ctx.q_pow((m + 1) * ll), a * big_x)?;
    term.poch(a * big_x, q, ll)?.div_poch(a * big_x * ctx.q_pow(m * kk + 1), q, ll)?;
    term.mul(ctx.q_pow(m * ll));
    cross_factor(&mut term, x, qm, k, l)?;
    for (i, &xi) in x.iter().enumerate() {
        let li = l.get(i);
        term.theta_ratio(a * ctx.q_pow(ll - m * li) / xi, a / xi)?;
        term.poch(a / xi, q, ll)?.poch(big_x * xi * ctx.q_pow(m * kk), qm, li)?;
        term.div_poch(a * ctx.q_pow(1 - m * k.get(i)) / xi, q, ll)?;
        term.div_poch(big_x * xi * qm, qm, li)?;
    }
    term.value()
}

pub(crate) fn ar_neg_f<T: Scalar>(
    g: &GeomParams<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let big_x = g.x_prod();
    let (nn, kk) = (n.total(), k.total());
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, k)?;
    term.poch(big_x / a, q, m * kk)?;
    term.div_poch(big_x * ctx.q_pow(1 - nn) / a, q, m * kk)?;
    term.mul(ctx.q_pow(m * kk));
    cross_factor(&mut term, x, qm, n, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        term.theta_ratio(big_x * xi * ctx.q_pow(m * (kk + ki)), big_x * xi)?;
        term.poch(a * xi * ctx.q_pow(nn), q, m * ki)?.poch(big_x * xi, qm, kk)?;
        term.div_poch(a * xi * q, q, m * ki)?;
        term.div_poch(big_x * xi * ctx.q_pow(m * (n.get(i) + 1)), qm, kk)?;
    }
    term.value()
}

pub(crate) fn ar_neg_g<T: Scalar>(
    g: &GeomParams<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let big_x = g.x_prod();
    let (kk, ll) = (k.total(), l.total());
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, l)?;
    term.theta_ratio(big_x * ctx.q_pow((m - 1) * ll) / a, big_x / a)?;
    term.poch(a / big_x, q, ll)?.div_poch(a * ctx.q_pow(1 - m * kk) / big_x, q, ll)?;
    term.mul(ctx.q_pow(ll));
    cross_factor(&mut term, x, qm, k, l)?;
    for (i, &xi) in x.iter().enumerate() {
        let li = l.get(i);
        term.theta_ratio(a * xi * ctx.q_pow(ll + m * li), a * xi)?;
        term.poch(a * xi, q, ll)?.poch(big_x * xi * ctx.q_pow(m * kk), qm, li)?;
        term.div_poch(a * xi * ctx.q_pow(m * k.get(i) + 1), q, ll)?;
        term.div_poch(big_x * xi * qm, qm, li)?;
    }
    term.value()
}

pub(crate) fn bcr_f<T: Scalar>(
    g: &GeomParams<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let (nn, kk) = (n.total(), k.total());
    let r = x.len();
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, k)?;
    term.mul(ctx.q_pow(m * kk));
    for i in 0..r {
        for j in i..r {
            let xx = x[i] * x[j];
            term.theta_ratio(xx * ctx.q_pow(m * (k.get(i) + k.get(j))), xx)?;
        }
    }
    cross_factor(&mut term, x, qm, n, k)?;
    for i in 0..r {
        for j in 0..r {
            let xx = x[i] * x[j];
            term.poch(xx, qm, k.get(i))?;
            term.div_poch(ctx.q_pow(m * (n.get(j) + 1)) * xx, qm, k.get(i))?;
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        let mk = m * k.get(i);
        term.poch(a * xi * ctx.q_pow(nn), q, mk)?.poch(xi / a, q, mk)?;
        term.div_poch(a * xi * q, q, mk)?.div_poch(xi * ctx.q_pow(1 - nn) / a, q, mk)?;
    }
    term.value()
}

pub(crate) fn bcr_g<T: Scalar>(
    g: &GeomParams<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let (q, m, a, x) = (ctx.q(), g.m, g.a, &g.x);
    let qm = ctx.q_pow(m);
    let ll = l.total();
    let r = x.len();
    let mut term = Term::new(ctx);
    mul_delta_ratio(&mut term, x, qm, l)?;
    term.mul(ctx.q_pow(m * ll));
    for i in 0..r {
        for j in i + 1..r {
            let xx = x[i] * x[j];
            term.theta_ratio(xx * ctx.q_pow(m * (l.get(i) + l.get(j))), xx)?;
        }
    }
    cross_factor(&mut term, x, qm, k, l)?;
    for i in 0..r {
        for j in 0..r {
            let xx = x[i] * x[j];
            term.poch(xx * ctx.q_pow(m * k.get(j)), qm, l.get(i))?;
            term.div_poch(xx * qm, qm, l.get(i))?;
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        let (li, ki) = (l.get(i), k.get(i));
        term.theta_ratio(a * xi * ctx.q_pow(ll + m * li), a * xi)?;
        term.theta_ratio(a * ctx.q_pow(ll - m * li) / xi, a / xi)?;
        term.poch(a * xi, q, ll)?.poch(a / xi, q, ll)?;
        term.div_poch(a * ctx.q_pow(1 + m * ki) * xi, q, ll)?;
        term.div_poch(a * ctx.q_pow(1 - m * ki) / xi, q, ll)?;
    }
    term.value()
}
