//! Entries of the general `A_r`, `BC_r` and `C_r` inversion pairs.
//!
//! Callers guarantee `col ≤ row` and `row ≠ col`; dimensions already match.

use num_complex::Complex;

use super::oracle::SequenceOracle;
use crate::error::Result;
use crate::multiindex::MultiIndex;
use crate::scalar::{ipow, Scalar};
use crate::theta::{EllipticContext, Term};

struct Cols<T> {
    vals: Vec<Complex<T>>,
    prod: Complex<T>,
}

fn cols<T: Scalar>(seqs: &dyn SequenceOracle<T>, k: &MultiIndex) -> Result<Cols<T>> {
    let vals = (0..k.dim())
        .map(|j| seqs.c(j, k.get(j)))
        .collect::<Result<Vec<_>>>()?;
    let prod = vals.iter().fold(Complex::new(T::one(), T::zero()), |acc, v| acc * v);
    Ok(Cols { vals, prod })
}

fn theta_pm<T: Scalar>(term: &mut Term<'_, T>, x: Complex<T>, y: Complex<T>) -> Result<()> {
    term.theta(x * y)?.theta(x / y)?;
    Ok(())
}

fn div_theta_pm<T: Scalar>(term: &mut Term<'_, T>, x: Complex<T>, y: Complex<T>) -> Result<()> {
    term.div_theta(x * y)?.div_theta(x / y)?;
    Ok(())
}

/// `θ(z C_k) ∏_j θ(z / c_j(k_j))`.
fn ar_block<T: Scalar>(term: &mut Term<'_, T>, z: Complex<T>, ck: &Cols<T>, inverse: bool) -> Result<()> {
    if inverse {
        term.div_theta(z * ck.prod)?;
        for c in &ck.vals {
            term.div_theta(z / c)?;
        }
    } else {
        term.theta(z * ck.prod)?;
        for c in &ck.vals {
            term.theta(z / c)?;
        }
    }
    Ok(())
}

pub(crate) fn ar_f<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let ck = cols(seqs, k)?;
    let mut term = Term::new(ctx);
    for t in k.total()..n.total() {
        ar_block(&mut term, seqs.a(t)?, &ck, false)?;
    }
    for i in 0..n.dim() {
        for t in k.get(i) + 1..=n.get(i) {
            ar_block(&mut term, seqs.c(i, t)?, &ck, true)?;
        }
    }
    Ok(term)
}

pub(crate) fn ar_g<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let r = k.dim();
    let ck = cols(seqs, k)?;
    let cl = cols(seqs, l)?;
    let al = seqs.a(l.total())?;
    let ak = seqs.a(k.total())?;
    let mut term = Term::new(ctx);
    term.theta(al * cl.prod)?.div_theta(ak * ck.prod)?;
    for i in 0..r {
        for j in i + 1..r {
            term.theta(cl.vals[i] / cl.vals[j])?.div_theta(ck.vals[i] / ck.vals[j])?;
        }
    }
    for j in 0..r {
        let e = j as i64 + 1;
        term.mul(ipow(cl.vals[j], e)).theta(al / cl.vals[j])?;
        term.div(ipow(ck.vals[j], e))?.div_theta(ak / ck.vals[j])?;
    }
    for t in l.total() + 1..=k.total() {
        ar_block(&mut term, seqs.a(t)?, &ck, false)?;
    }
    for i in 0..r {
        for t in l.get(i)..k.get(i) {
            ar_block(&mut term, seqs.c(i, t)?, &ck, true)?;
        }
    }
    Ok(term)
}

pub(crate) fn bcr_f<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let ck = cols(seqs, k)?;
    let mut term = Term::new(ctx);
    for cj in &ck.vals {
        for t in k.total()..n.total() {
            theta_pm(&mut term, *cj, seqs.a(t)?)?;
        }
    }
    for i in 0..n.dim() {
        for t in k.get(i) + 1..=n.get(i) {
            let ct = seqs.c(i, t)?;
            for cj in &ck.vals {
                div_theta_pm(&mut term, *cj, ct)?;
            }
        }
    }
    Ok(term)
}

pub(crate) fn bcr_g<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let r = k.dim();
    let ck = cols(seqs, k)?;
    let cl = cols(seqs, l)?;
    let al = seqs.a(l.total())?;
    let ak = seqs.a(k.total())?;
    let mut term = Term::new(ctx);
    for i in 0..r {
        for j in i + 1..r {
            theta_pm(&mut term, cl.vals[j], cl.vals[i])?;
            div_theta_pm(&mut term, ck.vals[j], ck.vals[i])?;
        }
    }
    for j in 0..r {
        let e = j as i64 + 1;
        term.mul(ipow(ck.vals[j], e));
        theta_pm(&mut term, cl.vals[j], al)?;
        term.div(ipow(cl.vals[j], e))?;
        div_theta_pm(&mut term, ck.vals[j], ak)?;
    }
    for cj in &ck.vals {
        for t in l.total() + 1..=k.total() {
            theta_pm(&mut term, *cj, seqs.a(t)?)?;
        }
    }
    for i in 0..r {
        for t in l.get(i)..k.get(i) {
            let ct = seqs.c(i, t)?;
            for cj in &ck.vals {
                div_theta_pm(&mut term, *cj, ct)?;
            }
        }
    }
    Ok(term)
}

/// `θ(z b / C_k) ∏_j θ(z c_j(k_j))`.
fn cr_num<T: Scalar>(term: &mut Term<'_, T>, z: Complex<T>, b: Complex<T>, ck: &Cols<T>) -> Result<()> {
    term.theta(z * b / ck.prod)?;
    for c in &ck.vals {
        term.theta(z * c)?;
    }
    Ok(())
}

/// Divides by `θ(z C_k / b) ∏_j θ(z / c_j(k_j))`.
fn cr_den<T: Scalar>(term: &mut Term<'_, T>, z: Complex<T>, b: Complex<T>, ck: &Cols<T>) -> Result<()> {
    term.div_theta(z * ck.prod / b)?;
    for c in &ck.vals {
        term.div_theta(z / c)?;
    }
    Ok(())
}

pub(crate) fn cr_f<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    b: Complex<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let ck = cols(seqs, k)?;
    let mut term = Term::new(ctx);
    for i in 0..n.dim() {
        for t in k.get(i)..n.get(i) {
            cr_num(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
        for t in k.get(i) + 1..=n.get(i) {
            cr_den(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
    }
    Ok(term)
}

pub(crate) fn cr_g<'c, T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    b: Complex<T>,
    k: &MultiIndex,
    l: &MultiIndex,
    ctx: &'c EllipticContext<T>,
) -> Result<Term<'c, T>> {
    let r = k.dim();
    let ck = cols(seqs, k)?;
    let cl = cols(seqs, l)?;
    let mut term = Term::new(ctx);
    for i in 0..r {
        for j in i + 1..r {
            theta_pm(&mut term, cl.vals[j], cl.vals[i])?;
            div_theta_pm(&mut term, ck.vals[j], ck.vals[i])?;
        }
    }
    for j in 0..r {
        let e = (r - j) as i64;
        term.mul(ipow(cl.vals[j], e)).theta(cl.vals[j] * cl.vals[j])?;
        term.div(ipow(ck.vals[j], e))?.div_theta(ck.vals[j] * ck.vals[j])?;
    }
    for i in 0..r {
        for t in l.get(i) + 1..=k.get(i) {
            cr_num(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
        for t in l.get(i)..k.get(i) {
            cr_den(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
    }
    Ok(term)
}

/// Summand of the `A_r` vanishing lemma at `k`.
pub(crate) fn afg_term<T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let r = n.dim();
    let ck = cols(seqs, k)?;
    let mut term = Term::new(ctx);
    for t in 1..n.total() {
        ar_block(&mut term, seqs.a(t)?, &ck, false)?;
    }
    for i in 0..r {
        for t in (0..=n.get(i)).filter(|&t| t != k.get(i)) {
            ar_block(&mut term, seqs.c(i, t)?, &ck, true)?;
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            term.div_theta(ck.vals[i] / ck.vals[j])?;
        }
    }
    for (j, c) in ck.vals.iter().enumerate() {
        term.div(ipow(*c, j as i64 + 1))?;
    }
    term.value()
}

/// Summand of the `C_r` vanishing lemma at `k`.
pub(crate) fn cfg_term<T: Scalar>(
    seqs: &dyn SequenceOracle<T>,
    b: Complex<T>,
    n: &MultiIndex,
    k: &MultiIndex,
    ctx: &EllipticContext<T>,
) -> Result<Complex<T>> {
    let r = n.dim();
    let ck = cols(seqs, k)?;
    let mut term = Term::new(ctx);
    for i in 0..r {
        for j in i + 1..r {
            term.theta(ck.vals[j] * ck.vals[i])?.div_theta(ck.vals[j] / ck.vals[i])?;
        }
    }
    for (j, c) in ck.vals.iter().enumerate() {
        term.theta(*c * b / ck.prod)?.div(ipow(*c, (r - j) as i64))?;
    }
    for i in 0..r {
        if n.get(i) == 0 {
            // ∏_{t=1}^{-1} is the reciprocal of the t = 0 factor
            let c0 = seqs.c(i, 0)?;
            term.div_theta(c0 * b / ck.prod)?;
            for c in &ck.vals {
                term.div_theta(c0 * c)?;
            }
        }
        for t in 1..n.get(i) {
            cr_num(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
        for t in (0..=n.get(i)).filter(|&t| t != k.get(i)) {
            cr_den(&mut term, seqs.c(i, t)?, b, &ck)?;
        }
    }
    term.value()
}
