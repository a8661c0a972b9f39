//! Summands and closed forms of the catalog identities.
//!
//! Every function transcribes one display factor by factor. Composite
//! arguments are materialized and passed straight to the shifted factorial.

use num_complex::Complex;

use super::{Extent, IdentityId, IdentityInstance};
use crate::error::{Error, Result};
use crate::multiindex::{mul_delta_ratio, MultiIndex};
use crate::scalar::{ipow, Scalar};
use crate::theta::{EllipticContext, Term};

fn neg<T: Scalar>(z: Complex<T>) -> Complex<T> {
    -z
}

fn prod<T: Scalar>(zs: &[Complex<T>]) -> Complex<T> {
    zs.iter().fold(Complex::new(T::one(), T::zero()), |acc, z| acc * z)
}

/// Values an identity reads, fetched once per evaluation.
struct Env<'i, T> {
    ctx: &'i EllipticContext<T>,
    q: Complex<T>,
    r: usize,
    inst: &'i IdentityInstance<T>,
}

impl<'i, T: Scalar> Env<'i, T> {
    fn new(inst: &'i IdentityInstance<T>) -> Self {
        Self {
            ctx: &inst.ctx,
            q: inst.ctx.q(),
            r: inst.r,
            inst,
        }
    }

    fn s(&self, name: &str) -> Result<Complex<T>> {
        self.inst.params.get(name)
    }

    fn v(&self, prefix: &str, len: usize) -> Result<Vec<Complex<T>>> {
        self.inst.params.vec(prefix, len)
    }

    fn x(&self) -> Result<Vec<Complex<T>>> {
        self.v("x", self.r)
    }

    fn qp(&self, e: i64) -> Complex<T> {
        self.ctx.q_pow(e)
    }

    fn n(&self) -> Result<&'i MultiIndex> {
        match &self.inst.extent {
            Extent::Box(n) => Ok(n),
            Extent::Simplex(_) => Err(Error::Domain(format!("{} needs a box extent", self.inst.id.name()))),
        }
    }

    fn big_n(&self) -> Result<i64> {
        match &self.inst.extent {
            Extent::Simplex(n) => Ok(*n),
            Extent::Box(_) => Err(Error::Domain(format!("{} needs a simplex extent", self.inst.id.name()))),
        }
    }

    fn term(&self) -> Term<'i, T> {
        Term::new(self.ctx)
    }
}

/// `θ(z)/θ(w)`.
fn vwp<T: Scalar>(t: &mut Term<'_, T>, z: Complex<T>, w: Complex<T>) -> Result<()> {
    t.theta_ratio(z, w)?;
    Ok(())
}

/// `∏_{i,j} (q^{-m s_j} x_i/x_j; q^m)_{k_i} / (q^m x_i/x_j; q^m)_{k_i}`.
fn cross<T: Scalar>(t: &mut Term<'_, T>, e: &Env<'_, T>, x: &[Complex<T>], m: i64, s: &MultiIndex, k: &MultiIndex) -> Result<()> {
    let qm = e.qp(m);
    for i in 0..x.len() {
        for j in 0..x.len() {
            t.poch(e.qp(-m * s.get(j)) * x[i] / x[j], qm, k.get(i))?;
            t.div_poch(qm * x[i] / x[j], qm, k.get(i))?;
        }
    }
    Ok(())
}

/// `∏_{i≤r} ∏_{j≤len} 1/(q^m x_i/x_j; q^m)_{k_i}` for the simplex forms.
fn simplex_cross_den<T: Scalar>(t: &mut Term<'_, T>, e: &Env<'_, T>, x: &[Complex<T>], m: i64, k: &MultiIndex) -> Result<()> {
    let qm = e.qp(m);
    for i in 0..x.len() {
        for xj in x {
            t.div_poch(qm * x[i] / xj, qm, k.get(i))?;
        }
    }
    Ok(())
}

pub(super) fn summand<T: Scalar>(inst: &IdentityInstance<T>, k: &MultiIndex) -> Result<Complex<T>> {
    let e = Env::new(inst);
    if k.dim() != e.r {
        return Err(Error::Domain(format!("summation index {k} for dimension {}", e.r)));
    }
    match inst.id {
        IdentityId::ArJackson => ar_jackson(&e, k),
        IdentityId::CrJackson => cr_jackson(&e, k),
        IdentityId::NewArJackson => new_ar_jackson(&e, k),
        IdentityId::NewArJacksonSimplex => new_ar_jackson_simplex(&e, k),
        IdentityId::ArQuadraticI => ar_quadratic_i(&e, k),
        IdentityId::ArQuadraticISimplex => ar_quadratic_i_simplex(&e, k),
        IdentityId::ArQuadraticII => ar_quadratic_ii(&e, k),
        IdentityId::ArQuadraticIISimplex => ar_quadratic_ii_simplex(&e, k),
        IdentityId::DrQuadratic => dr_quadratic(&e, k),
        IdentityId::DrQuadraticSimplex1 => dr_quadratic_simplex1(&e, k),
        IdentityId::DrQuadraticSimplex2 => dr_quadratic_simplex2(&e, k),
        IdentityId::DrCubic => dr_cubic(&e, k),
        IdentityId::DrCubicSimplexA => dr_cubic_simplex_a(&e, k),
        IdentityId::DrCubicSimplexB => dr_cubic_simplex_b(&e, k),
        IdentityId::DrQuartic => dr_quartic(&e, k),
        IdentityId::QuarticR1 => quartic_r1(&e, k),
    }
}

pub(super) fn closed_form<T: Scalar>(inst: &IdentityInstance<T>) -> Result<Complex<T>> {
    let e = Env::new(inst);
    match inst.id {
        IdentityId::ArJackson => ar_jackson_rhs(&e),
        IdentityId::CrJackson => cr_jackson_rhs(&e),
        IdentityId::NewArJackson => new_ar_jackson_rhs(&e),
        IdentityId::NewArJacksonSimplex => new_ar_jackson_simplex_rhs(&e),
        IdentityId::ArQuadraticI => ar_quadratic_i_rhs(&e),
        IdentityId::ArQuadraticISimplex => ar_quadratic_i_simplex_rhs(&e),
        IdentityId::ArQuadraticII => ar_quadratic_ii_rhs(&e),
        IdentityId::ArQuadraticIISimplex => ar_quadratic_ii_simplex_rhs(&e),
        IdentityId::DrQuadratic => dr_quadratic_rhs(&e),
        IdentityId::DrQuadraticSimplex1 => dr_quadratic_simplex1_rhs(&e),
        IdentityId::DrQuadraticSimplex2 => dr_quadratic_simplex2_rhs(&e),
        IdentityId::DrCubic => dr_cubic_rhs(&e),
        IdentityId::DrCubicSimplexA => dr_cubic_simplex_a_rhs(&e),
        IdentityId::DrCubicSimplexB => dr_cubic_simplex_b_rhs(&e),
        IdentityId::DrQuartic => dr_quartic_rhs(&e),
        IdentityId::QuarticR1 => quartic_r1_rhs(&e),
    }
}

// A_r Jackson

fn ar_jackson<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, c, d, ee) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?, e.s("e")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let kk = k.total();
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(kk + ki), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(d * xi, q, ki)?.poch(ee * xi, q, ki)?;
        t.div_poch(a * xi * e.qp(n.get(i) + 1), q, kk)?;
        t.div_poch(a * xi * q / b, q, ki)?.div_poch(a * xi * q / c, q, ki)?;
    }
    cross(&mut t, e, &x, 1, n, k)?;
    t.poch(b, q, kk)?.poch(c, q, kk)?;
    t.div_poch(a * q / d, q, kk)?.div_poch(a * q / ee, q, kk)?;
    t.mul(e.qp(kk));
    t.value()
}

fn ar_jackson_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let nn = n.total();
    let mut t = e.term();
    t.poch(a * q / (b * d), q, nn)?.poch(a * q / (c * d), q, nn)?;
    t.div_poch(a * q / d, q, nn)?.div_poch(a * q / (b * c * d), q, nn)?;
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * xi * q, q, ni)?.poch(a * xi * q / (b * c), q, ni)?;
        t.div_poch(a * xi * q / b, q, ni)?.div_poch(a * xi * q / c, q, ni)?;
    }
    t.value()
}

// C_r Jackson

fn cr_jackson<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, c, d, ee) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?, e.s("e")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let r = e.r;
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q, k)?;
    t.mul(e.qp(k.total()));
    for i in 0..r {
        for j in i..r {
            let xx = a * x[i] * x[j];
            vwp(&mut t, xx * e.qp(k.get(i) + k.get(j)), xx)?;
        }
    }
    cross(&mut t, e, &x, 1, n, k)?;
    for i in 0..r {
        for j in 0..r {
            let xx = a * x[i] * x[j];
            t.poch(xx, q, k.get(i))?.div_poch(xx * e.qp(n.get(j) + 1), q, k.get(i))?;
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        for u in [b, c, d, ee] {
            t.poch(u * xi, q, ki)?.div_poch(a * xi * q / u, q, ki)?;
        }
    }
    t.value()
}

fn cr_jackson_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let (r, nn) = (e.r, n.total());
    let mut t = e.term();
    for i in 0..r {
        for j in 0..r {
            t.poch(a * x[i] * x[j] * q, q, n.get(i))?;
        }
        for j in i + 1..r {
            t.div_poch(a * x[i] * x[j] * q, q, n.get(i) + n.get(j))?;
        }
    }
    t.poch(a * q / (b * c), q, nn)?.poch(a * q / (b * d), q, nn)?.poch(a * q / (c * d), q, nn)?;
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.div_poch(a * xi * q / b, q, ni)?.div_poch(a * xi * q / c, q, ni)?.div_poch(a * xi * q / d, q, ni)?;
        t.div_poch(a * e.qp(nn - ni + 1) / (b * c * d * xi), q, ni)?;
    }
    t.value()
}

// New A_r Jackson and its simplex companion

fn new_ar_jackson<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let (kk, nn) = (k.total(), n.total());
    let bcd = b * c * d;
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q, k)?;
    vwp(&mut t, a * e.qp(2 * kk), a)?;
    t.poch(a, q, kk)?.poch(b, q, kk)?.poch(c, q, kk)?;
    t.div_poch(a * e.qp(nn + 1), q, kk)?.div_poch(a * q / b, q, kk)?.div_poch(a * q / c, q, kk)?;
    t.mul(e.qp(kk));
    cross(&mut t, e, &x, 1, n, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        t.poch(bcd / (a * xi), q, kk - ki)?.poch(d / xi, q, kk)?;
        t.poch(a * a * xi * e.qp(nn + 1) / bcd, q, ki)?;
        t.div_poch(d / xi, q, kk - ki)?.div_poch(bcd * e.qp(-n.get(i)) / (a * xi), q, kk)?;
        t.div_poch(a * xi * q / d, q, ki)?;
    }
    t.value()
}

fn new_ar_jackson_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let nn = n.total();
    let mut t = e.term();
    t.poch(a * q, q, nn)?.poch(a * q / (b * c), q, nn)?;
    t.div_poch(a * q / b, q, nn)?.div_poch(a * q / c, q, nn)?;
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * xi * q / (b * d), q, ni)?.poch(a * xi * q / (c * d), q, ni)?;
        t.div_poch(a * xi * q / d, q, ni)?.div_poch(a * xi * q / (b * c * d), q, ni)?;
    }
    t.value()
}

fn new_ar_jackson_simplex<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, d) = (e.s("a")?, e.s("b")?, e.s("d")?);
    let (x, cs, big_n, q) = (e.x()?, e.v("c", e.r + 1)?, e.big_n()?, e.q);
    let cx = prod(&cs) * prod(&x);
    let kk = k.total();
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q, k)?;
    vwp(&mut t, a * e.qp(2 * kk), a)?;
    t.poch(a, q, kk)?.poch(b, q, kk)?.poch(e.qp(-big_n), q, kk)?;
    t.div_poch(a * q / b, q, kk)?.div_poch(a * e.qp(big_n + 1), q, kk)?;
    t.mul(e.qp(kk));
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        t.poch(a * q / (cx * xi), q, kk - ki)?.poch(d / xi, q, kk)?;
        for cj in &cs {
            t.poch(cj * xi, q, ki)?;
        }
        t.div_poch(d / xi, q, kk - ki)?.div_poch(a * xi * q / d, q, ki)?;
    }
    simplex_cross_den(&mut t, e, &x, 1, k)?;
    for ci in &cs {
        t.div_poch(a * ci * q / cx, q, kk)?;
    }
    t.value()
}

fn new_ar_jackson_simplex_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, d) = (e.s("a")?, e.s("b")?, e.s("d")?);
    let (x, cs, big_n, q) = (e.x()?, e.v("c", e.r + 1)?, e.big_n()?, e.q);
    let mut t = e.term();
    t.poch(a * q, q, big_n)?.div(ipow(b, big_n))?.div_poch(a * q / b, q, big_n)?;
    for &xi in &x {
        t.poch(a * xi * q / (b * d), q, big_n)?.div_poch(a * xi * q / d, q, big_n)?;
    }
    for &ci in &cs {
        t.poch(a * q / (ci * d), q, big_n)?.div_poch(a * q / (b * ci * d), q, big_n)?;
    }
    t.value()
}

// Quadratic A_r, first family

fn ar_quadratic_i<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let (kk, nn) = (k.total(), n.total());
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    vwp(&mut t, a * e.qp(3 * kk), a)?;
    t.poch(a, q, kk)?.poch(b, q, kk)?.poch(q / b, q, kk)?;
    t.div_poch(a * e.qp(2 * nn + 1), q, kk)?;
    t.div_poch(a * q2 / b, q2, kk)?.div_poch(a * q * b, q2, kk)?;
    t.mul(e.qp(kk - k.e2()));
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        t.poch(c * xi, q2, ki)?.poch(d / xi, q2, kk)?.poch(d / (a * xi), q, kk - ki)?;
        t.div_poch(a * e.qp(2 * nn - 2 * n.get(i) + 1) / (c * xi), q, kk)?;
        t.div_poch(d / xi, q2, kk - ki)?;
        t.div_poch(a * xi * e.qp(ki - kk + 1) / d, q, ki)?;
    }
    cross(&mut t, e, &x, 2, n, k)?;
    t.value()
}

fn ar_quadratic_i_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, d) = (e.s("a")?, e.s("b")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let nn = n.total();
    let mut t = e.term();
    t.poch(a * q, q, 2 * nn)?.div_poch(a * b * q, q2, nn)?.div_poch(a * q2 / b, q2, nn)?;
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * b * xi * q / d, q2, ni)?.poch(a * xi * q2 / (b * d), q2, ni)?;
        t.div_poch(a * xi * q / d, q, 2 * ni)?;
    }
    t.value()
}

fn ar_quadratic_i_simplex<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, c) = (e.s("a")?, e.s("c")?);
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r + 1)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let bx = prod(&bs) * prod(&x);
    let kk = k.total();
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    vwp(&mut t, a * e.qp(3 * kk), a)?;
    t.poch(a, q, kk)?.poch(e.qp(-big_n), q, kk)?.poch(e.qp(big_n + 1), q, kk)?;
    t.div_poch(a * e.qp(big_n + 2), q2, kk)?.div_poch(a * e.qp(1 - big_n), q2, kk)?;
    for bi in &bs {
        t.div_poch(a * bi * q / bx, q, kk)?;
    }
    t.mul(e.qp(kk - k.e2()));
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        t.poch(c / xi, q2, kk)?.poch(c / (a * xi), q, kk - ki)?;
        for bj in &bs {
            t.poch(bj * xi, q2, ki)?;
        }
        t.div_poch(c / xi, q2, kk - ki)?.div_poch(a * xi * e.qp(ki - kk + 1) / c, q, ki)?;
    }
    simplex_cross_den(&mut t, e, &x, 2, k)?;
    t.value()
}

fn ar_quadratic_i_simplex_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, c) = (e.s("a")?, e.s("c")?);
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r + 1)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let mut t = e.term();
    if big_n % 2 == 0 {
        let m = big_n / 2;
        t.poch(a * q2, q2, m)?.div_poch(q / a, q2, m)?;
        for &xi in &x {
            t.poch(c * q / (a * xi), q2, m)?.div_poch(a * xi * q2 / c, q2, m)?;
        }
        for &bi in &bs {
            t.poch(a * q2 / (bi * c), q2, m)?.div_poch(bi * c * q / a, q2, m)?;
        }
    } else {
        let m = (big_n + 1) / 2;
        t.poch(a * q, q2, m)?.div_poch(a.inv(), q2, m)?;
        for &xi in &x {
            t.poch(c / (a * xi), q2, m)?.div_poch(a * xi * q / c, q2, m)?;
        }
        for &bi in &bs {
            t.poch(a * q / (bi * c), q2, m)?.div_poch(bi * c / a, q2, m)?;
        }
    }
    t.value()
}

// Quadratic A_r, second family

fn ar_quadratic_ii<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b, c, d) = (e.s("a")?, e.s("b")?, e.s("c")?, e.s("d")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let kk = k.total();
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    t.poch(b, q, kk)?.poch(q / b, q, kk)?;
    t.div_poch(a * q / c, q, kk)?.div_poch(a * q / d, q, kk)?;
    t.mul(e.qp(kk));
    cross(&mut t, e, &x, 2, n, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(kk + 2 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?.div_poch(a * xi * e.qp(2 * n.get(i) + 1), q, kk)?;
        t.poch(c * xi, q2, ki)?.poch(d * xi, q2, ki)?;
        t.div_poch(a * xi * q2 / b, q2, ki)?.div_poch(a * b * xi * q, q2, ki)?;
    }
    t.value()
}

fn ar_quadratic_ii_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b, c) = (e.s("a")?, e.s("b")?, e.s("c")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let nn = n.total();
    let mut t = e.term();
    t.poch(a * q2 / (b * c), q2, nn)?.poch(a * b * q / c, q2, nn)?;
    t.div_poch(a * q / c, q, 2 * nn)?;
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * xi * q, q, 2 * ni)?;
        t.div_poch(a * xi * q2 / b, q2, ni)?.div_poch(a * b * xi * q, q2, ni)?;
    }
    t.value()
}

fn ar_quadratic_ii_simplex<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r + 2)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let kk = k.total();
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    t.poch(e.qp(-big_n), q, kk)?.poch(e.qp(big_n + 1), q, kk)?;
    for &bi in &bs {
        t.div_poch(a * q / bi, q, kk)?;
    }
    t.mul(e.qp(kk));
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(kk + 2 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?;
        for bj in &bs {
            t.poch(xi * bj, q2, ki)?;
        }
        t.div_poch(a * xi * e.qp(big_n + 2), q2, ki)?.div_poch(a * xi * e.qp(1 - big_n), q2, ki)?;
    }
    simplex_cross_den(&mut t, e, &x, 2, k)?;
    t.value()
}

fn ar_quadratic_ii_simplex_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r + 2)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let mut t = e.term();
    if big_n % 2 == 0 {
        let m = big_n / 2;
        for &xi in &x {
            t.poch(a * xi * q2, q2, m)?.div_poch(q / (a * xi), q2, m)?;
        }
        for &bi in &bs {
            t.poch(bi * q / a, q2, m)?.div_poch(a * q2 / bi, q2, m)?;
        }
    } else {
        let m = (big_n + 1) / 2;
        for &xi in &x {
            t.poch(a * xi * q, q2, m)?.div_poch((a * xi).inv(), q2, m)?;
        }
        for &bi in &bs {
            t.poch(bi / a, q2, m)?.div_poch(a * q / bi, q2, m)?;
        }
    }
    t.value()
}

// Quadratic D_r

/// `∏_{i<j} 1/(c x_i x_j; base)_{k_i+k_j}`.
fn pair_den<T: Scalar>(t: &mut Term<'_, T>, x: &[Complex<T>], c: Complex<T>, base: Complex<T>, k: &MultiIndex) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            t.div_poch(c * x[i] * x[j], base, k.get(i) + k.get(j))?;
        }
    }
    Ok(())
}

fn dr_quadratic<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b) = (e.s("a")?, e.s("b")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let kk = k.total();
    let one = Complex::new(T::one(), T::zero());
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    t.mul(e.qp(kk - k.e2()));
    pair_den(&mut t, &x, one, q2, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let (ki, ni) = (k.get(i), n.get(i));
        vwp(&mut t, a * xi * e.qp(2 * ki + kk), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(a * q / xi, q, kk - ki)?;
        t.div_poch(a * xi * e.qp(2 * ni + 1), q, kk)?.div_poch(a * e.qp(1 - 2 * ni) / xi, q, kk)?;
        t.div_poch(e.qp(ki - kk) * xi / a, q, ki)?;
    }
    t.poch(a * a * q, q2, kk)?.poch(b, q, kk)?.poch(q / b, q, kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * b * xi * q, q2, k.get(i))?.div_poch(a * xi * q2 / b, q2, k.get(i))?;
    }
    cross(&mut t, e, &x, 2, n, k)?;
    for i in 0..e.r {
        for j in 0..e.r {
            t.poch(x[i] * x[j] * e.qp(2 * n.get(j)), q2, k.get(i))?;
        }
    }
    t.value()
}

fn dr_quadratic_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b) = (e.s("a")?, e.s("b")?);
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q2 = e.qp(2);
    let mut t = e.term();
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * xi * q, q, 2 * ni)?.poch(xi * q / (a * b), q2, ni)?.poch(b * xi / a, q2, ni)?;
        t.div_poch(xi / a, q, 2 * ni)?.div_poch(a * b * xi * q, q2, ni)?.div_poch(a * xi * q2 / b, q2, ni)?;
    }
    t.value()
}

fn dr_quadratic_simplex1<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let kk = k.total();
    let one = Complex::new(T::one(), T::zero());
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    t.mul(e.qp(kk - k.e2()));
    t.poch(a * a * q, q2, kk)?.poch(e.qp(big_n + 1), q, kk)?.poch(e.qp(-big_n), q, kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * xi * e.qp(big_n + 2), q2, k.get(i))?;
        t.div_poch(a * xi * e.qp(1 - big_n), q2, k.get(i))?;
    }
    pair_den(&mut t, &x, one, q2, k)?;
    for (i, &xi) in x.iter().enumerate() {
        for &bj in &bs {
            t.poch(bj * xi, q2, k.get(i))?.poch(xi / bj, q2, k.get(i))?;
        }
    }
    simplex_cross_den(&mut t, e, &x, 2, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(2 * ki + kk), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(a * q / xi, q, kk - ki)?;
        t.div_poch(a * q / bs[i], q, kk)?.div_poch(a * bs[i] * q, q, kk)?;
        t.div_poch(e.qp(ki - kk) * xi / a, q, ki)?;
    }
    t.value()
}

fn dr_quadratic_simplex1_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let mut t = e.term();
    for (&xi, &bi) in x.iter().zip(&bs) {
        if big_n % 2 == 0 {
            let m = big_n / 2;
            t.poch(a * xi * q2, q2, m)?.poch(a * q2 / xi, q2, m)?;
            t.poch(bi * q / a, q2, m)?.poch(q / (a * bi), q2, m)?;
            t.div_poch(q / (a * xi), q2, m)?.div_poch(xi * q / a, q2, m)?;
            t.div_poch(a * q2 / bi, q2, m)?.div_poch(a * bi * q2, q2, m)?;
        } else {
            let m = (big_n + 1) / 2;
            t.poch(a * xi * q, q2, m)?.poch(a * q / xi, q2, m)?;
            t.poch(bi / a, q2, m)?.poch((a * bi).inv(), q2, m)?;
            t.div_poch((a * xi).inv(), q2, m)?.div_poch(xi / a, q2, m)?;
            t.div_poch(a * q / bi, q2, m)?.div_poch(a * bi * q, q2, m)?;
        }
    }
    t.value()
}

fn dr_quadratic_simplex2<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let (a, b) = (e.s("a")?, e.s("b")?);
    let (x, cs, big_n, q) = (e.x()?, e.v("c", e.r)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let kk = k.total();
    let a2q = a * a * e.qp(2 * big_n + 1);
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q2, k)?;
    t.mul(e.qp(kk - k.e2()));
    pair_den(&mut t, &x, a2q, q2, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(2 * ki + kk), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(e.qp(-2 * big_n) / (a * xi), q, kk - ki)?;
        t.div_poch(a * q / cs[i], q, kk)?.div_poch(cs[i] * e.qp(-2 * big_n) / a, q, kk)?;
        t.div_poch(e.qp(2 * big_n + 1 + ki - kk) * a * xi, q, ki)?;
    }
    t.poch(b, q, kk)?.poch(q / b, q, kk)?.poch(e.qp(-2 * big_n), q2, kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * b * xi * q, q2, k.get(i))?.div_poch(a * xi * q2 / b, q2, k.get(i))?;
    }
    for (i, &xi) in x.iter().enumerate() {
        for &cj in &cs {
            t.poch(cj * xi, q2, k.get(i))?.poch(a2q * xi / cj, q2, k.get(i))?;
        }
    }
    simplex_cross_den(&mut t, e, &x, 2, k)?;
    t.value()
}

fn dr_quadratic_simplex2_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let (a, b) = (e.s("a")?, e.s("b")?);
    let (x, cs, big_n, q) = (e.x()?, e.v("c", e.r)?, e.big_n()?, e.q);
    let q2 = e.qp(2);
    let mut t = e.term();
    for (&xi, &ci) in x.iter().zip(&cs) {
        t.poch(a * xi * q, q, 2 * big_n)?;
        t.poch(a * b * q / ci, q2, big_n)?.poch(a * q2 / (b * ci), q2, big_n)?;
        t.div_poch(a * q / ci, q, 2 * big_n)?;
        t.div_poch(a * xi * q2 / b, q2, big_n)?.div_poch(a * b * xi * q, q2, big_n)?;
    }
    t.value()
}

// Cubic D_r

fn dr_cubic<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q3 = e.qp(3);
    let kk = k.total();
    let one = Complex::new(T::one(), T::zero());
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q3, k)?;
    t.mul(e.qp(kk - 2 * k.e2()));
    pair_den(&mut t, &x, one, q3, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let (ki, ni) = (k.get(i), n.get(i));
        vwp(&mut t, a * xi * e.qp(kk + 3 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(a * q / xi, q, kk - ki)?;
        t.div_poch(a * xi * e.qp(3 * ni + 1), q, kk)?.div_poch(a * e.qp(1 - 3 * ni) / xi, q, kk)?;
        t.div_poch(e.qp(ki - kk) * xi / a, q, 2 * ki)?;
    }
    t.poch((a * a).inv(), q, kk)?.poch(a * a * q, q, 2 * kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * a * a * xi * q3, q3, k.get(i))?;
    }
    cross(&mut t, e, &x, 3, n, k)?;
    for i in 0..e.r {
        for j in 0..e.r {
            t.poch(x[i] * x[j] * e.qp(3 * n.get(j)), q3, k.get(i))?;
        }
    }
    t.value()
}

fn dr_cubic_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let q3 = e.qp(3);
    let a3 = a * a * a;
    let mut t = e.term();
    for (i, &xi) in x.iter().enumerate() {
        let ni = n.get(i);
        t.poch(a * xi * q, q, 3 * ni)?.poch(xi / a3, q3, ni)?;
        t.div_poch(xi / a, q, 3 * ni)?.div_poch(a3 * xi * q3, q3, ni)?;
    }
    t.value()
}

fn dr_cubic_simplex_a<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q3 = e.qp(3);
    let kk = k.total();
    let a2 = a * a * e.qp(-big_n);
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q3, k)?;
    t.mul(e.qp(kk - 2 * k.e2()));
    pair_den(&mut t, &x, a2, q3, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(kk + 3 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(e.qp(big_n + 1) / (a * xi), q, kk - ki)?;
        t.div_poch(a * q / bs[i], q, kk)?.div_poch(bs[i] * e.qp(big_n + 1) / a, q, kk)?;
        t.div_poch(e.qp(ki - kk - big_n) * a * xi, q, 2 * ki)?;
    }
    t.poch(e.qp(-big_n), q, kk)?.poch(e.qp(big_n + 1), q, 2 * kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * xi * e.qp(big_n + 3), q3, k.get(i))?;
    }
    for (i, &xi) in x.iter().enumerate() {
        for &bj in &bs {
            t.poch(bj * xi, q3, k.get(i))?.poch(a2 * xi / bj, q3, k.get(i))?;
        }
    }
    simplex_cross_den(&mut t, e, &x, 3, k)?;
    t.value()
}

fn dr_cubic_simplex_a_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q3 = e.qp(3);
    let mut t = e.term();
    for (&xi, &bi) in x.iter().zip(&bs) {
        t.poch(bi / a, q, big_n + 1)?.poch(e.qp(-big_n) / (a * xi), q3, big_n + 1)?;
        t.div_poch((a * xi).inv(), q, big_n + 1)?.div_poch(bi * e.qp(-big_n) / a, q3, big_n + 1)?;
    }
    t.value()
}

fn dr_cubic_simplex_b<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q3 = e.qp(3);
    let kk = k.total();
    let a2 = a * a * e.qp(big_n + 1);
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q3, k)?;
    t.mul(e.qp(kk - 2 * k.e2()));
    pair_den(&mut t, &x, a2, q3, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let ki = k.get(i);
        vwp(&mut t, a * xi * e.qp(kk + 3 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(e.qp(-big_n) / (a * xi), q, kk - ki)?;
        t.div_poch(a * q / bs[i], q, kk)?.div_poch(bs[i] * e.qp(-big_n) / a, q, kk)?;
        t.div_poch(e.qp(ki - kk + big_n + 1) * a * xi, q, 2 * ki)?;
    }
    t.poch(e.qp(big_n + 1), q, kk)?.poch(e.qp(-big_n), q, 2 * kk)?;
    for (i, &xi) in x.iter().enumerate() {
        t.div_poch(a * xi * e.qp(2 - big_n), q3, k.get(i))?;
    }
    for (i, &xi) in x.iter().enumerate() {
        for &bj in &bs {
            t.poch(bj * xi, q3, k.get(i))?.poch(a2 * xi / bj, q3, k.get(i))?;
        }
    }
    simplex_cross_den(&mut t, e, &x, 3, k)?;
    t.value()
}

fn dr_cubic_simplex_b_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, bs, big_n, q) = (e.x()?, e.v("b", e.r)?, e.big_n()?, e.q);
    let q3 = e.qp(3);
    let mut t = e.term();
    for (&xi, &bi) in x.iter().zip(&bs) {
        t.poch(a * xi * q, q, big_n)?.poch(a * e.qp(2 - big_n) / bi, q3, big_n)?;
        t.div_poch(a * q / bi, q, big_n)?.div_poch(a * xi * e.qp(2 - big_n), q3, big_n)?;
    }
    t.value()
}

// Quartic

fn dr_quartic<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let (q2, q4) = (e.qp(2), e.qp(4));
    let kk = k.total();
    let one = Complex::new(T::one(), T::zero());
    let mut t = e.term();
    mul_delta_ratio(&mut t, &x, q4, k)?;
    t.mul(e.qp(kk - 3 * k.e2()));
    t.poch(neg(one), q2, kk)?.poch(neg(q), q2, kk)?.poch(neg(q2), q2, kk)?;
    pair_den(&mut t, &x, neg(a * a * q), q4, k)?;
    for (i, &xi) in x.iter().enumerate() {
        let (ki, ni) = (k.get(i), n.get(i));
        vwp(&mut t, a * xi * e.qp(kk + 4 * ki), a * xi)?;
        t.poch(a * xi, q, kk)?.poch(neg((a * xi).inv()), q, kk - ki)?;
        t.div_poch(a * xi * e.qp(4 * ni + 1), q, kk)?.div_poch(neg(e.qp(-4 * ni) / (a * xi)), q, kk)?;
        t.div_poch(neg(e.qp(ki - kk + 1) * a * xi), q, 3 * ki)?;
    }
    cross(&mut t, e, &x, 4, n, k)?;
    for i in 0..e.r {
        for j in 0..e.r {
            t.poch(neg(a * a * x[i] * x[j] * e.qp(4 * n.get(j) + 1)), q4, k.get(i))?;
        }
    }
    t.value()
}

fn dr_quartic_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (x, n, q) = (e.x()?, e.n()?, e.q);
    let mut t = e.term();
    for (i, &xi) in x.iter().enumerate() {
        t.poch(a * xi * q, q, 4 * n.get(i))?.div_poch(neg(a * xi * q), q, 4 * n.get(i))?;
    }
    t.value()
}

fn quartic_r1<T: Scalar>(e: &Env<'_, T>, k: &MultiIndex) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (n, q) = (e.n()?.get(0), e.q);
    let (q2, q4) = (e.qp(2), e.qp(4));
    let k = k.get(0);
    let one = Complex::new(T::one(), T::zero());
    let mut t = e.term();
    vwp(&mut t, a * e.qp(5 * k), a)?;
    t.poch(a, q, k)?.poch(neg(one), q, 2 * k)?;
    t.poch(e.qp(-4 * n), q4, k)?.poch(neg(a * a * e.qp(4 * n + 1)), q4, k)?;
    t.div_poch(a * e.qp(4 * n + 1), q, k)?.div_poch(neg(e.qp(-4 * n) / a), q, k)?;
    t.div_poch(neg(a * q), q, 3 * k)?.div_poch(q2, q2, k)?;
    t.mul(e.qp(k));
    t.value()
}

fn quartic_r1_rhs<T: Scalar>(e: &Env<'_, T>) -> Result<Complex<T>> {
    let a = e.s("a")?;
    let (n, q) = (e.n()?.get(0), e.q);
    let mut t = e.term();
    t.poch(a * q, q, 4 * n)?.div_poch(neg(a * q), q, 4 * n)?;
    t.value()
}
