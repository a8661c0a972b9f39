//! Sequence oracles `t ↦ a(t)` and `(j, k) ↦ c_j(k)` feeding the general
//! inversions. Indices `j` are 0-based.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{ipow, Scalar};

pub trait SequenceOracle<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    /// Whether the oracle carries an `a(t)` sequence.
    fn has_a(&self) -> bool;

    fn a(&self, t: i64) -> Result<Complex<T>>;

    fn c(&self, j: usize, k: i64) -> Result<Complex<T>>;
}

fn nonzero<T: Scalar>(z: Complex<T>, what: &str) -> Result<Complex<T>> {
    if z.norm() == T::zero() {
        return Err(Error::InvalidOracle(format!("{what} is zero")));
    }
    Ok(z)
}

/// A dense table covering `offset..offset + values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    pub offset: i64,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> Table<T> {
    pub fn new(offset: i64, values: Vec<Complex<T>>) -> Self {
        Self { offset, values }
    }

    pub fn get(&self, idx: i64) -> Option<Complex<T>> {
        let pos = idx.checked_sub(self.offset)?;
        usize::try_from(pos).ok().and_then(|p| self.values.get(p).copied())
    }
}

/// Oracle backed by dense tables; lookups outside a table are errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TableOracle<T> {
    a: Option<Table<T>>,
    c: Vec<Table<T>>,
}

impl<T: Scalar> TableOracle<T> {
    pub fn new(a: Option<Table<T>>, c: Vec<Table<T>>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidOracle("oracle needs at least one c sequence".into()));
        }
        let all = a.iter().chain(c.iter()).flat_map(|t| t.values.iter());
        for z in all {
            nonzero(*z, "oracle table value")?;
        }
        Ok(Self { a, c })
    }

    /// Drops the `a` sequence, as required by the `C_r` inversion.
    pub fn without_a(mut self) -> Self {
        self.a = None;
        self
    }
}

impl<T: Scalar> SequenceOracle<T> for TableOracle<T> {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn has_a(&self) -> bool {
        self.a.is_some()
    }

    fn a(&self, t: i64) -> Result<Complex<T>> {
        let table = self
            .a
            .as_ref()
            .ok_or_else(|| Error::MissingParameter("oracle has no a(t) sequence".into()))?;
        table
            .get(t)
            .ok_or_else(|| Error::Domain(format!("a({t}) outside the oracle table")))
    }

    fn c(&self, j: usize, k: i64) -> Result<Complex<T>> {
        let table = self
            .c
            .get(j)
            .ok_or_else(|| Error::Domain(format!("c_{} requested from a {}-dimensional oracle", j + 1, self.c.len())))?;
        table
            .get(k)
            .ok_or_else(|| Error::Domain(format!("c_{}({k}) outside the oracle table", j + 1)))
    }
}

type AFn<T> = Box<dyn Fn(i64) -> Complex<T> + Send + Sync>;
type CFn<T> = Box<dyn Fn(usize, i64) -> Complex<T> + Send + Sync>;

/// Oracle backed by closures.
pub struct ClosureOracle<T> {
    dim: usize,
    a: Option<AFn<T>>,
    c: CFn<T>,
}

impl<T: Scalar> ClosureOracle<T> {
    pub fn new(dim: usize, a: Option<AFn<T>>, c: CFn<T>) -> Self {
        Self { dim, a, c }
    }
}

impl<T> fmt::Debug for ClosureOracle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureOracle")
            .field("dim", &self.dim)
            .field("has_a", &self.a.is_some())
            .finish()
    }
}

impl<T: Scalar> SequenceOracle<T> for ClosureOracle<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn has_a(&self) -> bool {
        self.a.is_some()
    }

    fn a(&self, t: i64) -> Result<Complex<T>> {
        let f = self
            .a
            .as_ref()
            .ok_or_else(|| Error::MissingParameter("oracle has no a(t) sequence".into()))?;
        nonzero(f(t), "a(t)")
    }

    fn c(&self, j: usize, k: i64) -> Result<Complex<T>> {
        if j >= self.dim {
            return Err(Error::Domain(format!("c_{} requested from a {}-dimensional oracle", j + 1, self.dim)));
        }
        nonzero((self.c)(j, k), "c_j(k)")
    }
}

/// `a(t) = a q^t` and `c_j(k) = x_j q^{mk}`, or with `inverted` set,
/// `c_j(k) = x_j^{-1} q^{-mk}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricOracle<T> {
    pub a: Complex<T>,
    pub q: Complex<T>,
    pub m: i64,
    pub x: Vec<Complex<T>>,
    pub inverted: bool,
}

impl<T: Scalar> SequenceOracle<T> for GeometricOracle<T> {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn has_a(&self) -> bool {
        true
    }

    fn a(&self, t: i64) -> Result<Complex<T>> {
        nonzero(self.a * ipow(self.q, t), "a(t)")
    }

    fn c(&self, j: usize, k: i64) -> Result<Complex<T>> {
        let xj = *self
            .x
            .get(j)
            .ok_or_else(|| Error::Domain(format!("c_{} requested from a {}-dimensional oracle", j + 1, self.x.len())))?;
        let v = if self.inverted {
            xj.inv() * ipow(self.q, -self.m * k)
        } else {
            xj * ipow(self.q, self.m * k)
        };
        nonzero(v, "c_j(k)")
    }
}

/// `c'_i(k) = c_i(k + l_i)` and `a'(t) = a(t + |l|)`.
pub struct ShiftedOracle<'o, T> {
    inner: &'o dyn SequenceOracle<T>,
    shift: MultiIndex,
}

impl<'o, T: Scalar> ShiftedOracle<'o, T> {
    pub fn new(inner: &'o dyn SequenceOracle<T>, shift: MultiIndex) -> Result<Self> {
        if shift.dim() != inner.dim() {
            return Err(Error::Domain(format!(
                "shift of length {} for a {}-dimensional oracle",
                shift.dim(),
                inner.dim()
            )));
        }
        Ok(Self { inner, shift })
    }
}

impl<T: Scalar> SequenceOracle<T> for ShiftedOracle<'_, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn has_a(&self) -> bool {
        self.inner.has_a()
    }

    fn a(&self, t: i64) -> Result<Complex<T>> {
        self.inner.a(t + self.shift.total())
    }

    fn c(&self, j: usize, k: i64) -> Result<Complex<T>> {
        self.inner.c(j, k + self.shift.get(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn table_lookup_and_bounds() {
        let o = TableOracle::new(
            Some(Table::new(0, vec![c(1.0, 0.0), c(2.0, 0.0)])),
            vec![Table::new(-1, vec![c(3.0, 0.0), c(4.0, 0.0)])],
        )
        .unwrap();
        assert_eq!(o.a(1).unwrap(), c(2.0, 0.0));
        assert_eq!(o.c(0, -1).unwrap(), c(3.0, 0.0));
        assert!(o.a(2).is_err());
        assert!(o.c(0, 1).is_err());
        assert!(o.c(1, 0).is_err());
    }

    #[test]
    fn table_rejects_zero() {
        let r = TableOracle::new(None, vec![Table::new(0, vec![c(0.0, 0.0)])]);
        assert!(matches!(r, Err(Error::InvalidOracle(_))));
    }

    #[test]
    fn without_a_reports_missing() {
        let o = TableOracle::new(Some(Table::new(0, vec![c(1.0, 0.0)])), vec![Table::new(0, vec![c(2.0, 0.0)])])
            .unwrap()
            .without_a();
        assert!(!o.has_a());
        assert!(matches!(o.a(0), Err(Error::MissingParameter(_))));
    }

    #[test]
    fn geometric_values() {
        let q = c(0.5, 0.2);
        let o = GeometricOracle {
            a: c(0.7, 0.1),
            q,
            m: 2,
            x: vec![c(1.1, 0.0), c(0.9, 0.3)],
            inverted: false,
        };
        assert_eq!(o.a(3).unwrap(), c(0.7, 0.1) * ipow(q, 3));
        assert_eq!(o.c(1, 2).unwrap(), c(0.9, 0.3) * ipow(q, 4));
        let inv = GeometricOracle { inverted: true, ..o };
        assert_eq!(inv.c(0, 1).unwrap(), c(1.1, 0.0).inv() * ipow(q, -2));
    }

    #[test]
    fn shifted_offsets() {
        let base = ClosureOracle::<f64>::new(
            2,
            Some(Box::new(|t| c(t as f64 + 10.0, 0.0))),
            Box::new(|j, k| c((j as f64 + 1.0) * 100.0 + k as f64, 0.0)),
        );
        let s = ShiftedOracle::new(&base, MultiIndex::from([1, 2])).unwrap();
        assert_eq!(s.a(0).unwrap(), c(13.0, 0.0));
        assert_eq!(s.c(0, 0).unwrap(), c(101.0, 0.0));
        assert_eq!(s.c(1, 1).unwrap(), c(203.0, 0.0));
    }
}
