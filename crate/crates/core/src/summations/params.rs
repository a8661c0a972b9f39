//! Named complex parameter assignments.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Scalars are keyed by name (`"a"`, `"b"`, ...) and vectors by an indexed
/// prefix (`"x1"`, `"x2"`, ...).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params<T> {
    values: BTreeMap<String, Complex<T>>,
}

impl<T: Scalar> Params<T> {
    pub fn new() -> Self {
        Self { values: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, z: Complex<T>) -> Self {
        self.set(name, z);
        self
    }

    pub fn with_vec(mut self, prefix: &str, zs: &[Complex<T>]) -> Self {
        for (i, z) in zs.iter().enumerate() {
            self.set(&format!("{prefix}{}", i + 1), *z);
        }
        self
    }

    pub fn set(&mut self, name: &str, z: Complex<T>) {
        self.values.insert(name.to_string(), z);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Result<Complex<T>> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    /// `prefix1 ..= prefix{len}`.
    pub fn vec(&self, prefix: &str, len: usize) -> Result<Vec<Complex<T>>> {
        (1..=len).map(|i| self.get(&format!("{prefix}{i}"))).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Complex<T>)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Names `prefix1 ..= prefix{len}`.
pub fn indexed(prefix: &str, len: usize) -> Vec<String> {
    (1..=len).map(|i| format!("{prefix}{i}")).collect()
}
