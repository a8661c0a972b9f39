//! Serializers for report fields. Finite doubles are written with 17
//! significant digits; non-finite values become `null`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::Serializer;
use serde_json::value::RawValue;

use crate::summations::Status;

fn raw(v: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{v:.16e}")).expect("exponent notation is valid JSON")
}

pub(crate) fn float<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_some(&raw(*v))
    } else {
        s.serialize_none()
    }
}

pub(crate) fn opt_float<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => float(v, s),
        None => s.serialize_none(),
    }
}

struct Float(f64);

impl serde::Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        float(&self.0, s)
    }
}

struct Pair(Complex<f64>);

impl serde::Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Float(self.0.re))?;
        seq.serialize_element(&Float(self.0.im))?;
        seq.end()
    }
}

/// `[re, im]`.
pub(crate) fn pair<S: Serializer>(z: &Complex<f64>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&Pair(*z), s)
}

pub(crate) fn params<S: Serializer>(m: &BTreeMap<String, Complex<f64>>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &Pair(*v))?;
    }
    map.end()
}

pub(crate) fn status<S: Serializer>(st: &Status, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(st.name())
}
