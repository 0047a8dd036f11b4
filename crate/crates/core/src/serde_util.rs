//! Serializers that write exact numbers as strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::Serializer;

/// `"numerator/denominator"`, always with an explicit denominator.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

pub fn opt_rational<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => rational(x, s),
        None => s.serialize_none(),
    }
}

pub fn rational_vec<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&rational_string(x))?;
    }
    seq.end()
}

pub fn biguint_vec<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
