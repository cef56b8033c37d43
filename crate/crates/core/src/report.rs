//! Serialization helpers: big integers travel as decimal strings.

use num_bigint::BigUint;
use serde::Serializer;

pub fn ser_decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn ser_decimal_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_str_radix(10)))
}
