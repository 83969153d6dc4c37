//! Serde helpers: big integers travel as decimal strings.
//!
//! On input a plain JSON integer is accepted as well (it must fit the JSON
//! parser's native integer range); on output a string is always written.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

/// Parse a decimal integer, also accepting the shorthands `1e50` and `10^50`.
pub fn parse_bigint(s: &str) -> Option<BigInt> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: BigInt = m.parse().ok()?;
        let e: u32 = e.trim_start_matches('+').parse().ok()?;
        return Some(m * BigInt::from(10).pow(e));
    }
    if let Some((b, e)) = s.split_once('^') {
        let b: BigInt = b.parse().ok()?;
        let e: u32 = e.parse().ok()?;
        return Some(b.pow(e));
    }
    s.parse().ok()
}

fn from_value<E: serde::de::Error>(v: &serde_json::Value) -> Result<BigInt, E> {
    match v {
        serde_json::Value::String(s) => parse_bigint(s).ok_or_else(|| E::custom(format!("not an integer: {s:?}"))),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(n.to_string().parse().expect("integral JSON number"))
        }
        other => Err(E::custom(format!("expected an integer or decimal string, got {other}"))),
    }
}

/// `#[serde(with = "crate::json::bigint")]`
pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_value(&v)
    }
}

/// `#[serde(with = "crate::json::opt_bigint")]`
pub mod opt_bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => from_value(&v).map(Some),
        }
    }
}

/// `#[serde(with = "crate::json::vec_bigint")]`
pub mod vec_bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter().map(from_value::<D::Error>).collect::<Result<_, _>>().map_err(D::Error::custom)
    }
}
