//! Serialization helpers: integers travel as decimal strings so consumers with
//! 64-bit number types never lose precision.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactalg::{MultiPoly, UniPoly};

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

pub mod bigint_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let strings = Vec::<Vec<String>>::deserialize(d)?;
        strings
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.parse().map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Rationals as `"num/den"` (or `"num"` for integers).
pub mod rational {
    use super::*;
    use num_rational::BigRational;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Decimal expansion of `r` with `digits` fractional digits, rounded down
/// (`round_up = false`) or up.
pub fn decimal(r: &num_rational::BigRational, digits: u32, round_up: bool) -> String {
    use num_integer::Integer;
    use num_traits::Signed;
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = r * num_rational::BigRational::from_integer(scale.clone());
    let v = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (q, rem) = v.abs().div_rem(&scale);
    let sign = if v.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{q}.{:0>width$}", rem.to_string(), width = digits as usize)
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        bigint_vec::serialize(self.coeffs(), s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = bigint_vec::deserialize(d)?;
        if coeffs.last().is_some_and(|c| c == &BigInt::from(0)) {
            return Err(D::Error::custom("leading coefficient must be nonzero"));
        }
        Ok(UniPoly::new(coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct MultiPolyWire {
    vars: Vec<String>,
    terms: String,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MultiPolyWire {
            vars: self.vars().as_ref().clone(),
            terms: self.to_wire(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = MultiPolyWire::deserialize(d)?;
        MultiPoly::from_wire(Arc::new(w.vars), &w.terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_roundtrip() {
        let p = UniPoly::from_i64s(&[-1, 0, -1, -1, 0, 1]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["-1","0","-1","-1","0","1"]"#);
        assert_eq!(serde_json::from_str::<UniPoly>(&json).unwrap(), p);
        assert!(serde_json::from_str::<UniPoly>(r#"["1","0"]"#).is_err());

        let r = num_rational::BigRational::new(BigInt::from(-7), BigInt::from(4));
        assert_eq!(decimal(&r, 3, false), "-1.750");
        assert_eq!(decimal(&num_rational::BigRational::new(BigInt::from(1), BigInt::from(3)), 4, true), "0.3334");

        let v = MultiPoly::var_list(&["a1", "b0"]);
        let m = MultiPoly::parse(v, "3*a1^2*b0 - b0 + 7").unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<MultiPoly>(&json).unwrap(), m);
    }
}
