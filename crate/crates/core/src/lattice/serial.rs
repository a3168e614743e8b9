//! JSON schema for cones and fans: `{"ambient_rank": r, "cones": [{"generators": [[...]]}]}`.
//!
//! Integers that fit in 64 bits are JSON numbers, wider ones decimal strings; non-integral
//! rationals are strings `"p/q"`.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LatticeError;
use super::cone::Cone;
use super::fan::Fan;
use super::int::{Int, Rational, to_i64};
use super::vector::LatticeVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Signed(i64),
            Unsigned(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Signed(x) => Ok(JsonInt(Int::from(x))),
            Raw::Unsigned(x) => Ok(JsonInt(Int::from(x))),
            Raw::Text(t) => Int::from_str(t.trim())
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("not an integer: {t:?}"))),
        }
    }
}

pub fn serialize_int<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
    match to_i64(x) {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn serialize_ints<S: Serializer>(xs: &[Int], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| JsonInt(x.clone())))
}

pub fn serialize_vector<S: Serializer>(v: &LatticeVector, s: S) -> Result<S::Ok, S::Error> {
    serialize_ints(v.coords(), s)
}

pub fn serialize_vectors<S: Serializer>(vs: &[LatticeVector], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| v.coords().iter().map(|x| JsonInt(x.clone())).collect::<Vec<_>>()))
}

pub fn rational_to_json(x: &Rational) -> serde_json::Value {
    if x.denominator().is_one() {
        match to_i64(x.numerator()) {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(x.numerator().to_string()),
        }
    } else {
        serde_json::Value::from(format!("{}/{}", x.numerator(), x.denominator()))
    }
}

pub fn rationals_to_json<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(rational_to_json))
}

pub fn rational_lists_to_json<S: Serializer>(xs: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|v| v.iter().map(rational_to_json).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub generators: Vec<Vec<JsonInt>>,
}

impl ConeJson {
    pub fn from_cone(c: &Cone) -> Self {
        Self {
            generators: c.generators().iter().map(|g| g.coords().iter().map(|x| JsonInt(x.clone())).collect()).collect(),
        }
    }

    pub fn to_cone(&self, ambient_rank: usize) -> Result<Cone, LatticeError> {
        let gens = self
            .generators
            .iter()
            .map(|g| LatticeVector::new(g.iter().map(|x| x.0.clone()).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Cone::new(ambient_rank, gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub ambient_rank: usize,
    pub cones: Vec<ConeJson>,
}

impl FanJson {
    pub fn from_fan(f: &Fan) -> Self {
        Self { ambient_rank: f.ambient_rank(), cones: f.cones().iter().map(ConeJson::from_cone).collect() }
    }

    /// Rebuilds exactly the listed cones; validation is left to the caller.
    pub fn to_fan(&self) -> Result<Fan, LatticeError> {
        let cones = self.cones.iter().map(|c| c.to_cone(self.ambient_rank)).collect::<Result<Vec<_>, _>>()?;
        Fan::from_cones(self.ambient_rank, cones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int::rational;

    #[test]
    fn wide_integers_become_strings() {
        let big = Int::from(i64::MAX) * Int::from(4);
        let v = serde_json::to_value(JsonInt(big.clone())).unwrap();
        assert_eq!(v, serde_json::Value::from(big.to_string()));
        let back: JsonInt = serde_json::from_value(v).unwrap();
        assert_eq!(back.0, big);
        assert_eq!(serde_json::to_string(&JsonInt(Int::from(-3))).unwrap(), "-3");
    }

    #[test]
    fn rationals_render_as_fractions() {
        assert_eq!(rational_to_json(&rational(3, 1)), serde_json::json!(3));
        assert_eq!(rational_to_json(&rational(-1, 2)), serde_json::json!("-1/2"));
    }

    #[test]
    fn fan_round_trip() {
        let c = Cone::new(2, [LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 2])]).unwrap();
        let f = Fan::face_fan(&c);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"ambient_rank":2,"cones":[{"generators":[]},{"generators":[[1,0]]},{"generators":[[1,0],[1,2]]},{"generators":[[1,2]]}]}"#
        );
        assert_eq!(Fan::from_json_str(&text).unwrap(), Fan::from_cones(2, f.cones()).unwrap());
    }

    #[test]
    fn malformed_json_is_an_error() {
        assert!(matches!(Fan::from_json_str("{\"ambient_rank\": 2}"), Err(LatticeError::InvalidJson(_))));
        assert!(matches!(
            Fan::from_json_str(r#"{"ambient_rank":2,"cones":[{"generators":[[1,0,0]]}]}"#),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }
}
