//! JSON encodings for scalars, plus file/text loaders used by the CLI and
//! the C ABI.
//!
//! * bicomplex: `{"w1":[re,im],"w2":[re,im]}`
//! * hyperbolic: `{"e1":a1,"e2":a2}`; a bare number `a` is read as `a·(e1+e2)`

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{BcError, Result};
use crate::module::ModuleVector;
use crate::scalar::{Bicomplex, Complex, Hyperbolic};
use crate::seminorm::SeminormFamily;
use crate::sets::SetRep;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BicomplexJson {
    w1: [f64; 2],
    w2: [f64; 2],
}

impl Serialize for Bicomplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [a, b, c, d] = self.parts();
        BicomplexJson { w1: [a, b], w2: [c, d] }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bicomplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BicomplexJson::deserialize(d)?;
        Bicomplex::new(Complex::new(j.w1[0], j.w1[1]), Complex::new(j.w2[0], j.w2[1]))
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HyperbolicJson {
    Scalar(f64),
    Idempotent { e1: f64, e2: f64 },
}

impl Serialize for Hyperbolic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HyperbolicJson::Idempotent { e1: self.a1(), e2: self.a2() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hyperbolic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a1, a2) = match HyperbolicJson::deserialize(d)? {
            HyperbolicJson::Scalar(a) => (a, a),
            HyperbolicJson::Idempotent { e1, e2 } => (e1, e2),
        };
        Hyperbolic::new(a1, a2).map_err(D::Error::custom)
    }
}

/// Complex numbers inside set descriptions are written `[re, im]`.
pub(crate) mod complex_pair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|[re, im]| {
                if re.is_finite() && im.is_finite() {
                    Ok(Complex::new(re, im))
                } else {
                    Err(D::Error::custom("non-finite complex entry"))
                }
            })
            .collect()
    }
}

pub fn parse_set(text: &str) -> Result<SetRep> {
    let set: SetRep = serde_json::from_str(text)?;
    set.validate()?;
    Ok(set)
}

pub fn parse_family(text: &str) -> Result<SeminormFamily> {
    let fam: SeminormFamily = serde_json::from_str(text)?;
    fam.validate()?;
    Ok(fam)
}

pub fn parse_vector(text: &str) -> Result<ModuleVector> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| BcError::InvalidArgument(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bicomplex_encoding() {
        let z = Bicomplex::from_parts(1.0, -2.0, 0.5, 4.0).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"w1":[1.0,-2.0],"w2":[0.5,4.0]}"#);
        assert_eq!(serde_json::from_str::<Bicomplex>(&s).unwrap(), z);
        assert!(serde_json::from_str::<Bicomplex>(r#"{"w1":[1.0],"w2":[0,0]}"#).is_err());
    }

    #[test]
    fn hyperbolic_encoding() {
        let h = Hyperbolic::new(3.0, 4.0).unwrap();
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"e1":3.0,"e2":4.0}"#);
        assert_eq!(serde_json::from_str::<Hyperbolic>(r#"{"e1":3,"e2":4}"#).unwrap(), h);
        assert_eq!(serde_json::from_str::<Hyperbolic>("2").unwrap(), Hyperbolic::splat(2.0).unwrap());
    }
}
