//! JSON wire formats.
//!
//! Coefficients are JSON integers when they fit in an `i64` and decimal
//! strings otherwise. Partitions are arrays of parts, `[]` for the empty
//! partition.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::basisconv::QExpansion;
use crate::error::{Error, Result};
use crate::partitions::{Partition, StrictPartition};
use crate::schubert::{LGRing, SchubertClass};
use crate::symfunc::SymPoly;
use crate::thomtables::{TExpansion, ThomRecord, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient(pub BigInt);

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(Coefficient(v.into())),
            Repr::Text(s) => BigInt::from_str(&s)
                .map(Coefficient)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub partition: Vec<usize>,
    pub coefficient: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTermJson {
    pub partition: Vec<usize>,
    pub t_power: usize,
    pub coefficient: Coefficient,
}

/// A polynomial in the `c_i`; `monomial` lists the generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymPolyJson {
    pub text: String,
    pub terms: Vec<MonomialJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub monomial: Vec<usize>,
    pub coefficient: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub name: String,
    pub codim: usize,
    pub legendre: Vec<TTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub check: String,
    pub passed: bool,
    pub violators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub name: String,
    pub codim: usize,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

fn partition(parts: &[usize]) -> Result<Partition> {
    Partition::new(parts.to_vec())
}

impl From<&SymPoly> for SymPolyJson {
    fn from(p: &SymPoly) -> Self {
        SymPolyJson {
            text: p.to_string(),
            terms: p
                .terms()
                .map(|(m, c)| MonomialJson {
                    monomial: m.parts().to_vec(),
                    coefficient: Coefficient(c.clone()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SymPolyJson> for SymPoly {
    type Error = Error;

    fn try_from(j: &SymPolyJson) -> Result<Self> {
        Ok(SymPoly::from_terms(
            j.terms
                .iter()
                .map(|t| Ok((Partition::from_multiset(t.monomial.clone()), t.coefficient.0.clone())))
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

pub fn qexpansion_to_json(e: &QExpansion) -> Vec<TermJson> {
    e.terms()
        .map(|(i, c)| TermJson {
            partition: i.parts().to_vec(),
            coefficient: Coefficient(c.clone()),
        })
        .collect()
}

pub fn qexpansion_from_json(terms: &[TermJson]) -> Result<QExpansion> {
    let pairs = terms
        .iter()
        .map(|t| Ok((partition(&t.partition)?, t.coefficient.0.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(QExpansion::from_terms(pairs))
}

pub fn texpansion_to_json(e: &TExpansion) -> Vec<TTermJson> {
    e.terms()
        .map(|(i, j, c)| TTermJson {
            partition: i.parts().to_vec(),
            t_power: j,
            coefficient: Coefficient(c.clone()),
        })
        .collect()
}

pub fn texpansion_from_json(terms: &[TTermJson]) -> Result<TExpansion> {
    let pairs = terms
        .iter()
        .map(|t| Ok(((partition(&t.partition)?, t.t_power), t.coefficient.0.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(TExpansion::from_terms(pairs))
}

impl From<&SchubertClass> for SchubertJson {
    fn from(a: &SchubertClass) -> Self {
        SchubertJson {
            n: a.ring().n(),
            terms: a
                .terms()
                .map(|(i, c)| TermJson {
                    partition: i.parts().to_vec(),
                    coefficient: Coefficient(c.clone()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SchubertJson> for SchubertClass {
    type Error = Error;

    fn try_from(j: &SchubertJson) -> Result<Self> {
        let ring = LGRing::new(j.n)?;
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((StrictPartition::new(t.partition.clone())?, t.coefficient.0.clone())))
            .collect::<Result<Vec<_>>>()?;
        SchubertClass::from_terms(ring, terms)
    }
}

impl From<&ThomRecord> for RecordJson {
    fn from(r: &ThomRecord) -> Self {
        RecordJson {
            name: r.name.clone(),
            codim: r.codim,
            legendre: texpansion_to_json(&r.legendre),
        }
    }
}

impl TryFrom<&RecordJson> for ThomRecord {
    type Error = Error;

    fn try_from(j: &RecordJson) -> Result<Self> {
        Ok(ThomRecord::from_legendre(
            j.name.clone(),
            j.codim,
            texpansion_from_json(&j.legendre)?,
        ))
    }
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            name: r.name.clone(),
            codim: r.codim,
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    check: c.check.name().to_string(),
                    passed: c.passed,
                    violators: c.violators.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thomtables::{builtin_records, verify_record};

    #[test]
    fn coefficient_encoding() {
        let small = serde_json::to_string(&Coefficient(BigInt::from(-42))).unwrap();
        assert_eq!(small, "-42");
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let text = serde_json::to_string(&Coefficient(big.clone())).unwrap();
        assert_eq!(text, "\"123456789012345678901234567890\"");
        let back: Coefficient = serde_json::from_str(&text).unwrap();
        assert_eq!(back.0, big);
        assert!(serde_json::from_str::<Coefficient>("\"12x\"").is_err());
    }

    #[test]
    fn records_round_trip() {
        for r in builtin_records() {
            let j = RecordJson::from(&r);
            let text = serde_json::to_string(&j).unwrap();
            let parsed: RecordJson = serde_json::from_str(&text).unwrap();
            assert_eq!(ThomRecord::try_from(&parsed).unwrap(), r);
        }
        let j = RecordJson::from(&builtin_records()[1]);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"name":"A_3","codim":2,"legendre":[{"partition":[2],"t_power":0,"coefficient":3},{"partition":[1],"t_power":1,"coefficient":1}]}"#
        );
    }

    #[test]
    fn report_shape() {
        let j = ReportJson::from(&verify_record(&builtin_records()[0]));
        let v: serde_json::Value = serde_json::to_value(&j).unwrap();
        assert_eq!(v["passed"], serde_json::Value::Bool(true));
        assert_eq!(v["checks"].as_array().unwrap().len(), 4);
        assert_eq!(v["checks"][0]["check"], "positivity");
    }

    #[test]
    fn classes_round_trip() {
        let ring = LGRing::new(3).unwrap();
        let a = SchubertClass::from_terms(
            ring,
            [
                (StrictPartition::new(vec![2, 1]).unwrap(), BigInt::from(3)),
                (StrictPartition::new(vec![3]).unwrap(), BigInt::from(-1)),
            ],
        )
        .unwrap();
        let j = SchubertJson::from(&a);
        let parsed: SchubertJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(SchubertClass::try_from(&parsed).unwrap(), a);
        let bad = SchubertJson {
            n: 2,
            terms: vec![TermJson {
                partition: vec![3],
                coefficient: Coefficient(BigInt::from(1)),
            }],
        };
        assert!(SchubertClass::try_from(&bad).is_err());
    }

    #[test]
    fn polys_round_trip() {
        let p = crate::exprio::parse_sympoly("c2*c1^2 - 7*c3 + 5").unwrap();
        let j = SymPolyJson::from(&p);
        assert_eq!(j.text, "5 - 7*c3 + c2*c1^2");
        let parsed: SymPolyJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(SymPoly::try_from(&parsed).unwrap(), p);
        let q = crate::basisconv::expand_in_qtilde(&p, None).unwrap();
        assert_eq!(qexpansion_from_json(&qexpansion_to_json(&q)).unwrap(), q);
    }
}
