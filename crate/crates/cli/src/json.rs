//! Serde model of a [`CurveRecord`].
//!
//! Integers that fit in 64 bits are written as JSON numbers, larger ones as
//! decimal strings. Both forms are accepted on input.

use std::str::FromStr;

use cuspidal::cusp::ExactRational;
use cuspidal::existence::{ReductionStep, Rule};
use cuspidal::families::FamilySpec;
use cuspidal::semigroup::BlVerdict;
use cuspidal::{CurveRecord, Error, Existence, Kodaira, MultiplicitySeq, Nat, NewtonPair, NewtonPairSeq};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub BigInt);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_u64() {
            s.serialize_u64(v)
        } else if let Some(v) = self.0.to_i64() {
            s.serialize_i64(v)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            U(u64),
            I(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::U(v) => Ok(Num(v.into())),
            Raw::I(v) => Ok(Num(v.into())),
            Raw::S(s) => BigInt::from_str(s.trim())
                .map(Num)
                .map_err(|_| de::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

impl From<&Nat> for Num {
    fn from(n: &Nat) -> Self {
        Num(BigInt::from(n.clone()))
    }
}

impl Num {
    fn to_nat(&self, what: &str) -> Result<Nat, Error> {
        match self.0.sign() {
            Sign::Minus => Err(Error::Parse(format!("{what} must be non-negative"))),
            _ => Ok(self.0.magnitude().clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: Num,
    pub den: Num,
}

impl From<&ExactRational> for RationalJson {
    fn from(r: &ExactRational) -> Self {
        RationalJson { num: Num(r.numer().clone()), den: Num(r.denom().clone()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub degree: Num,
    pub multiplicity_sequence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub from: CurveJson,
    pub to: CurveJson,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlJson {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<Num>,
    /// Set when the check did not run within budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&BlVerdict> for BlJson {
    fn from(v: &BlVerdict) -> Self {
        match v {
            BlVerdict::Pass => BlJson { passed: true, j: None, expected: None, actual: None, note: None },
            BlVerdict::Fail { j, expected, actual } => BlJson {
                passed: false,
                j: Some(Num((*j).into())),
                expected: Some(Num((*expected).into())),
                actual: Some(Num((*actual).into())),
                note: None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub degree: Num,
    pub newton_pairs: Vec<[Num; 2]>,
    pub puiseux_pairs: Vec<[Num; 2]>,
    pub multiplicity_sequence: String,
    pub delta: Num,
    pub semigroup_generators: Vec<Num>,
    pub lct: RationalJson,
    pub self_intersection: Num,
    pub family: Option<String>,
    pub kodaira: Option<String>,
    pub existence: String,
    pub reduction_chain: Vec<StepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bl_check: Option<BlJson>,
}

fn curve_json(c: &(Nat, MultiplicitySeq)) -> CurveJson {
    CurveJson { degree: Num::from(&c.0), multiplicity_sequence: c.1.to_string() }
}

pub fn chain_json(chain: &[ReductionStep]) -> Vec<StepJson> {
    chain
        .iter()
        .map(|s| StepJson { from: curve_json(&s.from), to: curve_json(&s.to), rule: s.rule.to_string() })
        .collect()
}

fn curve_back(c: &CurveJson) -> Result<(Nat, MultiplicitySeq), Error> {
    Ok((c.degree.to_nat("degree")?, c.multiplicity_sequence.parse()?))
}

impl From<&CurveRecord> for RecordJson {
    fn from(r: &CurveRecord) -> Self {
        RecordJson {
            degree: Num::from(&r.degree),
            newton_pairs: r.newton.pairs().iter().map(|p| [Num::from(&p.p), Num::from(&p.q)]).collect(),
            puiseux_pairs: r.puiseux.pairs().iter().map(|p| [Num::from(&p.p), Num::from(&p.q)]).collect(),
            multiplicity_sequence: r.mult.to_string(),
            delta: Num::from(&r.delta),
            semigroup_generators: r.semigroup_generators.iter().map(Num::from).collect(),
            lct: RationalJson::from(&r.lct),
            self_intersection: Num(r.self_intersection.clone()),
            family: r.family.as_ref().map(|f| f.to_string()),
            kodaira: r.kodaira.map(|k| k.to_string()),
            existence: r.existence.to_string(),
            reduction_chain: chain_json(&r.reduction_chain),
            bl_check: None,
        }
    }
}

impl RecordJson {
    /// Rebuilds the record from its Newton pairs and checks every stored
    /// invariant against the recomputation.
    pub fn to_record(&self) -> Result<CurveRecord, Error> {
        let degree = self.degree.to_nat("degree")?;
        let newton = if self.newton_pairs.is_empty() {
            NewtonPairSeq::smooth()
        } else {
            let pairs = self
                .newton_pairs
                .iter()
                .map(|[p, q]| Ok(NewtonPair::new(p.to_nat("p")?, q.to_nat("q")?)))
                .collect::<Result<Vec<_>, Error>>()?;
            NewtonPairSeq::new(pairs)?
        };
        let mut rec = CurveRecord::from_newton(degree, newton);
        let fresh = RecordJson::from(&rec);
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain(format!("stored {what} does not match recomputation")))
            }
        };
        check(fresh.puiseux_pairs == self.puiseux_pairs, "puiseux_pairs")?;
        check(
            self.multiplicity_sequence.parse::<MultiplicitySeq>()? == rec.mult,
            "multiplicity_sequence",
        )?;
        check(fresh.delta == self.delta, "delta")?;
        check(fresh.semigroup_generators == self.semigroup_generators, "semigroup_generators")?;
        check(fresh.lct == self.lct, "lct")?;
        check(fresh.self_intersection == self.self_intersection, "self_intersection")?;
        rec.family = self.family.as_deref().map(FamilySpec::from_str).transpose()?;
        rec.kodaira = self.kodaira.as_deref().map(Kodaira::from_str).transpose()?;
        rec.existence = Existence::from_str(&self.existence)?;
        rec.reduction_chain = self
            .reduction_chain
            .iter()
            .map(|s| {
                Ok(ReductionStep { from: curve_back(&s.from)?, to: curve_back(&s.to)?, rule: Rule::from_str(&s.rule)? })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(rec)
    }
}

pub fn lct_string(r: &RationalJson) -> String {
    format!("{}/{}", r.num.0, r.den.0)
}

pub fn num_list(v: &[Num]) -> String {
    v.iter().map(|n| n.0.to_string()).collect::<Vec<_>>().join(",")
}

pub fn pair_list(v: &[[Num; 2]]) -> String {
    v.iter().map(|[p, q]| format!("({},{})", p.0, q.0)).collect::<Vec<_>>().join(",")
}

pub fn chain_string(v: &[StepJson]) -> String {
    v.iter()
        .map(|s| {
            format!(
                "{} ({}) -> {} ({}) [{}]",
                s.from.degree.0, s.from.multiplicity_sequence, s.to.degree.0, s.to.multiplicity_sequence, s.rule
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}
