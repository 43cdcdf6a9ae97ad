use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::cusp::{
    delta_from_multiplicities, delta_from_puiseux, genus_target, lct, multiplicity_sequence, newton_to_puiseux,
    self_intersection, ExactRational, MultiplicitySeq, Nat, NewtonPairSeq, PuiseuxPairSeq,
};
use crate::error::{Error, Result};
use crate::existence::ReductionStep;
use crate::families::FamilySpec;
use crate::semigroup::generators_from_newton;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Existence {
    ProvedBase,
    ProvedReduction,
    ProvedLemma212,
    ProvedFamily,
    Candidate,
}

impl Existence {
    pub fn as_str(self) -> &'static str {
        match self {
            Existence::ProvedBase => "proved-base",
            Existence::ProvedReduction => "proved-reduction",
            Existence::ProvedLemma212 => "proved-lemma212",
            Existence::ProvedFamily => "proved-family",
            Existence::Candidate => "candidate",
        }
    }

    pub fn is_proved(self) -> bool {
        self != Existence::Candidate
    }
}

impl fmt::Display for Existence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Existence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "proved-base" => Existence::ProvedBase,
            "proved-reduction" => Existence::ProvedReduction,
            "proved-lemma212" => Existence::ProvedLemma212,
            "proved-family" => Existence::ProvedFamily,
            "candidate" => Existence::Candidate,
            _ => return Err(Error::Parse(format!("unknown existence status {s:?}"))),
        })
    }
}

/// Logarithmic Kodaira dimension of the complement, as carried by a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    NegInfinity,
    One,
    Two,
}

impl Kodaira {
    pub fn as_str(self) -> &'static str {
        match self {
            Kodaira::NegInfinity => "-inf",
            Kodaira::One => "1",
            Kodaira::Two => "2",
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kodaira {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "-inf" => Kodaira::NegInfinity,
            "1" => Kodaira::One,
            "2" => Kodaira::Two,
            _ => return Err(Error::Parse(format!("unknown Kodaira dimension {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub degree: Nat,
    pub newton: NewtonPairSeq,
    pub puiseux: PuiseuxPairSeq,
    pub mult: MultiplicitySeq,
    pub delta: Nat,
    pub semigroup_generators: Vec<Nat>,
    pub lct: ExactRational,
    pub self_intersection: BigInt,
    pub family: Option<FamilySpec>,
    pub kodaira: Option<Kodaira>,
    pub existence: Existence,
    pub reduction_chain: Vec<ReductionStep>,
}

impl CurveRecord {
    /// Record with every invariant computed from the Newton pairs; no family,
    /// existence `candidate`.
    pub fn from_newton(degree: Nat, newton: NewtonPairSeq) -> Self {
        let puiseux = newton_to_puiseux(&newton);
        let mult = multiplicity_sequence(&newton);
        let delta = delta_from_puiseux(&puiseux);
        let semigroup_generators = generators_from_newton(&newton);
        let lct = lct(&puiseux);
        let self_intersection = self_intersection(&degree, &puiseux);
        CurveRecord {
            degree,
            newton,
            puiseux,
            mult,
            delta,
            semigroup_generators,
            lct,
            self_intersection,
            family: None,
            kodaira: None,
            existence: Existence::Candidate,
            reduction_chain: Vec::new(),
        }
    }

    /// Recomputes every stored invariant and checks the rationality
    /// constraint.
    pub fn verify(&self) -> Result<()> {
        let fresh = CurveRecord::from_newton(self.degree.clone(), self.newton.clone());
        let mismatch = |what: &str| Err(Error::Domain(format!("stored {what} does not match recomputation")));
        if fresh.puiseux != self.puiseux {
            return mismatch("Puiseux pairs");
        }
        if fresh.mult != self.mult {
            return mismatch("multiplicity sequence");
        }
        if fresh.delta != self.delta || delta_from_multiplicities(&self.mult) != self.delta {
            return mismatch("delta");
        }
        if fresh.semigroup_generators != self.semigroup_generators {
            return mismatch("semigroup generators");
        }
        if fresh.lct != self.lct {
            return mismatch("lct");
        }
        if fresh.self_intersection != self.self_intersection {
            return mismatch("self-intersection");
        }
        if self.delta != genus_target(&self.degree) {
            return Err(Error::Domain(format!(
                "delta {} differs from (d-1)(d-2)/2 = {}",
                self.delta,
                genus_target(&self.degree)
            )));
        }
        Ok(())
    }

    pub fn pair_count(&self) -> usize {
        self.newton.len()
    }
}

/// Canonical order: degree, then Newton pairs lexicographically.
pub fn canonical_cmp(a: &CurveRecord, b: &CurveRecord) -> Ordering {
    a.degree.cmp(&b.degree).then_with(|| a.newton.cmp(&b.newton))
}
