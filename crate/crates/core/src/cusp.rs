//! Representations of a cusp and its scalar invariants.
//!
//! Newton pairs are the canonical input. Puiseux pairs, the characteristic
//! sequence and the multiplicity sequence are derived from them.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Nat = BigUint;

/// Exact rational number, always kept in lowest terms.
pub type ExactRational = BigRational;

pub fn nat(v: u64) -> Nat {
    BigUint::from(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPair {
    pub p: Nat,
    pub q: Nat,
}

impl NewtonPair {
    pub fn new(p: impl Into<Nat>, q: impl Into<Nat>) -> Self {
        NewtonPair { p: p.into(), q: q.into() }
    }
}

/// Ordered Newton pairs `(p_j, q_j)`. The empty sequence stands for a smooth
/// branch and is only built through [`NewtonPairSeq::smooth`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPairSeq {
    pairs: Vec<NewtonPair>,
}

impl NewtonPairSeq {
    pub fn new(pairs: Vec<NewtonPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidNewton("at least one pair is required".into()));
        }
        for (i, pr) in pairs.iter().enumerate() {
            let j = i + 1;
            if pr.p < nat(2) {
                return Err(Error::InvalidNewton(format!("p_{j} >= 2 violated at pair {j}")));
            }
            if pr.q.is_zero() {
                return Err(Error::InvalidNewton(format!("q_{j} >= 1 violated at pair {j}")));
            }
            if !pr.p.gcd(&pr.q).is_one() {
                return Err(Error::InvalidNewton(format!(
                    "gcd(p_{j}, q_{j}) = 1 violated at pair {j}: ({}, {})",
                    pr.p, pr.q
                )));
            }
        }
        if pairs[0].q <= pairs[0].p {
            return Err(Error::InvalidNewton(format!(
                "q_1 > p_1 violated: ({}, {})",
                pairs[0].p, pairs[0].q
            )));
        }
        Ok(NewtonPairSeq { pairs })
    }

    pub fn from_u64(pairs: &[(u64, u64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(p, q)| NewtonPair::new(p, q)).collect())
    }

    pub fn smooth() -> Self {
        NewtonPairSeq { pairs: Vec::new() }
    }

    pub fn is_smooth(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[NewtonPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for NewtonPairSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return f.write_str("smooth");
        }
        let parts: Vec<String> = self.pairs.iter().map(|p| format!("({},{})", p.p, p.q)).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_nat(s: &str) -> Result<Nat> {
    Nat::from_str(s).map_err(|_| Error::Parse(format!("expected a nonnegative integer, got {s:?}")))
}

impl FromStr for NewtonPairSeq {
    type Err = Error;

    /// Accepts `(p,q),(p,q),...` with arbitrary whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "smooth" {
            return Ok(Self::smooth());
        }
        let mut pairs = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = body.find(')').ok_or_else(|| Error::Parse(format!("unclosed pair in {s:?}")))?;
            let (p, q) = body[..close]
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("pair without comma in {s:?}")))?;
            pairs.push(NewtonPair::new(parse_nat(p)?, parse_nat(q)?));
            rest = &body[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(Error::Parse(format!("trailing comma in {s:?}")));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' between pairs in {s:?}")));
            }
        }
        NewtonPairSeq::new(pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuiseuxPair {
    pub p: Nat,
    pub q: Nat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuiseuxPairSeq {
    pairs: Vec<PuiseuxPair>,
}

impl PuiseuxPairSeq {
    pub fn new(pairs: Vec<PuiseuxPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidPuiseux("at least one pair is required".into()));
        }
        let k = pairs.len();
        for j in 0..k {
            let next = if j + 1 < k { pairs[j + 1].p.clone() } else { Nat::one() };
            let cur = &pairs[j];
            let idx = j + 1;
            if cur.p < nat(2) {
                return Err(Error::InvalidPuiseux(format!("P_{idx} >= 2 violated")));
            }
            if cur.p <= next {
                return Err(Error::InvalidPuiseux(format!("P_{idx} > P_{} violated", idx + 1)));
            }
            if !(&cur.p % &next).is_zero() || !(&cur.q % &next).is_zero() {
                return Err(Error::InvalidPuiseux(format!(
                    "P_{} must divide P_{idx} and Q_{idx}",
                    idx + 1
                )));
            }
            if cur.q.is_zero() {
                return Err(Error::InvalidPuiseux(format!("Q_{idx} >= 1 violated")));
            }
            if !(&cur.p / &next).gcd(&(&cur.q / &next)).is_one() {
                return Err(Error::InvalidPuiseux(format!(
                    "gcd(P_{idx}/P_{n}, Q_{idx}/P_{n}) = 1 violated",
                    n = idx + 1
                )));
            }
        }
        if pairs[0].q <= pairs[0].p {
            return Err(Error::InvalidPuiseux("Q_1 > P_1 violated".into()));
        }
        Ok(PuiseuxPairSeq { pairs })
    }

    pub fn from_u64(pairs: &[(u64, u64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(p, q)| PuiseuxPair { p: nat(p), q: nat(q) }).collect())
    }

    pub fn pairs(&self) -> &[PuiseuxPair] {
        &self.pairs
    }

    pub fn is_smooth(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplicity of the branch, `P_1` (1 for a smooth branch).
    pub fn multiplicity(&self) -> Nat {
        self.pairs.first().map(|p| p.p.clone()).unwrap_or_else(Nat::one)
    }

    pub fn q_sum(&self) -> Nat {
        self.pairs.iter().map(|p| &p.q).sum()
    }
}

impl fmt::Display for PuiseuxPairSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return f.write_str("smooth");
        }
        let parts: Vec<String> = self.pairs.iter().map(|p| format!("({},{})", p.p, p.q)).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn newton_to_puiseux(n: &NewtonPairSeq) -> PuiseuxPairSeq {
    let k = n.pairs.len();
    let mut out = vec![PuiseuxPair { p: Nat::zero(), q: Nat::zero() }; k];
    let mut tail = Nat::one();
    for j in (0..k).rev() {
        out[j] = PuiseuxPair { p: &n.pairs[j].p * &tail, q: &n.pairs[j].q * &tail };
        tail *= &n.pairs[j].p;
    }
    PuiseuxPairSeq { pairs: out }
}

pub fn puiseux_to_newton(p: &PuiseuxPairSeq) -> Result<NewtonPairSeq> {
    if p.pairs.is_empty() {
        return Ok(NewtonPairSeq::smooth());
    }
    let k = p.pairs.len();
    let mut pairs = Vec::with_capacity(k);
    for j in 0..k {
        let next = if j + 1 < k { p.pairs[j + 1].p.clone() } else { Nat::one() };
        let (pj, rp) = p.pairs[j].p.div_rem(&next);
        let (qj, rq) = p.pairs[j].q.div_rem(&next);
        if !rp.is_zero() || !rq.is_zero() {
            return Err(Error::InvalidPuiseux(format!("P_{} must divide P_{} and Q_{}", j + 2, j + 1, j + 1)));
        }
        pairs.push(NewtonPair { p: pj, q: qj });
    }
    NewtonPairSeq::new(pairs)
}

/// Characteristic exponents `(a; b_1, ..., b_k)` of a parametrization
/// `(t^a, t^{b_1} + ... + t^{b_k})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicSeq {
    pub a: Nat,
    pub b: Vec<Nat>,
}

impl CharacteristicSeq {
    pub fn new(a: Nat, b: Vec<Nat>) -> Result<Self> {
        if a < nat(2) {
            return Err(Error::InvalidCharacteristic("a >= 2 violated".into()));
        }
        if b.is_empty() {
            return Err(Error::InvalidCharacteristic("at least one exponent is required".into()));
        }
        if b[0] <= a {
            return Err(Error::InvalidCharacteristic("a < b_1 violated".into()));
        }
        let mut g = a.clone();
        for (i, bi) in b.iter().enumerate() {
            if i > 0 && *bi <= b[i - 1] {
                return Err(Error::InvalidCharacteristic(format!("b_{} < b_{} violated", i, i + 1)));
            }
            let next = g.gcd(bi);
            if next == g {
                return Err(Error::InvalidCharacteristic(format!(
                    "b_{} is not characteristic (gcd chain does not drop)",
                    i + 1
                )));
            }
            g = next;
        }
        if !g.is_one() {
            return Err(Error::InvalidCharacteristic("gcd(a, b_1, ..., b_k) = 1 violated".into()));
        }
        Ok(CharacteristicSeq { a, b })
    }

    /// Inverse of [`characteristic_seq`]: successive differences of the
    /// exponents recover the Puiseux pairs.
    pub fn to_newton(&self) -> Result<NewtonPairSeq> {
        let mut puiseux = Vec::with_capacity(self.b.len());
        let mut g = self.a.clone();
        let mut prev = Nat::zero();
        for bi in &self.b {
            puiseux.push(PuiseuxPair { p: g.clone(), q: bi - &prev });
            g = g.gcd(bi);
            prev = bi.clone();
        }
        puiseux_to_newton(&PuiseuxPairSeq::new(puiseux)?)
    }
}

impl fmt::Display for CharacteristicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.a, b.join(", "))
    }
}

pub fn characteristic_seq(n: &NewtonPairSeq) -> CharacteristicSeq {
    let p = newton_to_puiseux(n);
    let mut acc = Nat::zero();
    let b = p
        .pairs
        .iter()
        .map(|pp| {
            acc += &pp.q;
            acc.clone()
        })
        .collect();
    CharacteristicSeq { a: p.multiplicity(), b }
}

/// Run-length encoded multiplicity sequence with trailing 1s dropped.
/// The empty sequence denotes a smooth point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiplicitySeq {
    runs: Vec<(Nat, Nat)>,
}

impl MultiplicitySeq {
    /// Strict constructor: values strictly decreasing, each at least 2,
    /// counts positive.
    pub fn new(runs: Vec<(Nat, Nat)>) -> Result<Self> {
        for (i, (v, c)) in runs.iter().enumerate() {
            if *v < nat(2) {
                return Err(Error::InvalidMultiplicity(format!("run {} has value {v} < 2", i + 1)));
            }
            if c.is_zero() {
                return Err(Error::InvalidMultiplicity(format!("run {} has zero count", i + 1)));
            }
            if i > 0 && *v >= runs[i - 1].0 {
                return Err(Error::InvalidMultiplicity(format!(
                    "values must strictly decrease across runs ({} then {v})",
                    runs[i - 1].0
                )));
            }
        }
        Ok(MultiplicitySeq { runs })
    }

    /// Merges adjacent equal values and drops 1s, then validates.
    pub fn normalized(runs: Vec<(Nat, Nat)>) -> Result<Self> {
        let mut merged: Vec<(Nat, Nat)> = Vec::new();
        for (v, c) in runs {
            if v.is_one() || c.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some((lv, lc)) if *lv == v => *lc += c,
                _ => merged.push((v, c)),
            }
        }
        Self::new(merged)
    }

    pub fn from_u64(runs: &[(u64, u64)]) -> Result<Self> {
        Self::normalized(runs.iter().map(|&(v, c)| (nat(v), nat(c))).collect())
    }

    pub fn smooth() -> Self {
        MultiplicitySeq { runs: Vec::new() }
    }

    pub fn is_smooth(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(Nat, Nat)] {
        &self.runs
    }

    pub fn first(&self) -> Option<&Nat> {
        self.runs.first().map(|r| &r.0)
    }

    /// Total number of entries.
    pub fn total_len(&self) -> Nat {
        self.runs.iter().map(|r| &r.1).sum()
    }

    /// Entry at 1-based position `pos`, counting repetitions.
    pub fn entry(&self, pos: &Nat) -> Option<&Nat> {
        if pos.is_zero() {
            return None;
        }
        let mut seen = Nat::zero();
        for (v, c) in &self.runs {
            seen += c;
            if *pos <= seen {
                return Some(v);
            }
        }
        None
    }

    /// Drops the first `count` entries.
    pub fn skip(&self, count: &Nat) -> MultiplicitySeq {
        let mut left = count.clone();
        let mut out = Vec::new();
        for (v, c) in &self.runs {
            if left.is_zero() {
                out.push((v.clone(), c.clone()));
            } else if left >= *c {
                left -= c;
            } else {
                out.push((v.clone(), c - &left));
                left = Nat::zero();
            }
        }
        MultiplicitySeq { runs: out }
    }

    /// Prepends `count` copies of `value`, merging with the first run if equal.
    pub fn prepend(&self, value: &Nat, count: &Nat) -> Result<MultiplicitySeq> {
        let mut runs = vec![(value.clone(), count.clone())];
        runs.extend(self.runs.iter().cloned());
        Self::normalized(runs)
    }
}

impl fmt::Display for MultiplicitySeq {
    /// Comma-separated runs, repetitions written `v_c`. A smooth point is
    /// written `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|(v, c)| if c.is_one() { v.to_string() } else { format!("{v}_{c}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiplicitySeq {
    type Err = Error;

    /// Accepts `16,8_4,4_3,2_3`, `8x4` for repetitions, optional enclosing
    /// parentheses and whitespace. Entries equal to 1 are dropped.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(&compact);
        if inner.is_empty() {
            return Ok(Self::smooth());
        }
        let mut runs = Vec::new();
        for tok in inner.split(',') {
            let (v, c) = match tok.split_once(['_', 'x']) {
                Some((v, c)) => (parse_nat(v)?, parse_nat(c)?),
                None => (parse_nat(tok)?, Nat::one()),
            };
            if v.is_zero() {
                return Err(Error::InvalidMultiplicity("multiplicity 0 is not allowed".into()));
            }
            if c.is_zero() {
                return Err(Error::InvalidMultiplicity(format!("zero repetition count in {tok:?}")));
            }
            runs.push((v, c));
        }
        for w in runs.windows(2) {
            if w[1].0 > w[0].0 {
                return Err(Error::InvalidMultiplicity(format!(
                    "multiplicities must be non-increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Self::normalized(runs)
    }
}

/// Multiplicity sequence by the staged Euclidean algorithm on the Puiseux
/// pairs.
pub fn multiplicity_sequence(n: &NewtonPairSeq) -> MultiplicitySeq {
    let p = newton_to_puiseux(n);
    let mut runs: Vec<(Nat, Nat)> = Vec::new();
    let mut e = p.multiplicity();
    for pair in &p.pairs {
        let mut c = pair.q.clone();
        loop {
            let (quot, r) = c.div_rem(&e);
            if !quot.is_zero() {
                runs.push((e.clone(), quot));
            }
            if r.is_zero() {
                break;
            }
            c = std::mem::replace(&mut e, r);
        }
    }
    debug_assert!(e.is_one() || p.is_smooth());
    MultiplicitySeq::normalized(runs).expect("staged Euclid yields a non-increasing sequence")
}

pub fn delta_from_puiseux(p: &PuiseuxPairSeq) -> Nat {
    let mut twice = Nat::zero();
    for (j, pair) in p.pairs.iter().enumerate() {
        let pm1 = &pair.p - 1u32;
        if j == 0 {
            twice += pm1 * (&pair.q - 1u32);
        } else {
            twice += pm1 * &pair.q;
        }
    }
    assert!(twice.is_even(), "twice delta must be even");
    twice >> 1
}

pub fn delta_from_multiplicities(m: &MultiplicitySeq) -> Nat {
    let mut twice = Nat::zero();
    for (v, c) in &m.runs {
        twice += v * (v - 1u32) * c;
    }
    twice >> 1
}

/// `1/P_1 + 1/Q_1`; a smooth branch has threshold 1.
pub fn lct(p: &PuiseuxPairSeq) -> ExactRational {
    match p.pairs.first() {
        None => ExactRational::one(),
        Some(first) => {
            let a = ExactRational::new(BigInt::one(), BigInt::from(first.p.clone()));
            let b = ExactRational::new(BigInt::one(), BigInt::from(first.q.clone()));
            a + b
        }
    }
}

/// `3d - 1 - P_1 - sum Q_i`.
pub fn self_intersection(d: &Nat, p: &PuiseuxPairSeq) -> BigInt {
    BigInt::from(d * 3u32) - 1 - BigInt::from(p.multiplicity()) - BigInt::from(p.q_sum())
}

pub fn genus_target(d: &Nat) -> Nat {
    if d.is_zero() {
        return Nat::zero();
    }
    let d1 = d - 1u32;
    if d1.is_zero() {
        return Nat::zero();
    }
    (&d1 * (&d1 - 1u32)) >> 1
}

/// Fibonacci number with `phi_{-1} = 1`.
pub fn fibonacci(j: i64) -> Result<Nat> {
    if j < -1 {
        return Err(Error::Domain(format!("fibonacci index {j} < -1")));
    }
    if j == -1 {
        return Ok(Nat::one());
    }
    let (mut a, mut b) = (Nat::zero(), Nat::one());
    for _ in 0..j {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    Ok(a)
}

/// Convenience accessor for small values.
pub fn to_u64(n: &Nat) -> Option<u64> {
    n.to_u64()
}
