//! Existence of candidates by degree reduction to known curves.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cusp::{nat, MultiplicitySeq, Nat};
use crate::record::Existence;

const REGISTRY_DATA: &str = include_str!("../data/base_registry.txt");

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Strip `(kn, n_{2k})` from a degree `(k+1)n` curve.
    Lemma211 { k: Nat, n: Nat },
    /// Recognized as the `a^2 s + 1` construction from `z x^a = y^{a+1}`.
    Lemma212 { a: u64, s: u64 },
    Base,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Lemma211 { k, n } => write!(f, "lemma211(k={k},n={n})"),
            Rule::Lemma212 { a, s } => write!(f, "lemma212(a={a},s={s})"),
            Rule::Base => f.write_str("base"),
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = crate::Error;
    /// Parses the display form: `lemma211(k=2,n=8)`, `lemma212(a=3,s=2)`,
    /// `base`.
    fn from_str(s: &str) -> crate::Result<Self> {
        let s = s.trim();
        if s == "base" {
            return Ok(Rule::Base);
        }
        let bad = || crate::Error::Parse(format!("unknown reduction rule {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut vals = std::collections::BTreeMap::new();
        for part in inner.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            vals.insert(k.trim(), v.trim());
        }
        let get = |k: &str| vals.get(k).copied().ok_or_else(bad);
        match name {
            "lemma211" => Ok(Rule::Lemma211 {
                k: get("k")?.parse().map_err(|_| bad())?,
                n: get("n")?.parse().map_err(|_| bad())?,
            }),
            "lemma212" => Ok(Rule::Lemma212 {
                a: get("a")?.parse().map_err(|_| bad())?,
                s: get("s")?.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReductionStep {
    pub from: (Nat, MultiplicitySeq),
    pub to: (Nat, MultiplicitySeq),
    pub rule: Rule,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}) -> {} ({}) [{}]",
            self.from.0, self.from.1, self.to.0, self.to.1, self.rule
        )
    }
}

/// Curves known to exist, with a witness description per entry.
#[derive(Clone, Debug)]
pub struct BaseRegistry {
    entries: BTreeMap<(Nat, MultiplicitySeq), String>,
}

impl BaseRegistry {
    pub fn parse(text: &str) -> crate::Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.splitn(3, '\t');
            let bad = || crate::Error::Parse(format!("registry line {}: {line:?}", lineno + 1));
            let d: Nat = cols.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let m: MultiplicitySeq = cols.next().ok_or_else(bad)?.parse()?;
            let witness = cols.next().unwrap_or("").trim().to_string();
            entries.insert((d, m), witness);
        }
        Ok(BaseRegistry { entries })
    }

    /// The registry shipped with the crate.
    pub fn builtin() -> &'static BaseRegistry {
        static REG: OnceLock<BaseRegistry> = OnceLock::new();
        REG.get_or_init(|| BaseRegistry::parse(REGISTRY_DATA).expect("built-in registry parses"))
    }

    pub fn contains(&self, d: &Nat, m: &MultiplicitySeq) -> bool {
        self.entries.contains_key(&(d.clone(), m.clone()))
    }

    pub fn witness(&self, d: &Nat, m: &MultiplicitySeq) -> Option<&str> {
        self.entries.get(&(d.clone(), m.clone())).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Nat, &MultiplicitySeq, &str)> {
        self.entries.iter().map(|((d, m), w)| (d, m, w.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `(k, n, remainder)` when `m = (kn, n_{2k}, remainder)` and `d = (k+1)n`.
pub fn detect_reduction(d: &Nat, m: &MultiplicitySeq) -> Option<(Nat, Nat, MultiplicitySeq)> {
    let m1 = m.first()?;
    let n = m.entry(&nat(2))?.clone();
    if n < nat(2) {
        return None;
    }
    let (k, r) = m1.div_rem(&n);
    if k.is_zero() || !r.is_zero() {
        return None;
    }
    if (&k + 1u32) * &n != *d {
        return None;
    }
    // positions 2..=2k+1 all equal n; the sequence is non-increasing so the
    // last one suffices
    let last = &k * 2u32 + 1u32;
    if m.entry(&last)? != &n {
        return None;
    }
    Some((k.clone(), n, m.skip(&last)))
}

/// `(a^2 s + 1, ((a-1)as, as_{2a-1}, a_{2s}))`, normalized.
pub fn type1_construct(a: u64, s: u64) -> crate::Result<(Nat, MultiplicitySeq)> {
    if a < 3 || s < 1 {
        return Err(crate::Error::Domain(format!("requires a >= 3 and s >= 1, got a = {a}, s = {s}")));
    }
    let (an, sn) = (nat(a), nat(s));
    let d = &an * &an * &sn + 1u32;
    let m = MultiplicitySeq::normalized(vec![
        ((&an - 1u32) * &an * &sn, Nat::one()),
        (&an * &sn, nat(2 * a - 1)),
        (an.clone(), nat(2 * s)),
    ])?;
    Ok((d, m))
}

/// `(a, s)` when `(d, m)` is the normalized `type1_construct(a, s)`.
pub fn detect_lemma212(d: &Nat, m: &MultiplicitySeq) -> Option<(u64, u64)> {
    let d1 = d.to_u64()?.checked_sub(1)?;
    let mut a = 3u64;
    while a.checked_mul(a)? <= d1 {
        if d1 % (a * a) == 0 {
            let s = d1 / (a * a);
            if let Ok((dd, mm)) = type1_construct(a, s) {
                if dd == *d && mm == *m {
                    return Some((a, s));
                }
            }
        }
        a += 1;
    }
    None
}

/// Strips with the reduction rule until a registry hit; falls back to the
/// `a^2 s + 1` recognition. Unresolved input is a candidate with an empty
/// chain.
pub fn resolve_existence(d: &Nat, m: &MultiplicitySeq) -> (Existence, Vec<ReductionStep>) {
    resolve_with(BaseRegistry::builtin(), d, m)
}

pub fn resolve_with(reg: &BaseRegistry, d: &Nat, m: &MultiplicitySeq) -> (Existence, Vec<ReductionStep>) {
    let mut chain = Vec::new();
    let (mut cd, mut cm) = (d.clone(), m.clone());
    loop {
        if reg.contains(&cd, &cm) {
            let status = if chain.is_empty() { Existence::ProvedBase } else { Existence::ProvedReduction };
            chain.push(ReductionStep { from: (cd.clone(), cm.clone()), to: (cd, cm), rule: Rule::Base });
            return (status, chain);
        }
        if let Some((k, n, rest)) = detect_reduction(&cd, &cm) {
            chain.push(ReductionStep {
                from: (cd, cm),
                to: (n.clone(), rest.clone()),
                rule: Rule::Lemma211 { k, n: n.clone() },
            });
            cd = n;
            cm = rest;
            continue;
        }
        if let Some((a, s)) = detect_lemma212(&cd, &cm) {
            let to = (nat(a + 1), MultiplicitySeq::from_u64(&[(a, 1)]).expect("a >= 3"));
            chain.push(ReductionStep { from: (cd, cm), to, rule: Rule::Lemma212 { a, s } });
            return (Existence::ProvedLemma212, chain);
        }
        return (Existence::Candidate, Vec::new());
    }
}
