//! Exhaustive search for the cusp types a rational unicuspidal curve of a
//! given degree can carry.
//!
//! Work is done on characteristic data: `a = P_1` and the increments
//! `Q_1, ..., Q_k`, with `P_{j+1} = gcd(P_j, Q_j)`. Rationality reads
//! `sum_j (P_j - 1) Q_j = (d-1)(d-2) + a - 1`.

use std::cmp::Ordering;

use num_integer::Integer;
use rayon::prelude::*;

use crate::cusp::{nat, NewtonPair, NewtonPairSeq};
use crate::error::{Error, Result};
use crate::existence::resolve_existence;
use crate::families::attribute_family;
use crate::record::{canonical_cmp, CurveRecord, Existence};
use crate::semigroup::bl_check_unicuspidal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Pruned,
    /// Plain nested loops over all characteristic exponents up to
    /// `(d-1)(d-2) + 1`, filtered afterwards. Kept as a cross-check.
    Paranoid,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub degree: u64,
    pub pair_count: usize,
    pub mode: Mode,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl SearchConfig {
    pub fn new(degree: u64, pair_count: usize) -> Self {
        SearchConfig { degree, pair_count, mode: Mode::Pruned, workers: None }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn workers(mut self, n: usize) -> Self {
        self.workers = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 3 {
            return Err(Error::Domain(format!("degree {} < 3 carries no cusp", self.degree)));
        }
        if self.degree > 1 << 20 {
            return Err(Error::Domain(format!("degree {} is beyond the search range", self.degree)));
        }
        if self.pair_count == 0 {
            return Err(Error::Domain("pair count must be at least 1".into()));
        }
        let bound = max_pairs_bound(self.degree);
        if self.pair_count > bound {
            return Err(Error::Domain(format!(
                "k = {} exceeds the bound {bound} for degree {}",
                self.pair_count, self.degree
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::Domain("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// Largest `k` with `(d-1)(d-2) >= (2^k - 1) 2^k`.
pub fn max_pairs_bound(d: u64) -> usize {
    if d < 3 {
        return 0;
    }
    let t = (d as u128 - 1) * (d as u128 - 2);
    let mut k = 0;
    while k < 63 && t >= ((1u128 << (k + 1)) - 1) << (k + 1) {
        k += 1;
    }
    k
}

/// Outcome of one search, with the candidates dropped by the tangent-line
/// bound `m_1 + m_2 <= d`.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub records: Vec<CurveRecord>,
    pub tangent_rejected: Vec<NewtonPairSeq>,
}

// Characteristic data: a = P_1 and the increments Q_1..Q_k.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Char {
    a: u64,
    q: Vec<u64>,
}

impl Char {
    fn newton(&self) -> NewtonPairSeq {
        let mut p = vec![self.a];
        for (j, &qj) in self.q.iter().enumerate() {
            p.push(p[j].gcd(&qj));
        }
        let pairs = (0..self.q.len())
            .map(|j| NewtonPair::new(nat(p[j] / p[j + 1]), nat(self.q[j] / p[j + 1])))
            .collect();
        NewtonPairSeq::new(pairs).expect("search only emits valid characteristic data")
    }
}

pub fn enumerate_candidates(cfg: SearchConfig) -> Result<Vec<CurveRecord>> {
    Ok(enumerate_detailed(cfg)?.records)
}

pub fn enumerate_detailed(cfg: SearchConfig) -> Result<Enumeration> {
    cfg.validate()?;
    match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            Ok(pool.install(|| run(cfg)))
        }
        None => Ok(run(cfg)),
    }
}

fn run(cfg: SearchConfig) -> Enumeration {
    let d = cfg.degree;
    let chars = match cfg.mode {
        Mode::Pruned => pruned(d, cfg.pair_count),
        Mode::Paranoid => paranoid(d, cfg.pair_count),
    };
    finish(d, chars)
}

fn finish(d: u64, mut chars: Vec<Char>) -> Enumeration {
    chars.sort();
    chars.dedup();
    let survivors: Vec<CurveRecord> = chars
        .par_iter()
        .filter_map(|c| {
            let rec = CurveRecord::from_newton(nat(d), c.newton());
            let gens: Vec<u64> = rec.semigroup_generators.iter().map(|g| g.try_into().unwrap()).collect();
            bl_check_unicuspidal(d, &gens).passed().then_some(rec)
        })
        .collect();
    let mut out = Enumeration::default();
    for rec in survivors {
        let m1 = rec.mult.entry(&nat(1)).cloned().unwrap_or_else(|| nat(1));
        let m2 = rec.mult.entry(&nat(2)).cloned().unwrap_or_else(|| nat(1));
        if m1 + m2 <= nat(d) {
            out.records.push(rec);
        } else {
            out.tangent_rejected.push(rec.newton);
        }
    }
    out.records.sort_by(canonical_cmp);
    out
}

// (1) a = d would give R(d+1) = 2 != 3, so a <= d-1.
// (2) every later term of the rationality sum is positive, so
//     (a-1) Q_1 < target when k > 1 and (a-1) Q_1 = target when k = 1.
// (3) partial sums only grow, so each middle loop stops once they reach
//     the target.
// (4) the last increment is solved from the residual.
fn pruned(d: u64, k: usize) -> Vec<Char> {
    let t = (d - 1) * (d - 2);
    let units: Vec<(u64, u64)> = (2..d)
        .flat_map(|a| {
            let target = t + a - 1;
            let hi = if k == 1 { target / (a - 1) } else { (target - 1) / (a - 1) };
            (a + 1..=hi).map(move |q1| (a, q1))
        })
        .collect();
    units
        .into_par_iter()
        .flat_map_iter(|(a, q1)| {
            let target = t + a - 1;
            let g = a.gcd(&q1);
            let mut found = Vec::new();
            if k == 1 {
                if g == 1 && (a - 1) * q1 == target {
                    found.push(Char { a, q: vec![q1] });
                }
            } else if g > 1 && g < a {
                let mut qs = vec![q1];
                descend(g, (a - 1) * q1, target, k - 1, a, &mut qs, &mut found);
            }
            found
        })
        .collect()
}

fn descend(p: u64, partial: u64, target: u64, left: usize, a: u64, qs: &mut Vec<u64>, found: &mut Vec<Char>) {
    let room = target - partial;
    if left == 1 {
        if room % (p - 1) == 0 {
            let q = room / (p - 1);
            if q >= 1 && p.gcd(&q) == 1 {
                qs.push(q);
                found.push(Char { a, q: qs.clone() });
                qs.pop();
            }
        }
        return;
    }
    // every remaining stage adds at least 1
    let mut q = 1;
    while (p - 1) * q < room {
        let g = p.gcd(&q);
        if g > 1 && g < p {
            qs.push(q);
            descend(g, partial + (p - 1) * q, target, left - 1, a, qs, found);
            qs.pop();
        }
        q += 1;
    }
}

// Naive scan: every increasing chain a < b_1 < ... < b_k <= (d-1)(d-2) + 1
// whose gcd chain drops properly and ends at 1, then the exact genus test.
fn paranoid(d: u64, k: usize) -> Vec<Char> {
    let t = (d - 1) * (d - 2);
    let bmax = t + 1;
    (2..d)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut found = Vec::new();
            let mut bs = Vec::with_capacity(k);
            naive(a, a, a, k, bmax, t, &mut bs, &mut found);
            found
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn naive(a: u64, e: u64, prev: u64, left: usize, bmax: u64, t: u64, bs: &mut Vec<u64>, found: &mut Vec<Char>) {
    for b in prev + 1..=bmax {
        let g = e.gcd(&b);
        if left == 1 {
            if g != 1 {
                continue;
            }
            bs.push(b);
            if genus_twice(a, bs) == t as u128 {
                let mut q = Vec::with_capacity(bs.len());
                let mut last = 0;
                for &x in bs.iter() {
                    q.push(x - last);
                    last = x;
                }
                found.push(Char { a, q });
            }
            bs.pop();
        } else {
            if g == 1 || g == e {
                continue;
            }
            bs.push(b);
            naive(a, g, b, left - 1, bmax, t, bs, found);
            bs.pop();
        }
    }
}

// 2 delta from the characteristic exponents: (a-1)(b_1-1) + sum (e_{j-1}-1)(b_j - b_{j-1}).
fn genus_twice(a: u64, bs: &[u64]) -> u128 {
    let mut e = a;
    let mut total = (a as u128 - 1) * (bs[0] as u128 - 1);
    e = e.gcd(&bs[0]);
    for w in bs.windows(2) {
        total += (e as u128 - 1) * (w[1] - w[0]) as u128;
        e = e.gcd(&w[1]);
    }
    total
}

/// Exclusions in the naive reference search that are not part of the type
/// definition. Only the `q_2 > 1` requirement ever removes anything; the
/// "distinct pairs" test there compares Puiseux pairs, which always differ.
pub fn reference_extra_exclusion(n: &NewtonPairSeq) -> Option<&'static str> {
    let pairs = n.pairs();
    if pairs.len() >= 2 && pairs[1].q == nat(1) {
        return Some("second Newton pair has q_2 = 1");
    }
    None
}

/// Attribution and existence for a batch of candidates.
pub fn classify(records: Vec<CurveRecord>) -> Vec<CurveRecord> {
    let mut out: Vec<CurveRecord> = records
        .into_par_iter()
        .map(|mut rec| {
            rec.family = attribute_family(&rec);
            rec.kodaira = rec.family.as_ref().map(|f| f.kind.kodaira());
            let (status, chain) = resolve_existence(&rec.degree, &rec.mult);
            rec.existence = status;
            rec.reduction_chain = chain;
            if rec.existence == Existence::Candidate && rec.family.is_some() {
                rec.existence = Existence::ProvedFamily;
            }
            rec
        })
        .collect();
    out.sort_by(canonical_cmp);
    out.dedup_by(|a, b| canonical_cmp(a, b) == Ordering::Equal);
    out
}

/// Every candidate of degree `3..=max_degree`, optionally restricted to the
/// given pair counts, attributed and resolved. Degrees above 30 are outside
/// the proved-complete range.
pub fn classify_range(max_degree: u64, pair_counts: Option<&[usize]>, workers: Option<usize>) -> Result<Vec<CurveRecord>> {
    let mut all = Vec::new();
    for d in 3..=max_degree {
        for k in 1..=max_pairs_bound(d) {
            if pair_counts.is_some_and(|ks| !ks.contains(&k)) {
                continue;
            }
            let mut cfg = SearchConfig::new(d, k);
            cfg.workers = workers;
            all.extend(enumerate_candidates(cfg)?);
        }
    }
    Ok(classify(all))
}
