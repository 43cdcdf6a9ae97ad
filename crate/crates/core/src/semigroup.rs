//! Semigroup of a cusp, its counting function and the unicuspidal
//! Borodzik-Livingston check.

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::cusp::{newton_to_puiseux, Nat, NewtonPairSeq};
use crate::error::{Error, Result};

/// Minimal generators `w_1, ..., w_{k+1}` of the semigroup of the branch.
pub fn generators_from_newton(n: &NewtonPairSeq) -> Vec<Nat> {
    if n.is_smooth() {
        return vec![Nat::one()];
    }
    let p = newton_to_puiseux(n);
    let pairs = n.pairs();
    let pp = p.pairs();
    let mut w = vec![pp[0].p.clone(), pp[0].q.clone()];
    for j in 3..=pairs.len() + 1 {
        let next = &pairs[j - 3].p * &w[j - 2] + &pp[j - 2].q;
        w.push(next);
    }
    w
}

/// Generators plus a membership table over `[0, bound]`.
#[derive(Clone, Debug)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    bound: u64,
    membership: Vec<bool>,
    // prefix[x] = number of members in [0, x)
    prefix: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn contains(&self, x: u64) -> Option<bool> {
        self.membership.get(x as usize).copied()
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.membership.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u64)
    }
}

pub fn build_membership(generators: &[u64], bound: u64) -> NumericalSemigroup {
    let mut gens: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
    gens.sort_unstable();
    gens.dedup();
    let len = bound as usize + 1;
    let mut membership = vec![false; len];
    membership[0] = true;
    for x in 1..len {
        membership[x] = gens
            .iter()
            .take_while(|&&g| g as usize <= x)
            .any(|&g| membership[x - g as usize]);
    }
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0);
    let mut acc = 0;
    for &m in &membership {
        acc += m as u64;
        prefix.push(acc);
    }
    NumericalSemigroup { generators: gens, bound, membership, prefix }
}

/// Number of semigroup elements in `[0, k)`.
pub fn counting_r(s: &NumericalSemigroup, k: i64) -> Result<u64> {
    if k <= 0 {
        return Ok(0);
    }
    if k as u64 > s.bound + 1 {
        return Err(Error::Range { k, bound: s.bound });
    }
    Ok(s.prefix[k as usize])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlVerdict {
    Pass,
    Fail { j: u64, expected: u128, actual: u128 },
}

impl BlVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, BlVerdict::Pass)
    }
}

fn target(j: u64) -> u128 {
    let j = j as u128;
    (j + 1) * (j + 2) / 2
}

/// Membership bound needed by the check at degree `d`.
pub fn bl_bound(d: u64) -> u64 {
    if d < 2 {
        return 1;
    }
    (d - 2) * d + 1
}

/// `R(jd + 1) = (j+1)(j+2)/2` for `j = 0..=d-2`, evaluated on a membership
/// table.
pub fn bl_check_unicuspidal(d: u64, generators: &[u64]) -> BlVerdict {
    let s = build_membership(generators, bl_bound(d));
    bl_check_with(&s, d)
}

/// Same check against an existing table; the table bound must cover
/// `(d-2)d + 1`.
pub fn bl_check_with(s: &NumericalSemigroup, d: u64) -> BlVerdict {
    assert!(s.bound >= bl_bound(d), "membership bound too small for degree {d}");
    for j in 0..d.saturating_sub(1) {
        let actual = s.prefix[(j * d + 1) as usize] as u128;
        let expected = target(j);
        if actual != expected {
            return BlVerdict::Fail { j, expected, actual };
        }
    }
    BlVerdict::Pass
}

/// Apery set of the smallest generator `m`: entry `r` is the least semigroup
/// element congruent to `r` mod `m`. Round-robin shortest paths over
/// residues.
pub fn apery_set(generators: &[u64]) -> Vec<u64> {
    let mut gens: Vec<u64> = generators.to_vec();
    gens.sort_unstable();
    let m = gens[0] as usize;
    let mut n = vec![u64::MAX; m];
    n[0] = 0;
    for &a in &gens[1..] {
        let step = (a % m as u64) as usize;
        let g = (a as usize).gcd(&m);
        let cycle = m / g;
        for start in 0..g {
            let mut best = start;
            let mut r = start;
            for _ in 0..cycle {
                if n[r] < n[best] {
                    best = r;
                }
                r = (r + step) % m;
            }
            if n[best] == u64::MAX {
                continue;
            }
            let mut r = best;
            for _ in 1..cycle {
                let next = (r + step) % m;
                let cand = n[r] + a;
                if cand < n[next] {
                    n[next] = cand;
                }
                r = next;
            }
        }
    }
    n
}

struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { tree: vec![0; n + 1] }
    }

    fn add(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    // sum over indices < i
    fn prefix_excl(&self, mut i: usize) -> u64 {
        let mut s = 0u64;
        while i > 0 {
            s += self.tree[i] as u64;
            i &= i - 1;
        }
        s
    }
}

const BLOCK_WORDS: usize = 8;

// Set of residues with rank queries: a bitset plus a Fenwick tree over
// 512-bit blocks, so the hot data stays in cache for large moduli.
struct RankSet {
    words: Vec<u64>,
    blocks: Fenwick,
}

impl RankSet {
    fn new(m: usize) -> Self {
        let nwords = m.div_ceil(64);
        RankSet { words: vec![0; nwords], blocks: Fenwick::new(nwords.div_ceil(BLOCK_WORDS)) }
    }

    fn insert(&mut self, r: usize) {
        self.words[r / 64] |= 1 << (r % 64);
        self.blocks.add(r / 64 / BLOCK_WORDS);
    }

    // members <= r
    fn rank(&self, r: usize) -> u64 {
        let w = r / 64;
        let b = w / BLOCK_WORDS;
        let mut s = self.blocks.prefix_excl(b);
        for word in &self.words[b * BLOCK_WORDS..w] {
            s += word.count_ones() as u64;
        }
        let bit = r % 64;
        let mask = if bit == 63 { u64::MAX } else { (1u64 << (bit + 1)) - 1 };
        s + (self.words[w] & mask).count_ones() as u64
    }
}

/// The check without a membership table. With `m` the smallest generator and
/// `A` its Apery set, `R(K) = sum over a in A, a < K of ceil((K - a)/m)`.
/// All `K = jd + 1` are handled in one sweep over the sorted Apery set, so
/// the cost is `O(d log m + m log m)` time and `O(m)` memory.
pub fn bl_check_apery(d: u64, generators: &[u64]) -> BlVerdict {
    let mut ap = apery_set(generators);
    let m = ap.len() as u64;
    ap.sort_unstable();
    let mut set = RankSet::new(ap.len());
    let mut ptr = 0usize;
    let mut cnt: u128 = 0;
    let mut sum_q: u128 = 0;
    // K - 1 = j d = q m + sigma, advanced incrementally
    let (step_q, step_r) = (d / m, d % m);
    let (mut q, mut sigma) = (0u64, 0u64);
    for j in 0..d.saturating_sub(1) {
        if j > 0 {
            q += step_q;
            sigma += step_r;
            if sigma >= m {
                sigma -= m;
                q += 1;
            }
        }
        let k = j as u128 * d as u128 + 1;
        while ptr < ap.len() && (ap[ptr] as u128) < k {
            let a = ap[ptr];
            set.insert((a % m) as usize);
            cnt += 1;
            sum_q += (a / m) as u128;
            ptr += 1;
        }
        let above = cnt as u64 - set.rank(sigma as usize);
        let actual = cnt * (q as u128 + 1) - sum_q - above as u128;
        let expected = target(j);
        if actual != expected {
            return BlVerdict::Fail { j, expected, actual };
        }
    }
    BlVerdict::Pass
}

/// Limits for [`bl_check`]. Degrees up to `table_max_degree` use a
/// membership table; beyond that the Apery sweep runs while `d` and the
/// multiplicity stay within the limits.
#[derive(Clone, Copy, Debug)]
pub struct BlBudget {
    pub table_max_degree: u64,
    pub max_degree: u64,
    pub max_multiplicity: u64,
}

impl Default for BlBudget {
    fn default() -> Self {
        BlBudget { table_max_degree: 1_000, max_degree: 200_000_000, max_multiplicity: 1 << 25 }
    }
}

/// Check for arbitrary-precision input, choosing the evaluation strategy.
pub fn bl_check(d: &Nat, generators: &[Nat], budget: BlBudget) -> Result<BlVerdict> {
    let d64 = d
        .to_u64()
        .filter(|&x| x <= budget.max_degree)
        .ok_or_else(|| Error::Intractable(format!("degree {d} exceeds {}", budget.max_degree)))?;
    let gens: Vec<u64> = generators
        .iter()
        .map(|g| g.to_u64().ok_or_else(|| Error::Intractable(format!("generator {g} exceeds 64 bits"))))
        .collect::<Result<_>>()?;
    let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::Domain(format!("generators have gcd {g}")));
    }
    let m = *gens.iter().min().unwrap();
    if d64 <= budget.table_max_degree {
        return Ok(bl_check_unicuspidal(d64, &gens));
    }
    if m > budget.max_multiplicity {
        return Err(Error::Intractable(format!("multiplicity {m} exceeds {}", budget.max_multiplicity)));
    }
    Ok(bl_check_apery(d64, &gens))
}
