use std::collections::BTreeSet;

use cuspidal::cusp::{characteristic_seq, to_u64};
use cuspidal::enumerator::{
    classify_range, enumerate_candidates, enumerate_detailed, max_pairs_bound, Mode, SearchConfig,
};
use cuspidal::Existence;
use num_integer::Integer;

/// `(a; b_1, ..., b_k)` with `sum (b_j - 1)(e_{j-1} - e_j) = (d-1)(d-2)`,
/// found by plain recursion on the Milnor-number budget, then filtered by a
/// direct semigroup test built from the exponents.
fn oracle(d: u64, k: usize) -> BTreeSet<(u64, Vec<u64>)> {
    let mu = (d - 1) * (d - 2);
    let mut out = BTreeSet::new();
    for a in 2..=mu + 1 {
        let mut b = Vec::new();
        extend(d, k, a, a, 0, mu, &mut b, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(d: u64, k: usize, a: u64, e: u64, spent: u64, mu: u64, b: &mut Vec<u64>, out: &mut BTreeSet<(u64, Vec<u64>)>) {
    if b.len() == k {
        if e == 1 && spent == mu && passes(d, a, b) {
            out.insert((a, b.clone()));
        }
        return;
    }
    if e == 1 {
        return;
    }
    let start = b.last().copied().unwrap_or(a) + 1;
    let mut bj = start;
    loop {
        let e2 = e.gcd(&bj);
        let cost = (bj - 1) * (e - e2);
        // a drop in gcd is at least half of e
        if spent + (bj - 1) * e.div_ceil(2) > mu {
            break;
        }
        if e2 < e && spent + cost <= mu {
            b.push(bj);
            extend(d, k, a, e2, spent + cost, mu, b, out);
            b.pop();
        }
        bj += 1;
    }
}

/// Semigroup generators from characteristic exponents, then a direct count
/// of elements below `jd + 1`.
fn passes(d: u64, a: u64, b: &[u64]) -> bool {
    let mut gens = vec![a, b[0]];
    let mut e_prev = a;
    let mut e = a.gcd(&b[0]);
    for j in 1..b.len() {
        let next = (e_prev / e) * gens[j] + b[j] - b[j - 1];
        gens.push(next);
        e_prev = e;
        e = e.gcd(&b[j]);
    }
    let bound = (d - 2) * d + 1;
    let mut member = vec![false; bound as usize + 1];
    member[0] = true;
    for x in 1..=bound as usize {
        member[x] = gens.iter().any(|&g| g as usize <= x && member[x - g as usize]);
    }
    (0..d - 1).all(|j| {
        let below = member[..(j * d + 1) as usize].iter().filter(|&&m| m).count() as u64;
        below == (j + 1) * (j + 2) / 2
    })
}

#[test]
fn search_matches_brute_force() {
    for d in 3..=11u64 {
        for k in 1..=max_pairs_bound(d) {
            let det = enumerate_detailed(SearchConfig::new(d, k)).unwrap();
            let mut got: BTreeSet<(u64, Vec<u64>)> = BTreeSet::new();
            for n in det.records.iter().map(|r| &r.newton).chain(det.tangent_rejected.iter()) {
                let c = characteristic_seq(n);
                got.insert((to_u64(&c.a).unwrap(), c.b.iter().map(|x| to_u64(x).unwrap()).collect()));
            }
            assert_eq!(got, oracle(d, k), "d = {d}, k = {k}");
        }
    }
}

#[test]
fn records_respect_search_invariants() {
    for d in 3..=30u64 {
        for k in 1..=max_pairs_bound(d) {
            for r in enumerate_candidates(SearchConfig::new(d, k)).unwrap() {
                r.verify().unwrap();
                assert_eq!(r.pair_count(), k);
                let m1 = r.mult.entry(&1u32.into()).cloned().unwrap();
                let m2 = r.mult.entry(&2u32.into()).cloned().unwrap_or_default();
                assert!(m1 < r.degree, "{}", r.newton);
                assert!(m1 + m2 <= r.degree, "{}", r.newton);
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    for (d, k) in [(24u64, 3usize), (30, 3), (24, 4), (21, 2)] {
        let base = enumerate_candidates(SearchConfig::new(d, k).workers(1)).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(enumerate_candidates(SearchConfig::new(d, k).workers(w)).unwrap(), base);
        }
        assert_eq!(enumerate_candidates(SearchConfig::new(d, k)).unwrap(), base);
    }
}

#[test]
fn paranoid_agrees_through_twelve() {
    for d in 3..=12u64 {
        for k in 1..=max_pairs_bound(d) {
            let a = enumerate_candidates(SearchConfig::new(d, k)).unwrap();
            let b = enumerate_candidates(SearchConfig::new(d, k).mode(Mode::Paranoid)).unwrap();
            assert_eq!(a, b, "d = {d}, k = {k}");
        }
    }
}

#[test]
fn pair_bound() {
    assert_eq!(max_pairs_bound(30), 4);
    assert_eq!((3..100).find(|&d| max_pairs_bound(d) >= 5), Some(33));
    for d in 3..200u64 {
        let k = max_pairs_bound(d) as u32;
        let lhs = (d - 1) * (d - 2);
        assert!(lhs >= ((1u64 << k) - 1) << k);
        assert!(lhs < ((1u64 << (k + 1)) - 1) << (k + 1));
    }
}

#[test]
fn invalid_configs() {
    assert!(enumerate_candidates(SearchConfig::new(2, 1)).is_err());
    assert!(enumerate_candidates(SearchConfig::new(12, 0)).is_err());
    assert!(enumerate_candidates(SearchConfig::new(7, 3)).is_err());
    assert!(enumerate_candidates(SearchConfig::new(12, 1).workers(0)).is_err());
}

#[test]
fn classification_through_thirty() {
    let all = classify_range(30, None, None).unwrap();
    let count = |k: usize| all.iter().filter(|r| r.pair_count() == k).count();
    assert_eq!((count(3), count(4)), (22, 1));
    for r in all.iter().filter(|r| r.pair_count() >= 3) {
        assert!(r.existence.is_proved(), "{} {}", r.degree, r.newton);
    }
    let open: Vec<String> = all
        .iter()
        .filter(|r| r.existence == Existence::Candidate)
        .map(|r| format!("{} {}", r.degree, r.newton))
        .collect();
    assert_eq!(open, vec!["17 (2,7),(4,17)", "20 (2,3),(6,31)"]);
}
