use std::collections::BTreeSet;

use cuspidal::cusp::{fibonacci, genus_target, nat, to_u64};
use cuspidal::enumerator::{enumerate_candidates, SearchConfig};
use cuspidal::families::{
    ams_all, bunyakovsky_condition_check, generate, ordered_factorization_count, prime_degree_scan, BunyakovskyFamily,
    FamilyKind, FamilySpec, PrimeTag,
};
use cuspidal::NewtonPairSeq;
use num_bigint::BigUint;

fn spec(kind: FamilyKind, params: &[u64]) -> FamilySpec {
    FamilySpec::new(kind, params.to_vec())
}

/// Ordered factorizations through the prime signature:
/// `a(n) = sum_k sum_j (-1)^(k-j) C(k,j) prod_i C(e_i + j - 1, j - 1)`.
fn kalmar_oracle(n: u64) -> u128 {
    if n == 1 {
        return 1;
    }
    let mut exps = Vec::new();
    let (mut m, mut p) = (n, 2);
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            exps.push(e as u128);
        }
        p += 1;
    }
    if m > 1 {
        exps.push(1);
    }
    let binom = |n: u128, k: u128| -> u128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    };
    let total: u128 = exps.iter().sum();
    let mut sum: i128 = 0;
    for k in 1..=total {
        for j in 1..=k {
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            let prod: u128 = exps.iter().map(|&e| binom(e + j - 1, j - 1)).product();
            sum += sign * (binom(k, j) * prod) as i128;
        }
    }
    sum as u128
}

#[test]
fn ams_counts_match_ordered_factorizations() {
    for d in 2..=30u64 {
        let recs = ams_all(d);
        let distinct: BTreeSet<NewtonPairSeq> = recs.iter().map(|r| r.newton.clone()).collect();
        assert_eq!(distinct.len(), recs.len(), "d = {d}");
        assert_eq!(BigUint::from(recs.len()), ordered_factorization_count(d), "d = {d}");
        assert_eq!(recs.len() as u128, kalmar_oracle(d), "d = {d}");
        for r in &recs {
            assert_eq!(r.degree, nat(d));
            assert_eq!(r.delta, genus_target(&r.degree));
        }
    }
    assert_eq!(ams_all(12).len(), 8);
    for n in [48u64, 360, 1024, 5040] {
        assert_eq!(ordered_factorization_count(n), BigUint::from(kalmar_oracle(n)), "n = {n}");
    }
}

fn phi(j: i64) -> u64 {
    to_u64(&fibonacci(j).unwrap()).unwrap()
}

#[test]
fn kashiwara_one_pair_types_match_fibonacci_items() {
    for l in 0..=5u64 {
        let j = (2 * l + 5) as i64;
        let r = generate(&spec(FamilyKind::KashiwaraIIge, &[l])).unwrap();
        assert_eq!(r.degree, nat(phi(j - 2) * phi(j)));
        assert_eq!(r.degree, nat(phi(j - 1) * phi(j - 1) + 1));
        assert_eq!(r.newton, NewtonPairSeq::from_u64(&[(phi(j - 2).pow(2), phi(j).pow(2))]).unwrap());
    }
    for l in 1..=5u64 {
        let j = (2 * l + 3) as i64;
        let r = generate(&spec(FamilyKind::KashiwaraIIsp, &[l])).unwrap();
        assert_eq!(r.degree, nat(phi(j)));
        assert_eq!(r.newton, NewtonPairSeq::from_u64(&[(phi(j - 2), phi(j + 2))]).unwrap());
    }
}

/// Every family parameter choice whose curve has degree at most `max`.
fn small_family_specs(max: u64) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for l in 0..=3 {
        out.push(spec(FamilyKind::KashiwaraIIge, &[l]));
        if l >= 1 {
            out.push(spec(FamilyKind::KashiwaraIIsp, &[l]));
        }
        for kind in [
            FamilyKind::KashiwaraIIplusGe,
            FamilyKind::KashiwaraIIplusSp,
            FamilyKind::KashiwaraIIminusGe,
            FamilyKind::KashiwaraIIminusSp,
        ] {
            for l1 in 1..=4 {
                out.push(spec(kind, &[l, 1, l1]));
                for l2 in 0..=2 {
                    out.push(spec(kind, &[l, 2, l1, l2]));
                }
            }
        }
    }
    for a in 3..=7 {
        out.push(spec(FamilyKind::TonoIa, &[a]));
        for s in 1..=4 {
            out.push(spec(FamilyKind::TonoIb, &[a, s]));
        }
    }
    for n in 2..=5 {
        out.push(spec(FamilyKind::TonoIIa, &[n]));
    }
    for k in 1..=4 {
        out.push(spec(FamilyKind::Orevkov, &[k]));
        out.push(spec(FamilyKind::OrevkovStar, &[k]));
    }
    out.into_iter()
        .filter(|s| s.validate().is_ok())
        .filter(|s| generate(s).ok().and_then(|r| to_u64(&r.degree)).is_some_and(|d| d <= max))
        .collect()
}

#[test]
fn family_curves_survive_the_search() {
    let mut records = ams_all(30);
    for d in 3..=29 {
        records.extend(ams_all(d));
    }
    let specs = small_family_specs(30);
    assert!(specs.len() >= 10, "{specs:?}");
    for s in &specs {
        records.push(generate(s).unwrap());
    }
    for r in records.iter().filter(|r| !r.newton.is_smooth()) {
        let d = to_u64(&r.degree).unwrap();
        let found = enumerate_candidates(SearchConfig::new(d, r.pair_count())).unwrap();
        assert!(
            found.iter().any(|f| f.newton == r.newton),
            "{:?} at d = {d}: {} not found",
            r.family,
            r.newton
        );
    }
}

/// Independent per-item search for the prime classification.
fn prime_oracle(limit: u64) -> Vec<(u64, Vec<PrimeTag>)> {
    let is_prime = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    let mut tags: std::collections::BTreeMap<u64, Vec<PrimeTag>> = Default::default();
    let mut f = vec![0u64, 1];
    for j in 2..=13 {
        f.push(f[j - 1] + f[j - 2]);
    }
    for j in (5..=13).step_by(2) {
        if is_prime(j as u64) && is_prime(f[j]) && f[j] <= limit {
            tags.entry(f[j]).or_default().push(PrimeTag::Fibonacci { j: j as u64 });
        }
    }
    for a in 3..=7 {
        for s in 1..=6 {
            let p = a * a * s + 1;
            if p <= limit && is_prime(p) {
                tags.entry(p).or_default().push(PrimeTag::TonoI { a, s });
            }
        }
    }
    for n in 2..=2 {
        let p = 8 * n * n + 4 * n + 1;
        if p <= limit && is_prime(p) {
            tags.entry(p).or_default().push(PrimeTag::TonoIIa { n });
        }
    }
    tags.into_iter()
        .map(|(p, mut t)| {
            t.sort();
            (p, t)
        })
        .collect()
}

#[test]
fn prime_scan_matches_oracle() {
    let mut got = prime_degree_scan(50);
    for (_, t) in &mut got {
        t.sort();
    }
    assert_eq!(got, prime_oracle(50));
    let ps: Vec<u64> = got.iter().map(|(p, _)| *p).collect();
    assert_eq!(ps, vec![5, 13, 17, 19, 37, 41]);
    let small: Vec<u64> = prime_degree_scan(13).iter().map(|(p, _)| *p).collect();
    assert_eq!(small, vec![5, 13]);
}

#[test]
fn bunyakovsky_witnesses() {
    for s in 1..=20 {
        let ev = bunyakovsky_condition_check(BunyakovskyFamily::SnSquaredPlusOne { s }).unwrap();
        assert_eq!(ev.values, [s + 1, 4 * s + 1, 9 * s + 1]);
        assert_eq!(ev.gcd, 1, "s = {s}");
        if let Some((x, y)) = ev.witness {
            let f = |n: u64| s * n * n + 1;
            assert_eq!(num_integer::gcd(f(x), f(y)), 1);
        }
    }
    let ev = bunyakovsky_condition_check(BunyakovskyFamily::EightNSquaredPlusFourNPlusOne).unwrap();
    assert_eq!(ev.values, [13, 41, 85]);
    assert_eq!(ev.gcd, 1);
    assert!(bunyakovsky_condition_check(BunyakovskyFamily::SnSquaredPlusOne { s: 0 }).is_err());
}
