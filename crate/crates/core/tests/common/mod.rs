#![allow(dead_code)]

use std::f64::consts::PI;

use fdual_core::{AbelianGroup, DualityChecker, ElementSet, PairingMatrix};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every product of cyclic groups of order at most `max` listed with
/// factors in nondecreasing order, including some non-invariant-factor forms.
pub fn groups_up_to(max: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<u32>, product: usize, max: usize, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let lo = prefix.last().copied().unwrap_or(2);
        for n in lo..=(max as u32) {
            if product * n as usize > max {
                break;
            }
            prefix.push(n);
            rec(prefix, product * n as usize, max, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), 1, max, &mut out);
    out
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize, size: usize) -> ElementSet {
    let all: Vec<usize> = (0..n).collect();
    all.choose_multiple(rng, size).copied().collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A uniformly drawn well-defined nondegenerate pairing, by rejection.
pub fn random_pairing<R: Rng>(rng: &mut R, group: &AbelianGroup) -> PairingMatrix {
    let orders = group.spec().orders().to_vec();
    let m = group.exponent();
    loop {
        let rows: Vec<Vec<i64>> = orders
            .iter()
            .map(|&ni| {
                orders
                    .iter()
                    .map(|&nj| {
                        let step = m / gcd(ni, nj);
                        (rng.gen_range(0..m / step) * step) as i64
                    })
                    .collect()
            })
            .collect();
        let pairing = PairingMatrix::new(group.spec(), &rows).expect("well-defined by construction");
        if DualityChecker::new(group, pairing.clone()).is_ok() {
            return pairing;
        }
    }
}

/// `B(t, x)` straight from coordinates.
pub fn pairing_value(group: &AbelianGroup, pairing: &PairingMatrix, t: usize, x: usize) -> u64 {
    let (tc, xc) = (group.element(t), group.element(x));
    let m = group.exponent() as u64;
    let mut acc = 0u64;
    for (i, &ti) in tc.coords().iter().enumerate() {
        for (j, &xj) in xc.coords().iter().enumerate() {
            acc += ti as u64 * pairing.entry(i, j) as u64 * xj as u64;
        }
    }
    acc % m
}

/// `sum_{x in S} exp(2 pi i B(t, x) / m)` by direct complex summation.
pub fn float_char_sum(group: &AbelianGroup, pairing: &PairingMatrix, set: &ElementSet, t: usize) -> Complex64 {
    let m = group.exponent() as f64;
    set.iter()
        .map(|x| {
            let theta = 2.0 * PI * pairing_value(group, pairing, t, x) as f64 / m;
            Complex64::new(theta.cos(), theta.sin())
        })
        .sum()
}

/// `sum_{u in T} exp(2 pi i B(u, g) / m)`.
pub fn float_dual_char_sum(group: &AbelianGroup, pairing: &PairingMatrix, set: &ElementSet, g: usize) -> Complex64 {
    let m = group.exponent() as f64;
    set.iter()
        .map(|u| {
            let theta = 2.0 * PI * pairing_value(group, pairing, u, g) as f64 / m;
            Complex64::new(theta.cos(), theta.sin())
        })
        .sum()
}

pub fn nu_brute(group: &AbelianGroup, set: &ElementSet) -> Vec<u32> {
    let mut nu = vec![0; group.order()];
    for a in set.iter() {
        for b in set.iter() {
            nu[group.sub(a, b)] += 1;
        }
    }
    nu
}

/// Float verdict of the duality identities with tolerance `1e-6`.
pub fn float_dual(group: &AbelianGroup, pairing: &PairingMatrix, s: &ElementSet, t: &ElementSet) -> bool {
    let n = group.order();
    if s.len() * t.len() != n {
        return false;
    }
    let nu_t = nu_brute(group, t);
    (0..n).all(|i| {
        let lhs = t.len() as f64 * float_char_sum(group, pairing, s, i).norm_sqr();
        let rhs = (s.len() * s.len()) as f64 * nu_t[i] as f64;
        (lhs - rhs).abs() < 1e-6
    })
}

/// All subgroups, by closure test over every subset. Only for tiny groups.
pub fn all_subgroups(group: &AbelianGroup) -> Vec<ElementSet> {
    let n = group.order();
    assert!(n <= 12);
    (0u32..1 << n)
        .map(|mask| ElementSet::from_indices((0..n).filter(|i| mask >> i & 1 == 1)))
        .filter(|h| h.contains(0) && h.iter().all(|a| h.iter().all(|b| h.contains(group.add(a, b)))))
        .collect()
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<ElementSet> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<ElementSet>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
