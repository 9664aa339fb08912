mod common;

use common::*;
use fdual_core::{
    cyclotomic_poly, AbelianGroup, ClassVector, DualityChecker, ElementSet, Mode, PairingMatrix, SearchConfig,
    SearchContext, WeightEnumerator,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn small_group() -> impl Strategy<Value = AbelianGroup> {
    prop::sample::select(groups_up_to(16)).prop_map(|o| AbelianGroup::from_orders(o).unwrap())
}

fn group_and_set() -> impl Strategy<Value = (AbelianGroup, ElementSet)> {
    small_group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::btree_set(0..n, 1..=n))
            .prop_map(|(g, s)| (g, s.into_iter().collect::<ElementSet>()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairing_is_bilinear(g in small_group(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let pairing = random_pairing(&mut rng, &g);
        let n = g.order();
        let m = g.exponent() as u64;
        for _ in 0..20 {
            let (x, y, t) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let b = |a, b| pairing.pairing_exponent(&g.element(a), &g.element(b)) as u64;
            prop_assert_eq!(b(t, g.add(x, y)), (b(t, x) + b(t, y)) % m);
            prop_assert_eq!(b(g.add(x, y), t), (b(x, t) + b(y, t)) % m);
            prop_assert_eq!(b(t, x), pairing_value(&g, &pairing, t, x));
        }
    }

    #[test]
    fn generated_subgroup_is_closed((g, s) in group_and_set()) {
        let h = g.subgroup_generated(&s);
        prop_assert!(s.is_subset(&h) && h.contains(0));
        for a in h.iter() {
            prop_assert!(h.contains(g.neg(a)));
            for b in h.iter() {
                prop_assert!(h.contains(g.add(a, b)));
            }
        }
        prop_assert_eq!(g.order() % h.len(), 0);
    }

    #[test]
    fn stabilizer_is_a_subgroup_fixing_s((g, s) in group_and_set()) {
        let stab = g.stabilizer(&s);
        prop_assert!(stab.contains(0));
        for h in stab.iter() {
            prop_assert_eq!(g.translate(&s, h), s);
            for k in stab.iter() {
                prop_assert!(stab.contains(g.add(h, k)));
            }
        }
        for v in 0..g.order() {
            prop_assert_eq!(stab.contains(v), g.translate(&s, v) == s);
        }
    }

    #[test]
    fn weight_enumerator_invariants((g, s) in group_and_set()) {
        let nu = WeightEnumerator::new(&g, &s).unwrap();
        let k = s.len() as u32;
        prop_assert_eq!(nu.get(0), k);
        prop_assert_eq!(nu.counts().iter().sum::<u32>(), k * k);
        for d in 0..g.order() {
            prop_assert_eq!(nu.get(d), nu.get(g.neg(d)));
        }
        prop_assert_eq!(nu.counts(), &nu_brute(&g, &s)[..]);
    }

    #[test]
    fn parseval((g, s) in group_and_set(), seed in any::<u64>()) {
        let pairing = random_pairing(&mut StdRng::seed_from_u64(seed), &g);
        let n = g.order();
        let total: f64 = (0..n).map(|t| float_char_sum(&g, &pairing, &s, t).norm_sqr()).sum();
        prop_assert!((total - (n * s.len()) as f64).abs() < 1e-6 * n as f64);
    }

    #[test]
    fn exact_spectrum_matches_floats((g, s) in group_and_set(), seed in any::<u64>()) {
        let pairing = random_pairing(&mut StdRng::seed_from_u64(seed), &g);
        let checker = DualityChecker::new(&g, pairing.clone()).unwrap();
        let nu = WeightEnumerator::new(&g, &s).unwrap();
        for t in 0..g.order() {
            let direct = checker.spectrum_entry(&s, t);
            let via_nu = checker.spectrum_entry_via_nu(&nu, t);
            prop_assert_eq!(direct.reduce(checker.phi()), via_nu.reduce(checker.phi()));
            let f = float_char_sum(&g, &pairing, &s, t).norm_sqr();
            prop_assert!((direct.eval_float().re - f).abs() < 1e-6);
            match direct.as_integer_with(checker.phi()) {
                Some(v) => prop_assert!((v as f64 - f).abs() < 1e-6),
                None => prop_assert!((f - f.round()).abs() > 1e-9),
            }
        }
    }

    #[test]
    fn primitivity_base_point_and_affine_invariance((g, s) in group_and_set(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let reference = fdual_core::primitivity::coset_witness(&g, &s, s.first().unwrap());
        for s0 in s.iter() {
            prop_assert_eq!(fdual_core::primitivity::coset_witness(&g, &s, s0), reference);
        }
        let verdict = fdual_core::is_primitive(&g, &s).unwrap();
        let auts = g.automorphism_group(1 << 18).unwrap();
        let aut = &auts.maps[rng.gen_range(0..auts.maps.len())];
        let image = g.translate(&g.apply(aut, &s), rng.gen_range(0..g.order()));
        let moved = fdual_core::is_primitive(&g, &image).unwrap();
        prop_assert_eq!(moved.primitive, verdict.primitive);
        prop_assert_eq!(moved.in_proper_coset, verdict.in_proper_coset);
        prop_assert_eq!(moved.union_of_cosets, verdict.union_of_cosets);
    }

    #[test]
    fn canonical_form_is_idempotent_and_invariant((g, s) in group_and_set(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let auts = g.automorphism_group(1 << 18).unwrap();
        let canon = g.affine_canonical_form(&s, &auts.maps);
        prop_assert_eq!(g.affine_canonical_form(&canon, &auts.maps), canon);
        prop_assert!(canon.contains(0));
        let aut = &auts.maps[rng.gen_range(0..auts.maps.len())];
        let image = g.translate(&g.apply(aut, &s), rng.gen_range(0..g.order()));
        prop_assert_eq!(g.affine_canonical_form(&image, &auts.maps), canon);
    }

    #[test]
    fn orderly_canonicity_matches_orbit_minimum((g, s) in group_and_set()) {
        let n = g.order();
        let size = (2..n).find(|d| n % d == 0);
        prop_assume!(size.is_some());
        let ctx = SearchContext::new(SearchConfig::new(g.spec().clone(), size.unwrap(), Mode::Pair)).unwrap();
        let canon = g.affine_canonical_form(&s, &ctx.automorphisms().maps);
        let chosen = s.to_vec();
        prop_assert_eq!(ctx.is_canonical(&chosen), canon == s);
        if ctx.is_canonical(&chosen) {
            for k in 1..chosen.len() {
                prop_assert!(ctx.is_canonical(&chosen[..k]), "prefix of a canonical set must be canonical");
            }
        }
    }
}

#[test]
fn automorphisms_are_homomorphisms() {
    for orders in groups_up_to(64) {
        let g = AbelianGroup::from_orders(orders.clone()).unwrap();
        let auts = g.automorphism_group(1 << 18).unwrap();
        assert!(auts.complete || auts.maps.len() == 1 << 18, "{orders:?}");
        assert!(auts.maps[0].is_identity());
        let n = g.order();
        let step = if auts.maps.len() > 2000 { 7 } else { 1 };
        for aut in auts.maps.iter().step_by(step) {
            let mut seen = vec![false; n];
            for x in 0..n {
                assert!(!std::mem::replace(&mut seen[aut.apply(x)], true), "{orders:?} not injective");
                for y in (0..n).step_by(if n > 32 { 5 } else { 1 }) {
                    assert_eq!(aut.apply(g.add(x, y)), g.add(aut.apply(x), aut.apply(y)));
                }
            }
        }
    }
}

#[test]
fn automorphism_counts() {
    let count =
        |o: &[u32]| AbelianGroup::from_orders(o.to_vec()).unwrap().automorphism_group(1 << 18).unwrap().maps.len();
    assert_eq!(count(&[2, 2]), 6);
    assert_eq!(count(&[4]), 2);
    assert_eq!(count(&[2, 4]), 8);
    assert_eq!(count(&[2, 2, 2]), 168);
    assert_eq!(count(&[8, 8]), 1536);
    assert_eq!(count(&[2, 2, 4, 4]), 147_456);
}

#[test]
fn standard_pairing_is_nondegenerate() {
    for orders in groups_up_to(64) {
        let g = AbelianGroup::from_orders(orders.clone()).unwrap();
        let std = g.spec().standard_pairing();
        assert!(g.pairing_is_nondegenerate(&std).unwrap(), "{orders:?}");
        let zero = PairingMatrix::new(g.spec(), &vec![vec![0; orders.len()]; orders.len()]).unwrap();
        assert!(!g.pairing_is_nondegenerate(&zero).unwrap());
    }
}

#[test]
fn cyclotomic_product_identity() {
    for m in 1..=64usize {
        let mut prod = vec![1i64];
        for d in (1..=m).filter(|d| m % d == 0) {
            let phi = cyclotomic_poly(d);
            let mut next = vec![0i64; prod.len() + phi.degree()];
            for (i, &a) in prod.iter().enumerate() {
                for (j, &b) in phi.coeffs().iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            prod = next;
        }
        let mut expected = vec![0i64; m + 1];
        expected[0] = -1;
        expected[m] = 1;
        assert_eq!(prod, expected, "m = {m}");
    }
}

#[test]
fn integer_decision_agrees_with_floats() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let m = rng.gen_range(1..=24);
        let coeffs: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        let p = ClassVector::from_coeffs(coeffs);
        let z = p.eval_float();
        if let Some(c) = p.as_integer() {
            assert!((z.re - c as f64).abs() < 1e-9 && z.im.abs() < 1e-9, "{p:?}");
        }
        let sq = p.norm_sq();
        let f = sq.eval_float();
        assert!(f.im.abs() < 1e-9 && f.re > -1e-9);
        assert!((f.re - z.norm_sqr()).abs() < 1e-6);
        match sq.as_integer() {
            Some(c) => assert!((f.re - c as f64).abs() < 1e-6),
            None => assert!((f.re - f.re.round()).abs() > 1e-9, "{p:?}"),
        }
    }
}

#[test]
fn both_forms_of_the_identity_agree() {
    let mut rng = StdRng::seed_from_u64(11);
    let groups: Vec<_> = groups_up_to(16).into_iter().filter(|o| o.iter().product::<u32>() >= 4).collect();
    let mut positives = 0;
    for trial in 0..200 {
        let g = AbelianGroup::from_orders(groups[trial % groups.len()].clone()).unwrap();
        let n = g.order();
        let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        let a = divisors[rng.gen_range(0..divisors.len())];
        let pairing = random_pairing(&mut rng, &g);
        let checker = DualityChecker::new(&g, pairing.clone()).unwrap();
        let s = random_set(&mut rng, n, a);
        let mut t = random_set(&mut rng, n, n / a);
        // Half the trials use a partner read off from the spectrum, so true pairs show up.
        if trial % 2 == 0 {
            if let Some(found) = partner_by_brute_force(&checker, &s) {
                t = found;
            }
        }
        let primal = checker.check_pair(&s, &t).unwrap().holds;
        let dual = checker.check_pair_dual_side(&s, &t).unwrap().holds;
        assert_eq!(primal, dual, "{:?} S={:?} T={:?}", g.spec().orders(), s.to_vec(), t.to_vec());
        assert_eq!(primal, float_dual(&g, &pairing, &s, &t));
        positives += primal as usize;
    }
    assert!(positives >= 20, "only {positives} dual triples sampled");
}

fn partner_by_brute_force(checker: &DualityChecker<'_>, s: &ElementSet) -> Option<ElementSet> {
    let n = checker.group().order();
    if n % s.len() != 0 || n > 16 {
        return None;
    }
    subsets_of_size(n, n / s.len()).into_iter().find(|t| checker.check_pair(s, t).unwrap().holds)
}

#[test]
fn self_dual_verdict_is_affine_invariant() {
    let mut rng = StdRng::seed_from_u64(3);
    let example_rows = [vec![2, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
    // (orders, a self-dual set under the given pairing or None for a random one)
    let cases: [(Vec<u32>, Option<Vec<usize>>); 5] = [
        (vec![2, 2, 4, 4], Some(vec![0, 1, 2, 4, 9, 16, 32, 62])),
        (vec![4], Some(vec![0, 1])),
        (vec![4, 4], Some(vec![0, 1, 4, 5])),
        (vec![2, 8], None),
        (vec![2, 2, 4], None),
    ];
    let mut holding = 0;
    for (orders, known) in cases {
        let g = AbelianGroup::from_orders(orders.clone()).unwrap();
        let n = g.order();
        let auts = g.automorphism_group(1 << 18).unwrap();
        for round in 0..20 {
            let (pairing, s) = match &known {
                Some(set) if round % 2 == 0 => {
                    let pairing = if orders.len() == 4 {
                        PairingMatrix::new(g.spec(), &example_rows).unwrap()
                    } else {
                        g.spec().standard_pairing()
                    };
                    (pairing, ElementSet::from_indices(set.iter().copied()))
                }
                _ => (random_pairing(&mut rng, &g), random_set(&mut rng, n, n.isqrt().max(2))),
            };
            let checker = DualityChecker::new(&g, pairing.clone()).unwrap();
            let verdict = checker.check_self_dual(&s).unwrap().holds;

            let v = rng.gen_range(0..n);
            assert_eq!(checker.check_self_dual(&g.translate(&s, v)).unwrap().holds, verdict);

            let aut = &auts.maps[rng.gen_range(0..auts.maps.len())];
            let mut inv = vec![0usize; n];
            for x in 0..n {
                inv[aut.apply(x)] = x;
            }
            let rows: Vec<Vec<i64>> = (0..orders.len())
                .map(|i| {
                    (0..orders.len())
                        .map(|j| pairing_value(&g, &pairing, inv[g.basis(i)], inv[g.basis(j)]) as i64)
                        .collect()
                })
                .collect();
            let moved = PairingMatrix::new(g.spec(), &rows).unwrap();
            let moved_checker = DualityChecker::new(&g, moved).unwrap();
            assert_eq!(moved_checker.check_self_dual(&g.apply(aut, &s)).unwrap().holds, verdict, "{orders:?}");
            holding += verdict as usize;
        }
    }
    assert!(holding >= 30);
}

#[test]
fn known_self_dual_set_and_its_mutation() {
    let g = AbelianGroup::from_orders(vec![2, 2, 4, 4]).unwrap();
    let rows = [vec![2, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
    let checker = DualityChecker::new(&g, PairingMatrix::new(g.spec(), &rows).unwrap()).unwrap();
    let known = ElementSet::from_indices([0, 1, 2, 4, 9, 16, 32, 62]);
    let report = checker.check_self_dual(&known).unwrap();
    assert!(report.holds);
    assert_eq!(report.checked_count, 64);
    let mutated = ElementSet::from_indices([0, 1, 2, 4, 9, 16, 32, 63]);
    assert!(!checker.check_self_dual(&mutated).unwrap().holds);
}
