mod common;

use common::{enumerated_range, r, random_primitive};
use levelset_core::oracle::count_words;
use levelset_core::{
    average_range, connector_word, higher_block_recode, transition_gap, Observable, SymbolicSystem, Word,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn golden_beta() -> SymbolicSystem {
    SymbolicSystem::beta((0..24).map(|i| ((i + 1) % 2) as u16).collect()).unwrap()
}

#[test]
fn beta_golden_matches_golden_mean() {
    let beta = golden_beta();
    let gm = SymbolicSystem::golden_mean();
    for n in 1..=20 {
        assert_eq!(count_words(&beta, n).unwrap(), count_words(&gm, n).unwrap(), "n = {n}");
    }
    for n in 1..=14 {
        assert_eq!(beta.admissible_words(n), gm.admissible_words(n));
    }
}

#[test]
fn recoding_preserves_counts() {
    for sys in [SymbolicSystem::full(2).unwrap(), SymbolicSystem::golden_mean()] {
        for k in [2, 3] {
            let rec = higher_block_recode(&sys, k).unwrap();
            for n in k - 1..=16 {
                assert_eq!(
                    count_words(&rec.system, n + 2 - k).unwrap(),
                    count_words(&sys, n).unwrap(),
                    "k = {k}, n = {n}"
                );
            }
        }
    }
}

#[test]
fn connectors_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut systems = vec![SymbolicSystem::full(3).unwrap(), SymbolicSystem::golden_mean()];
    systems.extend((0..20).map(|_| random_primitive(&mut rng, 6).0));
    for sys in systems {
        let m = transition_gap(&sys).unwrap().m();
        let n = sys.alphabet_size() as u16;
        for a in 0..n {
            for b in 0..n {
                let c = connector_word(&sys, a, b).unwrap();
                assert!(c.0.len() < m.max(1), "connector longer than the gap");
                let mut w = vec![a];
                w.extend(&c.0);
                w.push(b);
                assert!(sys.is_admissible(&w));
            }
        }
    }
}

#[test]
fn karp_matches_cycle_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (sys, f) = random_primitive(&mut rng, 6);
        let range = average_range(&sys, &f).unwrap();
        let n = sys.alphabet_size();
        let expect = enumerated_range(n, sys.adjacency(), |i, j| f.value(&[i as u16, j as u16]).unwrap());
        assert_eq!((range.lo, range.hi), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn karp_matches_enumeration_for_symbol_weights(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sys, _) = random_primitive(&mut rng, 5);
        let vals: Vec<i64> = (0..sys.alphabet_size()).map(|i| (i as i64 * 7919 + seed as i64 % 13) % 11 - 5).collect();
        let f = Observable::from_fn(&sys, 1, |w| r(vals[w[0] as usize], 3)).unwrap();
        let range = average_range(&sys, &f).unwrap();
        let expect = enumerated_range(sys.alphabet_size(), sys.adjacency(), |_, j| r(vals[j], 3));
        prop_assert_eq!((range.lo, range.hi), expect);
    }

    #[test]
    fn recoded_words_decode(bits in proptest::collection::vec(0u16..2, 3..40)) {
        let gm = SymbolicSystem::golden_mean();
        let w: Vec<u16> = bits.iter().scan(0u16, |prev, &b| {
            let s = if *prev == 1 { 0 } else { b };
            *prev = s;
            Some(s)
        }).collect();
        let rec = higher_block_recode(&gm, 3).unwrap();
        let coded = rec.recode_word(&w).unwrap();
        prop_assert!(rec.system.is_admissible(&coded.0));
        prop_assert_eq!(rec.decode_word(&coded.0), Word(w));
    }
}
