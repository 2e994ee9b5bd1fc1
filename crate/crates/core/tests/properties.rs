mod common;

use proptest::prelude::*;

use vassinc::cli::{parse_model, print_model};
use vassinc::constructions::{complement_det, complement_kdet};
use vassinc::coverability::{empty_upward, pre_star_basis};
use vassinc::decide::{include, Class, DecideBudget};
use vassinc::oracle::{accepts, all_words, bounded_language, bounded_language_with, OracleBudget};
use vassinc::{Answer, Exec, Vass};

use common::{model, Shape, SHAPES};

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(SHAPES.to_vec())
}

/// Reverses the state order and the alphabet order, and renames the letters.
fn scrambled(v: &Vass) -> Vass {
    let n = v.num_states();
    let perm: Vec<usize> = (0..n).map(|q| n - 1 - q).collect();
    let mut u = v.permute_states(&perm).unwrap();
    let reversed: Vec<String> = u.alphabet.iter().rev().cloned().collect();
    u = u.with_alphabet(&reversed).unwrap();
    u.alphabet = u.alphabet.iter().map(|a| format!("x{a}")).collect();
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(seed in 0u64..1_000, index in 0usize..50, s in shape()) {
        let v = model(seed, index, s);
        prop_assert_eq!(parse_model(&print_model(&v), "p").unwrap(), v);
    }

    #[test]
    fn det_complement_flips_membership(seed in 0u64..1_000, index in 0usize..50, word in prop::collection::vec(0usize..2, 0..7)) {
        let v = model(seed, index, Shape::Deterministic);
        let co = complement_det(&v).unwrap();
        prop_assert_ne!(accepts(&v, &word).unwrap(), accepts(&co, &word).unwrap());
    }

    #[test]
    fn kdet_complement_flips_membership(seed in 0u64..1_000, index in 0usize..50, word in prop::collection::vec(0usize..2, 0..7)) {
        let v = model(seed, index, Shape::Forked);
        if let Ok(co) = complement_kdet(&v, 2) {
            prop_assert_ne!(accepts(&v, &word).unwrap(), accepts(&co, &word).unwrap());
        }
    }

    #[test]
    fn emptiness_matches_pre_star(seed in 0u64..1_000, index in 0usize..50, s in shape()) {
        let v = model(seed, index, s);
        let basis = pre_star_basis(&v, v.upward_set().unwrap()).unwrap();
        let inside = basis.contains(v.initial.state, &v.initial.counters);
        prop_assert_eq!(inside, !empty_upward(&v).unwrap().is_empty());
    }

    #[test]
    fn oracle_modes_agree(seed in 0u64..1_000, index in 0usize..50, s in shape()) {
        let v = model(seed, index, s);
        let budget = OracleBudget::default();
        let a = bounded_language_with(&v, 5, &budget, Exec::Sequential).unwrap();
        let b = bounded_language_with(&v, 5, &budget, Exec::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn inclusion_ignores_names_and_order(seed in 0u64..1_000, i in 0usize..50, j in 0usize..50, s in shape()) {
        let budget = DecideBudget::default();
        let v1 = model(seed, i, s);
        let v2 = model(seed, j, Shape::Deterministic);
        for class in [Class::Det, Class::KDet(1), Class::KAmbiguous(1)] {
            let plain = include(&v1, &v2, class, &budget).unwrap();
            let renamed = include(&scrambled(&v1), &scrambled(&v2), class, &budget).unwrap();
            if plain.answer != Answer::Unknown && renamed.answer != Answer::Unknown {
                prop_assert_eq!(plain.answer, renamed.answer);
            }
            if let Some(w) = renamed.witness {
                prop_assert!(accepts(&scrambled(&v1), &w).unwrap() && !accepts(&scrambled(&v2), &w).unwrap());
            }
        }
    }
}

#[test]
fn scrambling_keeps_the_language_shape() {
    let v = model(3, 4, Shape::Free);
    let u = scrambled(&v);
    let words = all_words(2, 4);
    let lang = bounded_language(&v, 4).unwrap();
    // Letter i of v is letter 1 - i of u.
    let swapped: Vec<Vec<usize>> = lang.iter().map(|w| w.iter().map(|&a| 1 - a).collect()).collect();
    for w in &words {
        assert_eq!(swapped.contains(w), accepts(&u, w).unwrap());
    }
}
