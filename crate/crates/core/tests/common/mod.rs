//! Seeded random models shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vassinc::ideals::OmegaNat;
use vassinc::model::VassBuilder;
use vassinc::Vass;

pub const LETTERS: [&str; 2] = ["a", "b"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// At most one transition per state and letter.
    Deterministic,
    /// Deterministic with holes.
    Holed,
    /// One nondeterministic fork, otherwise deterministic.
    Forked,
    /// Up to two transitions per state and letter.
    Free,
}

pub const SHAPES: [Shape; 4] = [Shape::Deterministic, Shape::Holed, Shape::Forked, Shape::Free];

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ index as u64)
}

fn effect(rng: &mut ChaCha8Rng, d: usize) -> Vec<i64> {
    (0..d).map(|_| rng.gen_range(-1..=1)).collect()
}

fn constants(rng: &mut ChaCha8Rng, d: usize) -> Vec<u64> {
    (0..d).map(|_| rng.gen_range(0..=2)).collect()
}

/// A model with `d ≤ 2`, at most three states, effects in `{-1,0,1}` and
/// constants at most 2, over `{a, b}`.
pub fn model(seed: u64, index: usize, shape: Shape) -> Vass {
    let mut rng = rng_for(seed, index);
    loop {
        if let Some(v) = attempt(&mut rng, index, shape) {
            return v;
        }
    }
}

fn attempt(rng: &mut ChaCha8Rng, index: usize, shape: Shape) -> Option<Vass> {
    let d = rng.gen_range(0..=2);
    let n = rng.gen_range(1..=3);
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut b = VassBuilder::new(&format!("m{index}"), d).alphabet(&LETTERS);
    for q in &names {
        b = b.state(q);
    }
    b = b.init(&names[0], &constants(rng, d));
    let fork = (rng.gen_range(0..n), rng.gen_range(0..2));
    for q in 0..n {
        for a in 0..2 {
            let count = match shape {
                Shape::Deterministic | Shape::Holed => usize::from(rng.gen_bool(0.75)),
                Shape::Forked if (q, a) == fork => 2,
                Shape::Forked => usize::from(rng.gen_bool(0.7)),
                Shape::Free => rng.gen_range(0..=2),
            };
            for _ in 0..count {
                let dst = names.choose(rng).unwrap();
                b = b.trans(&names[q], LETTERS[a], &effect(rng, d), dst);
            }
        }
    }
    let atoms = rng.gen_range(1..=2);
    for _ in 0..atoms {
        let q = names.choose(rng).unwrap().clone();
        b = b.accept_up(&q, &constants(rng, d));
    }
    if shape == Shape::Holed {
        let q = names.choose(rng).unwrap().clone();
        let bound: Vec<OmegaNat> = (0..d)
            .map(|_| if rng.gen_bool(0.3) { OmegaNat::Omega } else { OmegaNat::Fin(rng.gen_range(0..=1)) })
            .collect();
        b = b.hole(&q, &bound);
    }
    b.build().ok()
}

/// `count` models cycling through the shapes.
pub fn corpus(seed: u64, count: usize) -> Vec<(Shape, Vass)> {
    (0..count)
        .map(|i| {
            let shape = SHAPES[i % SHAPES.len()];
            (shape, model(seed, i, shape))
        })
        .collect()
}

/// A seed for the hardness pair: an ε-VASS with a zero singleton target.
pub fn singleton_seed(seed: u64, index: usize) -> Vass {
    let mut rng = rng_for(seed ^ 0x5eed, index);
    let d = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=3);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut b = VassBuilder::new(&format!("seed{index}"), d).eps(true);
    for q in &names {
        b = b.state(q);
    }
    b = b.init(&names[0], &constants(&mut rng, d));
    for _ in 0..rng.gen_range(1..=4) {
        let src = names.choose(&mut rng).unwrap().clone();
        let dst = names.choose(&mut rng).unwrap().clone();
        b = b.trans(&src, "eps", &effect(&mut rng, d), &dst);
    }
    let target = names.choose(&mut rng).unwrap().clone();
    b.accept_singleton(&target, &vec![0; d]).build().expect("seed is well formed")
}
