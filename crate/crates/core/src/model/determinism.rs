use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

use super::{Config, Label, Vass};

const CONFIG_CAP: usize = 200_000;

/// First reason `v` fails the syntactic determinism check, if any.
pub fn nondeterminism(v: &Vass) -> Option<String> {
    let mut seen = HashSet::new();
    for t in &v.transitions {
        match t.label {
            Label::Eps => return Some(format!("ε-transition from {}", v.states[t.src])),
            Label::Sym(a) => {
                if !seen.insert((t.src, a)) {
                    return Some(format!("two {}-transitions from {}", v.alphabet[a], v.states[t.src]));
                }
            }
        }
    }
    None
}

/// At most one transition per state and letter, and no ε.
pub fn syntactic_deterministic(v: &Vass) -> bool {
    nondeterminism(v).is_none()
}

/// Checks that no configuration reachable in at most `len` steps has two
/// distinct successors over the same letter.
pub fn bounded_semantic_deterministic(v: &Vass, len: usize) -> Result<bool> {
    let mut seen: HashSet<Config> = HashSet::from([v.initial.clone()]);
    let mut queue = VecDeque::from([(v.initial.clone(), 0usize)]);
    while let Some((c, depth)) = queue.pop_front() {
        let mut per_letter: Vec<Option<Config>> = vec![None; v.alphabet.len()];
        for (t, next) in v.successors(&c) {
            if let Label::Sym(a) = v.transitions[t].label {
                match &per_letter[a] {
                    Some(prev) if *prev != next => return Ok(false),
                    _ => per_letter[a] = Some(next.clone()),
                }
            }
            if depth < len && seen.insert(next.clone()) {
                if seen.len() > CONFIG_CAP {
                    return Err(Error::BudgetExhausted { what: "configuration", spent: seen.len() });
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gated_duplicates_pass_bounded_check() {
        // Both a-transitions need a token in a different counter; only one
        // counter is ever positive.
        let v = Vass::builder("g", 2)
            .alphabet(&["a"])
            .init("q", &[1, 0])
            .trans("q", "a", &[-1, 0], "q")
            .trans("q", "a", &[0, -1], "q")
            .accept_up("q", &[0, 0])
            .build()
            .unwrap();
        assert!(!syntactic_deterministic(&v));
        assert!(bounded_semantic_deterministic(&v, 4).unwrap());
        let w = Vass::builder("g", 2)
            .alphabet(&["a"])
            .init("q", &[1, 1])
            .trans("q", "a", &[-1, 0], "q")
            .trans("q", "a", &[0, -1], "q")
            .accept_up("q", &[0, 0])
            .build()
            .unwrap();
        assert!(!bounded_semantic_deterministic(&w, 4).unwrap());
    }

    #[test]
    fn two_letters_from_one_state_fail() {
        let v = Vass::builder("n", 0)
            .alphabet(&["a"])
            .init("p", &[])
            .trans("p", "a", &[], "p")
            .trans("p", "a", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        assert!(nondeterminism(&v).is_some());
    }
}
