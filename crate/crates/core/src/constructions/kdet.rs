use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::ideals::{omega_vec, DownAtom, DownSet, OmegaVec, StateId};
use crate::model::{Acceptance, Config, Label, Transition, Vass, Word};

use super::underflow_atoms;

const MAX_STATES: usize = 200_000;

/// What a group of copies is doing. Dead modes freeze the group's
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CopyMode {
    Run(StateId),
    /// Stopped just before `t`, which would have underflowed.
    DeadUnderflow(usize),
    /// Saw a letter with no transition.
    DeadNoLetter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Group {
    size: usize,
    mode: CopyMode,
}

fn letter_table(v: &Vass) -> Result<Vec<Vec<Vec<usize>>>> {
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    let mut by = vec![vec![Vec::new(); v.alphabet.len()]; v.num_states()];
    for (i, t) in v.transitions.iter().enumerate() {
        by[t.src][t.label.sym().expect("no ε")].push(i);
    }
    Ok(by)
}

/// A word over which the control automaton of `v` has more than `k`
/// maximal runs, if one exists. Exact: run counts are capped at `k + 1`,
/// which leaves finitely many count vectors.
pub fn kdet_violation(v: &Vass, k: usize) -> Result<Option<Word>> {
    let by = letter_table(v)?;
    let n = v.num_states();
    let cap = k + 1;
    let mut start = vec![0usize; n + 1];
    start[v.initial.state] = 1;
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, usize)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start]);
    let word_to = |parent: &HashMap<Vec<usize>, Option<(Vec<usize>, usize)>>, mut s: Vec<usize>| {
        let mut w = Vec::new();
        while let Some(Some((p, a))) = parent.get(&s) {
            w.push(*a);
            s = p.clone();
        }
        w.reverse();
        w
    };
    while let Some(s) = queue.pop_front() {
        if s[..n].iter().all(|&c| c == 0) {
            continue;
        }
        for a in 0..v.alphabet.len() {
            let mut next = vec![0usize; n + 1];
            next[n] = s[n];
            for q in 0..n {
                if s[q] == 0 {
                    continue;
                }
                if by[q][a].is_empty() {
                    next[n] = (next[n] + s[q]).min(cap);
                }
                for &t in &by[q][a] {
                    let r = v.transitions[t].dst;
                    next[r] = (next[r] + s[q]).min(cap);
                }
            }
            if next.iter().sum::<usize>() > k {
                let mut w = word_to(&parent, s.clone());
                w.push(a);
                return Ok(Some(w));
            }
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((s.clone(), a)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

fn compositions(s: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if s == 0 { vec![vec![]] } else { vec![] };
    }
    if r == 1 {
        return if s >= 1 { vec![vec![s]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=s.saturating_sub(r - 1) {
        for mut rest in compositions(s - first, r - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Complement of a k-deterministic upward VASS as a `(k·d)`-dimensional
/// downward VASS simulating `k` copies in groups.
pub fn complement_kdet(v: &Vass, k: usize) -> Result<Vass> {
    complement_kdet_with(v, k, MAX_STATES)
}

pub fn complement_kdet_with(v: &Vass, k: usize, max_states: usize) -> Result<Vass> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    let acc = v.upward_set()?;
    let by = letter_table(v)?;
    if let Some(w) = kdet_violation(v, k)? {
        return Err(Error::NotKDeterministic { k, witness: v.word_names(&w) });
    }
    let d = v.dim;
    let dk = d * k;
    let rejecting = acc.complement();

    // Per-group moves over one letter: the replacement groups and the
    // effect on the group's copies.
    let moves = |g: Group, a: usize| -> Vec<(Vec<Group>, Vec<i64>)> {
        let zero = vec![0i64; g.size * d];
        let p = match g.mode {
            CopyMode::Run(p) => p,
            _ => return vec![(vec![g], zero)],
        };
        let ts = &by[p][a];
        if ts.is_empty() {
            return vec![(vec![Group { size: g.size, mode: CopyMode::DeadNoLetter }], zero)];
        }
        let mut out = Vec::new();
        for sizes in compositions(g.size, ts.len()) {
            let mut partial: Vec<(Vec<Group>, Vec<i64>)> = vec![(Vec::new(), Vec::new())];
            for (&s, &t) in sizes.iter().zip(ts) {
                let tr = &v.transitions[t];
                let mut opts = vec![(Group { size: s, mode: CopyMode::Run(tr.dst) }, tr.effect.clone())];
                if tr.effect.iter().any(|&z| z < 0) {
                    opts.push((Group { size: s, mode: CopyMode::DeadUnderflow(t) }, vec![0; d]));
                }
                let mut next = Vec::with_capacity(partial.len() * opts.len());
                for (gs, eff) in &partial {
                    for (ng, e) in &opts {
                        let mut gs = gs.clone();
                        gs.push(*ng);
                        let mut eff = eff.clone();
                        for _ in 0..s {
                            eff.extend_from_slice(e);
                        }
                        next.push((gs, eff));
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        out
    };

    let start = vec![Group { size: k, mode: CopyMode::Run(v.initial.state) }];
    let mut index: HashMap<Vec<Group>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut order = vec![start];
    let mut transitions = Vec::new();
    let mut seen_edges = HashSet::new();
    let mut i = 0;
    while i < order.len() {
        let here = order[i].clone();
        for a in 0..v.alphabet.len() {
            let mut combos: Vec<(Vec<Group>, Vec<i64>)> = vec![(Vec::new(), Vec::new())];
            for &g in &here {
                let ms = moves(g, a);
                let mut next = Vec::with_capacity(combos.len() * ms.len());
                for (gs, eff) in &combos {
                    for (ng, e) in &ms {
                        let mut gs = gs.clone();
                        gs.extend_from_slice(ng);
                        let mut eff = eff.clone();
                        eff.extend_from_slice(e);
                        next.push((gs, eff));
                    }
                }
                combos = next;
            }
            for (gs, eff) in combos {
                debug_assert_eq!(eff.len(), dk);
                let dst = match index.get(&gs) {
                    Some(&j) => j,
                    None => {
                        if order.len() >= max_states {
                            return Err(Error::BudgetExhausted { what: "k-copy state", spent: order.len() });
                        }
                        index.insert(gs.clone(), order.len());
                        order.push(gs);
                        order.len() - 1
                    }
                };
                if seen_edges.insert((i, a, eff.clone(), dst)) {
                    transitions.push(Transition { src: i, label: Label::Sym(a), effect: eff, dst });
                }
            }
        }
        i += 1;
    }

    let mut atoms = Vec::new();
    for (s, groups) in order.iter().enumerate() {
        let mut partial: Vec<OmegaVec> = vec![omega_vec(dk)];
        let mut offset = 0;
        for g in groups {
            let local: Vec<DownAtom> = match g.mode {
                CopyMode::Run(q) => rejecting.atoms_at(q).cloned().collect(),
                CopyMode::DeadUnderflow(t) => underflow_atoms(0, &v.transitions[t].effect),
                CopyMode::DeadNoLetter => vec![DownAtom::full(0, d)],
            };
            let mut next = Vec::with_capacity(partial.len() * local.len());
            for b in &partial {
                for l in &local {
                    let mut b = b.clone();
                    b[offset * d..(offset + 1) * d].clone_from_slice(&l.bound);
                    next.push(b);
                }
            }
            partial = next;
            offset += g.size;
        }
        atoms.extend(partial.into_iter().map(|b| DownAtom::new(s, b)));
    }
    let states: Vec<String> = order.iter().map(|gs| state_name(v, gs)).collect();
    let m = states.len();
    let out = Vass {
        name: format!("{}_co{k}", v.name),
        alphabet: v.alphabet.clone(),
        dim: dk,
        states,
        transitions,
        initial: Config::new(0, v.initial.counters.repeat(k)),
        acceptance: Acceptance::Downward(DownSet::new(dk, m, atoms)?.minimize()),
        holes: DownSet::empty(dk, m),
        eps_allowed: false,
    };
    out.validate()?;
    Ok(out)
}

fn state_name(v: &Vass, groups: &[Group]) -> String {
    let parts: Vec<String> = groups
        .iter()
        .map(|g| match g.mode {
            CopyMode::Run(q) => format!("{}{}", g.size, v.states[q]),
            CopyMode::DeadUnderflow(t) => format!("{}!t{t}", g.size),
            CopyMode::DeadNoLetter => format!("{}!x", g.size),
        })
        .collect();
    format!("<{}>", parts.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complement_det;
    use crate::oracle::{all_words, bounded_language};

    fn complement_words(v: &Vass, len: usize) -> Vec<Word> {
        let lang = bounded_language(v, len).unwrap();
        all_words(v.alphabet.len(), len).into_iter().filter(|w| !lang.contains(w)).collect()
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert!(compositions(1, 2).is_empty());
        assert_eq!(compositions(2, 1), vec![vec![2]]);
    }

    #[test]
    fn pq_exceeds_every_k() {
        let v = Vass::builder("pq", 1)
            .alphabet(&["a", "b"])
            .init("p", &[0])
            .trans("p", "a", &[0], "p")
            .trans("p", "a", &[0], "q")
            .trans("q", "b", &[0], "q")
            .accept_up("q", &[0])
            .build()
            .unwrap();
        for k in 1..5 {
            let w = kdet_violation(&v, k).unwrap().unwrap();
            assert_eq!(w, vec![0; k]);
            assert!(matches!(complement_kdet(&v, k), Err(Error::NotKDeterministic { .. })));
        }
    }

    #[test]
    fn single_copy_matches_det() {
        let v = Vass::builder("cd", 1)
            .alphabet(&["a", "b"])
            .init("q", &[1])
            .trans("q", "a", &[-1], "q")
            .trans("q", "b", &[1], "r")
            .accept_up("q", &[0])
            .accept_up("r", &[2])
            .build()
            .unwrap();
        let a = bounded_language(&complement_kdet(&v, 1).unwrap(), 4).unwrap();
        let b = bounded_language(&complement_det(&v).unwrap(), 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, complement_words(&v, 4));
    }

    #[test]
    fn forked_two_deterministic() {
        let v = Vass::builder("fork", 1)
            .alphabet(&["a", "b"])
            .init("s", &[1])
            .trans("s", "a", &[0], "l")
            .trans("s", "a", &[1], "r")
            .trans("l", "a", &[-1], "l")
            .trans("r", "b", &[-1], "r")
            .trans("r", "a", &[0], "r")
            .accept_up("l", &[0])
            .accept_up("r", &[2])
            .build()
            .unwrap();
        assert!(kdet_violation(&v, 2).unwrap().is_none());
        assert!(kdet_violation(&v, 1).unwrap().is_some());
        let c = complement_kdet(&v, 2).unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(bounded_language(&c, 4).unwrap(), complement_words(&v, 4));
        let c3 = complement_kdet(&v, 3).unwrap();
        assert_eq!(bounded_language(&c3, 4).unwrap(), complement_words(&v, 4));
    }
}
