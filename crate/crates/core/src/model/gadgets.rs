use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::ideals::{DownAtom, DownSet, OmegaNat, StateId, UpAtom, UpSet};

use super::{Acceptance, Config, Label, Transition, Vass};

fn fresh_name(states: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while states.contains(&name) {
        name.push('\'');
    }
    name
}

/// Simulates `k + 1` copies of `v` and accepts when they have taken pairwise
/// different accepting runs. Copies that have fired the same transitions so
/// far form a block; blocks are kept as consecutive intervals by only
/// letting transition indices grow within a block.
pub fn ambiguity_witness(v: &Vass, k: usize) -> Result<Vass> {
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    let acc = v.upward_set()?;
    let copies = k + 1;
    let d = v.dim;
    let dim = d * copies;
    type Node = (Vec<StateId>, Vec<usize>);

    let by_letter: Vec<Vec<Vec<usize>>> = (0..v.num_states())
        .map(|q| {
            let mut per = vec![Vec::new(); v.alphabet.len()];
            for t in v.outgoing(q) {
                if let Label::Sym(a) = v.transitions[t].label {
                    per[a].push(t);
                }
            }
            per
        })
        .collect();

    let start: Node = (vec![v.initial.state; copies], vec![0; copies]);
    let mut index: HashMap<Node, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut nodes = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();

    while let Some(node) = queue.pop_front() {
        let src = index[&node];
        let (comps, blocks) = &node;
        for a in 0..v.alphabet.len() {
            let mut choice = vec![0usize; copies];
            let mut succ = Vec::new();
            assign(&by_letter, comps, blocks, a, 0, &mut choice, &mut succ);
            for ch in succ {
                let new_comps: Vec<StateId> = ch.iter().map(|&t| v.transitions[t].dst).collect();
                let mut new_blocks = vec![0usize; copies];
                for i in 1..copies {
                    let same = blocks[i] == blocks[i - 1] && ch[i] == ch[i - 1];
                    new_blocks[i] = new_blocks[i - 1] + usize::from(!same);
                }
                let effect = ch.iter().flat_map(|&t| v.transitions[t].effect.iter().copied()).collect();
                let next_node = (new_comps, new_blocks);
                let next = index.len();
                let dst = *index.entry(next_node.clone()).or_insert_with(|| {
                    nodes.push(next_node.clone());
                    queue.push_back(next_node);
                    next
                });
                transitions.push(Transition { src, label: Label::Sym(a), effect, dst });
            }
        }
    }

    let n = nodes.len();
    let mut atoms = Vec::new();
    let mut holes = Vec::new();
    for (s, (comps, blocks)) in nodes.iter().enumerate() {
        let discrete = blocks.last().is_none_or(|&b| b + 1 == copies);
        if discrete {
            let mut partial: Vec<Vec<u64>> = vec![Vec::new()];
            for &q in comps {
                let mut next = Vec::new();
                for p in &partial {
                    for atom in acc.atoms_at(q) {
                        let mut b = p.clone();
                        b.extend(&atom.basis);
                        next.push(b);
                    }
                }
                partial = next;
            }
            atoms.extend(partial.into_iter().map(|b| UpAtom::new(s, b)));
        }
        for (i, &q) in comps.iter().enumerate() {
            for h in v.holes.atoms_at(q) {
                let mut bound = vec![OmegaNat::Omega; dim];
                bound[i * d..(i + 1) * d].copy_from_slice(&h.bound);
                holes.push(DownAtom::new(s, bound));
            }
        }
    }
    let states = nodes
        .iter()
        .map(|(comps, blocks)| {
            let cs: Vec<&str> = comps.iter().map(|&q| v.states[q].as_str()).collect();
            let bs: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            format!("<{}:{}>", cs.join("|"), bs.join("."))
        })
        .collect();
    let out = Vass {
        name: format!("{}_amb{}", v.name, k),
        alphabet: v.alphabet.clone(),
        dim,
        states,
        transitions,
        initial: Config::new(0, v.initial.counters.repeat(copies)),
        acceptance: Acceptance::Upward(UpSet::new(dim, n, atoms)?),
        holes: DownSet::new(dim, n, holes)?,
        eps_allowed: false,
    };
    out.validate()?;
    Ok(out)
}

fn assign(
    by_letter: &[Vec<Vec<usize>>],
    comps: &[StateId],
    blocks: &[usize],
    a: usize,
    i: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == comps.len() {
        out.push(choice.clone());
        return;
    }
    let floor = if i > 0 && blocks[i] == blocks[i - 1] { Some(choice[i - 1]) } else { None };
    for &t in &by_letter[comps[i]][a] {
        if floor.is_some_and(|f| t < f) {
            continue;
        }
        choice[i] = t;
        assign(by_letter, comps, blocks, a, i + 1, choice, out);
    }
}

/// The pair of deterministic upward-VASSes whose languages coincide exactly
/// when the singleton seed `v` (target `q_F(0^d)`) is unreachable. Letters
/// are `t0, t1, …` (one per seed transition) and `a`.
pub fn hardness_pair(v: &Vass) -> Result<(Vass, Vass)> {
    let target = match &v.acceptance {
        Acceptance::Singleton(c) if c.counters.iter().all(|&x| x == 0) => c.state,
        Acceptance::Singleton(_) => {
            return Err(Error::UnsupportedAcceptance("singleton target must have zero counters".into()))
        }
        other => return Err(Error::UnsupportedAcceptance(format!("expected singleton, found {}", other.kind()))),
    };
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    let d = v.dim;
    let n = v.num_states();
    let mut alphabet: Vec<String> = (0..v.transitions.len()).map(|i| format!("t{i}")).collect();
    let a_name = fresh_name(&alphabet, "a");
    alphabet.push(a_name);
    let a = alphabet.len() - 1;
    let mut states = v.states.clone();
    states.push(fresh_name(&v.states, &format!("{}'", v.states[target])));
    let lifted: Vec<Transition> = v
        .transitions
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut effect = t.effect.clone();
            effect.push(t.effect.iter().sum());
            Transition { src: t.src, label: Label::Sym(i), effect, dst: t.dst }
        })
        .collect();
    let mut init = v.initial.counters.clone();
    init.push(v.initial.counters.iter().sum());
    let build = |last: i64, suffix: &str| -> Result<Vass> {
        let mut transitions = lifted.clone();
        let mut effect = vec![0; d + 1];
        effect[d] = last;
        transitions.push(Transition { src: target, label: Label::Sym(a), effect, dst: n });
        let out = Vass {
            name: format!("{}_{}", v.name, suffix),
            alphabet: alphabet.clone(),
            dim: d + 1,
            states: states.clone(),
            transitions,
            initial: Config::new(v.initial.state, init.clone()),
            acceptance: Acceptance::Upward(UpSet::new(d + 1, n + 1, vec![UpAtom::new(n, vec![0; d + 1])])?),
            holes: DownSet::empty(d + 1, n + 1),
            eps_allowed: false,
        };
        out.validate()?;
        Ok(out)
    };
    Ok((build(0, "v1")?, build(-1, "v2")?))
}

/// Replaces holes by an ε-test after every step: from `(q,0)` subtract a
/// minimal element of the hole complement and add it back on the way to
/// `(q,1)`.
pub fn hvass_to_epsvass(v: &Vass) -> Result<Vass> {
    let n = v.num_states();
    let safe = v.holes.complement();
    let k = safe.atoms().len();
    let mut states = Vec::with_capacity(2 * n + k);
    for q in &v.states {
        states.push(format!("<{q}:0>"));
        states.push(format!("<{q}:1>"));
    }
    for i in 0..k {
        states.push(format!("<r{i}>"));
    }
    let mut transitions: Vec<Transition> = v
        .transitions
        .iter()
        .map(|t| Transition { src: 2 * t.src + 1, dst: 2 * t.dst, ..t.clone() })
        .collect();
    for (i, atom) in safe.atoms().iter().enumerate() {
        let r = 2 * n + i;
        let u: Vec<i64> = atom.basis.iter().map(|&x| x as i64).collect();
        transitions.push(Transition {
            src: 2 * atom.state,
            label: Label::Eps,
            effect: u.iter().map(|x| -x).collect(),
            dst: r,
        });
        transitions.push(Transition { src: r, label: Label::Eps, effect: u, dst: 2 * atom.state + 1 });
    }
    let m = states.len();
    let map: Vec<Option<StateId>> = (0..n).map(|q| Some(2 * q + 1)).collect();
    let out = Vass {
        name: v.name.clone(),
        alphabet: v.alphabet.clone(),
        dim: v.dim,
        states,
        transitions,
        initial: Config::new(2 * v.initial.state, v.initial.counters.clone()),
        acceptance: v.acceptance.map_states(&map, v.dim, m)?,
        holes: DownSet::empty(v.dim, m),
        eps_allowed: true,
    };
    out.validate()?;
    Ok(out)
}
