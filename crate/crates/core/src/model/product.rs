use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::ideals::{DownAtom, DownSet, OmegaNat, StateId, UpAtom, UpSet};

use super::{Acceptance, Config, Label, Transition, UpDownAtom, Vass};

/// Re-expresses both models over the union of their alphabets (first
/// model's letters first).
pub fn align_alphabets(v1: &Vass, v2: &Vass) -> Result<(Vass, Vass)> {
    let mut alphabet = v1.alphabet.clone();
    for a in &v2.alphabet {
        if !alphabet.contains(a) {
            alphabet.push(a.clone());
        }
    }
    Ok((v1.with_alphabet(&alphabet)?, v2.with_alphabet(&alphabet)?))
}

fn combine(a1: &UpDownAtom, a2: &UpDownAtom, d1: usize, state: StateId) -> UpDownAtom {
    let mut up_coords = a1.up_coords.clone();
    up_coords.extend(a2.up_coords.iter().map(|j| j + d1));
    UpDownAtom {
        state,
        up_coords,
        up: a1.up.iter().chain(&a2.up).copied().collect(),
        down: a1.down.iter().chain(&a2.down).copied().collect(),
    }
}

/// Synchronous product over the reachable part of the control graph.
/// Letters synchronise; an ε-step of one side leaves the other in place.
pub fn product(v1: &Vass, v2: &Vass) -> Result<Vass> {
    if v1.alphabet != v2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let acc1 = v1.acceptance.as_updown()?;
    let acc2 = v2.acceptance.as_updown()?;
    let (d1, d2) = (v1.dim, v2.dim);
    let dim = d1 + d2;

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    let start = (v1.initial.state, v2.initial.state);
    index.insert(start, 0);
    pairs.push(start);
    queue.push_back(start);
    let mut raw = Vec::new();

    let out1: Vec<Vec<usize>> = (0..v1.num_states()).map(|q| v1.outgoing(q).collect()).collect();
    let out2: Vec<Vec<usize>> = (0..v2.num_states()).map(|q| v2.outgoing(q).collect()).collect();
    while let Some((p, q)) = queue.pop_front() {
        let mut moves = Vec::new();
        for &i in &out1[p] {
            let t1 = &v1.transitions[i];
            match t1.label {
                Label::Eps => {
                    let eff = t1.effect.iter().copied().chain(std::iter::repeat_n(0, d2)).collect();
                    moves.push((Label::Eps, eff, (t1.dst, q)));
                }
                Label::Sym(a) => {
                    for &j in &out2[q] {
                        let t2 = &v2.transitions[j];
                        if t2.label == Label::Sym(a) {
                            let eff = t1.effect.iter().chain(&t2.effect).copied().collect();
                            moves.push((Label::Sym(a), eff, (t1.dst, t2.dst)));
                        }
                    }
                }
            }
        }
        for &j in &out2[q] {
            let t2 = &v2.transitions[j];
            if t2.label == Label::Eps {
                let eff = std::iter::repeat_n(0, d1).chain(t2.effect.iter().copied()).collect();
                moves.push((Label::Eps, eff, (p, t2.dst)));
            }
        }
        let src = index[&(p, q)];
        for (label, effect, dst) in moves {
            let next = index.len();
            let d = *index.entry(dst).or_insert_with(|| {
                pairs.push(dst);
                queue.push_back(dst);
                next
            });
            raw.push(Transition { src, label, effect, dst: d });
        }
    }

    let n = pairs.len();
    let mut atoms = Vec::new();
    let mut holes = Vec::new();
    for (s, &(p, q)) in pairs.iter().enumerate() {
        for a1 in acc1.iter().filter(|a| a.state == p) {
            for a2 in acc2.iter().filter(|a| a.state == q) {
                atoms.push(combine(a1, a2, d1, s));
            }
        }
        for h in v1.holes.atoms_at(p) {
            let bound = h.bound.iter().copied().chain(std::iter::repeat_n(OmegaNat::Omega, d2)).collect();
            holes.push(DownAtom::new(s, bound));
        }
        for h in v2.holes.atoms_at(q) {
            let bound = std::iter::repeat_n(OmegaNat::Omega, d1).chain(h.bound.iter().copied()).collect();
            holes.push(DownAtom::new(s, bound));
        }
    }
    let out = Vass {
        name: format!("{}x{}", v1.name, v2.name),
        alphabet: v1.alphabet.clone(),
        dim,
        states: pairs.iter().map(|&(p, q)| format!("<{}|{}>", v1.states[p], v2.states[q])).collect(),
        transitions: raw,
        initial: Config::new(0, v1.initial.counters.iter().chain(&v2.initial.counters).copied().collect()),
        acceptance: Acceptance::from_updown(dim, n, atoms)?,
        holes: DownSet::new(dim, n, holes)?,
        eps_allowed: v1.eps_allowed || v2.eps_allowed,
    };
    out.validate()?;
    Ok(out)
}

/// Keeps only the coordinates in `coords` (0-based) in effects, the initial
/// configuration and the acceptance condition.
pub fn j_restriction(v: &Vass, coords: &[usize]) -> Result<Vass> {
    let mut j: Vec<usize> = coords.to_vec();
    j.sort_unstable();
    j.dedup();
    if let Some(&bad) = j.iter().find(|&&c| c >= v.dim) {
        return Err(Error::InvalidCoordinate(bad));
    }
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    let n = v.num_states();
    let pick = |x: &[u64]| j.iter().map(|&c| x[c]).collect::<Vec<_>>();
    let acceptance = match &v.acceptance {
        Acceptance::Upward(u) => Acceptance::Upward(UpSet::new(
            j.len(),
            n,
            u.atoms().iter().map(|a| UpAtom::new(a.state, pick(&a.basis))).collect(),
        )?),
        Acceptance::Downward(d) => Acceptance::Downward(DownSet::new(
            j.len(),
            n,
            d.atoms()
                .iter()
                .map(|a| DownAtom::new(a.state, j.iter().map(|&c| a.bound[c]).collect()))
                .collect(),
        )?),
        Acceptance::UpDown(atoms) => {
            let mut out = Vec::new();
            for a in atoms {
                let bounds = a.bounds(v.dim);
                let mut r = UpDownAtom { state: a.state, up_coords: vec![], up: vec![], down: vec![] };
                for (new, &c) in j.iter().enumerate() {
                    if a.up_coords.contains(&c) {
                        r.up_coords.push(new);
                        r.up.push(bounds[c].0);
                    } else {
                        r.down.push(bounds[c].1);
                    }
                }
                out.push(r);
            }
            Acceptance::from_updown(j.len(), n, out)?
        }
        Acceptance::Singleton(c) => Acceptance::Singleton(Config::new(c.state, pick(&c.counters))),
    };
    let out = Vass {
        name: v.name.clone(),
        alphabet: v.alphabet.clone(),
        dim: j.len(),
        states: v.states.clone(),
        transitions: v
            .transitions
            .iter()
            .map(|t| Transition { effect: j.iter().map(|&c| t.effect[c]).collect(), ..t.clone() })
            .collect(),
        initial: Config::new(v.initial.state, pick(&v.initial.counters)),
        acceptance,
        holes: DownSet::empty(j.len(), n),
        eps_allowed: v.eps_allowed,
    };
    out.validate()?;
    Ok(out)
}
