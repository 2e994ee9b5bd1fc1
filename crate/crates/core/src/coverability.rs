//! Backward coverability (pre* bases with witnesses), upward emptiness,
//! empty-language configuration sets and the Karp–Miller clover.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::ideals::{by_weight, DownSet, OmegaNat, OmegaVec, StateId, UpAtom, UpSet};
use crate::model::{Vass, Word};

#[derive(Clone, Debug)]
struct Node {
    atom: UpAtom,
    /// Transition and successor node that produced this atom.
    via: Option<(usize, usize)>,
}

/// Saturated backward search: the basis of all configurations outside the
/// holes from which the target is reachable without entering a hole.
#[derive(Clone, Debug)]
pub struct PreStar {
    dim: usize,
    num_states: usize,
    nodes: Vec<Node>,
    active: Vec<usize>,
    alive: Vec<bool>,
}

#[derive(PartialEq, Eq)]
struct Key(usize, u64, StateId, Vec<u64>);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.1, self.2)
            .cmp(&(other.1, other.2))
            .then_with(|| by_weight(&self.3, &other.3))
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PreStar {
    pub fn compute(v: &Vass, target: &UpSet) -> Result<PreStar> {
        if target.dim() != v.dim {
            return Err(Error::DimensionMismatch { expected: v.dim, found: target.dim() });
        }
        if target.num_states() != v.num_states() {
            return Err(Error::StateUniverseMismatch(v.num_states(), target.num_states()));
        }
        let safe = if v.has_holes() { v.holes.complement() } else { UpSet::full(v.dim, v.num_states()) };
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); v.num_states()];
        for (i, t) in v.transitions.iter().enumerate() {
            into[t.dst].push(i);
        }
        let mut me = PreStar { dim: v.dim, num_states: v.num_states(), nodes: Vec::new(), active: Vec::new(), alive: Vec::new() };
        let mut heap = BinaryHeap::new();
        let seeds = target.intersect(&safe)?;
        for a in seeds.atoms() {
            me.insert(a.clone(), None, &mut heap);
        }
        while let Some(Reverse(Key(id, ..))) = heap.pop() {
            if !me.alive[id] {
                continue;
            }
            let atom = me.nodes[id].atom.clone();
            for &t in &into[atom.state] {
                let tr = &v.transitions[t];
                let basis: Vec<u64> = atom
                    .basis
                    .iter()
                    .zip(&tr.effect)
                    .map(|(&u, &e)| (u as i128 - e as i128).max(0) as u64)
                    .collect();
                for a in safe.atoms_at(tr.src) {
                    let joined = UpAtom::new(tr.src, basis.iter().zip(&a.basis).map(|(&x, &y)| x.max(y)).collect());
                    me.insert(joined, Some((t, id)), &mut heap);
                }
            }
        }
        me.active.sort_by(|&a, &b| me.nodes[a].atom.cmp(&me.nodes[b].atom));
        Ok(me)
    }

    fn insert(&mut self, atom: UpAtom, via: Option<(usize, usize)>, heap: &mut BinaryHeap<Reverse<Key>>) {
        if self.active.iter().any(|&i| self.nodes[i].atom.subsumes(&atom)) {
            return;
        }
        let (nodes, alive) = (&self.nodes, &mut self.alive);
        self.active.retain(|&i| {
            let keep = !atom.subsumes(&nodes[i].atom);
            alive[i] = keep;
            keep
        });
        let id = self.nodes.len();
        let w = atom.basis.iter().sum();
        heap.push(Reverse(Key(id, w, atom.state, atom.basis.clone())));
        self.nodes.push(Node { atom, via });
        self.alive.push(true);
        self.active.push(id);
    }

    pub fn basis(&self) -> UpSet {
        let atoms = self.active.iter().map(|&i| self.nodes[i].atom.clone()).collect();
        UpSet::new(self.dim, self.num_states, atoms).expect("atoms have the right shape")
    }

    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        self.active.iter().any(|&i| self.nodes[i].atom.contains(state, v))
    }

    /// A run (transition indices) from `(state, v)` into the target.
    pub fn witness(&self, vass: &Vass, state: StateId, v: &[u64]) -> Option<Vec<usize>> {
        let mut id = *self.active.iter().find(|&&i| self.nodes[i].atom.contains(state, v))?;
        let mut run = Vec::new();
        while let Some((t, next)) = self.nodes[id].via {
            run.push(t);
            id = next;
        }
        debug_assert!({
            let mut c = crate::model::Config::new(state, v.to_vec());
            run.iter().all(|&t| match vass.step(&c, t) {
                Ok(n) => {
                    c = n;
                    true
                }
                Err(_) => false,
            })
        });
        Some(run)
    }
}

pub fn pre_star_basis(v: &Vass, target: &UpSet) -> Result<UpSet> {
    Ok(PreStar::compute(v, target)?.basis())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    Nonempty { run: Vec<usize>, word: Word },
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }
}

/// Emptiness of an upward-VASS (holes and ε allowed), with a witness run.
pub fn empty_upward(v: &Vass) -> Result<Emptiness> {
    let pre = PreStar::compute(v, v.upward_set()?)?;
    Ok(match pre.witness(v, v.initial.state, &v.initial.counters) {
        None => Emptiness::Empty,
        Some(run) => {
            let word = v.run_word(&run);
            Emptiness::Nonempty { run, word }
        }
    })
}

/// `{c : L(c) = ∅}` for an upward-VASS.
pub fn empty_language_configs(v: &Vass) -> Result<DownSet> {
    Ok(pre_star_basis(v, v.upward_set()?)?.complement())
}

fn omega_leq(a: &[OmegaNat], b: &[OmegaNat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Karp–Miller clover: maximal (state, ω-vector) labels whose downward
/// closure is that of the reachability set.
pub fn km_clover(v: &Vass, max_nodes: usize) -> Result<Vec<(StateId, OmegaVec)>> {
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    struct KmNode {
        state: StateId,
        label: OmegaVec,
        parent: Option<usize>,
    }
    let root: OmegaVec = v.initial.counters.iter().map(|&x| OmegaNat::Fin(x)).collect();
    let mut tree = vec![KmNode { state: v.initial.state, label: root, parent: None }];
    let mut stack = vec![0usize];
    let mut expanded: Vec<usize> = Vec::new();
    while let Some(id) = stack.pop() {
        let (state, label) = (tree[id].state, tree[id].label.clone());
        if expanded.iter().any(|&e| tree[e].state == state && omega_leq(&label, &tree[e].label)) {
            continue;
        }
        expanded.push(id);
        for t in v.outgoing(state) {
            let tr = &v.transitions[t];
            let Some(mut next) = label.iter().zip(&tr.effect).map(|(x, &e)| x.add_int(e)).collect::<Option<OmegaVec>>()
            else {
                continue;
            };
            let mut anc = Some(id);
            while let Some(a) = anc {
                let n = &tree[a];
                if n.state == tr.dst && omega_leq(&n.label, &next) {
                    for j in 0..next.len() {
                        if n.label[j] < next[j] {
                            next[j] = OmegaNat::Omega;
                        }
                    }
                }
                anc = n.parent;
            }
            if tree.len() >= max_nodes {
                return Err(Error::BudgetExhausted { what: "Karp-Miller node", spent: tree.len() });
            }
            stack.push(tree.len());
            tree.push(KmNode { state: tr.dst, label: next, parent: Some(id) });
        }
    }
    let mut out: Vec<(StateId, OmegaVec)> = Vec::new();
    for &e in &expanded {
        let (s, l) = (tree[e].state, &tree[e].label);
        if expanded.iter().any(|&f| {
            f != e && tree[f].state == s && omega_leq(l, &tree[f].label) && (tree[f].label != *l || f < e)
        }) {
            continue;
        }
        out.push((s, l.clone()));
    }
    out.sort();
    Ok(out)
}
