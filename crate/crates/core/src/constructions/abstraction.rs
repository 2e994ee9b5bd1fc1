use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ideals::{DownSet, OmegaNat, StateId, UpAtom, UpSet};
use crate::model::{ambiguity_witness, Acceptance, Config, Transition, Vass};

use super::Outcome;

/// A control state together with counters kept exactly below the threshold
/// and as ω from it on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractionState {
    pub state: StateId,
    pub vector: Vec<OmegaNat>,
}

/// The M-abstraction of an upward VASS, explored on demand.
#[derive(Clone, Debug)]
pub struct Abstraction<'a> {
    v: &'a Vass,
    acc: &'a UpSet,
    m: u64,
}

impl<'a> Abstraction<'a> {
    pub fn new(v: &'a Vass, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("abstraction threshold must be positive".into()));
        }
        if v.has_holes() {
            return Err(Error::HolesNotSupported);
        }
        Ok(Abstraction { v, acc: v.upward_set()?, m })
    }

    pub fn threshold(&self) -> u64 {
        self.m
    }

    fn cut(&self, x: OmegaNat) -> OmegaNat {
        match x {
            OmegaNat::Fin(n) if n < self.m => OmegaNat::Fin(n),
            _ => OmegaNat::Omega,
        }
    }

    pub fn initial(&self) -> AbstractionState {
        AbstractionState {
            state: self.v.initial.state,
            vector: self.v.initial.counters.iter().map(|&n| self.cut(OmegaNat::Fin(n))).collect(),
        }
    }

    /// Successors `(transition, state)`; a finite entry must stay ≥ 0.
    pub fn successors(&self, s: &AbstractionState) -> Vec<(usize, AbstractionState)> {
        let mut out = Vec::new();
        'next: for t in self.v.outgoing(s.state) {
            let tr = &self.v.transitions[t];
            let mut vector = Vec::with_capacity(s.vector.len());
            for (&x, &z) in s.vector.iter().zip(&tr.effect) {
                match x.add_int(z) {
                    Some(y) => vector.push(self.cut(y)),
                    None => continue 'next,
                }
            }
            out.push((t, AbstractionState { state: tr.dst, vector }));
        }
        out
    }

    /// `s = q(w_M)` for some accepting `q(w)`.
    pub fn is_accepting(&self, s: &AbstractionState) -> bool {
        self.acc.atoms_at(s.state).any(|a| {
            a.basis.iter().zip(&s.vector).all(|(&b, &x)| match x {
                OmegaNat::Fin(n) => n >= b,
                OmegaNat::Omega => true,
            })
        })
    }

    /// Emptiness by explicit search; `None` once more than `max_nodes`
    /// states are generated.
    pub fn is_empty(&self, max_nodes: usize) -> Option<bool> {
        let start = self.initial();
        if self.is_accepting(&start) {
            return Some(false);
        }
        let mut seen = std::collections::HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for (_, n) in self.successors(&s) {
                if self.is_accepting(&n) {
                    return Some(false);
                }
                if seen.insert(n.clone()) {
                    if seen.len() > max_nodes {
                        return None;
                    }
                    queue.push_back(n);
                }
            }
        }
        Some(true)
    }

    /// Reachable part as `(states, edges (src, transition, dst))`.
    pub fn explore(&self, max_nodes: usize) -> Option<(Vec<AbstractionState>, Vec<Edge>)> {
        let start = self.initial();
        let mut index = HashMap::from([(start.clone(), 0usize)]);
        let mut states = vec![start];
        let mut edges = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for (t, n) in self.successors(&states[i].clone()) {
                let j = match index.get(&n) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= max_nodes {
                            return None;
                        }
                        index.insert(n.clone(), states.len());
                        states.push(n);
                        states.len() - 1
                    }
                };
                edges.push((i, t, j));
            }
            i += 1;
        }
        Some((states, edges))
    }

    fn state_name(&self, s: &AbstractionState) -> String {
        let parts: Vec<String> = s
            .vector
            .iter()
            .map(|x| match x {
                OmegaNat::Fin(n) => n.to_string(),
                OmegaNat::Omega => "w".into(),
            })
            .collect();
        format!("<{}/{}>", self.v.states[s.state], parts.join("."))
    }

    /// The abstraction as a finite automaton, or `None` over budget.
    pub fn to_automaton(&self, max_nodes: usize) -> Result<Option<Vass>> {
        let Some((states, edges)) = self.explore(max_nodes) else {
            return Ok(None);
        };
        let n = states.len();
        let atoms = (0..n).filter(|&i| self.is_accepting(&states[i])).map(|i| UpAtom::new(i, vec![])).collect();
        let out = Vass {
            name: format!("{}_abs{}", self.v.name, self.m),
            alphabet: self.v.alphabet.clone(),
            dim: 0,
            states: states.iter().map(|s| self.state_name(s)).collect(),
            transitions: edges
                .iter()
                .map(|&(s, t, d)| Transition { src: s, label: self.v.transitions[t].label, effect: vec![], dst: d })
                .collect(),
            initial: Config::new(0, vec![]),
            acceptance: Acceptance::Upward(UpSet::new(0, n, atoms)?),
            holes: DownSet::empty(0, n),
            eps_allowed: self.v.eps_allowed,
        };
        out.validate()?;
        Ok(Some(out))
    }

    /// `v` with its control replaced by this abstraction. Acceptance sits on
    /// the accepting abstract states and only looks at the counters: every
    /// accepting run of `v` ends in such a state, since the abstract
    /// component agrees with the counters below the threshold.
    pub fn lift(&self, max_nodes: usize) -> Result<Option<Vass>> {
        let Some((states, edges)) = self.explore(max_nodes) else {
            return Ok(None);
        };
        let n = states.len();
        let atoms = states
            .iter()
            .enumerate()
            .filter(|(_, s)| self.is_accepting(s))
            .flat_map(|(i, s)| self.acc.atoms_at(s.state).map(move |a| UpAtom::new(i, a.basis.clone())))
            .collect();
        let out = Vass {
            name: format!("{}_m{}", self.v.name, self.m),
            alphabet: self.v.alphabet.clone(),
            dim: self.v.dim,
            states: states.iter().map(|s| self.state_name(s)).collect(),
            transitions: edges
                .iter()
                .map(|&(s, t, d)| Transition { src: s, dst: d, ..self.v.transitions[t].clone() })
                .collect(),
            initial: Config::new(0, self.v.initial.counters.clone()),
            acceptance: Acceptance::Upward(UpSet::new(self.v.dim, n, atoms)?),
            holes: DownSet::empty(self.v.dim, n),
            eps_allowed: self.v.eps_allowed,
        };
        out.validate()?;
        Ok(Some(out.trim()?))
    }
}

/// `(src, transition, dst)`.
pub type Edge = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// `F(V, k) = (4|Q|·n)^((4d)^k)`
    pub f: BigUint,
    /// `G(V, k) = n·(F(V, k) + 1)`
    pub g: BigUint,
    /// `n·(F(V, d) + 1) + 1`
    pub m_bar: BigUint,
}

fn big_f(q: usize, n: u64, d: usize, k: usize) -> BigUint {
    let exp = (4 * d as u64).checked_pow(k as u32).and_then(|e| u32::try_from(e).ok()).expect("exponent fits in u32");
    (BigUint::from(4 * q as u64) * BigUint::from(n)).pow(exp)
}

/// Exact threshold values for `v` and level `k`. Panics if `(4d)^k` does not
/// fit in 32 bits, far beyond what could be stored anyway.
pub fn rackoff_thresholds(v: &Vass, k: usize) -> Thresholds {
    let (q, n, d) = (v.num_states(), v.norm(), v.dim);
    let f = big_f(q, n, d, k);
    let g = BigUint::from(n) * (&f + 1u32);
    let m_bar = BigUint::from(n) * (big_f(q, n, d, d) + 1u32) + 1u32;
    Thresholds { f, g, m_bar }
}

/// Whether `M̄` of `v` exceeds `cap`, without expanding `M̄` when a size
/// estimate already settles it.
pub fn threshold_exceeds(v: &Vass, cap: u64) -> bool {
    let (q, n, d) = (v.num_states(), v.norm(), v.dim);
    if n == 0 {
        return cap < 1;
    }
    let log_f = (4.0 * d as f64).powi(d as i32) * ((4 * q as u64 * n) as f64).log2();
    if log_f > 80.0 {
        return true;
    }
    rackoff_thresholds(v, d).m_bar > BigUint::from(cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbstractionBudget {
    /// Largest threshold tried.
    pub max_threshold: u64,
    /// Cap on abstract states per exploration.
    pub max_nodes: usize,
}

impl Default for AbstractionBudget {
    fn default() -> Self {
        AbstractionBudget { max_threshold: 64, max_nodes: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaControl {
    pub vass: Vass,
    pub threshold: u64,
}

fn thresholds_upto(cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = 1u64;
    while m < cap {
        out.push(m);
        m = m.saturating_mul(2);
    }
    if cap >= 1 {
        out.push(cap);
    }
    out
}

/// A language-equal VASS whose control automaton is k-ambiguous.
///
/// Tries `M = 1, 2, 4, …` up to the cap and keeps the first `M` whose
/// abstraction of the `(k+1)`-copy witness is empty. Any such `M` works:
/// the abstraction only adds runs, so its emptiness rules out `k+1`
/// distinct accepting control runs, and replacing the control by the
/// abstraction of `v` never removes a run of `v`.
pub fn ba_control(v: &Vass, k: usize, budget: &AbstractionBudget) -> Result<Outcome<BaControl>> {
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    Abstraction::new(v, 1)?;
    let witness = ambiguity_witness(v, k)?;
    for m in thresholds_upto(budget.max_threshold) {
        match Abstraction::new(&witness, m)?.is_empty(budget.max_nodes) {
            None => return Ok(Outcome::Unknown(format!("abstraction at threshold {m} exceeds the node budget"))),
            Some(false) => continue,
            Some(true) => {
                return Ok(match Abstraction::new(v, m)?.lift(budget.max_nodes)? {
                    Some(vass) => Outcome::Done(BaControl { vass, threshold: m }),
                    None => Outcome::Unknown(format!("abstraction of the input at threshold {m} exceeds the node budget")),
                });
            }
        }
    }
    if !threshold_exceeds(&witness, budget.max_threshold) {
        return Err(Error::InvalidArgument(format!("input has more than {k} accepting runs on some word")));
    }
    Ok(Outcome::Unknown(format!("no threshold up to {} separates the runs", budget.max_threshold)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bounded_ambiguity, bounded_language};
    use OmegaNat::{Fin, Omega};

    fn up_counter() -> Vass {
        Vass::builder("up", 1).alphabet(&["a"]).init("q", &[0]).trans("q", "a", &[1], "q").accept_up("q", &[0]).build().unwrap()
    }

    #[test]
    fn update_rule() {
        let v = up_counter();
        let abs = Abstraction::new(&v, 2).unwrap();
        let mut s = abs.initial();
        let mut seen = vec![s.vector.clone()];
        for _ in 0..3 {
            s = abs.successors(&s).pop().unwrap().1;
            seen.push(s.vector.clone());
        }
        assert_eq!(seen, vec![vec![Fin(0)], vec![Fin(1)], vec![Omega], vec![Omega]]);
        let one = Abstraction::new(&v, 1).unwrap();
        assert_eq!(one.successors(&one.initial())[0].1.vector, vec![Omega]);
        assert!(Abstraction::new(&v, 0).is_err());
    }

    #[test]
    fn over_approximates_runs() {
        let v = Vass::builder("d", 1)
            .alphabet(&["a", "b"])
            .init("q", &[1])
            .trans("q", "a", &[1], "q")
            .trans("q", "b", &[-1], "q")
            .accept_up("q", &[2])
            .build()
            .unwrap();
        let lang = bounded_language(&v, 5).unwrap();
        for m in 1..4 {
            let a = Abstraction::new(&v, m).unwrap().to_automaton(1000).unwrap().unwrap();
            let al = bounded_language(&a, 5).unwrap();
            assert!(lang.iter().all(|w| al.contains(w)));
        }
    }

    #[test]
    fn formula_values() {
        let v = Vass::builder("two", 1)
            .alphabet(&["a"])
            .init("p", &[0])
            .trans("p", "a", &[1], "q")
            .accept_up("q", &[1])
            .build()
            .unwrap();
        assert_eq!(rackoff_thresholds(&v, 1).f, BigUint::from(4096u32));
        let t0 = rackoff_thresholds(&v, 0);
        assert_eq!(t0.f, BigUint::from(8u32));
        assert_eq!(t0.g, BigUint::from(9u32));
        assert_eq!(rackoff_thresholds(&v, 1).m_bar, BigUint::from(4098u32));
        assert!(threshold_exceeds(&v, 4097));
        assert!(!threshold_exceeds(&v, 4098));
    }

    #[test]
    fn unambiguous_control_needs_no_counters() {
        let v = Vass::builder("det", 1)
            .alphabet(&["a", "b"])
            .init("q", &[0])
            .trans("q", "a", &[1], "q")
            .trans("q", "b", &[-1], "q")
            .accept_up("q", &[0])
            .build()
            .unwrap();
        let out = ba_control(&v, 1, &AbstractionBudget::default()).unwrap().done().unwrap();
        assert_eq!(out.threshold, 1);
    }

    #[test]
    fn counters_resolve_ambiguity() {
        // The left branch needs two tokens but only one is available.
        let v = Vass::builder("amb", 1)
            .alphabet(&["a", "b"])
            .init("p", &[1])
            .trans("p", "a", &[0], "l")
            .trans("p", "a", &[0], "r")
            .trans("l", "b", &[-2], "f")
            .trans("r", "b", &[0], "f")
            .trans("f", "a", &[0], "f")
            .accept_up("f", &[0])
            .build()
            .unwrap();
        assert_eq!(bounded_ambiguity(&v, 5).unwrap(), 1);
        assert_eq!(bounded_ambiguity(&v.control_automaton(), 5).unwrap(), 2);
        let out = ba_control(&v, 1, &AbstractionBudget::default()).unwrap().done().unwrap();
        assert_eq!(out.threshold, 2);
        assert_eq!(bounded_language(&out.vass, 5).unwrap(), bounded_language(&v, 5).unwrap());
        assert!(bounded_ambiguity(&out.vass.control_automaton(), 5).unwrap() <= 1);
    }

    #[test]
    fn zero_runs() {
        let empty = Vass::builder("e", 1).alphabet(&["a"]).init("q", &[0]).trans("q", "a", &[-1], "q").accept_up("q", &[1]).build().unwrap();
        assert!(ba_control(&empty, 0, &AbstractionBudget::default()).unwrap().done().is_some());
        let full = Vass::builder("f", 0).alphabet(&["a"]).init("q", &[]).accept_up("q", &[]).build().unwrap();
        assert!(ba_control(&full, 0, &AbstractionBudget::default()).is_err());
    }
}
