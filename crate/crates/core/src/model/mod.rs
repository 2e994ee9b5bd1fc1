//! The VASS data model: alphabet, counters, transitions, acceptance, holes
//! and ε, together with single-step semantics and the generic structural
//! operations the constructions are built from.

mod determinism;
mod gadgets;
mod product;

pub use determinism::{bounded_semantic_deterministic, nondeterminism, syntactic_deterministic};
pub use gadgets::{ambiguity_witness, hardness_pair, hvass_to_epsvass};
pub use product::{align_alphabets, j_restriction, product};

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result, StepError};
use crate::ideals::{add_signed, leq, DownAtom, DownSet, NatVec, OmegaNat, OmegaVec, StateId, UpAtom, UpSet};

pub type Sym = usize;
pub type Word = Vec<Sym>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Eps,
    Sym(Sym),
}

impl Label {
    pub fn sym(self) -> Option<Sym> {
        match self {
            Label::Eps => None,
            Label::Sym(a) => Some(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: StateId,
    pub label: Label,
    pub effect: Vec<i64>,
    pub dst: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub state: StateId,
    pub counters: NatVec,
}

impl Config {
    pub fn new(state: StateId, counters: NatVec) -> Self {
        Config { state, counters }
    }
}

/// `q(U ×_J D)`: coordinates in `up_coords` (sorted, 0-based) must be at
/// least `up`, the remaining ones (in increasing order) at most `down`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpDownAtom {
    pub state: StateId,
    pub up_coords: Vec<usize>,
    pub up: NatVec,
    pub down: OmegaVec,
}

impl UpDownAtom {
    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        if state != self.state {
            return false;
        }
        let (mut ui, mut di) = (0, 0);
        for (j, &x) in v.iter().enumerate() {
            if self.up_coords.get(ui) == Some(&j) {
                if x < self.up[ui] {
                    return false;
                }
                ui += 1;
            } else {
                if !self.down[di].ge_nat(x) {
                    return false;
                }
                di += 1;
            }
        }
        true
    }

    /// Lower and upper bound per coordinate.
    pub fn bounds(&self, dim: usize) -> Vec<(u64, OmegaNat)> {
        let (mut ui, mut di) = (0, 0);
        (0..dim)
            .map(|j| {
                if self.up_coords.get(ui) == Some(&j) {
                    ui += 1;
                    (self.up[ui - 1], OmegaNat::Omega)
                } else {
                    di += 1;
                    (0, self.down[di - 1])
                }
            })
            .collect()
    }

    fn from_up(a: &UpAtom) -> Self {
        UpDownAtom {
            state: a.state,
            up_coords: (0..a.basis.len()).collect(),
            up: a.basis.clone(),
            down: Vec::new(),
        }
    }

    fn from_down(a: &DownAtom) -> Self {
        UpDownAtom { state: a.state, up_coords: Vec::new(), up: Vec::new(), down: a.bound.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Upward(UpSet),
    Downward(DownSet),
    UpDown(Vec<UpDownAtom>),
    Singleton(Config),
}

impl Acceptance {
    pub fn contains(&self, c: &Config) -> bool {
        match self {
            Acceptance::Upward(u) => u.contains(c.state, &c.counters),
            Acceptance::Downward(d) => d.contains(c.state, &c.counters),
            Acceptance::UpDown(atoms) => atoms.iter().any(|a| a.contains(c.state, &c.counters)),
            Acceptance::Singleton(s) => s == c,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Acceptance::Upward(_) => "upward",
            Acceptance::Downward(_) => "downward",
            Acceptance::UpDown(_) => "updown",
            Acceptance::Singleton(_) => "singleton",
        }
    }

    /// States carrying at least one accepting configuration.
    pub fn accepting_states(&self, num_states: usize) -> Vec<bool> {
        let mut out = vec![false; num_states];
        match self {
            Acceptance::Upward(u) => u.atoms().iter().for_each(|a| out[a.state] = true),
            Acceptance::Downward(d) => d.atoms().iter().for_each(|a| out[a.state] = true),
            Acceptance::UpDown(atoms) => atoms.iter().for_each(|a| out[a.state] = true),
            Acceptance::Singleton(c) => out[c.state] = true,
        }
        out
    }

    /// The acceptance as a list of up-down atoms (not defined for singletons).
    pub fn as_updown(&self) -> Result<Vec<UpDownAtom>> {
        Ok(match self {
            Acceptance::Upward(u) => u.atoms().iter().map(UpDownAtom::from_up).collect(),
            Acceptance::Downward(d) => d.atoms().iter().map(UpDownAtom::from_down).collect(),
            Acceptance::UpDown(atoms) => atoms.clone(),
            Acceptance::Singleton(_) => {
                return Err(Error::UnsupportedAcceptance("singleton acceptance is not up-down".into()))
            }
        })
    }

    /// Picks the narrowest kind able to hold `atoms`.
    pub fn from_updown(dim: usize, num_states: usize, mut atoms: Vec<UpDownAtom>) -> Result<Acceptance> {
        atoms.sort();
        atoms.dedup();
        if atoms.iter().all(|a| a.up_coords.len() == dim) {
            let ups = atoms.into_iter().map(|a| UpAtom::new(a.state, a.up)).collect();
            return Ok(Acceptance::Upward(UpSet::new(dim, num_states, ups)?));
        }
        if atoms.iter().all(|a| a.up_coords.is_empty()) {
            let downs = atoms.into_iter().map(|a| DownAtom::new(a.state, a.down)).collect();
            return Ok(Acceptance::Downward(DownSet::new(dim, num_states, downs)?));
        }
        Ok(Acceptance::UpDown(atoms))
    }

    /// Largest absolute constant in the representation.
    pub fn max_constant(&self) -> u64 {
        match self {
            Acceptance::Upward(u) => u.max_constant(),
            Acceptance::Downward(d) => d.max_constant(),
            Acceptance::UpDown(atoms) => atoms
                .iter()
                .flat_map(|a| a.up.iter().copied().chain(a.down.iter().filter_map(|x| x.finite())))
                .max()
                .unwrap_or(0),
            Acceptance::Singleton(c) => c.counters.iter().copied().max().unwrap_or(0),
        }
    }

    fn validate(&self, dim: usize, num_states: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        match self {
            Acceptance::Upward(u) if u.dim() != dim || u.num_states() != num_states => {
                bad("upward acceptance has the wrong shape".into())
            }
            Acceptance::Downward(d) if d.dim() != dim || d.num_states() != num_states => {
                bad("downward acceptance has the wrong shape".into())
            }
            Acceptance::UpDown(atoms) => {
                for a in atoms {
                    let sorted = a.up_coords.windows(2).all(|w| w[0] < w[1]);
                    if a.state >= num_states
                        || !sorted
                        || a.up_coords.iter().any(|&j| j >= dim)
                        || a.up.len() != a.up_coords.len()
                        || a.down.len() + a.up.len() != dim
                    {
                        return bad(format!("malformed up-down atom {a:?}"));
                    }
                }
                Ok(())
            }
            Acceptance::Singleton(c) if c.state >= num_states || c.counters.len() != dim => {
                bad("singleton acceptance has the wrong shape".into())
            }
            _ => Ok(()),
        }
    }

    fn map_states(&self, map: &[Option<StateId>], dim: usize, num_states: usize) -> Result<Acceptance> {
        Ok(match self {
            Acceptance::Upward(u) => Acceptance::Upward(UpSet::new(
                dim,
                num_states,
                u.atoms()
                    .iter()
                    .filter_map(|a| map[a.state].map(|s| UpAtom::new(s, a.basis.clone())))
                    .collect(),
            )?),
            Acceptance::Downward(d) => Acceptance::Downward(DownSet::new(
                dim,
                num_states,
                d.atoms()
                    .iter()
                    .filter_map(|a| map[a.state].map(|s| DownAtom::new(s, a.bound.clone())))
                    .collect(),
            )?),
            Acceptance::UpDown(atoms) => Acceptance::UpDown(
                atoms
                    .iter()
                    .filter_map(|a| map[a.state].map(|s| UpDownAtom { state: s, ..a.clone() }))
                    .collect(),
            ),
            Acceptance::Singleton(c) => match map[c.state] {
                Some(s) => Acceptance::Singleton(Config::new(s, c.counters.clone())),
                None => Acceptance::Downward(DownSet::empty(dim, num_states)),
            },
        })
    }
}

/// A VASS, possibly with holes and ε-transitions. Fields are public for
/// inspection; [`Vass::validate`] checks the structural invariants and every
/// constructor in this crate returns validated values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vass {
    pub name: String,
    pub alphabet: Vec<String>,
    pub dim: usize,
    pub states: Vec<String>,
    pub transitions: Vec<Transition>,
    pub initial: Config,
    pub acceptance: Acceptance,
    pub holes: DownSet,
    pub eps_allowed: bool,
}

impl Vass {
    pub fn builder(name: &str, dim: usize) -> VassBuilder {
        VassBuilder::new(name, dim)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn has_holes(&self) -> bool {
        !self.holes.is_empty()
    }

    pub fn has_eps(&self) -> bool {
        self.transitions.iter().any(|t| t.label == Label::Eps)
    }

    pub fn is_upward(&self) -> bool {
        matches!(self.acceptance, Acceptance::Upward(_))
    }

    pub fn upward_set(&self) -> Result<&UpSet> {
        match &self.acceptance {
            Acceptance::Upward(u) => Ok(u),
            other => Err(Error::UnsupportedAcceptance(format!("expected upward, found {}", other.kind()))),
        }
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.initial.state >= n || self.initial.counters.len() != self.dim {
            return bad("initial configuration has the wrong shape".into());
        }
        for (i, t) in self.transitions.iter().enumerate() {
            if t.src >= n || t.dst >= n {
                return bad(format!("transition {i} uses an undeclared state"));
            }
            if t.effect.len() != self.dim {
                return bad(format!("transition {i} has effect of length {}", t.effect.len()));
            }
            match t.label {
                Label::Eps if !self.eps_allowed => return bad(format!("transition {i} is ε but ε is off")),
                Label::Sym(a) if a >= self.alphabet.len() => return bad(format!("transition {i} has unknown letter")),
                _ => {}
            }
        }
        self.acceptance.validate(self.dim, n)?;
        if self.holes.dim() != self.dim || self.holes.num_states() != n {
            return bad("holes have the wrong shape".into());
        }
        if self.holes.contains(self.initial.state, &self.initial.counters) {
            return bad("initial configuration lies in a hole".into());
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                return bad(format!("duplicate state name {s}"));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.alphabet {
            if !seen.insert(s) {
                return bad(format!("duplicate letter {s}"));
            }
        }
        Ok(())
    }

    /// Fires transition `t` in `c`.
    pub fn step(&self, c: &Config, t: usize) -> std::result::Result<Config, StepError> {
        let tr = self.transitions.get(t).ok_or(StepError::NoSuchTransition(t))?;
        if tr.src != c.state {
            return Err(StepError::WrongState { transition: t });
        }
        let counters = apply_effect(&c.counters, &tr.effect)?;
        if self.holes.contains(tr.dst, &counters) {
            return Err(StepError::HoleViolation);
        }
        Ok(Config::new(tr.dst, counters))
    }

    /// All legal single steps out of `c`.
    pub fn successors<'a>(&'a self, c: &'a Config) -> impl Iterator<Item = (usize, Config)> + 'a {
        self.outgoing(c.state).filter_map(move |t| self.step(c, t).ok().map(|n| (t, n)))
    }

    pub fn outgoing(&self, state: StateId) -> impl Iterator<Item = usize> + '_ {
        self.transitions.iter().enumerate().filter(move |(_, t)| t.src == state).map(|(i, _)| i)
    }

    pub fn is_accepting(&self, c: &Config) -> bool {
        self.acceptance.contains(c)
    }

    /// Replays a run given as transition indices from the initial configuration.
    pub fn replay(&self, run: &[usize]) -> std::result::Result<Config, StepError> {
        let mut c = self.initial.clone();
        for &t in run {
            c = self.step(&c, t)?;
        }
        Ok(c)
    }

    /// The label word of a run, ε dropped.
    pub fn run_word(&self, run: &[usize]) -> Word {
        run.iter().filter_map(|&t| self.transitions[t].label.sym()).collect()
    }

    pub fn word_names(&self, w: &[Sym]) -> Vec<String> {
        w.iter().map(|&a| self.alphabet[a].clone()).collect()
    }

    pub fn parse_word(&self, letters: &[&str]) -> Result<Word> {
        letters
            .iter()
            .map(|l| self.symbol(l).ok_or_else(|| Error::InvalidArgument(format!("unknown letter {l}"))))
            .collect()
    }

    /// Largest absolute value among effects, the initial counters and the
    /// acceptance constants.
    pub fn norm(&self) -> u64 {
        let eff = self.transitions.iter().flat_map(|t| t.effect.iter().map(|z| z.unsigned_abs()));
        let init = self.initial.counters.iter().copied();
        eff.chain(init).chain(std::iter::once(self.acceptance.max_constant())).max().unwrap_or(0)
    }

    /// Counters erased; accepting states are those mentioned by the
    /// acceptance condition. Transitions keep their indices.
    pub fn control_automaton(&self) -> Vass {
        if self.dim == 0 && !self.has_holes() && self.is_upward() {
            return self.clone();
        }
        let n = self.num_states();
        let acc = self.acceptance.accepting_states(n);
        let atoms = (0..n).filter(|&q| acc[q]).map(|q| UpAtom::new(q, vec![])).collect();
        Vass {
            name: format!("{}_control", self.name),
            alphabet: self.alphabet.clone(),
            dim: 0,
            states: self.states.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition { effect: vec![], ..t.clone() })
                .collect(),
            initial: Config::new(self.initial.state, vec![]),
            acceptance: Acceptance::Upward(UpSet::new(0, n, atoms).expect("valid atoms")),
            holes: DownSet::empty(0, n),
            eps_allowed: self.eps_allowed,
        }
    }

    /// Re-expresses the model over a larger alphabet; new letters have no
    /// transitions.
    pub fn with_alphabet(&self, alphabet: &[String]) -> Result<Vass> {
        let map: Vec<Sym> = self
            .alphabet
            .iter()
            .map(|a| alphabet.iter().position(|b| b == a).ok_or(Error::AlphabetMismatch))
            .collect::<Result<_>>()?;
        let mut out = self.clone();
        out.alphabet = alphabet.to_vec();
        for t in &mut out.transitions {
            if let Label::Sym(a) = t.label {
                t.label = Label::Sym(map[a]);
            }
        }
        Ok(out)
    }

    /// Removes states that are unreachable from the initial state or cannot
    /// reach an accepting state in the control graph. Both removals preserve
    /// the language.
    pub fn trim(&self) -> Result<Vass> {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut queue = VecDeque::from([self.initial.state]);
        fwd[self.initial.state] = true;
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for t in &self.transitions {
            succ[t.src].push(t.dst);
            pred[t.dst].push(t.src);
        }
        while let Some(q) = queue.pop_front() {
            for &r in &succ[q] {
                if !fwd[r] {
                    fwd[r] = true;
                    queue.push_back(r);
                }
            }
        }
        let acc = self.acceptance.accepting_states(n);
        let mut bwd = acc.clone();
        let mut queue: VecDeque<_> = (0..n).filter(|&q| acc[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &pred[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|q| q == self.initial.state || (fwd[q] && bwd[q])).collect();
        self.restrict_states(&keep)
    }

    /// Keeps the states flagged in `keep` (which must include the initial one).
    pub fn restrict_states(&self, keep: &[bool]) -> Result<Vass> {
        let mut map = vec![None; self.num_states()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                map[q] = Some(states.len());
                states.push(name.clone());
            }
        }
        let m = states.len();
        let init = map[self.initial.state].ok_or_else(|| Error::InvalidModel("initial state removed".into()))?;
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| match (map[t.src], map[t.dst]) {
                (Some(s), Some(d)) => Some(Transition { src: s, dst: d, ..t.clone() }),
                _ => None,
            })
            .collect();
        let holes = DownSet::new(
            self.dim,
            m,
            self.holes
                .atoms()
                .iter()
                .filter_map(|a| map[a.state].map(|s| DownAtom::new(s, a.bound.clone())))
                .collect(),
        )?;
        let out = Vass {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            dim: self.dim,
            states,
            transitions,
            initial: Config::new(init, self.initial.counters.clone()),
            acceptance: self.acceptance.map_states(&map, self.dim, m)?,
            holes,
            eps_allowed: self.eps_allowed,
        };
        out.validate()?;
        Ok(out)
    }

    /// Renames states by the permutation `perm` (old index → new index).
    pub fn permute_states(&self, perm: &[StateId]) -> Result<Vass> {
        let n = self.num_states();
        let mut states = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            states[new] = self.states[old].clone();
        }
        let map: Vec<Option<StateId>> = perm.iter().map(|&p| Some(p)).collect();
        let out = Vass {
            states,
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition { src: perm[t.src], dst: perm[t.dst], ..t.clone() })
                .collect(),
            initial: Config::new(perm[self.initial.state], self.initial.counters.clone()),
            acceptance: self.acceptance.map_states(&map, self.dim, n)?,
            holes: DownSet::new(
                self.dim,
                n,
                self.holes.atoms().iter().map(|a| DownAtom::new(perm[a.state], a.bound.clone())).collect(),
            )?,
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }
}

pub fn apply_effect(v: &[u64], e: &[i64]) -> std::result::Result<NatVec, StepError> {
    v.iter()
        .zip(e)
        .enumerate()
        .map(|(j, (&x, &z))| {
            add_signed(x, z).ok_or(if z < 0 { StepError::Underflow(j + 1) } else { StepError::Overflow(j + 1) })
        })
        .collect()
}

/// Covers `u` when `v ≥ u`.
pub fn covers(v: &[u64], u: &[u64]) -> bool {
    leq(u, v)
}

impl fmt::Display for Vass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::cli::print_model(self))
    }
}

/// Incremental construction from names; what the parser and tests use.
#[derive(Clone, Debug)]
pub struct VassBuilder {
    name: String,
    dim: usize,
    alphabet: Vec<String>,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    transitions: Vec<(StateId, Option<String>, Vec<i64>, StateId)>,
    initial: Option<(StateId, NatVec)>,
    up: Vec<(StateId, NatVec)>,
    down: Vec<(StateId, OmegaVec)>,
    updown: Vec<(StateId, Vec<usize>, NatVec, OmegaVec)>,
    singleton: Vec<(StateId, NatVec)>,
    holes: Vec<(StateId, OmegaVec)>,
    eps: bool,
}

impl VassBuilder {
    pub fn new(name: &str, dim: usize) -> Self {
        VassBuilder {
            name: name.to_string(),
            dim,
            alphabet: Vec::new(),
            states: Vec::new(),
            index: HashMap::new(),
            transitions: Vec::new(),
            initial: None,
            up: Vec::new(),
            down: Vec::new(),
            updown: Vec::new(),
            singleton: Vec::new(),
            holes: Vec::new(),
            eps: false,
        }
    }

    pub fn alphabet(mut self, letters: &[&str]) -> Self {
        for l in letters {
            if !self.alphabet.iter().any(|a| a == l) {
                self.alphabet.push(l.to_string());
            }
        }
        self
    }

    pub fn state(mut self, name: &str) -> Self {
        self.intern(name);
        self
    }

    fn intern(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.index.get(name) {
            return q;
        }
        let q = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), q);
        q
    }

    pub fn eps(mut self, on: bool) -> Self {
        self.eps = on;
        self
    }

    pub fn init(mut self, state: &str, counters: &[u64]) -> Self {
        let q = self.intern(state);
        self.initial = Some((q, counters.to_vec()));
        self
    }

    /// `label` of `"eps"` denotes ε.
    pub fn trans(mut self, src: &str, label: &str, effect: &[i64], dst: &str) -> Self {
        let s = self.intern(src);
        let d = self.intern(dst);
        let l = (label != "eps").then(|| label.to_string());
        self.transitions.push((s, l, effect.to_vec(), d));
        self
    }

    pub fn accept_up(mut self, state: &str, basis: &[u64]) -> Self {
        let q = self.intern(state);
        self.up.push((q, basis.to_vec()));
        self
    }

    pub fn accept_down(mut self, state: &str, bound: &[OmegaNat]) -> Self {
        let q = self.intern(state);
        self.down.push((q, bound.to_vec()));
        self
    }

    /// `up_coords` are 0-based.
    pub fn accept_updown(mut self, state: &str, up_coords: &[usize], up: &[u64], down: &[OmegaNat]) -> Self {
        let q = self.intern(state);
        self.updown.push((q, up_coords.to_vec(), up.to_vec(), down.to_vec()));
        self
    }

    pub fn accept_singleton(mut self, state: &str, counters: &[u64]) -> Self {
        let q = self.intern(state);
        self.singleton.push((q, counters.to_vec()));
        self
    }

    pub fn hole(mut self, state: &str, bound: &[OmegaNat]) -> Self {
        let q = self.intern(state);
        self.holes.push((q, bound.to_vec()));
        self
    }

    pub fn build(self) -> Result<Vass> {
        let n = self.states.len();
        let d = self.dim;
        let (q0, c0) = self.initial.ok_or_else(|| Error::InvalidModel("missing initial configuration".into()))?;
        let mut transitions = Vec::new();
        for (s, l, e, t) in self.transitions {
            let label = match l {
                None => Label::Eps,
                Some(name) => Label::Sym(
                    self.alphabet
                        .iter()
                        .position(|a| *a == name)
                        .ok_or_else(|| Error::InvalidModel(format!("letter {name} not in alphabet")))?,
                ),
            };
            transitions.push(Transition { src: s, label, effect: e, dst: t });
        }
        let kinds = [!self.up.is_empty(), !self.down.is_empty(), !self.updown.is_empty(), !self.singleton.is_empty()];
        if kinds.iter().filter(|&&k| k).count() > 1 {
            return Err(Error::InvalidModel("mixed acceptance kinds".into()));
        }
        if self.singleton.len() > 1 {
            return Err(Error::InvalidModel("more than one singleton target".into()));
        }
        let acceptance = if let Some((q, c)) = self.singleton.into_iter().next() {
            Acceptance::Singleton(Config::new(q, c))
        } else if !self.down.is_empty() {
            Acceptance::Downward(DownSet::new(
                d,
                n,
                self.down.into_iter().map(|(q, b)| DownAtom::new(q, b)).collect(),
            )?)
        } else if !self.updown.is_empty() {
            Acceptance::UpDown(
                self.updown
                    .into_iter()
                    .map(|(q, j, u, dn)| UpDownAtom { state: q, up_coords: j, up: u, down: dn })
                    .collect(),
            )
        } else {
            Acceptance::Upward(UpSet::new(d, n, self.up.into_iter().map(|(q, b)| UpAtom::new(q, b)).collect())?)
        };
        let holes = DownSet::new(d, n, self.holes.into_iter().map(|(q, b)| DownAtom::new(q, b)).collect())?;
        let v = Vass {
            name: self.name,
            alphabet: self.alphabet,
            dim: d,
            states: self.states,
            transitions,
            initial: Config::new(q0, c0),
            acceptance,
            holes,
            eps_allowed: self.eps,
        };
        v.validate()?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::OmegaNat::{Fin, Omega};

    fn minus_loop() -> Vass {
        Vass::builder("m", 1).alphabet(&["a"]).init("q", &[1]).trans("q", "a", &[-1], "q").accept_up("q", &[0]).build().unwrap()
    }

    #[test]
    fn step_examples() {
        let v = minus_loop();
        assert_eq!(v.step(&Config::new(0, vec![1]), 0), Ok(Config::new(0, vec![0])));
        assert_eq!(v.step(&Config::new(0, vec![0]), 0), Err(StepError::Underflow(1)));
        let h = Vass::builder("h", 1)
            .alphabet(&["a"])
            .init("q", &[2])
            .trans("q", "a", &[-1], "q")
            .accept_up("q", &[0])
            .hole("q", &[Fin(0)])
            .build()
            .unwrap();
        assert_eq!(h.step(&Config::new(0, vec![1]), 0), Err(StepError::HoleViolation));
        assert_eq!(v.step(&Config::new(0, vec![1]), 3), Err(StepError::NoSuchTransition(3)));
    }

    #[test]
    fn control_automaton_examples() {
        let v = minus_loop();
        let a = v.control_automaton();
        assert_eq!(a.dim, 0);
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.transitions.len(), 1);
        assert_eq!(a.control_automaton(), a);
        let w = Vass::builder("w", 1)
            .alphabet(&["a"])
            .init("q", &[0])
            .trans("q", "a", &[1], "q")
            .state("q2")
            .accept_up("q", &[3])
            .build()
            .unwrap();
        assert_eq!(w.control_automaton().acceptance.accepting_states(2), vec![true, false]);
    }

    #[test]
    fn builder_rejects_bad_models() {
        let e = Vass::builder("x", 1).alphabet(&["a"]).init("q", &[0]).trans("q", "eps", &[0], "q").build();
        assert!(e.is_err());
        let e = Vass::builder("x", 1).init("q", &[0]).hole("q", &[Omega]).build();
        assert!(e.is_err());
        let e = Vass::builder("x", 1).init("q", &[0]).trans("q", "b", &[0], "q").build();
        assert!(e.is_err());
    }

    #[test]
    fn updown_membership() {
        let a = UpDownAtom { state: 0, up_coords: vec![1], up: vec![2], down: vec![Fin(1), Omega] };
        assert!(a.contains(0, &[1, 2, 9]));
        assert!(!a.contains(0, &[2, 2, 9]));
        assert!(!a.contains(0, &[0, 1, 0]));
        assert_eq!(a.bounds(3), vec![(0, Fin(1)), (2, Omega), (0, Omega)]);
    }

    #[test]
    fn trim_drops_useless_states() {
        let v = Vass::builder("t", 0)
            .alphabet(&["a"])
            .init("p", &[])
            .trans("p", "a", &[], "q")
            .trans("p", "a", &[], "dead")
            .trans("z", "a", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        let t = v.trim().unwrap();
        assert_eq!(t.states, vec!["p".to_string(), "q".to_string()]);
        assert_eq!(t.transitions.len(), 1);
    }
}
