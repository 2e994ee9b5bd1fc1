//! Finite monoids, homomorphisms, transition monoids and (M,h)-decorations
//! of words, automata and VASSes.

use std::collections::{HashMap, VecDeque};

use crate::coverability::empty_language_configs;
use crate::error::{Error, Result};
use crate::ideals::{DownAtom, DownSet, UpAtom, UpSet};
use crate::model::{Acceptance, Config, Label, Sym, Transition, Vass};

pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    table: Vec<Vec<Elem>>,
    identity: Elem,
}

impl FiniteMonoid {
    /// Checks closure, identity laws and associativity exhaustively.
    pub fn new(table: Vec<Vec<Elem>>, identity: Elem) -> Result<FiniteMonoid> {
        let n = table.len();
        if n == 0 || identity >= n {
            return Err(Error::InvalidMonoid("identity out of range".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidMonoid("table is not n×n over 0..n".into()));
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(Error::InvalidMonoid(format!("identity law fails at {x}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidMonoid(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(FiniteMonoid { table, identity })
    }

    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid { table: vec![vec![0]], identity: 0 }
    }

    /// ℤ_n under addition.
    pub fn cyclic(n: usize) -> FiniteMonoid {
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteMonoid { table, identity: 0 }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<Elem>] {
        &self.table
    }
}

/// Letter images; extends to words by multiplication, `h(ε)` = identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    images: Vec<Elem>,
}

impl Hom {
    pub fn new(m: &FiniteMonoid, images: Vec<Elem>) -> Result<Hom> {
        if images.iter().any(|&x| x >= m.size()) {
            return Err(Error::InvalidMonoid("letter image out of range".into()));
        }
        Ok(Hom { images })
    }

    pub fn image(&self, a: Sym) -> Elem {
        self.images[a]
    }

    pub fn letters(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, m: &FiniteMonoid, w: &[Sym]) -> Elem {
        w.iter().fold(m.identity(), |acc, &a| m.mul(acc, self.images[a]))
    }
}

/// Relations as bit rows: row `p` holds the states reachable from `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl Relation {
    fn words(n: usize) -> usize {
        n.div_ceil(64).max(1)
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation { n, rows: vec![vec![0; Self::words(n)]; n] };
        for p in 0..n {
            r.set(p, p);
        }
        r
    }

    pub fn empty(n: usize) -> Relation {
        Relation { n, rows: vec![vec![0; Self::words(n)]; n] }
    }

    pub fn set(&mut self, p: usize, q: usize) {
        self.rows[p][q / 64] |= 1 << (q % 64);
    }

    pub fn get(&self, p: usize, q: usize) -> bool {
        self.rows[p][q / 64] >> (q % 64) & 1 == 1
    }

    /// `self ; other`
    pub fn then(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.n);
        for p in 0..self.n {
            for q in 0..self.n {
                if self.get(p, q) {
                    for (o, x) in out.rows[p].iter_mut().zip(&other.rows[q]) {
                        *o |= x;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    pub monoid: FiniteMonoid,
    pub hom: Hom,
    /// `accepting[q][m]`: words of type `m` are accepted from `q`.
    pub accepting: Vec<Vec<bool>>,
    pub relations: Vec<Relation>,
}

/// Transition monoid of a finite automaton (its step relations under
/// composition). `max_size` bounds the number of elements.
pub fn transition_monoid(a: &Vass, max_size: usize) -> Result<TransitionMonoid> {
    if a.dim != 0 {
        return Err(Error::DimensionMismatch { expected: 0, found: a.dim });
    }
    if a.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    let n = a.num_states();
    let mut gens: Vec<Relation> = vec![Relation::empty(n); a.alphabet.len()];
    for t in &a.transitions {
        if let Label::Sym(x) = t.label {
            gens[x].set(t.src, t.dst);
        }
    }
    let mut elems = vec![Relation::identity(n)];
    let mut index: HashMap<Relation, Elem> = HashMap::from([(elems[0].clone(), 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let r = elems[e].then(g);
            if !index.contains_key(&r) {
                if elems.len() >= max_size {
                    return Err(Error::BudgetExhausted { what: "monoid element", spent: elems.len() });
                }
                index.insert(r.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(r);
            }
        }
    }
    let size = elems.len();
    let mut table = vec![vec![0; size]; size];
    for x in 0..size {
        for y in 0..size {
            table[x][y] = index[&elems[x].then(&elems[y])];
        }
    }
    let images = gens.iter().map(|g| index[g]).collect();
    let acc_states = a.acceptance.accepting_states(n);
    let accepting = (0..n)
        .map(|q| elems.iter().map(|r| (0..n).any(|f| acc_states[f] && r.get(q, f))).collect())
        .collect();
    let monoid = FiniteMonoid { table, identity: 0 };
    let hom = Hom { images };
    Ok(TransitionMonoid { monoid, hom, accepting, relations: elems })
}

/// A letter of `Σ_ε × M`; `base == None` is the ε head.
pub type DecoratedLetter = (Option<Sym>, Elem);

/// `(ε, h(w)) (a_1, h(a_2…a_n)) … (a_n, h(ε))`
pub fn decorate_word(w: &[Sym], m: &FiniteMonoid, h: &Hom) -> Vec<DecoratedLetter> {
    let mut suffix = vec![m.identity(); w.len() + 1];
    for i in (0..w.len()).rev() {
        suffix[i] = m.mul(h.image(w[i]), suffix[i + 1]);
    }
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push((None, suffix[0]));
    for (i, &a) in w.iter().enumerate() {
        out.push((Some(a), suffix[i + 1]));
    }
    out
}

pub fn is_well_formed(u: &[DecoratedLetter], m: &FiniteMonoid, h: &Hom) -> bool {
    let Some(((None, _), rest)) = u.split_first() else {
        return false;
    };
    if rest.iter().any(|(b, _)| b.is_none()) {
        return false;
    }
    let ok = u.windows(2).all(|p| m.mul(h.image(p[1].0.expect("checked above")), p[1].1) == p[0].1);
    ok && u.last().map(|l| l.1) == Some(m.identity())
}

/// Letter layout of `Σ_ε × M`: all `(ε, m)` first, then `(a, m)` per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedAlphabet {
    pub base: Vec<String>,
    pub size: usize,
}

impl DecoratedAlphabet {
    pub fn new(base: &[String], m: &FiniteMonoid) -> Self {
        DecoratedAlphabet { base: base.to_vec(), size: m.size() }
    }

    pub fn symbol(&self, l: DecoratedLetter) -> Sym {
        match l {
            (None, m) => m,
            (Some(a), m) => (a + 1) * self.size + m,
        }
    }

    pub fn letter(&self, s: Sym) -> DecoratedLetter {
        let (b, m) = (s / self.size, s % self.size);
        ((b > 0).then(|| b - 1), m)
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.size).map(|m| format!("eps@{m}")).collect();
        for a in &self.base {
            out.extend((0..self.size).map(|m| format!("{a}@{m}")));
        }
        out
    }

    pub fn encode(&self, u: &[DecoratedLetter]) -> Vec<Sym> {
        u.iter().map(|&l| self.symbol(l)).collect()
    }
}

/// Automaton of the well-formed words: `init`, one state per element, and a
/// rejecting sink.
pub fn well_formed_automaton(alphabet: &[String], m: &FiniteMonoid, h: &Hom) -> Result<Vass> {
    if h.letters() != alphabet.len() {
        return Err(Error::AlphabetMismatch);
    }
    let da = DecoratedAlphabet::new(alphabet, m);
    let n = m.size();
    let (init, sink) = (n, n + 1);
    let mut states: Vec<String> = (0..n).map(|x| format!("<m{x}>")).collect();
    states.push("<init>".into());
    states.push("<sink>".into());
    let mut transitions = Vec::new();
    let mut edge = |src, s, dst| transitions.push(Transition { src, label: Label::Sym(s), effect: vec![], dst });
    for s in 0..da.names().len() {
        let (base, ann) = da.letter(s);
        match base {
            None => edge(init, s, ann),
            Some(_) => edge(init, s, sink),
        }
        for x in 0..n {
            let ok = base.is_some_and(|a| m.mul(h.image(a), ann) == x);
            edge(x, s, if ok { ann } else { sink });
        }
        edge(sink, s, sink);
    }
    let out = Vass {
        name: "wellformed".into(),
        alphabet: da.names(),
        dim: 0,
        states,
        transitions,
        initial: Config::new(init, vec![]),
        acceptance: Acceptance::Upward(UpSet::new(0, n + 2, vec![UpAtom::new(m.identity(), vec![])])?),
        holes: DownSet::empty(0, n + 2),
        eps_allowed: false,
    };
    out.validate()?;
    Ok(out)
}

/// Decoration without holes. State `(q, x)` has index `q·(|M|+1) + x`, with
/// `x = |M|` standing for `⊥`.
pub fn decorate_unguarded(v: &Vass, m: &FiniteMonoid, h: &Hom) -> Result<Vass> {
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    if h.letters() != v.alphabet.len() {
        return Err(Error::AlphabetMismatch);
    }
    let acc = v.upward_set()?;
    let da = DecoratedAlphabet::new(&v.alphabet, m);
    let k = m.size();
    let id = |q: usize, x: Option<Elem>| q * (k + 1) + x.unwrap_or(k);
    let mut states = Vec::new();
    for q in &v.states {
        for x in 0..k {
            states.push(format!("<{q}@{x}>"));
        }
        states.push(format!("<{q}@_>"));
    }
    let qi = v.initial.state;
    let mut transitions = Vec::new();
    for x in 0..k {
        transitions.push(Transition {
            src: id(qi, None),
            label: Label::Sym(da.symbol((None, x))),
            effect: vec![0; v.dim],
            dst: id(qi, Some(x)),
        });
    }
    for t in &v.transitions {
        let a = t.label.sym().expect("no ε");
        for x in 0..k {
            transitions.push(Transition {
                src: id(t.src, Some(m.mul(h.image(a), x))),
                label: Label::Sym(da.symbol((Some(a), x))),
                effect: t.effect.clone(),
                dst: id(t.dst, Some(x)),
            });
        }
    }
    let n = states.len();
    let atoms = acc.atoms().iter().map(|a| UpAtom::new(id(a.state, Some(m.identity())), a.basis.clone())).collect();
    let out = Vass {
        name: format!("{}_dec", v.name),
        alphabet: da.names(),
        dim: v.dim,
        states,
        transitions,
        initial: Config::new(id(qi, None), v.initial.counters.clone()),
        acceptance: Acceptance::Upward(UpSet::new(v.dim, n, atoms)?),
        holes: DownSet::empty(v.dim, n),
        eps_allowed: false,
    };
    out.validate()?;
    Ok(out)
}

/// The decorated HVASS `V_(M,h)` over `Σ_ε × M`; holes are the
/// configurations with empty language (never on `⊥` states, which only the
/// initial one uses).
pub fn decorate_vass(v: &Vass, m: &FiniteMonoid, h: &Hom) -> Result<Vass> {
    let mut out = decorate_unguarded(v, m, h)?;
    let k = m.size();
    let dead = empty_language_configs(&out)?;
    let holes = dead.atoms().iter().filter(|a| a.state % (k + 1) != k).cloned().collect::<Vec<DownAtom>>();
    out.holes = DownSet::new(v.dim, out.num_states(), holes)?;
    out.validate()?;
    Ok(out)
}

/// Decoration of a finite automaton with empty-language states trimmed away.
pub fn decorate_automaton(a: &Vass, m: &FiniteMonoid, h: &Hom) -> Result<Vass> {
    if a.dim != 0 {
        return Err(Error::DimensionMismatch { expected: 0, found: a.dim });
    }
    let d = decorate_vass(a, m, h)?;
    let keep: Vec<bool> = (0..d.num_states()).map(|q| !d.holes.contains(q, &[])).collect();
    let mut out = d.restrict_states(&keep)?;
    out.holes = DownSet::empty(0, out.num_states());
    out.trim()
}

fn base_of(name: &str) -> &str {
    name.rsplit_once('@').map_or(name, |(b, _)| b)
}

/// Forgets annotations (`a@m ↦ a`, `eps@m ↦ ε`), then removes the leading
/// ε-steps when they are zero-effect edges out of an initial state without
/// incoming edges.
pub fn project_decorated(v: &Vass, base: &[String]) -> Result<Vass> {
    let mut map = Vec::with_capacity(v.alphabet.len());
    for name in &v.alphabet {
        let b = base_of(name);
        map.push(if b == "eps" {
            Label::Eps
        } else {
            Label::Sym(base.iter().position(|x| x == b).ok_or(Error::AlphabetMismatch)?)
        });
    }
    let mut out = v.clone();
    out.alphabet = base.to_vec();
    for t in &mut out.transitions {
        if let Label::Sym(s) = t.label {
            t.label = map[s];
        }
    }
    out.eps_allowed = out.eps_allowed || out.has_eps();
    out.validate()?;
    Ok(eliminate_initial_eps(&out).unwrap_or(out))
}

fn eliminate_initial_eps(v: &Vass) -> Option<Vass> {
    let qi = v.initial.state;
    let eps: Vec<&Transition> = v.transitions.iter().filter(|t| t.label == Label::Eps).collect();
    let applicable = !v.has_holes()
        && eps.iter().all(|t| t.src == qi && t.dst != qi && t.effect.iter().all(|&e| e == 0))
        && v.transitions.iter().all(|t| t.dst != qi);
    if !applicable || eps.is_empty() {
        return None;
    }
    let targets: Vec<usize> = eps.iter().map(|t| t.dst).collect();
    let mut transitions: Vec<Transition> = v.transitions.iter().filter(|t| t.label != Label::Eps).cloned().collect();
    for &r in &targets {
        for t in v.transitions.iter().filter(|t| t.src == r && t.label != Label::Eps) {
            transitions.push(Transition { src: qi, ..t.clone() });
        }
    }
    let mut atoms = v.acceptance.as_updown().ok()?;
    let copied: Vec<_> = atoms
        .iter()
        .filter(|a| targets.contains(&a.state))
        .map(|a| crate::model::UpDownAtom { state: qi, ..a.clone() })
        .collect();
    atoms.extend(copied);
    let mut out = v.clone();
    out.transitions = transitions;
    out.acceptance = Acceptance::from_updown(v.dim, v.num_states(), atoms).ok()?;
    out.eps_allowed = false;
    out.validate().ok()?;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq() -> Vass {
        Vass::builder("pq", 0)
            .alphabet(&["a", "b"])
            .init("p", &[])
            .trans("p", "a", &[], "p")
            .trans("p", "a", &[], "q")
            .trans("q", "b", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap()
    }

    #[test]
    fn parity_decoration() {
        let m = FiniteMonoid::cyclic(2);
        let h = Hom::new(&m, vec![1, 0]).unwrap();
        let d = decorate_word(&[0, 0, 1, 0, 1], &m, &h);
        assert_eq!(d, vec![(None, 1), (Some(0), 0), (Some(0), 1), (Some(1), 1), (Some(0), 0), (Some(1), 0)]);
        assert!(is_well_formed(&d, &m, &h));
        let mut bad = d.clone();
        bad[2].1 = 0;
        assert!(!is_well_formed(&bad, &m, &h));
        assert!(!is_well_formed(&[], &m, &h));
        assert_eq!(decorate_word(&[], &m, &h), vec![(None, 0)]);
    }

    #[test]
    fn transition_monoid_sizes() {
        assert_eq!(transition_monoid(&pq(), 1000).unwrap().monoid.size(), 5);
        let dfa = Vass::builder("d", 0).alphabet(&["a"]).init("p", &[]).trans("p", "a", &[], "p").accept_up("p", &[]).build().unwrap();
        assert_eq!(transition_monoid(&dfa, 1000).unwrap().monoid.size(), 1);
        let cyc = Vass::builder("c", 0)
            .alphabet(&["a"])
            .init("p", &[])
            .trans("p", "a", &[], "q")
            .trans("q", "a", &[], "p")
            .accept_up("p", &[])
            .build()
            .unwrap();
        let t = transition_monoid(&cyc, 1000).unwrap();
        assert_eq!(t.monoid.size(), 2);
        assert_eq!(t.monoid.mul(t.hom.image(0), t.hom.image(0)), t.monoid.identity());
    }

    #[test]
    fn monoid_validation() {
        assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]], 0).is_ok());
        assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 0]], 1).is_err());
        assert!(FiniteMonoid::new(vec![vec![1, 0], vec![0, 0]], 0).is_err());
    }

    #[test]
    fn decorated_alphabet_layout() {
        let m = FiniteMonoid::cyclic(3);
        let da = DecoratedAlphabet::new(&["a".into(), "b".into()], &m);
        for s in 0..9 {
            assert_eq!(da.symbol(da.letter(s)), s);
        }
        assert_eq!(da.names()[4], "a@1");
        assert_eq!(base_of("eps@2"), "eps");
    }
}
