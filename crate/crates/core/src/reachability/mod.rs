//! Budgeted reachability and up-down emptiness with a three-valued answer.
//!
//! `No` is only reported with a certificate: the target lies outside the
//! Karp–Miller clover, outside the backward-coverability region, or the
//! pruned forward search ran out of configurations without hitting a cutoff.

mod invariant;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::coverability::{km_clover, Emptiness, PreStar};
use crate::error::{Error, Result};
use crate::ideals::{DownSet, OmegaNat, UpAtom, UpSet};
use crate::model::{hvass_to_epsvass, Acceptance, Config, Label, Transition, UpDownAtom, Vass, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Backward coverability decides the question exactly.
    Coverability,
    CloverExcluded,
    CoveragePruned,
    ExhaustedFiniteSpace,
    /// A linear invariant of the control graph rules the target out.
    InvariantExcluded,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub nodes_expanded: usize,
    pub frontier: usize,
    pub cutoff: Option<String>,
}

impl BudgetReport {
    fn absorb(&mut self, other: &BudgetReport) {
        self.nodes_expanded += other.nodes_expanded;
        self.frontier = self.frontier.max(other.frontier);
        if self.cutoff.is_none() {
            self.cutoff.clone_from(&other.cutoff);
        }
    }
}

/// Result of an emptiness-style query: `Yes` means an accepting run exists.
/// The deciders reuse the type with `Yes` meaning "included".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Word>,
    /// Run in the queried model, when the engine produced one directly.
    pub run: Option<Vec<usize>>,
    pub certificates: Vec<Certificate>,
    pub report: BudgetReport,
}

impl Verdict {
    pub fn yes(witness: Word, run: Option<Vec<usize>>) -> Verdict {
        Verdict { answer: Answer::Yes, witness: Some(witness), run, certificates: vec![], report: BudgetReport::default() }
    }

    pub fn no(cert: Certificate) -> Verdict {
        Verdict { answer: Answer::No, witness: None, run: None, certificates: vec![cert], report: BudgetReport::default() }
    }

    pub fn unknown(report: BudgetReport) -> Verdict {
        Verdict { answer: Answer::Unknown, witness: None, run: None, certificates: vec![], report }
    }

    fn with_report(mut self, report: BudgetReport) -> Verdict {
        self.report = report;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: usize,
    pub max_counter_sum: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 200_000, max_counter_sum: 64 }
    }
}

impl SearchBudget {
    fn check(&self) -> Result<()> {
        if self.max_nodes == 0 || self.max_counter_sum == 0 {
            return Err(Error::InvalidArgument("search budgets must be positive".into()));
        }
        Ok(())
    }
}

/// Per state and coordinate: no transition reachable from the state can
/// decrease the coordinate.
fn non_decreasing(v: &Vass) -> Vec<Vec<bool>> {
    let n = v.num_states();
    let mut succ = vec![Vec::new(); n];
    for t in &v.transitions {
        succ[t.src].push(t.dst);
    }
    (0..n)
        .map(|q| {
            let mut seen = vec![false; n];
            seen[q] = true;
            let mut stack = vec![q];
            while let Some(p) = stack.pop() {
                for &r in &succ[p] {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
            (0..v.dim)
                .map(|j| v.transitions.iter().filter(|t| seen[t.src]).all(|t| t.effect[j] >= 0))
                .collect()
        })
        .collect()
}

/// Is there a run from the initial configuration to exactly `target`?
pub fn reach(v: &Vass, target: &Config, budget: &SearchBudget) -> Result<Verdict> {
    budget.check()?;
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    if target.state >= v.num_states() || target.counters.len() != v.dim {
        return Err(Error::InvalidArgument("target does not fit the model".into()));
    }
    let mut report = BudgetReport::default();
    let exact: Vec<OmegaNat> = target.counters.iter().map(|&x| OmegaNat::Fin(x)).collect();
    if invariant::invariant_excludes(v, target.state, &target.counters, &exact) {
        return Ok(Verdict::no(Certificate::InvariantExcluded));
    }

    if let Ok(clover) = km_clover(v, budget.max_nodes) {
        let covered = clover
            .iter()
            .any(|(q, m)| *q == target.state && m.iter().zip(&target.counters).all(|(x, &y)| x.ge_nat(y)));
        if !covered {
            return Ok(Verdict::no(Certificate::CloverExcluded));
        }
    }

    let up = UpSet::new(v.dim, v.num_states(), vec![UpAtom::new(target.state, target.counters.clone())])?;
    let pre = PreStar::compute(v, &up)?;
    if !pre.contains(v.initial.state, &v.initial.counters) {
        return Ok(Verdict::no(Certificate::CoveragePruned));
    }

    let mono = non_decreasing(v);
    let dead = |c: &Config| {
        (0..v.dim).any(|j| mono[c.state][j] && c.counters[j] > target.counters[j])
            || !pre.contains(c.state, &c.counters)
    };
    let mut parent: HashMap<Config, Option<(Config, usize)>> = HashMap::new();
    parent.insert(v.initial.clone(), None);
    let mut queue = VecDeque::from([v.initial.clone()]);
    let mut cut = false;
    while let Some(c) = queue.pop_front() {
        if c == *target {
            let mut run = Vec::new();
            let mut cur = c;
            while let Some(Some((p, t))) = parent.get(&cur) {
                run.push(*t);
                cur = p.clone();
            }
            run.reverse();
            let word = v.run_word(&run);
            report.frontier = queue.len();
            return Ok(Verdict::yes(word, Some(run)).with_report(report));
        }
        report.nodes_expanded += 1;
        if report.nodes_expanded > budget.max_nodes {
            report.frontier = queue.len();
            report.cutoff = Some("max-nodes".into());
            return Ok(Verdict::unknown(report));
        }
        for (t, n) in v.successors(&c) {
            if parent.contains_key(&n) || dead(&n) {
                continue;
            }
            if n.counters.iter().sum::<u64>() > budget.max_counter_sum {
                cut = true;
                continue;
            }
            parent.insert(n.clone(), Some((c.clone(), t)));
            queue.push_back(n);
        }
    }
    if cut {
        report.cutoff = Some("max-counter-sum".into());
        return Ok(Verdict::unknown(report));
    }
    Ok(Verdict::no(Certificate::ExhaustedFiniteSpace).with_report(report))
}

/// The singleton reduction of one up-down atom: an ε-edge into a fresh
/// state whose ε-loops lower up-coordinates and unbounded coordinates and
/// raise bounded ones, with target at the atom's corner.
pub fn updown_gadget(v: &Vass, atom: &UpDownAtom) -> Result<(Vass, Config)> {
    let d = v.dim;
    let fresh = v.num_states();
    let mut states = v.states.clone();
    let mut name = format!("<{}~>", v.states[atom.state]);
    while states.contains(&name) {
        name.push('\'');
    }
    states.push(name);
    let mut transitions = v.transitions.clone();
    transitions.push(Transition { src: atom.state, label: Label::Eps, effect: vec![0; d], dst: fresh });
    let mut corner = vec![0u64; d];
    for (j, (lo, hi)) in atom.bounds(d).into_iter().enumerate() {
        let mut e = vec![0i64; d];
        match hi {
            OmegaNat::Omega => {
                corner[j] = lo;
                e[j] = -1;
            }
            OmegaNat::Fin(b) => {
                corner[j] = b;
                e[j] = 1;
            }
        }
        transitions.push(Transition { src: fresh, label: Label::Eps, effect: e, dst: fresh });
    }
    let n = states.len();
    let target = Config::new(fresh, corner);
    let g = Vass {
        name: format!("{}_gadget", v.name),
        alphabet: v.alphabet.clone(),
        dim: d,
        states,
        transitions,
        initial: v.initial.clone(),
        acceptance: Acceptance::Singleton(target.clone()),
        holes: DownSet::empty(d, n),
        eps_allowed: true,
    };
    g.validate()?;
    Ok((g, target))
}

fn coverability_verdict(v: &Vass, target: UpSet) -> Result<Verdict> {
    let pre = PreStar::compute(v, &target)?;
    Ok(match pre.witness(v, v.initial.state, &v.initial.counters) {
        Some(run) => Verdict::yes(v.run_word(&run), Some(run)),
        None => Verdict::no(Certificate::Coverability),
    })
}

/// Emptiness for any acceptance kind. Holes are compiled away first; each
/// acceptance atom is a separate query.
pub fn empty_updown(v: &Vass, budget: &SearchBudget) -> Result<Verdict> {
    budget.check()?;
    if v.has_holes() {
        let mut out = empty_updown(&hvass_to_epsvass(v)?, budget)?;
        out.run = None;
        return Ok(out);
    }
    let atoms = match &v.acceptance {
        Acceptance::Upward(u) => return coverability_verdict(v, u.clone()),
        Acceptance::Singleton(c) => return reach(v, c, budget),
        other => other.as_updown()?,
    };
    let mut report = BudgetReport::default();
    let mut certificates = Vec::new();
    let mut unknown = false;
    for atom in &atoms {
        let bounds = atom.bounds(v.dim);
        let (lo, hi): (Vec<u64>, Vec<OmegaNat>) = bounds.iter().copied().unzip();
        let verdict = if invariant::invariant_excludes(v, atom.state, &lo, &hi) {
            Verdict::no(Certificate::InvariantExcluded)
        } else if bounds.iter().all(|(_, hi)| hi.is_omega()) {
            let lo = bounds.iter().map(|(l, _)| *l).collect();
            coverability_verdict(v, UpSet::new(v.dim, v.num_states(), vec![UpAtom::new(atom.state, lo)])?)?
        } else {
            let (g, target) = updown_gadget(v, atom)?;
            let mut r = reach(&g, &target, budget)?;
            r.run = None;
            r
        };
        report.absorb(&verdict.report);
        match verdict.answer {
            Answer::Yes => return Ok(verdict.with_report(report)),
            Answer::No => certificates.extend(verdict.certificates),
            Answer::Unknown => unknown = true,
        }
    }
    if unknown {
        return Ok(Verdict::unknown(report));
    }
    let mut out = Verdict::no(Certificate::Coverability).with_report(report);
    out.certificates = certificates;
    Ok(out)
}

/// Convenience: emptiness as a boolean when the engine is conclusive.
pub fn is_empty(v: &Vass, budget: &SearchBudget) -> Result<Option<bool>> {
    Ok(match empty_updown(v, budget)?.answer {
        Answer::Yes => Some(false),
        Answer::No => Some(true),
        Answer::Unknown => None,
    })
}

impl From<Emptiness> for Verdict {
    fn from(e: Emptiness) -> Verdict {
        match e {
            Emptiness::Empty => Verdict::no(Certificate::Coverability),
            Emptiness::Nonempty { run, word } => Verdict::yes(word, Some(run)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::OmegaNat::Fin;

    fn loop1(e: i64) -> Vass {
        Vass::builder("l", 1).alphabet(&["a"]).init("q", &[0]).trans("q", "a", &[e], "q").accept_singleton("q", &[5]).build().unwrap()
    }

    #[test]
    fn reach_examples() {
        let b = SearchBudget::default();
        let yes = reach(&loop1(1), &Config::new(0, vec![5]), &b).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        assert_eq!(yes.witness, Some(vec![0; 5]));
        let no = reach(&loop1(2), &Config::new(0, vec![5]), &b).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.certificates, vec![Certificate::ExhaustedFiniteSpace]);
        // Needs the counter to climb to 40 before coming down.
        let g = Vass::builder("g", 2)
            .alphabet(&["a", "b", "c"])
            .init("p", &[0, 0])
            .trans("p", "a", &[1, 1], "p")
            .trans("p", "b", &[0, 0], "q")
            .trans("q", "c", &[-1, 0], "q")
            .accept_singleton("q", &[0, 40])
            .build()
            .unwrap();
        let tiny = SearchBudget { max_nodes: 10, max_counter_sum: 4 };
        assert_eq!(reach(&g, &Config::new(1, vec![0, 40]), &tiny).unwrap().answer, Answer::Unknown);
    }

    #[test]
    fn updown_examples() {
        let b = SearchBudget::default();
        let v = Vass::builder("d", 1)
            .alphabet(&["a", "b"])
            .init("p", &[0])
            .trans("p", "a", &[1], "p")
            .trans("p", "b", &[0], "f")
            .accept_down("f", &[Fin(0)])
            .build()
            .unwrap();
        let r = empty_updown(&v, &b).unwrap();
        assert_eq!(r.answer, Answer::Yes);
        assert_eq!(r.witness, Some(vec![1]));
        let u = Vass::builder("u", 1)
            .alphabet(&["a"])
            .init("p", &[0])
            .state("f")
            .trans("p", "a", &[1], "p")
            .accept_down("f", &[Fin(0)])
            .build()
            .unwrap();
        assert_eq!(empty_updown(&u, &b).unwrap().answer, Answer::No);
    }
}
