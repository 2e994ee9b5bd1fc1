//! Brute-force ground truth over bounded words: run counting, bounded
//! languages, inclusion and equivalence, maximal runs and ambiguity.
//!
//! Words are enumerated in length-lexicographic order (by letter index) as
//! a prefix tree; prefixes with no live configuration are pruned.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{align_alphabets, Config, Label, Sym, Vass, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_word_len: usize,
    pub max_runs_per_word: u64,
    /// Cap on configurations visited in one ε-closure.
    pub max_configs: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_word_len: 8, max_runs_per_word: u64::MAX, max_configs: 100_000 }
    }
}

type Counts = HashMap<Config, u64>;
type Configs = HashSet<Config>;

fn eps_successors<'a>(v: &'a Vass, c: &'a Config) -> impl Iterator<Item = Config> + 'a {
    v.successors(c).filter(|(t, _)| v.transitions[*t].label == Label::Eps).map(|(_, n)| n)
}

fn closure_set(v: &Vass, set: Configs, budget: &OracleBudget) -> Result<Configs> {
    if !v.has_eps() {
        return Ok(set);
    }
    let mut seen = set;
    let mut queue: VecDeque<Config> = seen.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        for n in eps_successors(v, &c) {
            if seen.insert(n.clone()) {
                if seen.len() > budget.max_configs {
                    return Err(Error::BudgetExhausted { what: "epsilon closure", spent: seen.len() });
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// Path-counting ε-closure; fails on an ε-cycle since the run set would be
/// infinite.
fn closure_counts(v: &Vass, counts: Counts, budget: &OracleBudget) -> Result<Counts> {
    if !v.has_eps() || counts.is_empty() {
        return Ok(counts);
    }
    let mut nodes: Vec<Config> = counts.keys().cloned().collect();
    let mut index: HashMap<Config, usize> = nodes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let c = nodes[i].clone();
        let mut out = Vec::new();
        for n in eps_successors(v, &c) {
            let j = match index.get(&n) {
                Some(&j) => j,
                None => {
                    let j = nodes.len();
                    if j >= budget.max_configs {
                        return Err(Error::BudgetExhausted { what: "epsilon closure", spent: j });
                    }
                    index.insert(n.clone(), j);
                    nodes.push(n);
                    j
                }
            };
            out.push(j);
        }
        edges.push(out);
        i += 1;
    }
    let mut indeg = vec![0usize; nodes.len()];
    for out in &edges {
        for &j in out {
            indeg[j] += 1;
        }
    }
    let mut value: Vec<u64> = nodes.iter().map(|c| counts.get(c).copied().unwrap_or(0)).collect();
    let mut queue: VecDeque<usize> = (0..nodes.len()).filter(|&i| indeg[i] == 0).collect();
    let mut done = 0;
    while let Some(i) = queue.pop_front() {
        done += 1;
        for &j in &edges[i] {
            value[j] = value[j].saturating_add(value[i]);
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    if done < nodes.len() {
        return Err(Error::EpsilonCycle);
    }
    Ok(nodes.into_iter().zip(value).filter(|(_, n)| *n > 0).collect())
}

fn post_set(v: &Vass, set: &Configs, a: Sym, budget: &OracleBudget) -> Result<Configs> {
    let mut out = Configs::new();
    for c in set {
        for (t, n) in v.successors(c) {
            if v.transitions[t].label == Label::Sym(a) {
                out.insert(n);
            }
        }
    }
    closure_set(v, out, budget)
}

fn post_counts(v: &Vass, counts: &Counts, a: Sym, budget: &OracleBudget) -> Result<Counts> {
    let mut out = Counts::new();
    for (c, &k) in counts {
        for (t, n) in v.successors(c) {
            if v.transitions[t].label == Label::Sym(a) {
                let e = out.entry(n).or_insert(0);
                *e = e.saturating_add(k);
            }
        }
    }
    closure_counts(v, out, budget)
}

fn initial_set(v: &Vass, budget: &OracleBudget) -> Result<Configs> {
    closure_set(v, Configs::from([v.initial.clone()]), budget)
}

fn initial_counts(v: &Vass, budget: &OracleBudget) -> Result<Counts> {
    closure_counts(v, Counts::from([(v.initial.clone(), 1)]), budget)
}

fn accepting_count(v: &Vass, counts: &Counts) -> u64 {
    counts.iter().filter(|(c, _)| v.is_accepting(c)).fold(0u64, |s, (_, &k)| s.saturating_add(k))
}

fn check_runs(k: u64, budget: &OracleBudget) -> Result<u64> {
    if k > budget.max_runs_per_word {
        return Err(Error::BudgetExhausted { what: "run count", spent: k.min(usize::MAX as u64) as usize });
    }
    Ok(k)
}

/// Number of distinct accepting runs over `w`.
pub fn count_accepting_runs(v: &Vass, w: &[Sym]) -> Result<u64> {
    count_accepting_runs_with(v, w, &OracleBudget::default())
}

pub fn count_accepting_runs_with(v: &Vass, w: &[Sym], budget: &OracleBudget) -> Result<u64> {
    let mut counts = initial_counts(v, budget)?;
    for &a in w {
        counts = post_counts(v, &counts, a, budget)?;
    }
    check_runs(accepting_count(v, &counts), budget)
}

pub fn accepts(v: &Vass, w: &[Sym]) -> Result<bool> {
    let budget = OracleBudget::default();
    let mut set = initial_set(v, &budget)?;
    for &a in w {
        set = post_set(v, &set, a, &budget)?;
    }
    Ok(set.iter().any(|c| v.is_accepting(c)))
}

/// All words over `letters` symbols of length at most `maxlen`, length-lex.
pub fn all_words(letters: usize, maxlen: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(level.len() * letters);
        for w in &level {
            for a in 0..letters {
                let mut x: Word = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Level-wise prefix-tree walk. `expand` maps a node to its child for one
/// letter (`None` prunes), `visit` inspects every node in length-lex order
/// and may stop the walk by returning `Some`.
fn walk<N, R>(
    exec: Exec,
    letters: usize,
    maxlen: usize,
    root: N,
    expand: impl Fn(&N, Sym) -> Result<Option<N>> + Sync + Send,
    mut visit: impl FnMut(&Word, &N) -> Option<R>,
) -> Result<Option<R>>
where
    N: Send + Sync,
{
    let mut level: Vec<(Word, N)> = vec![(Vec::new(), root)];
    for depth in 0..=maxlen {
        for (w, n) in &level {
            if let Some(r) = visit(w, n) {
                return Ok(Some(r));
            }
        }
        if depth == maxlen {
            break;
        }
        let children: Vec<Result<Vec<(Word, N)>>> = exec.map(level, |(w, n)| {
            let mut out = Vec::new();
            for a in 0..letters {
                if let Some(c) = expand(&n, a)? {
                    let mut x = w.clone();
                    x.push(a);
                    out.push((x, c));
                }
            }
            Ok(out)
        });
        level = Vec::new();
        for c in children {
            level.extend(c?);
        }
        if level.is_empty() {
            break;
        }
    }
    Ok(None)
}

pub fn bounded_language(v: &Vass, maxlen: usize) -> Result<Vec<Word>> {
    bounded_language_with(v, maxlen, &OracleBudget::default(), Exec::default())
}

pub fn bounded_language_with(v: &Vass, maxlen: usize, budget: &OracleBudget, exec: Exec) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    walk::<Configs, ()>(
        exec,
        v.alphabet.len(),
        maxlen,
        initial_set(v, budget)?,
        |set, a| {
            let next = post_set(v, set, a, budget)?;
            Ok((!next.is_empty()).then_some(next))
        },
        |w, set| {
            if set.iter().any(|c| v.is_accepting(c)) {
                out.push(w.clone());
            }
            None
        },
    )?;
    Ok(out)
}

fn aligned(v1: &Vass, v2: &Vass) -> Result<(Vass, Vass)> {
    if v1.alphabet == v2.alphabet {
        Ok((v1.clone(), v2.clone()))
    } else {
        align_alphabets(v1, v2)
    }
}

/// Length-lex least word of length ≤ `maxlen` in `L(v1) \ L(v2)`. Words are
/// over the union alphabet with `v1`'s letters first.
pub fn bounded_inclusion(v1: &Vass, v2: &Vass, maxlen: usize) -> Result<Option<Word>> {
    bounded_inclusion_with(v1, v2, maxlen, &OracleBudget::default(), Exec::default())
}

pub fn bounded_inclusion_with(
    v1: &Vass,
    v2: &Vass,
    maxlen: usize,
    budget: &OracleBudget,
    exec: Exec,
) -> Result<Option<Word>> {
    let (a, b) = aligned(v1, v2)?;
    walk(
        exec,
        a.alphabet.len(),
        maxlen,
        (initial_set(&a, budget)?, initial_set(&b, budget)?),
        |(s1, s2), x| {
            let n1 = post_set(&a, s1, x, budget)?;
            if n1.is_empty() {
                return Ok(None);
            }
            Ok(Some((n1, post_set(&b, s2, x, budget)?)))
        },
        |w, (s1, s2)| {
            let in1 = s1.iter().any(|c| a.is_accepting(c));
            let in2 = s2.iter().any(|c| b.is_accepting(c));
            (in1 && !in2).then(|| w.clone())
        },
    )
}

/// Length-lex least word of length ≤ `maxlen` in the symmetric difference.
pub fn bounded_equivalence(v1: &Vass, v2: &Vass, maxlen: usize) -> Result<Option<Word>> {
    let budget = OracleBudget::default();
    let (a, b) = aligned(v1, v2)?;
    walk(
        Exec::default(),
        a.alphabet.len(),
        maxlen,
        (initial_set(&a, &budget)?, initial_set(&b, &budget)?),
        |(s1, s2), x| {
            let n1 = post_set(&a, s1, x, &budget)?;
            let n2 = post_set(&b, s2, x, &budget)?;
            Ok((!n1.is_empty() || !n2.is_empty()).then_some((n1, n2)))
        },
        |w, (s1, s2)| {
            let in1 = s1.iter().any(|c| a.is_accepting(c));
            let in2 = s2.iter().any(|c| b.is_accepting(c));
            (in1 != in2).then(|| w.clone())
        },
    )
}

/// Maximum over words of length ≤ `maxlen` of the number of maximal runs of
/// a finite automaton: runs over the whole word plus runs over a prefix
/// that cannot read the next letter.
pub fn max_maximal_runs(a: &Vass, maxlen: usize) -> Result<u64> {
    if a.dim != 0 {
        return Err(Error::DimensionMismatch { expected: 0, found: a.dim });
    }
    if a.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    let n = a.num_states();
    let mut by_letter = vec![vec![Vec::new(); a.alphabet.len()]; n];
    for t in &a.transitions {
        if let Label::Sym(x) = t.label {
            by_letter[t.src][x].push(t.dst);
        }
    }
    let mut root = vec![0u64; n];
    root[a.initial.state] = 1;
    let mut best = 0u64;
    walk::<(Vec<u64>, u64), ()>(
        Exec::default(),
        a.alphabet.len(),
        maxlen,
        (root, 0),
        |(live, dead), x| {
            if live.iter().all(|&k| k == 0) {
                return Ok(None);
            }
            let mut next = vec![0u64; n];
            let mut dead = *dead;
            for q in 0..n {
                if live[q] == 0 {
                    continue;
                }
                if by_letter[q][x].is_empty() {
                    dead = dead.saturating_add(live[q]);
                }
                for &r in &by_letter[q][x] {
                    next[r] = next[r].saturating_add(live[q]);
                }
            }
            Ok(Some((next, dead)))
        },
        |_, (live, dead)| {
            best = best.max(live.iter().fold(*dead, |s, &k| s.saturating_add(k)));
            None
        },
    )?;
    Ok(best)
}

/// Maximum number of accepting runs over words of length ≤ `maxlen`.
pub fn bounded_ambiguity(v: &Vass, maxlen: usize) -> Result<u64> {
    let budget = OracleBudget::default();
    let mut best = 0u64;
    walk::<Counts, ()>(
        Exec::default(),
        v.alphabet.len(),
        maxlen,
        initial_counts(v, &budget)?,
        |counts, a| {
            let next = post_counts(v, counts, a, &budget)?;
            Ok((!next.is_empty()).then_some(next))
        },
        |_, counts| {
            best = best.max(accepting_count(v, counts));
            None
        },
    )?;
    Ok(best)
}

/// Configurations reachable from `from` by at most `steps` transitions of
/// any label.
pub fn reachable_configs(v: &Vass, from: &Config, steps: usize, cap: usize) -> Result<HashSet<Config>> {
    let mut seen = HashSet::from([from.clone()]);
    let mut frontier = vec![from.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for c in &frontier {
            for (_, n) in v.successors(c) {
                if seen.insert(n.clone()) {
                    if seen.len() > cap {
                        return Err(Error::BudgetExhausted { what: "configuration", spent: seen.len() });
                    }
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
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
    fn run_counts() {
        let v = pq();
        assert_eq!(count_accepting_runs(&v, &[0, 0, 1]).unwrap(), 1);
        assert_eq!(count_accepting_runs(&v, &[0, 0]).unwrap(), 1);
        let e = Vass::builder("e", 0).alphabet(&["a"]).init("p", &[]).accept_up("p", &[]).build().unwrap();
        assert_eq!(count_accepting_runs(&e, &[]).unwrap(), 1);
    }

    #[test]
    fn maximal_runs_grow_linearly() {
        let v = pq();
        for n in 0..=5 {
            assert_eq!(max_maximal_runs(&v, n).unwrap(), n as u64 + 1);
        }
        let dfa = Vass::builder("d", 0).alphabet(&["a"]).init("p", &[]).trans("p", "a", &[], "p").accept_up("p", &[]).build().unwrap();
        assert_eq!(max_maximal_runs(&dfa, 5).unwrap(), 1);
        assert_eq!(max_maximal_runs(&v, 0).unwrap(), 1);
    }

    #[test]
    fn ambiguity_examples() {
        assert_eq!(bounded_ambiguity(&pq(), 6).unwrap(), 1);
        let doubled = Vass::builder("dd", 0)
            .alphabet(&["a"])
            .init("q", &[])
            .trans("q", "a", &[], "f")
            .trans("q", "a", &[], "f")
            .accept_up("f", &[])
            .build()
            .unwrap();
        assert_eq!(bounded_ambiguity(&doubled, 3).unwrap(), 2);
        let empty = Vass::builder("z", 0).alphabet(&["a"]).init("q", &[]).build().unwrap();
        assert_eq!(bounded_ambiguity(&empty, 3).unwrap(), 0);
    }

    #[test]
    fn epsilon_counting_and_cycles() {
        let v = Vass::builder("e", 1)
            .alphabet(&["a"])
            .eps(true)
            .init("p", &[0])
            .trans("p", "eps", &[0], "q")
            .trans("p", "eps", &[0], "q")
            .trans("q", "a", &[0], "q")
            .accept_up("q", &[0])
            .build()
            .unwrap();
        assert_eq!(count_accepting_runs(&v, &[0]).unwrap(), 2);
        let c = Vass::builder("c", 1)
            .alphabet(&["a"])
            .eps(true)
            .init("p", &[0])
            .trans("p", "eps", &[0], "p")
            .accept_up("p", &[0])
            .build()
            .unwrap();
        assert_eq!(count_accepting_runs(&c, &[]), Err(Error::EpsilonCycle));
        assert!(accepts(&c, &[]).unwrap());
    }

    #[test]
    fn language_is_length_lex_and_modes_agree() {
        let v = pq();
        let l = bounded_language(&v, 3).unwrap();
        let names: Vec<String> = l.iter().map(|w| v.word_names(w).concat()).collect();
        assert_eq!(names, vec!["a", "aa", "ab", "aaa", "aab", "abb"]);
        let s = bounded_language_with(&v, 4, &OracleBudget::default(), Exec::Sequential).unwrap();
        let p = bounded_language_with(&v, 4, &OracleBudget::default(), Exec::Parallel).unwrap();
        assert_eq!(s, p);
        assert_eq!(all_words(2, 2).len(), 7);
    }

    #[test]
    fn inclusion_examples() {
        let v = pq();
        assert_eq!(bounded_inclusion(&v, &v, 5).unwrap(), None);
        let empty = Vass::builder("z", 0).alphabet(&["a", "b"]).init("q", &[]).build().unwrap();
        assert_eq!(bounded_inclusion(&empty, &v, 5).unwrap(), None);
        assert_eq!(bounded_inclusion(&v, &empty, 5).unwrap(), Some(vec![0]));
        assert_eq!(bounded_equivalence(&empty, &v, 5).unwrap(), Some(vec![0]));
    }
}
