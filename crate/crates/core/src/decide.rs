//! Inclusion, equivalence and ambiguity deciders. Inclusion `L1 ⊆ L2` is
//! emptiness of `V1 × complement(V2)`; a nonempty product yields the
//! counterexample word.

use std::fmt;
use std::str::FromStr;

use crate::constructions::{
    complement_det, complement_det_hvass, complement_kambiguous, complement_kdet_with, Outcome, PipelineBudget,
};
use crate::coverability::{empty_upward, Emptiness};
use crate::error::{Error, Result};
use crate::model::{align_alphabets, ambiguity_witness, product, Vass, Word};
use crate::reachability::{empty_updown, Answer, BudgetReport, SearchBudget, Verdict};

/// Which complement construction to use for the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Det,
    DetHvass,
    KDet(usize),
    KAmbiguous(usize),
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Class> {
        let bad = || Error::InvalidArgument(format!("unknown class {s:?}; expected det, hvass, kdet:K or kamb:K"));
        let k = |r: &str| r.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(bad);
        match s {
            "det" => Ok(Class::Det),
            "hvass" => Ok(Class::DetHvass),
            _ => match s.split_once(':') {
                Some(("kdet", r)) => Ok(Class::KDet(k(r)?)),
                Some(("kamb", r)) => Ok(Class::KAmbiguous(k(r)?)),
                _ => Err(bad()),
            },
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Det => f.write_str("det"),
            Class::DetHvass => f.write_str("hvass"),
            Class::KDet(k) => write!(f, "kdet:{k}"),
            Class::KAmbiguous(k) => write!(f, "kamb:{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecideBudget {
    pub search: SearchBudget,
    pub pipeline: PipelineBudget,
}

fn unknown(why: String) -> Verdict {
    Verdict::unknown(BudgetReport { cutoff: Some(why), ..BudgetReport::default() })
}

/// Builds the complement of `v` for `class`, or the reason it gave up.
pub fn complement(v: &Vass, class: Class, budget: &DecideBudget) -> Result<Outcome<Vass>> {
    Ok(match class {
        Class::Det => Outcome::Done(complement_det(v)?),
        Class::DetHvass => Outcome::Done(complement_det_hvass(v)?),
        Class::KDet(k) => match complement_kdet_with(v, k, budget.pipeline.max_states) {
            Ok(c) => Outcome::Done(c),
            Err(Error::BudgetExhausted { what, spent }) => Outcome::Unknown(format!("{what} budget exhausted after {spent}")),
            Err(e) => return Err(e),
        },
        Class::KAmbiguous(k) => complement_kambiguous(v, k, &budget.pipeline)?,
    })
}

/// `Yes` iff `L(v1) ⊆ L(v2)`; `No` carries a word of `L(v1) \ L(v2)`.
pub fn include(v1: &Vass, v2: &Vass, class: Class, budget: &DecideBudget) -> Result<Verdict> {
    let (a1, a2) = align_alphabets(v1, v2)?;
    let co = match complement(&a2, class, budget)? {
        Outcome::Done(c) => c,
        Outcome::Unknown(why) => return Ok(unknown(why)),
    };
    let p = product(&a1, &co)?;
    Ok(flip(empty_updown(&p, &budget.search)?))
}

fn flip(e: Verdict) -> Verdict {
    match e.answer {
        Answer::Yes => match e.witness {
            Some(w) => Verdict { answer: Answer::No, witness: Some(w), run: None, certificates: vec![], report: e.report },
            None => unknown("nonempty difference without a witness".into()),
        },
        Answer::No => Verdict { answer: Answer::Yes, witness: None, run: None, ..e },
        Answer::Unknown => e,
    }
}

pub fn include_in_det(v1: &Vass, v2: &Vass, budget: &SearchBudget) -> Result<Verdict> {
    include(v1, v2, Class::Det, &DecideBudget { search: *budget, ..Default::default() })
}

pub fn include_in_det_hvass(v1: &Vass, v2: &Vass, budget: &SearchBudget) -> Result<Verdict> {
    include(v1, v2, Class::DetHvass, &DecideBudget { search: *budget, ..Default::default() })
}

pub fn include_in_kdet(v1: &Vass, v2: &Vass, k: usize, budget: &DecideBudget) -> Result<Verdict> {
    include(v1, v2, Class::KDet(k), budget)
}

pub fn include_in_kambiguous(v1: &Vass, v2: &Vass, k: usize, budget: &DecideBudget) -> Result<Verdict> {
    include(v1, v2, Class::KAmbiguous(k), budget)
}

/// Both inclusions, each direction with its right-hand side in `class`.
/// A `No` in either direction wins; otherwise any `Unknown` does.
pub fn equivalent(v1: &Vass, v2: &Vass, class: Class, budget: &DecideBudget) -> Result<Verdict> {
    let forward = include(v1, v2, class, budget)?;
    if forward.answer == Answer::No {
        return Ok(forward);
    }
    let backward = include(v2, v1, class, budget)?;
    if backward.answer == Answer::No || forward.answer == Answer::Unknown {
        return Ok(if backward.answer == Answer::No { backward } else { forward });
    }
    Ok(backward)
}

/// A word with more than `k` accepting runs, if there is one.
pub fn ambiguity_counterexample(v: &Vass, k: usize) -> Result<Option<Word>> {
    Ok(match empty_upward(&ambiguity_witness(v, k)?)? {
        Emptiness::Empty => None,
        Emptiness::Nonempty { word, .. } => Some(word),
    })
}

/// At most `k` accepting runs over every word. Exact.
pub fn check_k_ambiguous(v: &Vass, k: usize) -> Result<bool> {
    Ok(ambiguity_counterexample(v, k)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::hardness_pair;
    use crate::oracle::{accepts, count_accepting_runs};

    fn countdown() -> Vass {
        Vass::builder("cd", 1)
            .alphabet(&["a", "b"])
            .init("q", &[2])
            .trans("q", "a", &[-1], "q")
            .trans("q", "b", &[0], "q")
            .accept_up("q", &[0])
            .build()
            .unwrap()
    }

    #[test]
    fn reflexive() {
        let v = countdown();
        let b = DecideBudget::default();
        for class in [Class::Det, Class::DetHvass, Class::KDet(1), Class::KDet(2), Class::KAmbiguous(1)] {
            assert_eq!(include(&v, &v, class, &b).unwrap().answer, Answer::Yes, "{class}");
        }
    }

    #[test]
    fn strict_inclusion_has_counterexample() {
        let small = countdown();
        let mut big = countdown();
        big.initial.counters = vec![3];
        let b = DecideBudget::default();
        assert_eq!(include(&small, &big, Class::Det, &b).unwrap().answer, Answer::Yes);
        let r = include(&big, &small, Class::Det, &b).unwrap();
        assert_eq!(r.answer, Answer::No);
        let w = r.witness.unwrap();
        assert!(accepts(&big, &w).unwrap());
        assert_eq!(count_accepting_runs(&small, &w).unwrap(), 0);
        assert_eq!(equivalent(&small, &big, Class::Det, &b).unwrap().answer, Answer::No);
    }

    #[test]
    fn empty_is_included() {
        let e = Vass::builder("e", 0).alphabet(&["a"]).init("q", &[]).accept_up("q", &[]).build().unwrap();
        let mut none = e.clone();
        none.acceptance = crate::model::Acceptance::Upward(crate::ideals::UpSet::empty(0, 1));
        assert_eq!(include_in_det(&none, &e, &SearchBudget::default()).unwrap().answer, Answer::Yes);
        assert_eq!(include_in_det(&e, &none, &SearchBudget::default()).unwrap().answer, Answer::No);
    }

    #[test]
    fn hardness_pair_matches_seed() {
        let seed = Vass::builder("s", 1)
            .init("q0", &[1])
            .trans("q0", "eps", &[-1], "qF")
            .accept_singleton("qF", &[0])
            .eps(true)
            .build()
            .unwrap();
        let (v1, v2) = hardness_pair(&seed).unwrap();
        let r = equivalent(&v1, &v2, Class::Det, &DecideBudget::default()).unwrap();
        assert_eq!(r.answer, Answer::No);
        assert_eq!(v1.word_names(&r.witness.unwrap()), vec!["t0", "a"]);
    }

    #[test]
    fn ambiguity() {
        let pq = Vass::builder("pq", 0)
            .alphabet(&["a", "b"])
            .init("p", &[])
            .trans("p", "a", &[], "p")
            .trans("p", "a", &[], "q")
            .trans("q", "b", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        assert!(check_k_ambiguous(&pq, 1).unwrap());
        let dbl = Vass::builder("d", 0)
            .alphabet(&["a"])
            .init("p", &[])
            .trans("p", "a", &[], "q")
            .trans("p", "a", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        assert!(!check_k_ambiguous(&dbl, 1).unwrap());
        assert_eq!(ambiguity_counterexample(&dbl, 1).unwrap(), Some(vec![0]));
        assert!(check_k_ambiguous(&dbl, 2).unwrap());
    }

    #[test]
    fn class_syntax() {
        assert_eq!("kdet:2".parse::<Class>().unwrap(), Class::KDet(2));
        assert_eq!("kamb:1".parse::<Class>().unwrap(), Class::KAmbiguous(1));
        assert!("kdet:0".parse::<Class>().is_err());
        assert!("nfa".parse::<Class>().is_err());
        assert_eq!(Class::DetHvass.to_string(), "hvass");
    }
}
