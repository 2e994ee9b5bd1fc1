use crate::coverability::empty_upward;
use crate::error::{Error, Result};
use crate::model::{ambiguity_witness, product, Vass};
use crate::monoid::{decorate_unguarded, project_decorated, transition_monoid, well_formed_automaton};

use super::{ba_control, complement_kdet_with, AbstractionBudget, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineBudget {
    pub abstraction: AbstractionBudget,
    pub max_monoid: usize,
    /// Cap on states of the k-copy complement.
    pub max_states: usize,
}

impl Default for PipelineBudget {
    fn default() -> Self {
        PipelineBudget { abstraction: AbstractionBudget::default(), max_monoid: 4096, max_states: 200_000 }
    }
}

fn budgeted<T>(r: Result<T>) -> Result<Outcome<T>> {
    match r {
        Ok(x) => Ok(Outcome::Done(x)),
        Err(Error::BudgetExhausted { what, spent }) => Ok(Outcome::Unknown(format!("{what} budget exhausted after {spent}"))),
        Err(e) => Err(e),
    }
}

macro_rules! step {
    ($e:expr) => {
        match budgeted($e)? {
            Outcome::Done(x) => x,
            Outcome::Unknown(why) => return Ok(Outcome::Unknown(why)),
        }
    };
}

/// Complement of a k-ambiguous upward VASS as a downward VASS.
///
/// Makes the control k-ambiguous (skipped when it already is), decorates
/// with the transition monoid of the control, complements the resulting
/// k-deterministic VASS, keeps the well-formed words and projects the
/// decoration away.
pub fn complement_kambiguous(v: &Vass, k: usize, budget: &PipelineBudget) -> Result<Outcome<Vass>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    v.upward_set()?;
    let control_ok = empty_upward(&ambiguity_witness(&v.control_automaton(), k)?)?.is_empty();
    let v1 = if control_ok {
        v.trim()?
    } else {
        match ba_control(v, k, &budget.abstraction)? {
            Outcome::Done(b) => b.vass,
            Outcome::Unknown(why) => return Ok(Outcome::Unknown(why)),
        }
    };
    let a = v1.control_automaton();
    let tm = step!(transition_monoid(&a, budget.max_monoid));
    let v2 = decorate_unguarded(&v1, &tm.monoid, &tm.hom)?.trim()?;
    let v3 = step!(complement_kdet_with(&v2, k, budget.max_states));
    let b = well_formed_automaton(&v1.alphabet, &tm.monoid, &tm.hom)?;
    let v4 = product(&b, &v3)?.trim()?;
    let mut v6 = project_decorated(&v4, &v.alphabet)?;
    v6.name = format!("{}_co", v.name);
    Ok(Outcome::Done(v6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complement_det;
    use crate::model::Word;
    use crate::oracle::{all_words, bounded_language};

    fn complement_words(v: &Vass, len: usize) -> Vec<Word> {
        let lang = bounded_language(v, len).unwrap();
        all_words(v.alphabet.len(), len).into_iter().filter(|w| !lang.contains(w)).collect()
    }

    fn run(v: &Vass, k: usize) -> Vass {
        complement_kambiguous(v, k, &PipelineBudget::default()).unwrap().done().unwrap()
    }

    #[test]
    fn deterministic_agrees_with_det() {
        let v = Vass::builder("cd", 1)
            .alphabet(&["a", "b"])
            .init("q", &[1])
            .trans("q", "a", &[-1], "q")
            .trans("q", "b", &[1], "r")
            .accept_up("q", &[0])
            .accept_up("r", &[2])
            .build()
            .unwrap();
        let c = run(&v, 1);
        assert!(!c.has_eps());
        assert!(matches!(c.acceptance, crate::model::Acceptance::Downward(_)));
        assert_eq!(bounded_language(&c, 4).unwrap(), bounded_language(&complement_det(&v).unwrap(), 4).unwrap());
    }

    #[test]
    fn empty_language_gives_everything() {
        let v = Vass::builder("e", 1).alphabet(&["a", "b"]).init("q", &[0]).trans("q", "a", &[-1], "q").accept_up("q", &[1]).build().unwrap();
        assert_eq!(bounded_language(&run(&v, 1), 4).unwrap(), all_words(2, 4));
    }

    #[test]
    fn forked_two_ambiguous() {
        let v = Vass::builder("fork", 1)
            .alphabet(&["a", "b"])
            .init("s", &[0])
            .trans("s", "a", &[1], "l")
            .trans("s", "a", &[0], "r")
            .trans("l", "a", &[-1], "l")
            .trans("l", "b", &[1], "l")
            .trans("r", "b", &[0], "r")
            .trans("r", "a", &[0], "r")
            .accept_up("l", &[1])
            .accept_up("r", &[0])
            .build()
            .unwrap();
        let c = run(&v, 2);
        assert_eq!(bounded_language(&c, 4).unwrap(), complement_words(&v, 4));
    }

    #[test]
    fn counter_resolved_ambiguity() {
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
        let c = run(&v, 1);
        assert_eq!(bounded_language(&c, 4).unwrap(), complement_words(&v, 4));
    }
}
