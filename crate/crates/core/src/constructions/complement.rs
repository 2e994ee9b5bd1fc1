use crate::error::{Error, Result};
use crate::ideals::{DownAtom, DownSet, OmegaNat, UpSet};
use crate::model::{hvass_to_epsvass, nondeterminism, Acceptance, Config, Label, Transition, Vass};

use super::underflow_atoms;

fn deterministic_upward(v: &Vass) -> Result<&UpSet> {
    if v.has_eps() {
        return Err(Error::EpsilonNotSupported);
    }
    if let Some(why) = nondeterminism(v) {
        return Err(Error::NotDeterministic(why));
    }
    v.upward_set()
}

/// Complement of a deterministic upward VASS as a downward VASS.
///
/// States are `(q,−)` (simulation), `(q,t)` (frozen before firing `t`) and
/// `(p,a)` (no `a`-transition at `p`); the last two loop on every letter.
pub fn complement_det(v: &Vass) -> Result<Vass> {
    if v.has_holes() {
        return Err(Error::HolesNotSupported);
    }
    complement_core(v, false)
}

/// Complement of a deterministic HVASS as a downward ε-VASS. A run is also
/// rejected when it would enter a hole; the holes of the simulation copy are
/// then replaced by ε-tests.
pub fn complement_det_hvass(v: &Vass) -> Result<Vass> {
    let core = complement_core(v, true)?;
    if core.has_holes() {
        hvass_to_epsvass(&core)
    } else {
        Ok(core)
    }
}

/// Down-atoms of the `w` with `w + e` inside a hole atom `b`: `w ≤ b − e`.
fn shifted_hole(state: usize, b: &[OmegaNat], e: &[i64]) -> Option<DownAtom> {
    let mut bound = Vec::with_capacity(b.len());
    for (x, &z) in b.iter().zip(e) {
        bound.push(match x {
            OmegaNat::Omega => OmegaNat::Omega,
            OmegaNat::Fin(n) => OmegaNat::Fin(u64::try_from(*n as i128 - z as i128).ok()?),
        });
    }
    Some(DownAtom::new(state, bound))
}

fn complement_core(v: &Vass, holes: bool) -> Result<Vass> {
    let acc = deterministic_upward(v)?;
    let n = v.num_states();
    let d = v.dim;
    let sigma = v.alphabet.len();
    let mut states: Vec<String> = v.states.iter().map(|q| format!("<{q}~->")).collect();
    let mut transitions = Vec::new();
    let mut atoms: Vec<DownAtom> = acc.complement().atoms().to_vec();
    let loops = |q: usize, transitions: &mut Vec<Transition>| {
        for a in 0..sigma {
            transitions.push(Transition { src: q, label: Label::Sym(a), effect: vec![0; d], dst: q });
        }
    };
    let mut has = vec![vec![false; sigma]; n];
    for (i, t) in v.transitions.iter().enumerate() {
        let a = t.label.sym().expect("no ε");
        has[t.src][a] = true;
        transitions.push(t.clone());
        let mut frozen = underflow_atoms(0, &t.effect);
        if holes {
            frozen.extend(v.holes.atoms_at(t.dst).filter_map(|h| shifted_hole(0, &h.bound, &t.effect)));
        }
        if frozen.is_empty() {
            continue;
        }
        let f = states.len();
        states.push(format!("<{}~!{i}>", v.states[t.dst]));
        transitions.push(Transition { src: t.src, label: t.label, effect: vec![0; d], dst: f });
        loops(f, &mut transitions);
        atoms.extend(frozen.into_iter().map(|a| DownAtom::new(f, a.bound)));
    }
    for p in 0..n {
        for a in 0..sigma {
            if has[p][a] {
                continue;
            }
            let s = states.len();
            states.push(format!("<{}~?{}>", v.states[p], v.alphabet[a]));
            transitions.push(Transition { src: p, label: Label::Sym(a), effect: vec![0; d], dst: s });
            loops(s, &mut transitions);
            atoms.push(DownAtom::full(s, d));
        }
    }
    let m = states.len();
    let hole_atoms = if holes { v.holes.atoms().to_vec() } else { Vec::new() };
    let out = Vass {
        name: format!("{}_co", v.name),
        alphabet: v.alphabet.clone(),
        dim: d,
        states,
        transitions,
        initial: Config::new(v.initial.state, v.initial.counters.clone()),
        acceptance: Acceptance::Downward(DownSet::new(d, m, atoms)?.minimize()),
        holes: DownSet::new(d, m, hole_atoms)?,
        eps_allowed: false,
    };
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::OmegaNat::{Fin, Omega};
    use crate::oracle::{all_words, bounded_language};

    fn countdown() -> Vass {
        Vass::builder("cd", 1)
            .alphabet(&["a"])
            .init("q", &[1])
            .trans("q", "a", &[-1], "q")
            .accept_up("q", &[0])
            .build()
            .unwrap()
    }

    fn complement_words(v: &Vass, len: usize) -> Vec<Vec<usize>> {
        let lang = bounded_language(v, len).unwrap();
        all_words(v.alphabet.len(), len).into_iter().filter(|w| !lang.contains(w)).collect()
    }

    #[test]
    fn countdown_complement() {
        let c = complement_det(&countdown()).unwrap();
        assert_eq!(bounded_language(&c, 4).unwrap(), vec![vec![0, 0], vec![0, 0, 0], vec![0, 0, 0, 0]]);
    }

    #[test]
    fn universal_has_empty_complement() {
        let v = Vass::builder("all", 0)
            .alphabet(&["a", "b"])
            .init("q", &[])
            .trans("q", "a", &[], "q")
            .trans("q", "b", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        assert!(bounded_language(&complement_det(&v).unwrap(), 4).unwrap().is_empty());
    }

    #[test]
    fn missing_letter() {
        let v = Vass::builder("m", 1)
            .alphabet(&["a", "b"])
            .init("p", &[0])
            .trans("p", "a", &[1], "q")
            .trans("q", "a", &[-1], "p")
            .trans("p", "b", &[0], "p")
            .accept_up("p", &[0])
            .build()
            .unwrap();
        let c = complement_det(&v).unwrap();
        assert_eq!(bounded_language(&c, 4).unwrap(), complement_words(&v, 4));
        assert!(crate::oracle::accepts(&c, &[0, 1, 0, 0]).unwrap());
    }

    #[test]
    fn rejects_nondeterminism() {
        let v = Vass::builder("n", 0)
            .alphabet(&["a"])
            .init("p", &[])
            .trans("p", "a", &[], "p")
            .trans("p", "a", &[], "q")
            .accept_up("q", &[])
            .build()
            .unwrap();
        assert!(matches!(complement_det(&v), Err(Error::NotDeterministic(_))));
    }

    #[test]
    fn hole_truncates_language() {
        let base = Vass::builder("h", 1)
            .alphabet(&["a", "b"])
            .init("q", &[0])
            .trans("q", "a", &[1], "q")
            .trans("q", "b", &[-1], "q")
            .accept_up("q", &[0]);
        let plain = base.build().unwrap();
        let holed = Vass::builder("h", 1)
            .alphabet(&["a", "b"])
            .init("q", &[0])
            .trans("q", "a", &[1], "r")
            .trans("r", "a", &[1], "r")
            .trans("r", "b", &[-1], "r")
            .accept_up("r", &[0])
            .hole("r", &[Fin(1)])
            .build()
            .unwrap();
        for v in [&plain, &holed] {
            let c = complement_det_hvass(v).unwrap();
            assert_eq!(bounded_language(&c, 4).unwrap(), complement_words(v, 4));
        }
        assert_eq!(
            bounded_language(&complement_det_hvass(&plain).unwrap(), 4).unwrap(),
            bounded_language(&complement_det(&plain).unwrap(), 4).unwrap()
        );
    }

    #[test]
    fn covering_hole() {
        let v = Vass::builder("c", 1)
            .alphabet(&["a"])
            .init("p", &[0])
            .trans("p", "a", &[1], "q")
            .trans("q", "a", &[0], "q")
            .accept_up("q", &[0])
            .accept_up("p", &[0])
            .hole("q", &[Omega])
            .build()
            .unwrap();
        let c = complement_det_hvass(&v).unwrap();
        assert_eq!(bounded_language(&c, 3).unwrap(), vec![vec![0], vec![0, 0], vec![0, 0, 0]]);
    }
}
