//! Complement constructions for deterministic, k-deterministic and
//! k-ambiguous VASSes, and the threshold abstraction behind the last one.

mod abstraction;
mod complement;
mod kdet;
mod pipeline;

pub use abstraction::{
    ba_control, rackoff_thresholds, threshold_exceeds, Abstraction, AbstractionBudget, AbstractionState, BaControl,
    Thresholds,
};
pub use complement::{complement_det, complement_det_hvass};
pub use kdet::{complement_kdet, complement_kdet_with, kdet_violation, CopyMode};
pub use pipeline::{complement_kambiguous, PipelineBudget};

/// Result of a construction that may give up within its budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Done(T),
    Unknown(String),
}

impl<T> Outcome<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Outcome::Done(x) => Some(x),
            Outcome::Unknown(_) => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Outcome::Unknown(_))
    }
}

use crate::ideals::{omega_vec, DownAtom, OmegaNat, StateId};

/// Down-atoms of the vectors `w` with `w + e ∉ ℕ^d`, one per negative entry.
pub(crate) fn underflow_atoms(state: StateId, e: &[i64]) -> Vec<DownAtom> {
    e.iter()
        .enumerate()
        .filter(|(_, &z)| z < 0)
        .map(|(j, &z)| {
            let mut b = omega_vec(e.len());
            b[j] = OmegaNat::Fin(z.unsigned_abs() - 1);
            DownAtom::new(state, b)
        })
        .collect()
}
