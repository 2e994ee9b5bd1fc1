//! Decision procedures for emptiness, inclusion and equivalence of vector
//! addition systems with states (VASSes) in the deterministic,
//! k-deterministic and k-ambiguous classes, the constructions behind them,
//! and brute-force oracles to check them against.

pub mod cli;
pub mod constructions;
pub mod coverability;
pub mod decide;
pub mod error;
pub mod exec;
pub mod ideals;
pub mod model;
pub mod monoid;
pub mod oracle;
pub mod reachability;

pub use error::{Error, Result, StepError};
pub use exec::Exec;
pub use model::{Acceptance, Config, Label, Transition, UpDownAtom, Vass, Word};
pub use reachability::{Answer, Certificate, SearchBudget, Verdict};
