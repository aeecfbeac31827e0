//! Bounded decision procedures for minimal model structures generated by a set `I`.

mod axioms;
mod checks;
mod classify;
mod engine;
mod report;
mod universe;

pub use axioms::{WeClass, WeRule};
pub use checks::Checker;
pub use classify::{Classification, MapEntry, WeListing};
pub use engine::{build_jset, Analyzer};
pub use report::{aggregate, undecided, Counterexample, MapRecord, Probe, Verdict, VerdictReport};
pub use universe::{enumerate_presheaves, Bound, BoundedUniverse, UniverseMap};
