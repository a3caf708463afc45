//! Execution semantics of measure-many one-way automata.
//!
//! A run reads `¢ w $` one symbol at a time. After each symbol the weight
//! vector is observed: mass on accepting states is added to the cumulative
//! acceptance probability, mass on rejecting states to the rejection
//! probability, and the unnormalized projection onto non-halting states is
//! carried forward. For quantum machines mass is `|amplitude|^2`; for
//! probabilistic machines it is the weight itself.

mod dump;
mod run;
mod spec;
mod symbol;
mod wellformed;

pub use dump::{AnyAutomaton, ColumnsDump, EntryDump, SpecDump};
pub use run::{
    frame, pfa_step, qfa_step, run_pfa, run_qfa, trace_run, Configuration, RunResult,
};
pub use spec::{
    Automaton, AutomatonBuilder, Column, PfaSpec, QfaSpec, StateId, StateKind, StatePartition,
};
pub use symbol::{format_word, parse_word, Symbol};
pub use wellformed::{check_wellformed, check_wellformed_with, Violation, WellFormedReport};
