use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::spec::{Automaton, StateId, StateKind};
use super::symbol::Symbol;
use crate::scalar::{Model, Real, Weight};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `|norm - 1|` of a column exceeds tolerance. For quantum machines the
    /// norm is `sum |a|^2`, for classical ones the plain sum.
    ColumnNorm {
        symbol: Symbol,
        source: StateId,
        deviation: f64,
    },
    /// Two columns of one symbol have an inner product above tolerance.
    NonOrthogonal {
        symbol: Symbol,
        first: StateId,
        second: StateId,
        overlap: f64,
    },
    /// Entry outside `[0, 1]` (classical) or non-finite (quantum).
    InadmissibleEntry {
        symbol: Symbol,
        source: StateId,
        target: StateId,
    },
    DuplicateTarget {
        symbol: Symbol,
        source: StateId,
        target: StateId,
    },
    PartitionOverlap { state: StateId },
    PartitionMissing { state: StateId },
    InitialHalting { state: StateId, kind: StateKind },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColumnNorm {
                symbol,
                source,
                deviation,
            } => write!(
                f,
                "column {} of state {source}: norm deviates by {deviation:e}",
                symbol.dump_name()
            ),
            Violation::NonOrthogonal {
                symbol,
                first,
                second,
                overlap,
            } => write!(
                f,
                "columns {} of states {first} and {second}: overlap {overlap:e}",
                symbol.dump_name()
            ),
            Violation::InadmissibleEntry {
                symbol,
                source,
                target,
            } => write!(
                f,
                "column {} of state {source}: inadmissible entry at target {target}",
                symbol.dump_name()
            ),
            Violation::DuplicateTarget {
                symbol,
                source,
                target,
            } => write!(
                f,
                "column {} of state {source}: target {target} listed twice",
                symbol.dump_name()
            ),
            Violation::PartitionOverlap { state } => {
                write!(f, "state {state} belongs to more than one partition set")
            }
            Violation::PartitionMissing { state } => {
                write!(f, "state {state} belongs to no partition set")
            }
            Violation::InitialHalting { state, kind } => {
                write!(f, "initial state {state} is {kind:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WellFormedReport {
    pub tolerance: f64,
    pub violations: Vec<Violation>,
    pub columns_checked: usize,
    pub pairs_checked: usize,
}

impl WellFormedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant at the weight type's default tolerance.
pub fn check_wellformed<W: Weight>(spec: &Automaton<W>) -> WellFormedReport {
    check_wellformed_with(spec, W::tolerance())
}

/// Checks partition consistency, admissible entries, column normalization
/// and, for quantum machines, pairwise orthogonality of the columns of each
/// symbol (i.e. the defined columns form a partial isometry).
pub fn check_wellformed_with<W: Weight>(spec: &Automaton<W>, tolerance: f64) -> WellFormedReport {
    let mut report = WellFormedReport {
        tolerance,
        ..Default::default()
    };
    let n = spec.num_states();

    let mut membership = vec![0u8; n];
    let p = spec.partition();
    for &id in p.accepting.iter().chain(&p.rejecting).chain(&p.nonhalting) {
        membership[id] += 1;
    }
    for (state, &m) in membership.iter().enumerate() {
        match m {
            0 => report.violations.push(Violation::PartitionMissing { state }),
            1 => {}
            _ => report.violations.push(Violation::PartitionOverlap { state }),
        }
    }
    let init_kind = spec.kind(spec.initial());
    if init_kind.is_halting() {
        report.violations.push(Violation::InitialHalting {
            state: spec.initial(),
            kind: init_kind,
        });
    }

    for symbol in Symbol::ALL {
        let mut incoming: BTreeMap<StateId, Vec<(StateId, &W)>> = BTreeMap::new();
        for (source, column) in spec.columns(symbol) {
            report.columns_checked += 1;
            let mut norm = W::Real::zero();
            let mut last = None;
            for (target, w) in column {
                if !w.is_admissible() {
                    report.violations.push(Violation::InadmissibleEntry {
                        symbol,
                        source,
                        target: *target,
                    });
                }
                if last == Some(*target) {
                    report.violations.push(Violation::DuplicateTarget {
                        symbol,
                        source,
                        target: *target,
                    });
                }
                last = Some(*target);
                norm = norm + w.mass();
                if W::MODEL == Model::Quantum {
                    incoming.entry(*target).or_default().push((source, w));
                }
            }
            let deviation = (norm - W::Real::one()).abs_val().as_f64();
            if !(deviation <= tolerance) {
                report.violations.push(Violation::ColumnNorm {
                    symbol,
                    source,
                    deviation,
                });
            }
        }

        if W::MODEL == Model::Quantum {
            let mut gram: BTreeMap<(StateId, StateId), W> = BTreeMap::new();
            for sources in incoming.values() {
                for (i, (a, wa)) in sources.iter().enumerate() {
                    for (b, wb) in &sources[i + 1..] {
                        let term = wa.inner(wb);
                        let entry = gram.entry((*a, *b)).or_insert_with(W::zero);
                        *entry = entry.clone() + term;
                    }
                }
            }
            report.pairs_checked += gram.len();
            for ((first, second), overlap) in gram {
                let overlap = overlap.modulus();
                if !(overlap <= tolerance) {
                    report.violations.push(Violation::NonOrthogonal {
                        symbol,
                        first,
                        second,
                        overlap,
                    });
                }
            }
        }
    }
    report
}
