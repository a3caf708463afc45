use std::collections::HashMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::symbol::Symbol;
use crate::error::{Error, Result};
use crate::scalar::Weight;

pub type StateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Accepting,
    Rejecting,
    NonHalting,
}

impl StateKind {
    pub fn is_halting(self) -> bool {
        self != StateKind::NonHalting
    }
}

/// Accepting / rejecting / non-halting state sets, each sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePartition {
    pub accepting: Vec<StateId>,
    pub rejecting: Vec<StateId>,
    pub nonhalting: Vec<StateId>,
}

/// One column of a transition operator: the image of a basis state.
pub type Column<W> = Vec<(StateId, W)>;

/// A measure-many one-way finite automaton with sparse, partially defined
/// transition columns.
///
/// With a complex weight this is a quantum automaton, with a real weight a
/// probabilistic one. Columns are only stored for states the construction
/// defines; reaching an undefined column during a run is an error.
#[derive(Debug, Clone)]
pub struct Automaton<W> {
    names: Vec<String>,
    index: HashMap<String, StateId>,
    initial: StateId,
    partition: StatePartition,
    kinds: Vec<StateKind>,
    columns: [Vec<Option<Column<W>>>; 5],
}

/// Measure-many one-way quantum finite automaton over `Complex<T>`.
pub type QfaSpec<T> = Automaton<Complex<T>>;
/// Probabilistic finite automaton over the real scalar `T`.
pub type PfaSpec<T> = Automaton<T>;

impl<W: Weight> Automaton<W> {
    /// Assembles an automaton from raw parts.
    ///
    /// Only structural soundness is enforced here (ids in range, a name per
    /// state). Semantic properties such as normalization or a consistent
    /// partition are left to [`check_wellformed`](super::check_wellformed),
    /// which can then report on machines loaded from arbitrary dumps. A state
    /// listed in several partition sets is classified accepting first, then
    /// rejecting; a state in none is non-halting.
    pub fn from_parts(
        names: Vec<String>,
        initial: StateId,
        partition: StatePartition,
        columns: [Vec<Option<Column<W>>>; 5],
    ) -> Result<Self> {
        let n = names.len();
        if initial >= n {
            return Err(Error::Dump(format!("initial state {initial} out of range")));
        }
        let in_range = |id: &StateId| *id < n;
        if !(partition.accepting.iter().all(in_range)
            && partition.rejecting.iter().all(in_range)
            && partition.nonhalting.iter().all(in_range))
        {
            return Err(Error::Dump("partition refers to unknown state".into()));
        }
        for (s, per_symbol) in columns.iter().enumerate() {
            if per_symbol.len() != n {
                return Err(Error::Dump(format!(
                    "column table for {} has {} sources, expected {n}",
                    Symbol::ALL[s].dump_name(),
                    per_symbol.len()
                )));
            }
            for col in per_symbol.iter().flatten() {
                if let Some((t, _)) = col.iter().find(|(t, _)| *t >= n) {
                    return Err(Error::Dump(format!("column target {t} out of range")));
                }
            }
        }
        let mut kinds = vec![StateKind::NonHalting; n];
        for &id in &partition.rejecting {
            kinds[id] = StateKind::Rejecting;
        }
        for &id in &partition.accepting {
            kinds[id] = StateKind::Accepting;
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        Ok(Automaton {
            names,
            index,
            initial,
            partition,
            kinds,
            columns,
        })
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn partition(&self) -> &StatePartition {
        &self.partition
    }

    pub fn kind(&self, state: StateId) -> StateKind {
        self.kinds[state]
    }

    pub fn name(&self, state: StateId) -> &str {
        &self.names[state]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn column(&self, symbol: Symbol, source: StateId) -> Option<&[(StateId, W)]> {
        self.columns[symbol.index()][source].as_deref()
    }

    /// Defined columns for `symbol` in ascending source order.
    pub fn columns(&self, symbol: Symbol) -> impl Iterator<Item = (StateId, &[(StateId, W)])> {
        self.columns[symbol.index()]
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.as_deref().map(|c| (s, c)))
    }

    pub fn column_count(&self, symbol: Symbol) -> usize {
        self.columns[symbol.index()].iter().flatten().count()
    }

    /// Same machine with every weight mapped through `f`.
    pub fn map_weights<V: Weight>(&self, mut f: impl FnMut(&W) -> V) -> Automaton<V> {
        let columns = std::array::from_fn(|s| {
            self.columns[s]
                .iter()
                .map(|c| {
                    c.as_ref()
                        .map(|c| c.iter().map(|(t, w)| (*t, f(w))).collect())
                })
                .collect()
        });
        Automaton {
            names: self.names.clone(),
            index: self.index.clone(),
            initial: self.initial,
            partition: self.partition.clone(),
            kinds: self.kinds.clone(),
            columns,
        }
    }
}

/// Incremental construction used by the machine builders.
#[derive(Debug)]
pub struct AutomatonBuilder<W> {
    names: Vec<String>,
    kinds: Vec<StateKind>,
    initial: Option<StateId>,
    columns: [Vec<Option<Column<W>>>; 5],
}

impl<W: Weight> Default for AutomatonBuilder<W> {
    fn default() -> Self {
        AutomatonBuilder {
            names: Vec::new(),
            kinds: Vec::new(),
            initial: None,
            columns: Default::default(),
        }
    }
}

impl<W: Weight> AutomatonBuilder<W> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>, kind: StateKind) -> StateId {
        let id = self.names.len();
        self.names.push(name.into());
        self.kinds.push(kind);
        for per_symbol in &mut self.columns {
            per_symbol.push(None);
        }
        id
    }

    pub fn set_kind(&mut self, state: StateId, kind: StateKind) {
        self.kinds[state] = kind;
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial = Some(state);
    }

    /// Defines the column of `source` under `symbol`. Targets are stored in
    /// ascending order; redefining a column is a construction bug.
    pub fn set_column(&mut self, symbol: Symbol, source: StateId, mut column: Column<W>) {
        column.sort_by_key(|(t, _)| *t);
        let slot = &mut self.columns[symbol.index()][source];
        assert!(
            slot.is_none(),
            "column {} of {} defined twice",
            symbol.dump_name(),
            self.names[source]
        );
        *slot = Some(column);
    }

    pub fn build(self) -> Automaton<W> {
        let mut partition = StatePartition::default();
        for (id, kind) in self.kinds.iter().enumerate() {
            match kind {
                StateKind::Accepting => partition.accepting.push(id),
                StateKind::Rejecting => partition.rejecting.push(id),
                StateKind::NonHalting => partition.nonhalting.push(id),
            }
        }
        let initial = self.initial.expect("initial state set");
        Automaton::from_parts(self.names, initial, partition, self.columns)
            .expect("builder output is structurally sound")
    }
}
