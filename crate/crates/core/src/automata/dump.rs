//! JSON interchange format for automata.
//!
//! ```text
//! {
//!   "model": "quantum" | "classical",
//!   "num_states": 25,
//!   "initial": 0,
//!   "partition": {"accepting": [..], "rejecting": [..], "nonhalting": [..]},
//!   "state_names": {"0": "q0", "1": "q[3,0,1]", ..},
//!   "columns": {
//!     "LEFT_END": [{"source": 0, "target": 1, "re": 0.707.., "im": 0.0}, ..],
//!     "0": [..], "1": [..], "SHARP": [..], "RIGHT_END": [..]
//!   }
//! }
//! ```
//!
//! Classical dumps omit `im`. Entries of one column appear contiguously in
//! ascending target order; columns appear in ascending source order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spec::{Automaton, Column, StatePartition};
use super::symbol::Symbol;
use crate::error::{Error, Result};
use crate::scalar::{Model, Weight};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryDump {
    pub source: usize,
    pub target: usize,
    pub re: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ColumnsDump {
    #[serde(rename = "LEFT_END", default)]
    pub left_end: Vec<EntryDump>,
    #[serde(rename = "0", default)]
    pub bit0: Vec<EntryDump>,
    #[serde(rename = "1", default)]
    pub bit1: Vec<EntryDump>,
    #[serde(rename = "SHARP", default)]
    pub sharp: Vec<EntryDump>,
    #[serde(rename = "RIGHT_END", default)]
    pub right_end: Vec<EntryDump>,
}

impl ColumnsDump {
    fn get(&self, symbol: Symbol) -> &[EntryDump] {
        match symbol {
            Symbol::LeftEnd => &self.left_end,
            Symbol::Bit0 => &self.bit0,
            Symbol::Bit1 => &self.bit1,
            Symbol::Sharp => &self.sharp,
            Symbol::RightEnd => &self.right_end,
        }
    }

    fn get_mut(&mut self, symbol: Symbol) -> &mut Vec<EntryDump> {
        match symbol {
            Symbol::LeftEnd => &mut self.left_end,
            Symbol::Bit0 => &mut self.bit0,
            Symbol::Bit1 => &mut self.bit1,
            Symbol::Sharp => &mut self.sharp,
            Symbol::RightEnd => &mut self.right_end,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDump {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    pub num_states: usize,
    pub initial: usize,
    pub partition: StatePartition,
    pub state_names: BTreeMap<usize, String>,
    pub columns: ColumnsDump,
}

impl SpecDump {
    /// Declared model, or inferred from the presence of `im` fields.
    pub fn model(&self) -> Model {
        self.model.unwrap_or_else(|| {
            let has_im = Symbol::ALL
                .iter()
                .any(|&s| self.columns.get(s).iter().any(|e| e.im.is_some()));
            if has_im {
                Model::Quantum
            } else {
                Model::Classical
            }
        })
    }
}

impl<W: Weight> Automaton<W> {
    pub fn to_dump(&self) -> SpecDump {
        let mut columns = ColumnsDump::default();
        for symbol in Symbol::ALL {
            let out = columns.get_mut(symbol);
            for (source, column) in self.columns(symbol) {
                for (target, w) in column {
                    let (re, im) = w.parts();
                    out.push(EntryDump {
                        source,
                        target: *target,
                        re,
                        im: (W::MODEL == Model::Quantum).then_some(im),
                    });
                }
            }
        }
        SpecDump {
            model: Some(W::MODEL),
            num_states: self.num_states(),
            initial: self.initial(),
            partition: self.partition().clone(),
            state_names: self.names().iter().cloned().enumerate().collect(),
            columns,
        }
    }

    pub fn from_dump(dump: &SpecDump) -> Result<Self> {
        if dump.model() != W::MODEL {
            return Err(Error::Dump(format!(
                "dump holds a {:?} machine, expected {:?}",
                dump.model(),
                W::MODEL
            )));
        }
        let n = dump.num_states;
        let names = (0..n)
            .map(|i| dump.state_names.get(&i).cloned().unwrap_or_else(|| format!("#{i}")))
            .collect();
        let mut columns: [Vec<Option<Column<W>>>; 5] = std::array::from_fn(|_| vec![None; n]);
        for symbol in Symbol::ALL {
            for e in dump.columns.get(symbol) {
                if e.source >= n {
                    return Err(Error::Dump(format!("source {} out of range", e.source)));
                }
                let w = W::from_parts(e.re, e.im.unwrap_or(0.0)).ok_or_else(|| {
                    Error::Dump(format!(
                        "entry {}->{} not representable as {:?} weight",
                        e.source, e.target, W::MODEL
                    ))
                })?;
                columns[symbol.index()][e.source]
                    .get_or_insert_with(Vec::new)
                    .push((e.target, w));
            }
        }
        Automaton::from_parts(names, dump.initial, dump.partition.clone(), columns)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_dump())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_dump(&serde_json::from_str(text)?)
    }
}

/// A dumped machine of either model, loaded at double precision.
#[derive(Debug, Clone)]
pub enum AnyAutomaton {
    Quantum(Automaton<Complex64>),
    Classical(Automaton<f64>),
}

impl AnyAutomaton {
    pub fn from_json(text: &str) -> Result<Self> {
        let dump: SpecDump = serde_json::from_str(text)?;
        Ok(match dump.model() {
            Model::Quantum => AnyAutomaton::Quantum(Automaton::from_dump(&dump)?),
            Model::Classical => AnyAutomaton::Classical(Automaton::from_dump(&dump)?),
        })
    }

    pub fn model(&self) -> Model {
        match self {
            AnyAutomaton::Quantum(_) => Model::Quantum,
            AnyAutomaton::Classical(_) => Model::Classical,
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            AnyAutomaton::Quantum(a) => a.num_states(),
            AnyAutomaton::Classical(a) => a.num_states(),
        }
    }
}
