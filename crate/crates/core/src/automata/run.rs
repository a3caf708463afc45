use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{Float, One, Zero};
use serde::{Deserialize, Serialize};

use super::spec::{Automaton, StateId, StateKind};
use super::symbol::Symbol;
use crate::error::{Error, Result};
use crate::scalar::{Real, Weight};

/// Superposition (or distribution) over non-halting states together with
/// the cumulative halting probabilities observed so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<W: Weight> {
    /// Non-halting part, ascending state id, unnormalized.
    pub amplitudes: Vec<(StateId, W)>,
    /// Halting components observed by the most recent step, ascending id.
    pub measured: Vec<(StateId, W)>,
    pub p_accept: W::Real,
    pub p_reject: W::Real,
}

impl<W: Weight> Configuration<W> {
    /// Unit weight on the initial state.
    pub fn initial(spec: &Automaton<W>) -> Self {
        Self::from_superposition(vec![(spec.initial(), W::from_real(W::Real::one()))])
    }

    /// Starts from an arbitrary weight vector with no halting history.
    pub fn from_superposition(mut amplitudes: Vec<(StateId, W)>) -> Self {
        amplitudes.sort_by_key(|(s, _)| *s);
        Configuration {
            amplitudes,
            measured: Vec::new(),
            p_accept: W::Real::zero(),
            p_reject: W::Real::zero(),
        }
    }

    /// `sum |amp|^2` (quantum) or `sum amp` (classical) over live states.
    pub fn live_mass(&self) -> W::Real {
        mass_of(&self.amplitudes)
    }

    /// Live mass plus both cumulative halting probabilities.
    pub fn total_mass(&self) -> W::Real {
        self.live_mass() + self.p_accept.clone() + self.p_reject.clone()
    }

    pub fn weight_of(&self, state: StateId) -> Option<&W> {
        self.amplitudes
            .binary_search_by_key(&state, |(s, _)| *s)
            .ok()
            .map(|i| &self.amplitudes[i].1)
    }
}

pub(crate) fn mass_of<W: Weight>(entries: &[(StateId, W)]) -> W::Real {
    entries
        .iter()
        .fold(W::Real::zero(), |acc, (_, w)| acc + w.mass())
}

/// Final outcome of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<R> {
    pub p_accept: R,
    pub p_reject: R,
    /// Mass still on non-halting states after the right endmarker.
    pub p_residual: R,
}

impl<R: Real> RunResult<R> {
    pub fn to_f64(&self) -> RunResult<f64> {
        RunResult {
            p_accept: self.p_accept.as_f64(),
            p_reject: self.p_reject.as_f64(),
            p_residual: self.p_residual.as_f64(),
        }
    }
}

impl<W: Weight> Automaton<W> {
    /// Reads one symbol: applies its columns, observes, and keeps the
    /// unnormalized non-halting projection.
    ///
    /// Contributions are accumulated in ascending source order and halting
    /// mass in ascending target order, so results do not depend on anything
    /// but the spec and the input.
    pub fn step(&self, config: &Configuration<W>, symbol: Symbol) -> Result<Configuration<W>> {
        let mut next: BTreeMap<StateId, W> = BTreeMap::new();
        for (source, amp) in &config.amplitudes {
            let column = self.column(symbol, *source).ok_or_else(|| Error::IncompleteSpec {
                state: self.name(*source).to_string(),
                symbol: symbol.dump_name(),
            })?;
            for (target, w) in column {
                let contribution = amp.clone() * w.clone();
                match next.get_mut(target) {
                    Some(acc) => *acc = acc.clone() + contribution,
                    None => {
                        next.insert(*target, contribution);
                    }
                }
            }
        }
        let mut out = Configuration {
            amplitudes: Vec::new(),
            measured: Vec::new(),
            p_accept: config.p_accept.clone(),
            p_reject: config.p_reject.clone(),
        };
        for (state, amp) in next {
            if amp.is_zero() {
                continue;
            }
            match self.kind(state) {
                StateKind::NonHalting => out.amplitudes.push((state, amp)),
                StateKind::Accepting => {
                    out.p_accept = out.p_accept + amp.mass();
                    out.measured.push((state, amp));
                }
                StateKind::Rejecting => {
                    out.p_reject = out.p_reject + amp.mass();
                    out.measured.push((state, amp));
                }
            }
        }
        Ok(out)
    }

    /// Continues `config` over `symbols`.
    pub fn run_from(&self, config: Configuration<W>, symbols: &[Symbol]) -> Result<Configuration<W>> {
        symbols
            .iter()
            .try_fold(config, |c, &s| self.step(&c, s))
    }

    /// Runs `¢ word $` from the initial state.
    pub fn run(&self, word: &[Symbol]) -> Result<RunResult<W::Real>> {
        let framed = frame(word)?;
        let end = self.run_from(Configuration::initial(self), &framed)?;
        Ok(RunResult {
            p_residual: end.live_mass(),
            p_accept: end.p_accept,
            p_reject: end.p_reject,
        })
    }

    /// Snapshots taken right after the probed steps of `¢ word $`; step 0 is
    /// the left endmarker. Snapshots are returned in probe order.
    pub fn trace(&self, word: &[Symbol], probe: &[usize]) -> Result<Vec<Configuration<W>>> {
        let framed = frame(word)?;
        if let Some(&index) = probe.iter().find(|&&i| i >= framed.len()) {
            return Err(Error::ProbeOutOfRange {
                index,
                steps: framed.len(),
            });
        }
        let last = match probe.iter().max() {
            Some(&m) => m,
            None => return Ok(Vec::new()),
        };
        let mut snapshots = Vec::with_capacity(last + 1);
        let mut config = Configuration::initial(self);
        for &symbol in &framed[..=last] {
            config = self.step(&config, symbol)?;
            snapshots.push(config.clone());
        }
        Ok(probe.iter().map(|&i| snapshots[i].clone()).collect())
    }
}

/// `¢ word $`, rejecting words that already contain an endmarker.
pub fn frame(word: &[Symbol]) -> Result<Vec<Symbol>> {
    if let Some(s) = word.iter().find(|s| s.is_endmarker()) {
        return Err(Error::EndmarkerInWord(s.dump_name()));
    }
    let mut framed = Vec::with_capacity(word.len() + 2);
    framed.push(Symbol::LeftEnd);
    framed.extend_from_slice(word);
    framed.push(Symbol::RightEnd);
    Ok(framed)
}

pub fn qfa_step<T: Real + Float>(
    spec: &Automaton<Complex<T>>,
    config: &Configuration<Complex<T>>,
    symbol: Symbol,
) -> Result<Configuration<Complex<T>>> {
    spec.step(config, symbol)
}

pub fn pfa_step<R: Real>(
    spec: &Automaton<R>,
    config: &Configuration<R>,
    symbol: Symbol,
) -> Result<Configuration<R>> {
    spec.step(config, symbol)
}

pub fn run_qfa<T: Real + Float>(spec: &Automaton<Complex<T>>, word: &[Symbol]) -> Result<RunResult<T>> {
    spec.run(word)
}

pub fn run_pfa<R: Real>(spec: &Automaton<R>, word: &[Symbol]) -> Result<RunResult<R>> {
    spec.run(word)
}

pub fn trace_run<W: Weight>(
    spec: &Automaton<W>,
    word: &[Symbol],
    probe: &[usize],
) -> Result<Vec<Configuration<W>>> {
    spec.trace(word, probe)
}
