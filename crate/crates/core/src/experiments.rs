//! End-to-end experiments: build a machine, run a corpus, and compare the
//! outcome with the closed-form laws. Each experiment yields an ordered table
//! of [`BoundReport`] rows; identical configurations give identical tables.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    accumulate, lemma5_report, lemma6_report, lemma7_bounds, lemma8_bound, m0_accept_exact,
    m1_split_step, ratio_f64, recognizes, split_replay, state_count_audit, BoundReport,
    CountFormula, SplitNorms,
};
use crate::automata::{parse_word, Automaton};
use crate::builders::{
    build_m0p, build_m0q, build_m1p, build_m1q, build_m2p, build_m2q, lemma7_params,
    theorem1_params, theorem2_params, M1Params,
};
use crate::error::{Error, Result};
use crate::languages::{
    adversarial_l0, closing_block, exhaustive_l0, exhaustive_l1, gen_instances, in_l0, in_l2,
    reversed, to_bits, BlockString, InstanceKind,
};
use crate::number_theory::{common_residue_count, max_common_primes, odd_primes, PrimeSet};
use crate::scalar::{Model, Real, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Lemma3,
    Lemma4,
    Lemma7,
    Lemma8,
    Theorem1,
    Theorem2,
    States,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::Lemma3,
        ExperimentId::Lemma4,
        ExperimentId::Lemma7,
        ExperimentId::Lemma8,
        ExperimentId::Theorem1,
        ExperimentId::Theorem2,
        ExperimentId::States,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Lemma3 => "lemma3",
            ExperimentId::Lemma4 => "lemma4",
            ExperimentId::Lemma7 => "lemma7",
            ExperimentId::Lemma8 => "lemma8",
            ExperimentId::Theorem1 => "theorem1",
            ExperimentId::Theorem2 => "theorem2",
            ExperimentId::States => "states",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment {s:?}")))
    }
}

/// Machine family for the state-count sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMachine {
    M0,
    M1,
}

impl FromStr for CountMachine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m0" => Ok(CountMachine::M0),
            "m1" | "m2" => Ok(CountMachine::M1),
            _ => Err(Error::InvalidParameter(format!("unknown machine family {s:?}"))),
        }
    }
}

/// Largest block length for exhaustive single-block sweeps (`2^(4n)` words).
pub const MAX_SWEEP_BITS: u32 = 4;
/// Largest bit length for exhaustive pair sweeps (`4^n` words).
pub const MAX_PAIR_BITS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub n: u32,
    pub c: f64,
    pub d: usize,
    pub a: f64,
    /// Number of blocks (multi-block experiments).
    pub k: Option<usize>,
    /// Prime count of the equality machine.
    pub primes: Option<usize>,
    /// Overrides of the derived prime counts of the block machines.
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub seed: u64,
    /// Instances per kind for generated corpora.
    pub count: usize,
    pub machine: CountMachine,
    pub max_primes: usize,
    pub cutpoint: f64,
    /// A corpus to use instead of generated instances.
    pub corpus: Option<Vec<String>>,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId) -> Self {
        ExperimentConfig {
            id,
            n: 4,
            c: 1.0,
            d: 3,
            a: 4.0,
            k: None,
            primes: None,
            n1: None,
            n2: None,
            seed: 0,
            count: 200,
            machine: CountMachine::M0,
            max_primes: 10,
            cutpoint: 0.5,
            corpus: None,
        }
    }

    fn invalid(&self, msg: impl fmt::Display) -> Error {
        Error::InvalidParameter(format!("{}: {msg}", self.id))
    }

    /// Rejects parameter choices that are out of range for the experiment.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(self.invalid("n must be at least 1"));
        }
        if !(self.cutpoint > 0.0 && self.cutpoint < 1.0) {
            return Err(self.invalid("cutpoint must lie in (0, 1)"));
        }
        if self.primes == Some(0) || self.n1 == Some(0) || self.n2 == Some(0) {
            return Err(self.invalid("prime counts must be positive"));
        }
        match self.id {
            ExperimentId::Lemma3 | ExperimentId::Lemma4 => {
                if self.n > MAX_PAIR_BITS {
                    return Err(self.invalid(format!("exhaustive sweep needs n <= {MAX_PAIR_BITS}")));
                }
            }
            ExperimentId::Lemma7 | ExperimentId::Lemma8 => {
                if self.n > MAX_SWEEP_BITS {
                    return Err(self.invalid(format!("exhaustive sweep needs n <= {MAX_SWEEP_BITS}")));
                }
                if self.d < 1 {
                    return Err(self.invalid("d must be at least 1"));
                }
            }
            ExperimentId::Theorem1 | ExperimentId::Theorem2 => {
                if 2 * self.n > crate::number_theory::MAX_COLLISION_BITS {
                    return Err(self.invalid("n too large for the collision oracle"));
                }
                if !(self.c >= 0.0) || self.d < 1 {
                    return Err(self.invalid("need c >= 0 and d >= 1"));
                }
                if self.k == Some(0) {
                    return Err(self.invalid("k must be at least 1"));
                }
                if self.id == ExperimentId::Theorem1 && self.count == 0 && self.corpus.is_none() {
                    return Err(self.invalid("empty corpus"));
                }
                if self.id == ExperimentId::Theorem2 && !(self.a > 0.0) {
                    return Err(self.invalid("a must be positive"));
                }
            }
            ExperimentId::States => {
                if self.max_primes == 0 {
                    return Err(self.invalid("max_primes must be positive"));
                }
            }
        }
        Ok(())
    }

    fn row(&self, case: impl Into<String>) -> BoundReport {
        let mut r = BoundReport::new(self.id.name(), case);
        r.n = Some(self.n);
        r
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    config.validate()?;
    match config.id {
        ExperimentId::Lemma3 => m0_law(config, Model::Quantum),
        ExperimentId::Lemma4 => m0_law(config, Model::Classical),
        ExperimentId::Lemma7 => block_quantum(config),
        ExperimentId::Lemma8 => block_classical(config),
        ExperimentId::Theorem1 => theorem1(config),
        ExperimentId::Theorem2 => theorem2(config),
        ExperimentId::States => states(config),
    }
}

pub fn all_pass(reports: &[BoundReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn accept_all<W: Weight>(machine: &Automaton<W>, words: &[String]) -> Result<Vec<f64>> {
    words
        .par_iter()
        .map(|w| Ok(machine.run(&parse_word(w)?)?.p_accept.as_f64()))
        .collect()
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn m0_law(config: &ExperimentConfig, model: Model) -> Result<Vec<BoundReport>> {
    let n = config.n as usize;
    let primes = odd_primes(config.primes.unwrap_or(8));
    let count = primes.count();
    let n0 = max_common_primes(config.n)?.n0;
    let words = exhaustive_l0(n);
    let exact: Vec<f64> = words
        .iter()
        .map(|w| {
            let (x, y) = w.split_once('#').expect("pair shape");
            m0_accept_exact(&primes, x, y, model).map(ratio_f64)
        })
        .collect::<Result<_>>()?;
    let quantum = build_m0q::<f64>(&primes)?;
    let classical = build_m0p::<f64>(&primes)?;
    let run = |words: &[String]| match model {
        Model::Quantum => accept_all(&quantum, words),
        Model::Classical => accept_all(&classical, words),
    };
    let tol = match model {
        Model::Quantum => 1e-9,
        Model::Classical => 1e-12,
    };
    let observed = run(&words)?;
    let member: Vec<bool> = words.iter().map(|w| in_l0(w, n)).collect();
    let base = |case: &str| {
        config.row(case).params(|r| {
            r.primes = Some(count);
            r.n0 = Some(n0);
        })
    };
    let power = |x: f64| match model {
        Model::Quantum => x * x,
        Model::Classical => x,
    };
    let mut rows = Vec::new();
    let members = || observed.iter().zip(&member).filter(|(_, m)| **m).map(|(p, _)| *p);
    let nonmembers = || observed.iter().zip(&member).filter(|(_, m)| !**m).map(|(p, _)| *p);
    rows.push(base("members").at_least(1.0, min_of(members()), tol));
    let law_err = max_of(
        observed
            .iter()
            .zip(&exact)
            .zip(&member)
            .filter(|(_, m)| !**m)
            .map(|((p, e), _)| (p - e).abs()),
    );
    let law = match model {
        Model::Quantum => "nonmember_law (t/N)^2",
        Model::Classical => "nonmember_law t/N",
    };
    rows.push(base(law).equal(0.0, law_err, tol));
    let ceiling = power(n0.min(count) as f64 / count as f64);
    rows.push(
        base("max_nonmember")
            .equal(ceiling, max_of(nonmembers()), tol)
            .note(format!("bound (min(N0,N)/N)^e with N0={n0}")),
    );
    let adversarial = adversarial_l0(n)?;
    let adv_observed = run(&adversarial)?;
    rows.push(
        base("adversarial")
            .equal(ceiling, min_of(adv_observed.iter().copied()), tol)
            .note(format!("{} pairs at the collision witness", adversarial.len())),
    );
    if model == Model::Classical {
        let quantum = accept_all(&quantum, &words)?;
        let gap = max_of(quantum.iter().zip(&observed).map(|(q, c)| (q - c * c).abs()));
        rows.push(base("square_relation").equal(0.0, gap, 1e-9));
    }
    let oracle = |w: &str| in_l0(w, n);
    let rec = match model {
        Model::Quantum => recognizes(&quantum, &words, oracle, config.cutpoint)?,
        Model::Classical => recognizes(&classical, &words, oracle, config.cutpoint)?,
    };
    let mut r = rec.report;
    r.experiment = config.id.name().into();
    r.case = "recognition".into();
    r.n = Some(config.n);
    r.primes = Some(count);
    r.n0 = Some(n0);
    rows.push(r);
    Ok(rows)
}

/// How a single-block word relates to the two conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockClass {
    /// `w1 = w2^R`.
    First,
    /// `w1 != w2^R` and `w1 w2 = (w3 w4)^R`.
    Second,
    Neither,
}

impl BlockClass {
    pub fn of(word: &BlockString) -> Self {
        let b = &word.blocks()[0];
        if b.first_holds() {
            BlockClass::First
        } else if b.second_holds() {
            BlockClass::Second
        } else {
            BlockClass::Neither
        }
    }
}

/// One instrumented run of the block machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRun {
    pub word: String,
    pub class: BlockClass,
    pub p_accept: f64,
    pub split: SplitNorms,
}

fn block_params(config: &ExperimentConfig) -> Result<M1Params> {
    let derived = lemma7_params(config.n, config.d)?;
    Ok(M1Params::new(
        config.n1.unwrap_or(derived.n1()),
        config.n2.unwrap_or(derived.n2()),
    ))
}

/// Runs every single-block word of length `n` on the quantum block machine
/// and splits it at the first check's measurement.
pub fn block_sweep(n: u32, params: &M1Params) -> Result<Vec<BlockRun>> {
    let machine = build_m1q::<f64>(params)?;
    let step = m1_split_step(n as usize);
    exhaustive_l1(n as usize)
        .into_par_iter()
        .map(|w| {
            let symbols = parse_word(w.raw())?;
            Ok(BlockRun {
                class: BlockClass::of(&w),
                p_accept: machine.run(&symbols)?.p_accept,
                split: split_replay(&machine, &symbols, step)?,
                word: w.raw().to_string(),
            })
        })
        .collect()
}

fn collision_counts(n: u32) -> Result<(usize, usize)> {
    Ok((max_common_primes(n)?.n0, max_common_primes(2 * n)?.n0))
}

fn block_quantum(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let params = block_params(config)?;
    let (n0, n0p) = collision_counts(config.n)?;
    let bounds = lemma7_bounds(n0.min(params.n1()), n0p.min(params.n2()), params.n1(), params.n2())?;
    let runs = block_sweep(config.n, &params)?;
    let base = |case: &str| {
        config.row(case).with_m1(&params).params(|r| {
            r.d = Some(config.d);
            r.n0 = Some(n0);
            r.n0p = Some(n0p);
        })
    };
    let of = |class: BlockClass| runs.iter().filter(move |r| r.class == class);
    let count = |class| of(class).count();
    let lower = ratio_f64(bounds.accept_lower_split);
    let upper = ratio_f64(bounds.reject_side_upper);
    let mut rows = vec![
        base("first_path")
            .at_least(1.0, min_of(of(BlockClass::First).map(|r| r.p_accept)), 1e-9)
            .note(format!("{} words", count(BlockClass::First))),
        base("second_path")
            .at_least(lower, min_of(of(BlockClass::Second).map(|r| r.p_accept)), 1e-9)
            .note(format!(
                "{} words; r^2+(1-r^2)^2={:.12} 1-r^2+r^4={:.12}",
                count(BlockClass::Second),
                lower,
                ratio_f64(bounds.accept_lower)
            )),
        base("nonmember")
            .at_most(upper, max_of(of(BlockClass::Neither).map(|r| r.p_accept)), 1e-9)
            .note(format!("{} words", count(BlockClass::Neither))),
    ];
    rows.extend(split_rows(&runs, base)?);
    Ok(rows)
}

/// Aggregates the per-word split-state checks as worst-case slack
/// rows: observed is the extreme of `replay - bound`.
fn split_rows(runs: &[BlockRun], base: impl Fn(&str) -> BoundReport) -> Result<Vec<BoundReport>> {
    let mut slack5 = f64::INFINITY;
    let mut cases5 = 0usize;
    let mut slack6 = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for run in runs {
        match lemma5_report(&run.split, &run.word) {
            Ok(r) => {
                cases5 += 1;
                slack5 = slack5.min(r.observed - r.predicted_lo.expect("lower bound"));
                if !r.pass {
                    failures.push(format!("lemma5:{}", run.word));
                }
            }
            Err(Error::Inapplicable(_)) => {}
            Err(e) => return Err(e),
        }
        let r = lemma6_report(&run.split, None, &run.word)?;
        slack6 = slack6.max(r.observed - r.predicted_hi.expect("upper bound"));
        if !r.pass {
            failures.push(format!("lemma6:{}", run.word));
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    Ok(vec![
        base("lemma5_slack")
            .at_least(0.0, if cases5 == 0 { 0.0 } else { slack5 }, 1e-9)
            .note(format!("{cases5} applicable runs {first}")),
        base("lemma6_slack")
            .at_most(0.0, slack6, 1e-9)
            .note(format!("{} runs", runs.len())),
    ])
}

fn block_classical(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let params = block_params(config)?;
    let (n0, n0p) = collision_counts(config.n)?;
    let bound = ratio_f64(lemma8_bound(
        n0.min(params.n1()),
        n0p.min(params.n2()),
        params.n1(),
        params.n2(),
    )?);
    let machine = build_m1p::<f64>(&params)?;
    let words = exhaustive_l1(config.n as usize);
    let raw: Vec<String> = words.iter().map(|w| w.raw().to_string()).collect();
    let p = accept_all(&machine, &raw)?;
    let classes: Vec<BlockClass> = words.iter().map(BlockClass::of).collect();
    let base = |case: &str| {
        config.row(case).with_m1(&params).params(|r| {
            r.d = Some(config.d);
            r.n0 = Some(n0);
            r.n0p = Some(n0p);
        })
    };
    let pick = |keep: fn(BlockClass) -> bool| {
        p.iter()
            .zip(&classes)
            .filter(move |(_, c)| keep(**c))
            .map(|(p, _)| *p)
    };
    Ok(vec![
        base("members").at_least(1.0, min_of(pick(|c| c != BlockClass::Neither)), 1e-12),
        base("nonmember").at_most(bound, max_of(pick(|c| c == BlockClass::Neither)), 1e-12),
    ])
}

fn theorem1(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let params = match (config.n1, config.n2) {
        (None, None) => theorem1_params(config.n, config.c, config.d)?,
        _ => {
            let p = theorem1_params(config.n, config.c, config.d)?;
            M1Params::new(config.n1.unwrap_or(p.n1()), config.n2.unwrap_or(p.n2()))
        }
    };
    let n = config.n as usize;
    let k = config.k.unwrap_or_else(|| {
        crate::builders::TheoremParams {
            n: config.n,
            c: config.c,
            d: config.d,
            a: config.a,
        }
        .iterations()
    });
    let corpus: Vec<String> = match &config.corpus {
        Some(words) => words.clone(),
        None => {
            let mut words = Vec::new();
            let kinds = [InstanceKind::Member, InstanceKind::Nonmember, InstanceKind::Adversarial];
            for (i, kind) in kinds.into_iter().enumerate() {
                let batch = gen_instances(n, k, kind, config.count, config.seed.wrapping_add(i as u64))?;
                words.extend(batch.into_iter().map(|b| b.raw().to_string()));
            }
            words
        }
    };
    let machine = build_m2q::<f64>(&params, true)?;
    let (n0, n0p) = collision_counts(config.n)?;
    let rec = recognizes(&machine, &corpus, |w| in_l2(w, n, k), config.cutpoint)?;
    let base = |case: &str| {
        config.row(case).with_m1(&params).params(|r| {
            r.c = Some(config.c);
            r.d = Some(config.d);
            r.k = Some(k);
            r.n0 = Some(n0);
            r.n0p = Some(n0p);
        })
    };
    let mut rows = Vec::new();
    let mut r = base("recognition");
    r = r.judge(Some(0.0), Some(0.0), rec.violations.len() as f64, 0.0);
    r.note = rec.report.note.clone();
    if let Some(w) = rec.violations.first() {
        r.note.push_str(&format!(" first_violation={w}"));
    }
    rows.push(r);
    if let Some(m) = rec.min_member {
        rows.push(
            base("min_member")
                .at_least(config.cutpoint, m, 0.0)
                .note(format!("{} members", rec.members)),
        );
    }
    if let Some(m) = rec.max_nonmember {
        rows.push(
            base("max_nonmember")
                .at_most(config.cutpoint, m, 0.0)
                .note(format!("{} nonmembers", rec.nonmembers)),
        );
    }
    let mut states = state_count_audit(&machine, &CountFormula::M2(params.clone()));
    states.experiment = config.id.name().into();
    states.case = "states".into();
    states.n = Some(config.n);
    rows.push(states);
    Ok(rows)
}

/// Deterministic passing blocks (`w1 w2 = (w3 w4)^R`, `w1 != w2^R`) whose
/// first pair agrees on exactly `t` of the moduli, for each achievable `t`.
fn passing_blocks_by_collisions(n: usize, primes: &PrimeSet) -> Result<Vec<(usize, crate::languages::Block)>> {
    let top = 1u64 << n;
    let mut found: Vec<Option<crate::languages::Block>> = vec![None; primes.count() + 1];
    for x in 0..top {
        for y in 0..top {
            if x == y {
                continue;
            }
            let (w1, z) = (to_bits(x, n), to_bits(y, n));
            let t = common_residue_count(primes, &w1, &z)?;
            if found[t].is_none() {
                found[t] = Some(closing_block(w1, reversed(&z)));
            }
        }
    }
    Ok(found
        .into_iter()
        .enumerate()
        .filter_map(|(t, b)| b.map(|b| (t, b)))
        .collect())
}

fn theorem2(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let derived = theorem2_params(config.n, config.c, config.a, config.d)?;
    let params = M1Params::new(
        config.n1.unwrap_or(derived.n1()),
        config.n2.unwrap_or(derived.n2()),
    );
    let n = config.n as usize;
    let kmax = config.k.unwrap_or(8);
    let (n0, n0p) = collision_counts(config.n)?;
    let machine = build_m2p::<f64>(&params, true)?;
    let base = |case: String, k: usize| {
        config.row(case).with_m1(&params).params(|r| {
            r.c = Some(config.c);
            r.d = Some(config.d);
            r.a = Some(config.a);
            r.k = Some(k);
            r.n0 = Some(n0);
            r.n0p = Some(n0p);
        })
    };
    let mut rows = Vec::new();
    let t_max = n0.min(params.n1());
    for (t, block) in passing_blocks_by_collisions(n, &params.primes1)? {
        let run = |k: usize| -> Result<f64> {
            let word = BlockString::from_blocks(n, vec![block.clone(); k]);
            debug_assert!(!word.is_member());
            Ok(machine.run(&parse_word(word.raw())?)?.p_accept)
        };
        let rate = run(1)?;
        rows.push(
            base(format!("t={t} rate"), 1)
                .equal(t as f64 / params.n1() as f64, rate, 1e-12)
                .note("per-iteration acceptance t/N1"),
        );
        for k in 1..=kmax {
            let p = run(k)?;
            rows.push(
                base(format!("t={t} k={k}"), k)
                    .equal(accumulate(rate, k), p, 1e-6)
                    .note(format!("rate={rate:.12}; nonmember of L2")),
            );
            if t == t_max && k == kmax {
                rows.push(
                    base(format!("t={t} exceeds 0.6"), k)
                        .at_least(0.6, p, 0.0)
                        .note(format!(
                            "design rate a/n^c={:.6}",
                            config.a / (config.n as f64).powf(config.c)
                        )),
                );
            }
        }
    }
    Ok(rows)
}

fn states(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let mut rows = Vec::new();
    match config.machine {
        CountMachine::M0 => {
            for count in 1..=config.max_primes {
                let ps = odd_primes(count);
                let m = build_m0q::<f64>(&ps)?;
                let mut r = state_count_audit(&m, &CountFormula::M0(ps));
                r.experiment = config.id.name().into();
                r.case = format!("m0 N={count}");
                rows.push(r);
            }
        }
        CountMachine::M1 => {
            let top = config.max_primes.min(6);
            for n1 in 1..=top {
                for n2 in 1..=top {
                    let p = M1Params::new(n1, n2);
                    let m = build_m2q::<f64>(&p, true)?;
                    let mut r = state_count_audit(&m, &CountFormula::M2(p));
                    r.experiment = config.id.name().into();
                    r.case = format!("m2 N1={n1} N2={n2}");
                    rows.push(r);
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.name().parse::<ExperimentId>().unwrap(), id);
        }
        assert!("lemma9".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        let mut c = ExperimentConfig::new(ExperimentId::Lemma7);
        c.n = 5;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentId::Theorem2);
        c.a = 0.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentId::Lemma3);
        c.primes = Some(0);
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn small_experiments_pass() {
        for id in [ExperimentId::Lemma3, ExperimentId::Lemma4] {
            let mut c = ExperimentConfig::new(id);
            c.n = 2;
            c.primes = Some(3);
            let rows = run_experiment(&c).unwrap();
            assert!(all_pass(&rows), "{rows:#?}");
        }
        for id in [ExperimentId::Lemma7, ExperimentId::Lemma8] {
            let mut c = ExperimentConfig::new(id);
            c.n = 2;
            let rows = run_experiment(&c).unwrap();
            assert!(all_pass(&rows), "{rows:#?}");
        }
        let mut c = ExperimentConfig::new(ExperimentId::States);
        c.max_primes = 3;
        assert!(all_pass(&run_experiment(&c).unwrap()));
        c.machine = CountMachine::M1;
        assert!(all_pass(&run_experiment(&c).unwrap()));
    }
}
