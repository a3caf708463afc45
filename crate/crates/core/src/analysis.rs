//! Closed-form acceptance laws and bounds, and numerical checkers that
//! compare them with simulated runs.

use std::io::Write;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{Float, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{frame, Automaton, Configuration, StateKind, Symbol};
use crate::builders::M1Params;
use crate::error::{Error, Result};
use crate::languages::reversed;
use crate::number_theory::{common_residue_count, PrimeSet};
use crate::scalar::{Model, Real, Weight};

/// One comparison of an analytic prediction with an observed value.
///
/// `pass` holds iff `observed` lies in `[predicted_lo - tolerance,
/// predicted_hi + tolerance]`; a missing end is unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub experiment: String,
    pub case: String,
    pub n: Option<u32>,
    pub c: Option<f64>,
    pub d: Option<usize>,
    pub a: Option<f64>,
    pub k: Option<usize>,
    pub primes: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub n0: Option<usize>,
    pub n0p: Option<usize>,
    pub predicted_lo: Option<f64>,
    pub predicted_hi: Option<f64>,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

impl BoundReport {
    pub fn new(experiment: impl Into<String>, case: impl Into<String>) -> Self {
        BoundReport {
            experiment: experiment.into(),
            case: case.into(),
            n: None,
            c: None,
            d: None,
            a: None,
            k: None,
            primes: None,
            n1: None,
            n2: None,
            n0: None,
            n0p: None,
            predicted_lo: None,
            predicted_hi: None,
            observed: f64::NAN,
            tolerance: 0.0,
            pass: false,
            note: String::new(),
        }
    }

    pub fn params(mut self, f: impl FnOnce(&mut Self)) -> Self {
        f(&mut self);
        self
    }

    pub fn with_m1(self, p: &M1Params) -> Self {
        self.params(|r| {
            r.n1 = Some(p.n1());
            r.n2 = Some(p.n2());
        })
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn at_least(self, lo: f64, observed: f64, tolerance: f64) -> Self {
        self.judge(Some(lo), None, observed, tolerance)
    }

    pub fn at_most(self, hi: f64, observed: f64, tolerance: f64) -> Self {
        self.judge(None, Some(hi), observed, tolerance)
    }

    pub fn equal(self, expected: f64, observed: f64, tolerance: f64) -> Self {
        self.judge(Some(expected), Some(expected), observed, tolerance)
    }

    pub fn judge(mut self, lo: Option<f64>, hi: Option<f64>, observed: f64, tolerance: f64) -> Self {
        self.predicted_lo = lo;
        self.predicted_hi = hi;
        self.observed = observed;
        self.tolerance = tolerance;
        let above = lo.map_or(true, |lo| observed >= lo - tolerance);
        let below = hi.map_or(true, |hi| observed <= hi + tolerance);
        self.pass = above && below && !observed.is_nan();
        self
    }
}

pub fn write_reports_csv<W: Write>(out: W, reports: &[BoundReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_reports_json<W: Write>(mut out: W, reports: &[BoundReport]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    Ok(())
}

/// Acceptance probability of the equality machine on `x # y`: with
/// `t` the number of moduli on which `x` and `y^R` agree, `(t/N)^2` for the
/// quantum machine and `t/N` for its emulation.
pub fn m0_accept_exact(primes: &PrimeSet, x: &str, y: &str, model: Model) -> Result<Rational64> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "words of unequal length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if primes.is_empty() {
        return Err(Error::EmptyPrimeSet);
    }
    let t = common_residue_count(primes, x, &reversed(y))?;
    let r = Rational64::new(t as i64, primes.count() as i64);
    Ok(match model {
        Model::Quantum => r * r,
        Model::Classical => r,
    })
}

/// Acceptance bounds of the block machine with `r = N0/N1`, `s = N0'/N2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma7Bounds {
    /// `1 - r^2 + r^4`.
    pub accept_lower: Rational64,
    /// `r^2 + (1 - r^2)^2`, the same quantity written as a split between
    /// early and late acceptance.
    pub accept_lower_split: Rational64,
    /// `r^2 + (1 - r^2)(s + r)^2`.
    pub reject_side_upper: Rational64,
}

fn check_ratio_args(n0: usize, n0p: usize, n1: usize, n2: usize) -> Result<(Rational64, Rational64)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::DivisionByZero("prime count"));
    }
    if n0 > n1 || n0p > n2 {
        return Err(Error::InvalidParameter(format!(
            "collision counts exceed prime counts: {n0}/{n1}, {n0p}/{n2}"
        )));
    }
    Ok((
        Rational64::new(n0 as i64, n1 as i64),
        Rational64::new(n0p as i64, n2 as i64),
    ))
}

pub fn lemma7_bounds(n0: usize, n0p: usize, n1: usize, n2: usize) -> Result<Lemma7Bounds> {
    let (r, s) = check_ratio_args(n0, n0p, n1, n2)?;
    let one = Rational64::from_integer(1);
    let r2 = r * r;
    Ok(Lemma7Bounds {
        accept_lower: one - r2 + r2 * r2,
        accept_lower_split: r2 + (one - r2) * (one - r2),
        reject_side_upper: r2 + (one - r2) * (s + r) * (s + r),
    })
}

/// Nonmember acceptance bound of the emulated block machine:
/// `N0/N1 + (1 - N0/N1) N0'/N2`.
pub fn lemma8_bound(n0: usize, n0p: usize, n1: usize, n2: usize) -> Result<Rational64> {
    let (r, s) = check_ratio_args(n0, n0p, n1, n2)?;
    Ok(r + (Rational64::from_integer(1) - r) * s)
}

/// `1 - (1 - a/n^c)^k`, the chance of acceptance within `k` independent
/// iterations that each accept with probability `a/n^c`.
pub fn theorem2_accumulation(a: f64, n: u32, c: f64, k: usize) -> Result<f64> {
    let rate = a / (n as f64).powf(c);
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "per-iteration rate a/n^c = {rate} outside (0, 1]"
        )));
    }
    Ok(accumulate(rate, k))
}

/// `1 - (1 - rate)^k`.
pub fn accumulate(rate: f64, k: usize) -> f64 {
    1.0 - (1.0 - rate).powi(k as i32)
}

/// Norms of the split of a snapshot into its live part `psi1` and the
/// accepting part `psi2` measured by the same step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitNorms {
    pub psi1_sq: f64,
    pub psi2_sq: f64,
    /// Suffix acceptance from `psi1 + psi2`.
    pub control: f64,
    /// Suffix acceptance from `psi1` alone.
    pub replay: f64,
}

/// Replays the suffix after `split_step` from the normalized snapshot and
/// from its live part.
pub fn split_replay<T: Real + Float>(
    machine: &Automaton<Complex<T>>,
    word: &[Symbol],
    split_step: usize,
) -> Result<SplitNorms> {
    let framed = frame(word)?;
    let snap = machine
        .trace(word, &[split_step])?
        .pop()
        .expect("one probe yields one snapshot");
    let psi2: Vec<_> = snap
        .measured
        .iter()
        .filter(|(s, _)| machine.kind(*s) == StateKind::Accepting)
        .cloned()
        .collect();
    let psi1 = snap.amplitudes.clone();
    let mass = |v: &[(usize, Complex<T>)]| v.iter().map(|(_, a)| a.norm_sqr().as_f64()).sum::<f64>();
    let (m1, m2) = (mass(&psi1), mass(&psi2));
    let total = m1 + m2;
    let suffix = &framed[split_step + 1..];
    if total <= 0.0 {
        return Ok(SplitNorms {
            psi1_sq: 0.0,
            psi2_sq: 0.0,
            control: 0.0,
            replay: 0.0,
        });
    }
    let scale = T::from_f64(total.sqrt().recip()).expect("finite scale");
    let normalize = |v: &[(usize, Complex<T>)]| -> Vec<(usize, Complex<T>)> {
        v.iter().map(|(s, a)| (*s, a * scale)).collect()
    };
    let accept_from = |start: Vec<(usize, Complex<T>)>| -> Result<f64> {
        let end = machine.run_from(Configuration::from_superposition(start), suffix)?;
        Ok(end.p_accept.as_f64())
    };
    let mut full = normalize(&psi1);
    full.extend(normalize(&psi2));
    Ok(SplitNorms {
        psi1_sq: m1 / total,
        psi2_sq: m2 / total,
        control: accept_from(full)?,
        replay: accept_from(normalize(&psi1))?,
    })
}

/// `||U psi1||_acc^2 >= ||psi1||^4` when the full snapshot is accepted with
/// certainty by the suffix.
pub fn lemma5_check<T: Real + Float>(
    machine: &Automaton<Complex<T>>,
    word: &[Symbol],
    split_step: usize,
) -> Result<BoundReport> {
    let s = split_replay(machine, word, split_step)?;
    lemma5_report(&s, crate::automata::format_word(word))
}

pub fn lemma5_report(s: &SplitNorms, case: impl Into<String>) -> Result<BoundReport> {
    if (s.control - 1.0).abs() > 1e-9 {
        return Err(Error::Inapplicable(format!(
            "control run accepts with {:.12}, not 1",
            s.control
        )));
    }
    Ok(BoundReport::new("lemma5", case)
        .at_least(s.psi1_sq * s.psi1_sq, s.replay, 1e-9)
        .note(format!("psi1_sq={:.12} psi2_sq={:.12}", s.psi1_sq, s.psi2_sq)))
}

/// `||U psi1||_acc^2 <= ||psi1||^2 (alpha ||psi1|| + ||psi2||)^2` with
/// `alpha^2` the measured control acceptance.
///
/// An analytic `alpha`, when given, must dominate the measured one;
/// otherwise the instance is out of the bound's scope.
pub fn lemma6_check<T: Real + Float>(
    machine: &Automaton<Complex<T>>,
    word: &[Symbol],
    split_step: usize,
    alpha: Option<f64>,
) -> Result<BoundReport> {
    let s = split_replay(machine, word, split_step)?;
    lemma6_report(&s, alpha, crate::automata::format_word(word))
}

pub fn lemma6_report(s: &SplitNorms, alpha: Option<f64>, case: impl Into<String>) -> Result<BoundReport> {
    if let Some(a) = alpha {
        if s.control > a * a + 1e-9 {
            return Err(Error::Inapplicable(format!(
                "control acceptance {:.12} exceeds alpha^2 = {:.12}",
                s.control,
                a * a
            )));
        }
    }
    let measured = s.control.max(0.0).sqrt();
    let (n1, n2) = (s.psi1_sq.sqrt(), s.psi2_sq.sqrt());
    let bound = s.psi1_sq * (measured * n1 + n2).powi(2);
    let analytic = alpha.map_or("none".to_string(), |a| format!("{a:.12}"));
    Ok(BoundReport::new("lemma6", case)
        .at_most(bound, s.replay, 1e-9)
        .note(format!(
            "alpha_measured={measured:.12} alpha_analytic={analytic} psi1_sq={:.12} psi2_sq={:.12}",
            s.psi1_sq, s.psi2_sq
        )))
}

/// Step index of the measurement that ends the first equality check of a
/// single-block word (`¢` is step 0).
pub fn m1_split_step(n: usize) -> usize {
    2 * n + 2
}

/// Outcome of a cutpoint recognition test over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recognition {
    pub report: BoundReport,
    pub members: usize,
    pub nonmembers: usize,
    /// Smallest member acceptance (`None` without members).
    pub min_member: Option<f64>,
    /// Largest nonmember acceptance (`None` without nonmembers).
    pub max_nonmember: Option<f64>,
    /// Misclassified words, in corpus order.
    pub violations: Vec<String>,
}

/// Checks that `p_accept > cutpoint` exactly for the oracle's members.
/// Residual mass counts as rejection.
pub fn recognizes<W: Weight>(
    machine: &Automaton<W>,
    corpus: &[String],
    oracle: impl Fn(&str) -> bool + Sync,
    cutpoint: f64,
) -> Result<Recognition> {
    let rows: Vec<(bool, f64)> = corpus
        .par_iter()
        .map(|w| {
            let symbols = crate::automata::parse_word(w)?;
            let p = machine.run(&symbols)?.p_accept.as_f64();
            Ok((oracle(w), p))
        })
        .collect::<Result<_>>()?;
    let mut rec = Recognition {
        report: BoundReport::new("recognition", format!("{} words", corpus.len())),
        members: 0,
        nonmembers: 0,
        min_member: None,
        max_nonmember: None,
        violations: Vec::new(),
    };
    for (word, &(member, p)) in corpus.iter().zip(&rows) {
        if member {
            rec.members += 1;
            rec.min_member = Some(rec.min_member.map_or(p, |m: f64| m.min(p)));
        } else {
            rec.nonmembers += 1;
            rec.max_nonmember = Some(rec.max_nonmember.map_or(p, |m: f64| m.max(p)));
        }
        if member != (p > cutpoint) {
            rec.violations.push(word.clone());
        }
    }
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.12}"));
    let note = format!(
        "cutpoint={cutpoint} members={} nonmembers={} min_member={} max_nonmember={}",
        rec.members,
        rec.nonmembers,
        fmt(rec.min_member),
        fmt(rec.max_nonmember)
    );
    rec.report = rec
        .report
        .clone()
        .equal(0.0, rec.violations.len() as f64, 0.0)
        .note(note);
    Ok(rec)
}

/// Closed-form state count of a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountFormula {
    /// `1 + 3 sum p_k`.
    M0(PrimeSet),
    /// `1 + 6 (sum p_k)(sum p_l) + N1`, shared by the iterated machine.
    M1(M1Params),
    M2(M1Params),
}

impl CountFormula {
    pub fn parse(id: &str, m0: Option<PrimeSet>, m1: Option<M1Params>) -> Result<Self> {
        let missing = || Error::InvalidParameter(format!("no parameters for formula {id}"));
        match id {
            "m0" => Ok(CountFormula::M0(m0.ok_or_else(missing)?)),
            "m1" => Ok(CountFormula::M1(m1.ok_or_else(missing)?)),
            "m2" => Ok(CountFormula::M2(m1.ok_or_else(missing)?)),
            _ => Err(Error::InvalidParameter(format!("unknown state-count formula {id:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            CountFormula::M0(_) => "m0",
            CountFormula::M1(_) => "m1",
            CountFormula::M2(_) => "m2",
        }
    }

    pub fn exact(&self) -> u64 {
        match self {
            CountFormula::M0(ps) => 1 + 3 * ps.sum(),
            CountFormula::M1(p) | CountFormula::M2(p) => {
                1 + 6 * p.primes1.sum() * p.primes2.sum() + p.n1() as u64
            }
        }
    }
}

/// Compares the state count with the exact formula. For the block machines
/// the note also gives the ratio to `(sum p_k)(sum p_l)` and to
/// `(N1 N2)^2 log N1 log N2`.
pub fn state_count_audit<W: Weight>(spec: &Automaton<W>, formula: &CountFormula) -> BoundReport {
    let actual = spec.num_states() as f64;
    let exact = formula.exact() as f64;
    let mut report = BoundReport::new("states", formula.id()).equal(exact, actual, 0.0);
    match formula {
        CountFormula::M0(ps) => {
            report.primes = Some(ps.count());
        }
        CountFormula::M1(p) | CountFormula::M2(p) => {
            report = report.with_m1(p);
            let shape = (p.primes1.sum() * p.primes2.sum()) as f64;
            let (a, b) = (p.n1() as f64, p.n2() as f64);
            let envelope = (a * b).powi(2) * a.ln().max(1.0) * b.ln().max(1.0);
            report.note = format!(
                "ratio_to_sum_product={:.6} ratio_to_envelope={:.6}",
                actual / shape,
                actual / envelope
            );
        }
    }
    report
}

/// Exact rational to `f64`.
pub fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
