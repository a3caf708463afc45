//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use qfa_core::analysis::{lemma5_report, lemma6_report, write_reports_csv};
use qfa_core::automata::{check_wellformed, parse_word};
use qfa_core::builders::{
    build_m0p, build_m0q, build_m1p, build_m1q, build_m2p, build_m2q, lemma7_params,
    theorem1_params, M1Params,
};
use qfa_core::experiments::{block_sweep, run_experiment, BlockClass, BlockRun, ExperimentConfig, ExperimentId};
use qfa_core::languages::{gen_instances, in_l2, InstanceKind};
use qfa_core::number_theory::{forward_div_step, odd_primes, reverse_div_step, PrimeSet};
use qfa_core::Error;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn trial_primes(count: usize) -> Vec<u64> {
    (3..).step_by(2).filter(|&p| is_prime(p)).take(count).collect()
}

fn value(bits: &str) -> u64 {
    u64::from_str_radix(bits, 2).unwrap_or(0)
}

fn rev(s: &str) -> String {
    s.chars().rev().collect()
}

/// Number of moduli on which `x` and `y^R` agree, by direct arithmetic.
fn collisions(primes: &[u64], x: &str, y: &str) -> usize {
    let (a, b) = (value(x), value(&rev(y)));
    primes.iter().filter(|&&p| a % p == b % p).count()
}

fn bits(v: u64, n: usize) -> String {
    format!("{v:0n$b}")
}

fn all_pairs(n: usize) -> Vec<(String, String)> {
    let top = 1u64 << n;
    (0..top)
        .flat_map(|x| (0..top).map(move |y| (bits(x, n), bits(y, n))))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn quadratic_law() -> Outcome {
    let primes = trial_primes(8);
    let m = build_m0q::<f64>(&PrimeSet::from_primes(primes.clone()).map_err(err)?).map_err(err)?;
    let rows: Vec<(String, String, f64)> = all_pairs(4)
        .into_par_iter()
        .map(|(x, y)| {
            let p = m.run(&parse_word(&format!("{x}#{y}")).unwrap()).unwrap().p_accept;
            (x, y, p)
        })
        .collect();
    let mut max_non = (0.0f64, Vec::new());
    for (x, y, p) in &rows {
        if *x == rev(y) {
            ensure((p - 1.0).abs() < 1e-9, || format!("member {x}#{y} accepts {p}"))?;
        } else {
            let t = collisions(&primes, x, y) as f64;
            let law = (t / 8.0).powi(2);
            ensure((p - law).abs() < 1e-9, || format!("{x}#{y}: {p} vs {law}"))?;
            if *p > max_non.0 + 1e-12 {
                max_non = (*p, vec![(x.clone(), y.clone())]);
            } else if (*p - max_non.0).abs() <= 1e-12 {
                max_non.1.push((x.clone(), y.clone()));
            }
        }
    }
    ensure((max_non.0 - 1.0 / 16.0).abs() < 1e-9, || format!("max nonmember {}", max_non.0))?;
    for (x, y) in &max_non.1 {
        let d = value(x).abs_diff(value(&rev(y)));
        ensure(d == 15, || format!("maximizer {x}#{y} has difference {d}"))?;
    }
    Ok(format!(
        "256 words, max nonmember {:.12} on {} pairs at difference 15",
        max_non.0,
        max_non.1.len()
    ))
}

fn linear_law() -> Outcome {
    let primes = trial_primes(8);
    let set = PrimeSet::from_primes(primes.clone()).map_err(err)?;
    let q = build_m0q::<f64>(&set).map_err(err)?;
    let c = build_m0p::<f64>(&set).map_err(err)?;
    let mut worst_square = 0.0f64;
    for (x, y) in all_pairs(4) {
        let w = parse_word(&format!("{x}#{y}")).unwrap();
        let pc = c.run(&w).map_err(err)?.p_accept;
        let pq = q.run(&w).map_err(err)?.p_accept;
        if x != rev(&y) {
            let law = collisions(&primes, &x, &y) as f64 / 8.0;
            ensure((pc - law).abs() < 1e-12, || format!("{x}#{y}: {pc} vs {law}"))?;
        } else {
            ensure((pc - 1.0).abs() < 1e-12, || format!("member {x}#{y} accepts {pc}"))?;
        }
        worst_square = worst_square.max((pq - pc * pc).abs());
    }
    ensure(worst_square < 1e-9, || format!("square relation off by {worst_square}"))?;
    Ok(format!("256 words, max |p_q - p_c^2| = {worst_square:.3e}"))
}

fn state_count() -> Outcome {
    for count in 1..=10 {
        let primes = trial_primes(count);
        let m = build_m0q::<f64>(&odd_primes(count)).map_err(err)?;
        let expect = 1 + 3 * primes.iter().sum::<u64>();
        ensure(m.num_states() as u64 == expect, || {
            format!("N={count}: {} states, formula {expect}", m.num_states())
        })?;
    }
    Ok("N = 1..10 match 1 + 3 sum p_k".into())
}

fn wellformedness() -> Outcome {
    let mut checked = 0;
    for count in 1..=8 {
        let ps = odd_primes(count);
        for report in [
            check_wellformed(&build_m0q::<f64>(&ps).map_err(err)?),
            check_wellformed(&build_m0p::<f64>(&ps).map_err(err)?),
        ] {
            ensure(report.is_ok(), || format!("m0 N={count}: {:?}", report.violations.first()))?;
            checked += 1;
        }
    }
    for n1 in 1..=4 {
        for n2 in 1..=4 {
            let p = M1Params::new(n1, n2);
            let reports = [
                check_wellformed(&build_m1q::<f64>(&p).map_err(err)?),
                check_wellformed(&build_m1p::<f64>(&p).map_err(err)?),
                check_wellformed(&build_m2q::<f64>(&p, true).map_err(err)?),
                check_wellformed(&build_m2p::<f64>(&p, true).map_err(err)?),
            ];
            for r in reports {
                ensure(r.is_ok(), || format!("({n1},{n2}): {:?}", r.violations.first()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} machines, zero violations"))
}

fn reversibility() -> Outcome {
    let mut cases = 0;
    for p in (3..=101).filter(|&p| is_prime(p)) {
        for b in 0..=1u8 {
            for j in 0..p {
                let f = forward_div_step(p, j, b);
                ensure(f == (2 * j + b as u64) % p, || format!("forward({p},{j},{b})"))?;
                ensure(reverse_div_step(p, f, b) == j, || format!("reverse({p},{f},{b})"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} residue/bit cases"))
}

fn block_bounds(runs: &[BlockRun]) -> Outcome {
    // N0(4) = 2, N0(8) = 3, N1 = 4, N2 = 9
    let r: f64 = 2.0 / 4.0;
    let s: f64 = 3.0 / 9.0;
    let lower = r * r + (1.0 - r * r).powi(2);
    let upper = r * r + (1.0 - r * r) * (s + r).powi(2);
    let (mut first, mut second, mut none) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for run in runs {
        let segs: Vec<&str> = run.word.split('#').collect();
        let (w1, w2, w3, w4) = (segs[0], segs[1], segs[3], segs[4]);
        let class = if w1 == rev(w2) {
            first = first.min(run.p_accept);
            BlockClass::First
        } else if format!("{w1}{w2}") == rev(&format!("{w3}{w4}")) {
            second = second.min(run.p_accept);
            BlockClass::Second
        } else {
            none = none.max(run.p_accept);
            BlockClass::Neither
        };
        ensure(class == run.class, || format!("class mismatch on {}", run.word))?;
    }
    ensure(first >= 1.0 - 1e-9, || format!("first path min {first}"))?;
    ensure(second >= lower - 1e-9, || format!("second path min {second} < {lower}"))?;
    ensure(none <= upper + 1e-9, || format!("nonmember max {none} > {upper}"))?;
    Ok(format!(
        "{} words; first >= {first:.12}, second >= {second:.12} (bound {lower:.6}), nonmember <= {none:.12} (bound {upper:.6})",
        runs.len()
    ))
}

fn split_inequalities(sweeps: &[(u32, Vec<BlockRun>)]) -> Outcome {
    let (mut c5, mut c6) = (0, 0);
    for (n, runs) in sweeps {
        for run in runs {
            match lemma5_report(&run.split, &run.word) {
                Ok(rep) => {
                    c5 += 1;
                    let psi1_4 = run.split.psi1_sq.powi(2);
                    ensure(run.split.replay >= psi1_4 - 1e-9 && rep.pass, || {
                        format!("certain-acceptance bound fails on n={n} {}", run.word)
                    })?;
                }
                Err(Error::Inapplicable(_)) => {}
                Err(e) => return Err(e.to_string()),
            }
            let rep = lemma6_report(&run.split, None, &run.word).map_err(err)?;
            let s = &run.split;
            let bound = s.psi1_sq * (s.control.sqrt() * s.psi1_sq.sqrt() + s.psi2_sq.sqrt()).powi(2);
            ensure(s.replay <= bound + 1e-9 && rep.pass, || format!("bounded-acceptance bound fails on n={n} {}", run.word))?;
            c6 += 1;
        }
    }
    Ok(format!("{c5} certain-acceptance cases, {c6} bounded cases, n = 2..4"))
}

fn iterated_recognition() -> Outcome {
    let params = theorem1_params(4, 1.0, 3).map_err(err)?;
    let m = build_m2q::<f64>(&params, true).map_err(err)?;
    let mut corpus = Vec::new();
    for (kind, seed) in [
        (InstanceKind::Member, 101),
        (InstanceKind::Nonmember, 202),
        (InstanceKind::Adversarial, 303),
    ] {
        corpus.extend(gen_instances(4, 4, kind, 200, seed).map_err(err)?);
    }
    let results: Vec<(bool, f64)> = corpus
        .par_iter()
        .map(|w| {
            let p = m.run(&parse_word(w.raw()).unwrap()).unwrap().p_accept;
            (in_l2(w.raw(), 4, 4), p)
        })
        .collect();
    let (mut members, mut nonmembers) = (0, 0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for ((member, p), w) in results.iter().zip(&corpus) {
        if *member {
            members += 1;
            lo = lo.min(*p);
        } else {
            nonmembers += 1;
            hi = hi.max(*p);
        }
        ensure(*member == (*p > 0.5), || format!("{w}: member={member}, p={p}"))?;
    }
    ensure(members >= 200 && nonmembers >= 200, || "corpus too small".into())?;
    Ok(format!(
        "N1={} N2={}, {} states; {members} members >= {lo:.6}, {nonmembers} nonmembers <= {hi:.6}",
        params.n1(),
        params.n2(),
        m.num_states()
    ))
}

fn loop_accumulation() -> Outcome {
    let mut config = ExperimentConfig::new(ExperimentId::Theorem2);
    config.n = 4;
    config.c = 1.0;
    config.a = 4.0;
    config.k = Some(8);
    let rows = run_experiment(&config).map_err(err)?;
    ensure(rows.iter().all(|r| r.n1 == Some(2)), || "N1 should be ceil(2*4/4) = 2".into())?;
    if let Some(bad) = rows.iter().find(|r| !r.pass) {
        return Err(format!("{}: observed {} vs [{:?}, {:?}]", bad.case, bad.observed, bad.predicted_lo, bad.predicted_hi));
    }
    // an independent check on a block agreeing on exactly one modulus
    let m = build_m2p::<f64>(&M1Params::new(2, 9), true).map_err(err)?;
    let block = "0000#1100##0011#0000#"; // 0 vs 3: divisible by 3 only
    let mut last = 0.0;
    for k in 1..=8 {
        let word = vec![block; k].join("##");
        let p = m.run(&parse_word(&word).unwrap()).map_err(err)?.p_accept;
        let expect = 1.0 - 0.5f64.powi(k as i32);
        ensure((p - expect).abs() < 1e-6, || format!("k={k}: {p} vs {expect}"))?;
        last = p;
    }
    ensure(last > 0.6, || format!("k=8 acceptance {last}"))?;
    let top = rows
        .iter()
        .filter(|r| r.case.ends_with("exceeds 0.6"))
        .map(|r| r.observed)
        .fold(0.0, f64::max);
    Ok(format!("{} rows within 1e-6; k=8 acceptance {last:.6} (rate 1/2), {top:.6} (adversarial)", rows.len()))
}

fn determinism() -> Outcome {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let mut buf = Vec::new();
        for id in [ExperimentId::Lemma3, ExperimentId::Theorem1] {
            let mut config = ExperimentConfig::new(id);
            config.seed = 7;
            config.count = 20;
            let rows = run_experiment(&config).map_err(err)?;
            write_reports_csv(&mut buf, &rows).map_err(err)?;
        }
        outputs.push(buf);
    }
    ensure(outputs[0] == outputs[1], || "CSV output differs between runs".into())?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() -> ExitCode {
    let mut sweeps: Vec<(u32, Vec<BlockRun>)> = Vec::new();
    let mut sweep_error = None;
    for n in 2..=4 {
        match lemma7_params(n, 3).and_then(|p| block_sweep(n, &p)) {
            Ok(runs) => sweeps.push((n, runs)),
            Err(e) => sweep_error = Some(e.to_string()),
        }
    }
    let sweep_failed = || Err(sweep_error.clone().unwrap_or_else(|| "sweep missing".into()));
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 quadratic acceptance law", Box::new(quadratic_law)),
        ("2 linear law and square relation", Box::new(linear_law)),
        ("3 state-count formula", Box::new(state_count)),
        ("4 well-formedness", Box::new(wellformedness)),
        ("5 reversibility", Box::new(reversibility)),
        (
            "6 block machine bounds",
            Box::new(|| match sweeps.iter().find(|(n, _)| *n == 4) {
                Some((_, runs)) => block_bounds(runs),
                None => sweep_failed(),
            }),
        ),
        (
            "7 split-state inequalities",
            Box::new(|| if sweeps.len() == 3 { split_inequalities(&sweeps) } else { sweep_failed() }),
        ),
        ("8 iterated recognition", Box::new(iterated_recognition)),
        ("9 classical accumulation", Box::new(loop_accumulation)),
        ("10 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
