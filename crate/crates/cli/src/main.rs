use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qfa_core::analysis::{write_reports_csv, write_reports_json};
use qfa_core::automata::{check_wellformed, parse_word, AnyAutomaton, Automaton, Symbol};
use qfa_core::builders::{
    build_m0p, build_m0q, build_m1p, build_m1q, build_m2p, build_m2q, lemma7_params,
    theorem1_params, M1Params,
};
use qfa_core::experiments::{all_pass, run_experiment, CountMachine, ExperimentConfig, ExperimentId};
use qfa_core::languages::{
    exhaustive_l0, exhaustive_l1, gen_instances, read_corpus, write_corpus, CorpusHeader,
    InstanceKind, Language,
};
use qfa_core::number_theory::odd_primes;
use qfa_core::{Real, Weight};


/// Exit status for a completed run whose checks did not all pass.
const ASSERTION_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "qfa", version, about = "Build and simulate fingerprinting quantum and probabilistic automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a machine and write its JSON dump.
    Build(BuildArgs),
    /// Run one word on a dumped machine.
    Run {
        spec: PathBuf,
        /// Word over 0, 1 and #; endmarkers are added automatically.
        word: String,
    },
    /// Run every word of a corpus file and emit CSV.
    Corpus(CorpusArgs),
    /// Check that a dumped machine's columns are orthonormal (or stochastic).
    Verify { spec: PathBuf },
    /// Reproduce an experiment as a table of bound checks.
    Experiment(ExperimentArgs),
    /// Generate a corpus file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MachineId {
    M0q,
    M0p,
    M1q,
    M1p,
    M2q,
    M2p,
}

#[derive(Args)]
struct BuildArgs {
    machine: MachineId,
    /// Number of primes of the equality machine.
    #[arg(long)]
    primes: Option<usize>,
    /// Prime counts of the block machines.
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Derive the block-machine prime counts from the block length instead.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Build the iterated machine without its restart transition.
    #[arg(long)]
    no_loop: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LanguageId {
    L0,
    L1,
    L2,
}

#[derive(Args)]
struct CorpusArgs {
    spec: PathBuf,
    corpus: PathBuf,
    /// Oracle used for the membership and decision columns.
    #[arg(long, value_enum)]
    language: Option<LanguageId>,
    /// Block length; defaults to the corpus header.
    #[arg(long)]
    n: Option<usize>,
    /// Number of blocks; defaults to the corpus header.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    cutpoint: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ExperimentArgs {
    id: String,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 4.0)]
    a: f64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    primes: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generated instances per kind.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Corpus file to use instead of generated instances.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Machine family of the state-count sweep (m0, m1 or m2).
    #[arg(long, default_value = "m0")]
    machine: String,
    #[arg(long, default_value_t = 10)]
    max_primes: usize,
    #[arg(long, default_value_t = 0.5)]
    cutpoint: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; a second file with the other format is written next to
    /// it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Member,
    Nonmember,
    Adversarial,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Member)]
    kind: KindArg,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit every word of the given shape instead of sampling.
    #[arg(long, value_enum)]
    exhaustive: Option<LanguageId>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_spec(path: &Path) -> Result<AnyAutomaton> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AnyAutomaton::from_json(&text).with_context(|| format!("loading spec {}", path.display()))
}

fn block_params(args: &BuildArgs, iterated: bool) -> Result<M1Params> {
    match (args.n1, args.n2, args.n) {
        (Some(n1), Some(n2), _) => {
            if n1 == 0 || n2 == 0 {
                bail!("--n1 and --n2 must be positive");
            }
            Ok(M1Params::new(n1, n2))
        }
        (None, None, Some(n)) if iterated => Ok(theorem1_params(n, args.c, args.d)?),
        (None, None, Some(n)) => Ok(lemma7_params(n, args.d)?),
        _ => bail!("block machines need --n1 and --n2, or --n"),
    }
}

fn summary<W: Weight>(m: &Automaton<W>) -> String {
    let p = m.partition();
    let mut s = format!(
        "states: {}\naccepting: {}\nrejecting: {}\nnonhalting: {}\n",
        m.num_states(),
        p.accepting.len(),
        p.rejecting.len(),
        p.nonhalting.len()
    );
    for sym in Symbol::ALL {
        s.push_str(&format!("columns {}: {}\n", sym.dump_name(), m.column_count(sym)));
    }
    s
}

fn emit<W: Weight>(m: &Automaton<W>, out: Option<&Path>) -> Result<()> {
    let mut w = open_out(out)?;
    w.write_all(m.to_json()?.as_bytes())?;
    writeln!(w)?;
    w.flush()?;
    let info = summary(m);
    if out.is_some() {
        print!("{info}");
    } else {
        eprint!("{info}");
    }
    Ok(())
}

fn cmd_build(args: &BuildArgs) -> Result<u8> {
    let out = args.out.as_deref();
    match args.machine {
        MachineId::M0q | MachineId::M0p => {
            let count = args.primes.context("equality machines need --primes")?;
            if count == 0 {
                bail!("--primes must be at least 1");
            }
            let ps = odd_primes(count);
            if args.machine == MachineId::M0q {
                emit(&build_m0q::<f64>(&ps)?, out)?;
            } else {
                emit(&build_m0p::<f64>(&ps)?, out)?;
            }
        }
        MachineId::M1q => emit(&build_m1q::<f64>(&block_params(args, false)?)?, out)?,
        MachineId::M1p => emit(&build_m1p::<f64>(&block_params(args, false)?)?, out)?,
        MachineId::M2q => emit(&build_m2q::<f64>(&block_params(args, true)?, !args.no_loop)?, out)?,
        MachineId::M2p => emit(&build_m2p::<f64>(&block_params(args, true)?, !args.no_loop)?, out)?,
    }
    Ok(0)
}

struct Outcome {
    p_accept: f64,
    p_reject: f64,
    p_residual: f64,
}

fn run_any(spec: &AnyAutomaton, word: &str) -> qfa_core::Result<Outcome> {
    fn go<W: Weight>(m: &Automaton<W>, word: &str) -> qfa_core::Result<Outcome> {
        let r = m.run(&parse_word(word)?)?;
        Ok(Outcome {
            p_accept: r.p_accept.as_f64(),
            p_reject: r.p_reject.as_f64(),
            p_residual: r.p_residual.as_f64(),
        })
    }
    match spec {
        AnyAutomaton::Quantum(m) => go(m, word),
        AnyAutomaton::Classical(m) => go(m, word),
    }
}

fn cmd_run(spec: &Path, word: &str) -> Result<u8> {
    let m = load_spec(spec)?;
    let r = run_any(&m, word).with_context(|| format!("running {word:?}"))?;
    println!("p_accept {:.12}", r.p_accept);
    println!("p_reject {:.12}", r.p_reject);
    println!("p_residual {:.12}", r.p_residual);
    Ok(0)
}

#[derive(serde::Serialize)]
struct CorpusRow<'a> {
    word: &'a str,
    p_accept: Option<f64>,
    p_reject: Option<f64>,
    p_residual: Option<f64>,
    oracle_member: Option<bool>,
    decision: Option<bool>,
    error: String,
}

fn cmd_corpus(args: &CorpusArgs) -> Result<u8> {
    if !(args.cutpoint > 0.0 && args.cutpoint < 1.0) {
        bail!("--cutpoint must lie in (0, 1)");
    }
    let m = load_spec(&args.spec)?;
    let file = File::open(&args.corpus).with_context(|| format!("opening {}", args.corpus.display()))?;
    let corpus = read_corpus(BufReader::new(file))?;
    let n = args.n.or(corpus.header.n);
    let language = match args.language {
        None => None,
        Some(id) => {
            let n = n.context("the oracle needs --n or an n= corpus header")?;
            Some(match id {
                LanguageId::L0 => Language::L0 { n },
                LanguageId::L1 => Language::L1 { n },
                LanguageId::L2 => Language::L2 {
                    n,
                    k: args.k.or(corpus.header.k).context("L2 needs --k or a k= header")?,
                },
            })
        }
    };
    let results: Vec<_> = corpus.words.par_iter().map(|w| run_any(&m, w)).collect();
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(open_out(args.out.as_deref())?);
    // header row even for an empty corpus
    out.write_record(["word", "p_accept", "p_reject", "p_residual", "oracle_member", "decision", "error"])?;
    for (word, result) in corpus.words.iter().zip(results) {
        let member = language.map(|l| l.contains(word));
        let row = match result {
            Ok(r) => CorpusRow {
                word,
                p_accept: Some(r.p_accept),
                p_reject: Some(r.p_reject),
                p_residual: Some(r.p_residual),
                oracle_member: member,
                decision: Some(r.p_accept > args.cutpoint),
                error: String::new(),
            },
            Err(e) => CorpusRow {
                word,
                p_accept: None,
                p_reject: None,
                p_residual: None,
                oracle_member: member,
                decision: None,
                error: e.to_string(),
            },
        };
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(0)
}

fn cmd_verify(spec: &Path) -> Result<u8> {
    let m = load_spec(spec)?;
    let report = match &m {
        AnyAutomaton::Quantum(a) => check_wellformed(a),
        AnyAutomaton::Classical(a) => check_wellformed(a),
    };
    println!(
        "model {:?}, {} states, {} columns, {} column pairs, tolerance {:e}",
        m.model(),
        m.num_states(),
        report.columns_checked,
        report.pairs_checked,
        report.tolerance
    );
    for v in &report.violations {
        println!("violation: {v}");
    }
    if report.is_ok() {
        println!("ok");
        Ok(0)
    } else {
        println!("{} violations", report.violations.len());
        Ok(ASSERTION_FAILED)
    }
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<u8> {
    let id: ExperimentId = args.id.parse()?;
    let mut config = ExperimentConfig::new(id);
    config.n = args.n;
    config.c = args.c;
    config.d = args.d;
    config.a = args.a;
    config.k = args.k;
    config.primes = args.primes;
    config.n1 = args.n1;
    config.n2 = args.n2;
    config.seed = args.seed;
    config.count = args.count;
    config.machine = args.machine.parse::<CountMachine>()?;
    config.max_primes = args.max_primes;
    config.cutpoint = args.cutpoint;
    if let Some(path) = &args.corpus {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        config.corpus = Some(read_corpus(BufReader::new(file))?.words);
    }
    config.validate()?;
    let rows = run_experiment(&config)?;
    let write = |format: Format, out: Option<&Path>| -> Result<()> {
        let mut w = open_out(out)?;
        match format {
            Format::Csv => write_reports_csv(&mut w, &rows)?,
            Format::Json => write_reports_json(&mut w, &rows)?,
        }
        w.flush()?;
        Ok(())
    };
    write(args.format, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let (other, ext) = match args.format {
            Format::Csv => (Format::Json, "json"),
            Format::Json => (Format::Csv, "csv"),
        };
        write(other, Some(&out.with_extension(ext)))?;
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    eprintln!("{id}: {passed}/{} rows pass", rows.len());
    Ok(if all_pass(&rows) { 0 } else { ASSERTION_FAILED })
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    if args.exhaustive.is_some() && args.n > 4 {
        bail!("exhaustive corpora are limited to n <= 4");
    }
    let (header, words) = match args.exhaustive {
        Some(LanguageId::L0) => (
            CorpusHeader {
                n: Some(args.n),
                kind: Some("exhaustive-l0".into()),
                ..Default::default()
            },
            exhaustive_l0(args.n),
        ),
        Some(LanguageId::L1) => (
            CorpusHeader {
                n: Some(args.n),
                k: Some(1),
                kind: Some("exhaustive-l1".into()),
                ..Default::default()
            },
            exhaustive_l1(args.n).into_iter().map(|b| b.raw().to_string()).collect(),
        ),
        Some(LanguageId::L2) => bail!("exhaustive generation supports l0 and l1"),
        None => {
            let kind = match args.kind {
                KindArg::Member => InstanceKind::Member,
                KindArg::Nonmember => InstanceKind::Nonmember,
                KindArg::Adversarial => InstanceKind::Adversarial,
            };
            let words = gen_instances(args.n, args.k, kind, args.count, args.seed)?
                .into_iter()
                .map(|b| b.raw().to_string())
                .collect();
            (
                CorpusHeader {
                    n: Some(args.n),
                    k: Some(args.k),
                    kind: Some(kind.to_string()),
                    seed: Some(args.seed),
                },
                words,
            )
        }
    };
    let mut out = open_out(args.out.as_deref())?;
    write_corpus(&mut out, &header, &words)?;
    out.flush()?;
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Run { spec, word } => cmd_run(spec, word),
        Command::Corpus(args) => cmd_corpus(args),
        Command::Verify { spec } => cmd_verify(spec),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
