use std::path::Path;
use std::process::{Command, Output};

fn qfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfa"))
        .args(args)
        .output()
        .expect("spawn qfa")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build(dir: &Path, machine: &str, extra: &[&str]) -> String {
    let path = dir.join(format!("{machine}.json"));
    let path = path.to_str().unwrap().to_string();
    let mut args = vec!["build", machine, "--out", &path];
    args.extend_from_slice(extra);
    let o = qfa(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn p_accept(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix("p_accept "))
        .expect("p_accept line")
        .parse()
        .unwrap()
}

#[test]
fn build_reports_counts_and_writes_a_loadable_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let o = qfa(&["build", "m0p", "--primes", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    // 1 + sum over p of 3p, with p = 3, 5
    assert!(stdout(&o).contains("states: 25"), "{}", stdout(&o));
    let dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(dump["num_states"], 25);
}

#[test]
fn run_separates_members_from_nonmembers() {
    let dir = tempfile::tempdir().unwrap();
    let spec = build(dir.path(), "m0q", &["--primes", "3"]);
    let yes = qfa(&["run", &spec, "0110#0110"]);
    let no = qfa(&["run", &spec, "0110#0111"]);
    assert!(yes.status.success() && no.status.success());
    assert!((p_accept(&stdout(&yes)) - 1.0).abs() < 1e-9);
    assert!(p_accept(&stdout(&no)) < 0.5);
    let line = stdout(&yes).lines().next().unwrap().to_string();
    assert_eq!(line.split('.').nth(1).unwrap().len(), 12);
}

#[test]
fn verify_accepts_built_machines() {
    let dir = tempfile::tempdir().unwrap();
    for (machine, extra) in [
        ("m1q", &["--n1", "2", "--n2", "2"][..]),
        ("m1p", &["--n1", "2", "--n2", "2"][..]),
        ("m2q", &["--n1", "2", "--n2", "3"][..]),
        ("m2p", &["--n1", "2", "--n2", "3", "--no-loop"][..]),
    ] {
        let spec = build(dir.path(), machine, extra);
        let o = qfa(&["verify", &spec]);
        assert_eq!(o.status.code(), Some(0), "{machine}: {}", stdout(&o));
        assert!(stdout(&o).contains("ok"));
    }
}

#[test]
fn verify_flags_a_broken_column() {
    let dir = tempfile::tempdir().unwrap();
    let spec = build(dir.path(), "m0p", &["--primes", "1"]);
    let mut dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&spec).unwrap()).unwrap();
    dump["columns"]["0"][0]["re"] = serde_json::json!(0.5);
    std::fs::write(&spec, dump.to_string()).unwrap();
    let o = qfa(&["verify", &spec]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn corpus_rows_keep_going_after_a_bad_word() {
    let dir = tempfile::tempdir().unwrap();
    let spec = build(dir.path(), "m0p", &["--primes", "2"]);
    let corpus = dir.path().join("c.txt");
    std::fs::write(&corpus, "% n=2\n01#10\n0#0#0\n01#01\n").unwrap();
    let o = qfa(&["corpus", &spec, corpus.to_str().unwrap(), "--language", "l0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["word", "p_accept", "p_reject", "p_residual", "oracle_member", "decision", "error"]
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][4], "true");
    assert_eq!(&rows[0][5], "true");
    // a second # reaches a state with no column
    assert!(rows[1][1].is_empty() && rows[1][5].is_empty());
    assert!(rows[1][6].contains("no column"), "{:?}", rows[1]);
    assert_eq!(&rows[2][4], "false");
    assert_eq!(&rows[2][5], "false");
    assert!(rows[0][6].is_empty() && rows[2][6].is_empty());
}

#[test]
fn gen_is_reproducible_and_matches_the_oracle() {
    let a = qfa(&["gen", "--n", "3", "--k", "2", "--kind", "nonmember", "--count", "20", "--seed", "9"]);
    let b = qfa(&["gen", "--n", "3", "--k", "2", "--kind", "nonmember", "--count", "20", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let words: Vec<String> = stdout(&a)
        .lines()
        .filter(|l| !l.starts_with('%'))
        .map(String::from)
        .collect();
    assert_eq!(words.len(), 20);
    assert!(words.iter().all(|w| !qfa_core::languages::in_l2(w, 3, 2)));
}

#[test]
fn experiment_writes_both_formats_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = qfa(&["experiment", "lemma3", "--n", "3", "--primes", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv_text = std::fs::read_to_string(&out).unwrap();
    assert!(csv_text.starts_with("experiment,case,"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), csv_text.lines().count() - 1);
}

#[test]
fn validation_errors_exit_with_one() {
    assert_eq!(qfa(&["build", "m0q"]).status.code(), Some(1));
    assert_eq!(qfa(&["build", "m0q", "--primes", "0"]).status.code(), Some(1));
    assert_eq!(qfa(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qfa(&["experiment", "nope"]).status.code(), Some(1));
    assert_eq!(qfa(&["run", "/nonexistent.json", "0#0"]).status.code(), Some(1));
    assert_eq!(qfa(&["--help"]).status.code(), Some(0));
}

#[test]
fn two_prime_equality_machine_prints_exact_extremes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = build(dir.path(), "m0q", &["--primes", "2"]);
    assert!(stdout(&qfa(&["run", &spec, "11#11"])).contains("p_accept 1.000000000000"));
    assert!(stdout(&qfa(&["run", &spec, "01#01"])).contains("p_accept 0.000000000000"));
    assert_eq!(qfa(&["run", &spec, "1x#11"]).status.code(), Some(1));
}

#[test]
fn empty_corpus_gives_a_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = build(dir.path(), "m0p", &["--primes", "1"]);
    let corpus = dir.path().join("empty.txt");
    std::fs::write(&corpus, "% n=2\n").unwrap();
    let o = qfa(&["corpus", &spec, corpus.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "word,p_accept,p_reject,p_residual,oracle_member,decision,error\n");
}

#[test]
fn experiments_are_byte_reproducible() {
    for args in [
        &["experiment", "theorem2", "--n", "4", "--c", "1", "--a", "4", "--k", "4"][..],
        &["experiment", "states", "--machine", "m0", "--max-primes", "10", "--format", "json"][..],
    ] {
        let a = qfa(args);
        let b = qfa(args);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
}
