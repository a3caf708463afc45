//! Membership oracles for the three equality languages, instance
//! generators, and the corpus file format.
//!
//! Words use ASCII `#` for the separator; `♯` is accepted on input and
//! normalized. Shapes are exact: every `w` has length exactly `n`.
//!
//! * `L0(n)`: `w # w^R`.
//! * `L1(n)`: `w1 # w2 ## w3 # w4 #` with `w1 = w2^R` or `w1 w2 = (w3 w4)^R`.
//! * `L2(n, k)`: `k` such blocks joined by `##`, accepted when some block `j`
//!   has `w_j1 = w_j2^R` and every earlier block satisfies the second
//!   condition.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_theory::{max_common_primes, odd_divisor_counts};

fn normalize(word: &str) -> String {
    word.replace('♯', "#")
}

fn is_bits(s: &str, n: usize) -> bool {
    s.len() == n && s.bytes().all(|b| b == b'0' || b == b'1')
}

pub fn reversed(s: &str) -> String {
    s.chars().rev().collect()
}

/// `bits` of `value`, most significant first, padded to `n`.
pub fn to_bits(value: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn bits_value(bits: &str) -> u64 {
    bits.bytes().fold(0, |acc, b| (acc << 1) | (b - b'0') as u64)
}

/// The four words of one block `w1 # w2 ## w3 # w4 #`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub w1: String,
    pub w2: String,
    pub w3: String,
    pub w4: String,
}

impl Block {
    pub fn new(w1: impl Into<String>, w2: impl Into<String>, w3: impl Into<String>, w4: impl Into<String>) -> Self {
        Block {
            w1: w1.into(),
            w2: w2.into(),
            w3: w3.into(),
            w4: w4.into(),
        }
    }

    /// `w1 = w2^R`.
    pub fn first_holds(&self) -> bool {
        self.w1 == reversed(&self.w2)
    }

    /// `w1 w2 = (w3 w4)^R`.
    pub fn second_holds(&self) -> bool {
        format!("{}{}", self.w1, self.w2) == reversed(&format!("{}{}", self.w3, self.w4))
    }

    fn render(&self) -> String {
        format!("{}#{}##{}#{}#", self.w1, self.w2, self.w3, self.w4)
    }
}

/// A word of block shape together with its parsed blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockString {
    raw: String,
    n: usize,
    blocks: Vec<Block>,
}

impl BlockString {
    pub fn from_blocks(n: usize, blocks: Vec<Block>) -> Self {
        assert!(
            blocks.iter().all(|b| [&b.w1, &b.w2, &b.w3, &b.w4].iter().all(|w| is_bits(w, n))),
            "block words must have length {n}"
        );
        let raw = blocks.iter().map(Block::render).collect::<Vec<_>>().join("##");
        BlockString { raw, n, blocks }
    }

    /// Exact parse of a `k`-block word; `None` if the shape is wrong.
    pub fn parse(word: &str, n: usize, k: usize) -> Option<Self> {
        if k == 0 {
            return None;
        }
        let raw = normalize(word);
        let segs: Vec<&str> = raw.split('#').collect();
        if segs.len() != 7 * k - 1 {
            return None;
        }
        let mut blocks = Vec::with_capacity(k);
        for i in 0..k {
            let base = 7 * i;
            let words = [segs[base], segs[base + 1], segs[base + 3], segs[base + 4]];
            if !words.iter().all(|w| is_bits(w, n)) {
                return None;
            }
            let mut gaps = vec![segs[base + 2], segs[base + 5]];
            if i + 1 < k {
                gaps.push(segs[base + 6]);
            }
            if gaps.iter().any(|g| !g.is_empty()) {
                return None;
            }
            blocks.push(Block::new(words[0], words[1], words[2], words[3]));
        }
        Some(BlockString { raw, n, blocks })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The `L2` condition on the parsed blocks.
    pub fn is_member(&self) -> bool {
        for b in &self.blocks {
            if b.first_holds() {
                return true;
            }
            if !b.second_holds() {
                return false;
            }
        }
        false
    }
}

impl fmt::Display for BlockString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

pub fn in_l0(word: &str, n: usize) -> bool {
    let raw = normalize(word);
    match raw.split_once('#') {
        Some((x, y)) => is_bits(x, n) && is_bits(y, n) && x == reversed(y),
        None => false,
    }
}

pub fn in_l1(word: &str, n: usize) -> bool {
    BlockString::parse(word, n, 1).is_some_and(|b| {
        let b = &b.blocks[0];
        b.first_holds() || b.second_holds()
    })
}

pub fn in_l2(word: &str, n: usize, k: usize) -> bool {
    BlockString::parse(word, n, k).is_some_and(|b| b.is_member())
}

/// A language together with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    L0 { n: usize },
    L1 { n: usize },
    L2 { n: usize, k: usize },
}

impl Language {
    pub fn contains(&self, word: &str) -> bool {
        match *self {
            Language::L0 { n } => in_l0(word, n),
            Language::L1 { n } => in_l1(word, n),
            Language::L2 { n, k } => in_l2(word, n, k),
        }
    }

    /// Whether the word has the language's exact shape.
    pub fn has_shape(&self, word: &str) -> bool {
        match *self {
            Language::L0 { n } => {
                let raw = normalize(word);
                raw.split_once('#').is_some_and(|(x, y)| is_bits(x, n) && is_bits(y, n))
            }
            Language::L1 { n } => BlockString::parse(word, n, 1).is_some(),
            Language::L2 { n, k } => BlockString::parse(word, n, k).is_some(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Member,
    Nonmember,
    /// Nonmembers whose mismatched pairs differ by the collision witness,
    /// so they agree on as many prime moduli as possible.
    Adversarial,
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "member" => Ok(InstanceKind::Member),
            "nonmember" => Ok(InstanceKind::Nonmember),
            "adversarial" => Ok(InstanceKind::Adversarial),
            _ => Err(Error::InvalidParameter(format!("unknown instance kind {s:?}"))),
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::Member => "member",
            InstanceKind::Nonmember => "nonmember",
            InstanceKind::Adversarial => "adversarial",
        })
    }
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> String {
    (0..n).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect()
}

fn random_block(rng: &mut ChaCha8Rng, n: usize) -> Block {
    Block::new(
        random_bits(rng, n),
        random_bits(rng, n),
        random_bits(rng, n),
        random_bits(rng, n),
    )
}

/// Block continuing the prefix: second condition holds, first fails.
fn passing_block(rng: &mut ChaCha8Rng, n: usize) -> Block {
    let w1 = random_bits(rng, n);
    let mut w2 = random_bits(rng, n);
    while w1 == reversed(&w2) {
        w2 = random_bits(rng, n);
    }
    closing_block(w1, w2)
}

/// Block with `w3 w4 = (w1 w2)^R`.
pub fn closing_block(w1: String, w2: String) -> Block {
    let tail = reversed(&format!("{w1}{w2}"));
    let (w3, w4) = tail.split_at(w1.len());
    Block::new(w1.clone(), w2.clone(), w3, w4)
}

/// Block failing both conditions.
fn failing_block(rng: &mut ChaCha8Rng, n: usize) -> Block {
    loop {
        let b = random_block(rng, n);
        if !b.first_holds() && !b.second_holds() {
            return b;
        }
    }
}

/// Pair `(w1, w2)` with `|val(w1) - val(w2^R)| = d`, or `None` if `d >= 2^n`.
fn pair_at_distance(rng: &mut ChaCha8Rng, n: usize, d: u64) -> Option<(String, String)> {
    let top = 1u64 << n;
    if d == 0 || d >= top {
        return None;
    }
    let x = rng.gen_range(0..top - d);
    let (a, b) = if rng.gen::<bool>() { (x, x + d) } else { (x + d, x) };
    Some((to_bits(a, n), reversed(&to_bits(b, n))))
}

struct Adversary {
    n: usize,
    witness: u64,
    /// Odd prime divisor counts of differences below `2^(2n)`.
    omega2: Vec<u8>,
}

impl Adversary {
    fn new(n: usize) -> Result<Self> {
        let bits = u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("n={n}")))?;
        let witness = max_common_primes(bits)?.witness;
        max_common_primes(2 * bits)?;
        Ok(Adversary {
            n,
            witness,
            omega2: odd_divisor_counts(2 * bits),
        })
    }

    fn passing(&self, rng: &mut ChaCha8Rng) -> Block {
        let (w1, w2) = pair_at_distance(rng, self.n, self.witness).expect("witness below 2^n");
        closing_block(w1, w2)
    }

    /// Mismatch on both checks; the second one at the feasible difference
    /// with the most odd prime divisors (ties broken at random).
    fn failing(&self, rng: &mut ChaCha8Rng) -> Block {
        let n = self.n;
        let (w1, w2) = pair_at_distance(rng, n, self.witness).expect("witness below 2^n");
        let x = bits_value(&format!("{w1}{w2}"));
        let top = 1u64 << (2 * n);
        let omega = |y: u64| self.omega2[x.abs_diff(y) as usize];
        let best = (0..top).filter(|&y| y != x).map(omega).max().expect("2n >= 2");
        let ties: Vec<u64> = (0..top).filter(|&y| y != x && omega(y) == best).collect();
        let y = ties[rng.gen_range(0..ties.len())];
        let tail = reversed(&to_bits(y, 2 * n));
        let (w3, w4) = tail.split_at(n);
        Block::new(w1, w2, w3, w4)
    }
}

/// Seeded `k`-block instances of the requested kind.
///
/// Members place the first satisfied block at a uniformly chosen position
/// behind a prefix of passing blocks; nonmembers place a failing block the
/// same way. Adversarial instances are nonmembers built from collision
/// witnesses at bit lengths `n` and `2n`.
pub fn gen_instances(
    n: usize,
    k: usize,
    kind: InstanceKind,
    count: usize,
    seed: u64,
) -> Result<Vec<BlockString>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n == 0 && kind != InstanceKind::Member {
        return Err(Error::InvalidParameter(
            "every word of block length 0 is a member".into(),
        ));
    }
    let adversary = match kind {
        InstanceKind::Adversarial => Some(Adversary::new(n)?),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let pivot = rng.gen_range(0..k);
        let mut blocks = Vec::with_capacity(k);
        for i in 0..k {
            let block = match (&adversary, i.cmp(&pivot)) {
                (Some(adv), std::cmp::Ordering::Less) => adv.passing(&mut rng),
                (Some(adv), std::cmp::Ordering::Equal) => adv.failing(&mut rng),
                (None, std::cmp::Ordering::Less) => passing_block(&mut rng, n),
                (None, std::cmp::Ordering::Equal) => match kind {
                    InstanceKind::Member => {
                        let w2 = random_bits(&mut rng, n);
                        let mut b = random_block(&mut rng, n);
                        b.w1 = reversed(&w2);
                        b.w2 = w2;
                        b
                    }
                    _ => failing_block(&mut rng, n),
                },
                (_, std::cmp::Ordering::Greater) => random_block(&mut rng, n),
            };
            blocks.push(block);
        }
        let word = BlockString::from_blocks(n, blocks);
        debug_assert_eq!(word.is_member(), kind == InstanceKind::Member);
        out.push(word);
    }
    Ok(out)
}

/// All words `x # y` with `|x| = |y| = n`, in lexicographic order of `(x, y)`.
pub fn exhaustive_l0(n: usize) -> Vec<String> {
    let top = 1u64 << n;
    (0..top)
        .flat_map(|x| (0..top).map(move |y| format!("{}#{}", to_bits(x, n), to_bits(y, n))))
        .collect()
}

/// All single-block words of block length `n` (`2^(4n)` of them).
pub fn exhaustive_l1(n: usize) -> Vec<BlockString> {
    let top = 1u64 << (4 * n);
    (0..top)
        .map(|v| {
            let all = to_bits(v, 4 * n);
            let (a, rest) = all.split_at(n);
            let (b, rest) = rest.split_at(n);
            let (c, d) = rest.split_at(n);
            BlockString::from_blocks(n, vec![Block::new(a, b, c, d)])
        })
        .collect()
}

/// `L0` nonmembers `x # y` whose fingerprints agree on the most moduli:
/// `|val(x) - val(y^R)|` equals the collision witness for `n`.
pub fn adversarial_l0(n: usize) -> Result<Vec<String>> {
    let adv = Adversary::new(n)?;
    let top = 1u64 << n;
    let mut out = Vec::new();
    for x in 0..top {
        for z in [x.checked_add(adv.witness), x.checked_sub(adv.witness)].into_iter().flatten() {
            if z < top {
                out.push(format!("{}#{}", to_bits(x, n), reversed(&to_bits(z, n))));
            }
        }
    }
    Ok(out)
}

/// Metadata recorded in a corpus header.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusHeader {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub kind: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub header: CorpusHeader,
    pub words: Vec<String>,
}

/// Writes a corpus: `%` header lines (`#` is part of the alphabet), then one
/// word per line.
pub fn write_corpus<W: Write>(mut out: W, header: &CorpusHeader, words: &[String]) -> Result<()> {
    let fields = [
        header.n.map(|v| format!("n={v}")),
        header.k.map(|v| format!("k={v}")),
        header.kind.as_ref().map(|v| format!("kind={v}")),
        header.seed.map(|v| format!("seed={v}")),
    ];
    for f in fields.into_iter().flatten() {
        writeln!(out, "% {f}")?;
    }
    for w in words {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

pub fn read_corpus<R: BufRead>(input: R) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('%') {
            for token in meta.split_whitespace() {
                let Some((key, value)) = token.split_once('=') else { continue };
                let bad = || Error::InvalidParameter(format!("corpus header {token:?}"));
                let h = &mut corpus.header;
                match key {
                    "n" => h.n = Some(value.parse().map_err(|_| bad())?),
                    "k" => h.k = Some(value.parse().map_err(|_| bad())?),
                    "kind" => h.kind = Some(value.to_string()),
                    "seed" => h.seed = Some(value.parse().map_err(|_| bad())?),
                    _ => {}
                }
            }
            continue;
        }
        let word = normalize(line);
        if let Some((position, ch)) = word.chars().enumerate().find(|(_, c)| !matches!(c, '0' | '1' | '#')) {
            return Err(Error::Format {
                ch,
                position,
                context: "corpus word",
            });
        }
        corpus.words.push(word);
    }
    Ok(corpus)
}
