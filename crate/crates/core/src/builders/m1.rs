//! The two-check block machine and its iterated form.
//!
//! Branch `(k, l)` pairs a register `e` modulo `p_k` (from the first prime
//! set) with a register `f` modulo `p_l` (from the second). Over a block
//! `w1 # w2 ## w3 # w4 #`:
//!
//! | stage | input | `e` map  | `f` map  |
//! |-------|-------|----------|----------|
//! | 1     | `w1`  | forward  | forward  |
//! | 2     | `w2`  | reverse  | forward  |
//! | 4     | `w3`  | forward  | reverse  |
//! | 5     | `w4`  | reverse  | reverse  |
//!
//! Between stages 2 and 4 (the `##`), zero-`e` branches are Fourier-gathered
//! onto `s[N1,0,p_l,f]`, which accept (`w1 = w2^R`), and the non-gathered
//! remainder is sent back through the inverse transform. Stages 4 and 5 undo
//! stages 2 and 1 when `w3 w4 = (w1 w2)^R`, returning every surviving branch
//! to `e = f = 0`. The trailing `#` gathers over `l` onto `t[p_k,0,N2]` and
//! the final symbol gathers over `k` onto `t[N1]`.
//!
//! The iterated machine keys the last gathering on `#` as well, makes
//! `t[N1]` non-halting and sends it on the next `#` back into the opening
//! split, so a following block starts from a single state.

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use super::FourierBlock;
use crate::automata::{Automaton, AutomatonBuilder, StateId, StateKind, Symbol};
use crate::error::{Error, Result};
use crate::number_theory::{forward_div_step, max_common_primes, odd_primes, reverse_div_step, PrimeSet};
use crate::scalar::{Emulation, Real};

/// Prime sets of the block machine: `primes1` fingerprints `w1` against
/// `w2^R`, `primes2` fingerprints `w1 w2` against `(w3 w4)^R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct M1Params {
    pub primes1: PrimeSet,
    pub primes2: PrimeSet,
}

impl M1Params {
    pub fn new(n1: usize, n2: usize) -> Self {
        M1Params {
            primes1: odd_primes(n1),
            primes2: odd_primes(n2),
        }
    }

    pub fn n1(&self) -> usize {
        self.primes1.count()
    }

    pub fn n2(&self) -> usize {
        self.primes2.count()
    }
}

/// Block length `n`, exponent `c`, multiplier `d` and scaling constant `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub n: u32,
    pub c: f64,
    pub d: usize,
    pub a: f64,
}

impl TheoremParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || !(self.c >= 0.0) || self.d < 1 {
            return Err(Error::InvalidParameter(format!(
                "need n >= 1, c >= 0, d >= 1; got n={}, c={}, d={}",
                self.n, self.c, self.d
            )));
        }
        Ok(())
    }

    /// Number of blocks `k = n^c`, rounded up.
    pub fn iterations(&self) -> usize {
        ceil_count((self.n as f64).powf(self.c))
    }
}

/// `ceil` that ignores floating noise just above an integer.
fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(1.0) as usize
}

fn collision_counts(n: u32) -> Result<(usize, usize)> {
    let n0 = max_common_primes(n)?.n0;
    let n0p = max_common_primes(2 * n)?.n0;
    Ok((n0, n0p))
}

/// `N1 = 2 N0 n^(c/2)`, `N2 = d N0'` (with `N1, N2 >= 1`).
pub fn theorem1_params(n: u32, c: f64, d: usize) -> Result<M1Params> {
    TheoremParams { n, c, d, a: 1.0 }.validate()?;
    let (n0, n0p) = collision_counts(n)?;
    let n1 = ceil_count(2.0 * n0 as f64 * (n as f64).powf(c / 2.0));
    Ok(M1Params::new(n1, (d * n0p).max(1)))
}

/// `N1 = N0 sqrt(n)`, `N2 = d N0'`.
pub fn lemma7_params(n: u32, d: usize) -> Result<M1Params> {
    TheoremParams { n, c: 0.0, d, a: 1.0 }.validate()?;
    let (n0, n0p) = collision_counts(n)?;
    let n1 = ceil_count(n0 as f64 * (n as f64).sqrt());
    Ok(M1Params::new(n1, (d * n0p).max(1)))
}

/// `N1 = N0 n^c / a`, `N2 = d N0'`.
pub fn theorem2_params(n: u32, c: f64, a: f64, d: usize) -> Result<M1Params> {
    TheoremParams { n, c, d, a }.validate()?;
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("need a > 0, got {a}")));
    }
    let (n0, n0p) = collision_counts(n)?;
    let n1 = ceil_count(n0 as f64 * (n as f64).powf(c) / a);
    Ok(M1Params::new(n1, (d * n0p).max(1)))
}

/// Residue-register grid of one stage: `ids[k][l][e * p_l + f]`.
struct Grid {
    ids: Vec<Vec<Vec<StateId>>>,
}

impl Grid {
    fn id(&self, k: usize, l: usize, pl: u64, e: u64, f: u64) -> StateId {
        self.ids[k][l][(e * pl + f) as usize]
    }
}

fn reg_name(pk: u64, e: u64, pl: u64, f: u64, suffix: Option<&str>) -> String {
    match suffix {
        Some(s) => format!("q[{pk},{e},{pl},{f},{s}]"),
        None => format!("q[{pk},{e},{pl},{f}]"),
    }
}

pub fn build_m1<W: Emulation>(params: &M1Params, looped: bool) -> Result<Automaton<W>> {
    let (ps1, ps2) = (&params.primes1, &params.primes2);
    if ps1.is_empty() || ps2.is_empty() {
        return Err(Error::EmptyPrimeSet);
    }
    let n1 = ps1.count();
    let n2 = ps2.count();
    let mut b = AutomatonBuilder::<W>::new();
    let q0 = b.add_state("q0", StateKind::NonHalting);
    b.set_initial(q0);

    let grid = |b: &mut AutomatonBuilder<W>,
                    suffix: Option<&str>,
                    kind: StateKind,
                    keep: &dyn Fn(u64, u64) -> bool|
     -> Grid {
        let ids = ps1
            .iter()
            .map(|pk| {
                ps2.iter()
                    .map(|pl| {
                        let mut cell = Vec::with_capacity((pk * pl) as usize);
                        for e in 0..pk {
                            for f in 0..pl {
                                cell.push(if keep(e, f) {
                                    b.add_state(reg_name(pk, e, pl, f, suffix), kind)
                                } else {
                                    usize::MAX
                                });
                            }
                        }
                        cell
                    })
                    .collect()
            })
            .collect();
        Grid { ids }
    };
    let all = |_: u64, _: u64| true;
    let stage1 = grid(&mut b, Some("1"), StateKind::NonHalting, &all);
    let stage2 = grid(&mut b, Some("2"), StateKind::NonHalting, &all);

    // s[m,0,p_l,f]: ids[l][f][m-1]
    let mut gathered: Vec<Vec<Vec<StateId>>> = Vec::with_capacity(n2);
    for pl in ps2.iter() {
        let mut per_f = Vec::with_capacity(pl as usize);
        for f in 0..pl {
            per_f.push(
                (1..=n1)
                    .map(|m| {
                        let kind = if m == n1 {
                            StateKind::Accepting
                        } else {
                            StateKind::NonHalting
                        };
                        b.add_state(format!("s[{m},0,{pl},{f}]"), kind)
                    })
                    .collect(),
            );
        }
        gathered.push(per_f);
    }

    let nonzero_e = |e: u64, _: u64| e != 0;
    let parked = grid(&mut b, None, StateKind::NonHalting, &nonzero_e);
    let stage3 = grid(&mut b, Some("3"), StateKind::NonHalting, &all);
    let stage4 = grid(&mut b, Some("4"), StateKind::NonHalting, &all);
    let not_origin = |e: u64, f: u64| e != 0 || f != 0;
    let rejected = grid(&mut b, Some("rej"), StateKind::Rejecting, &not_origin);

    // t[p_k,0,y]: ids[k][y-1]
    let collected: Vec<Vec<StateId>> = ps1
        .iter()
        .map(|pk| {
            (1..=n2)
                .map(|y| {
                    let kind = if y == n2 {
                        StateKind::NonHalting
                    } else {
                        StateKind::Rejecting
                    };
                    b.add_state(format!("t[{pk},0,{y}]"), kind)
                })
                .collect()
        })
        .collect();
    let last_kind = if looped {
        StateKind::NonHalting
    } else {
        StateKind::Accepting
    };
    let finals: Vec<StateId> = (1..=n1)
        .map(|z| {
            let kind = if z == n1 { last_kind } else { StateKind::Rejecting };
            b.add_state(format!("t[{z}]"), kind)
        })
        .collect();

    let split_column = || -> Vec<(StateId, W)> {
        let w = W::uniform(n1 * n2);
        let mut col = Vec::with_capacity(n1 * n2);
        for k in 0..n1 {
            for (l, pl) in ps2.iter().enumerate() {
                col.push((stage1.id(k, l, pl, 0, 0), w.clone()));
            }
        }
        col
    };
    b.set_column(Symbol::LeftEnd, q0, split_column());

    let unit = W::unit;
    let gather1 = FourierBlock::forward(n1);
    let scatter1 = FourierBlock::inverse(n1);
    let gather2 = FourierBlock::forward(n2);

    for (k, pk) in ps1.iter().enumerate() {
        for (l, pl) in ps2.iter().enumerate() {
            for e in 0..pk {
                for f in 0..pl {
                    for bit in 0..=1u8 {
                        let s = Symbol::bit(bit);
                        let (fe, re) = (forward_div_step(pk, e, bit), reverse_div_step(pk, e, bit));
                        let (ff, rf) = (forward_div_step(pl, f, bit), reverse_div_step(pl, f, bit));
                        b.set_column(s, stage1.id(k, l, pl, e, f), vec![(stage1.id(k, l, pl, fe, ff), unit())]);
                        b.set_column(s, stage2.id(k, l, pl, e, f), vec![(stage2.id(k, l, pl, re, ff), unit())]);
                        b.set_column(s, stage3.id(k, l, pl, e, f), vec![(stage3.id(k, l, pl, fe, rf), unit())]);
                        b.set_column(s, stage4.id(k, l, pl, e, f), vec![(stage4.id(k, l, pl, re, rf), unit())]);
                    }
                    b.set_column(
                        Symbol::Sharp,
                        stage1.id(k, l, pl, e, f),
                        vec![(stage2.id(k, l, pl, e, f), unit())],
                    );
                    let after_w2 = if e == 0 {
                        W::gather(gather1, k + 1)
                            .into_iter()
                            .map(|(m, w)| (gathered[l][f as usize][m - 1], w))
                            .collect()
                    } else {
                        let p = parked.id(k, l, pl, e, f);
                        b.set_column(Symbol::Sharp, p, vec![(stage3.id(k, l, pl, e, f), unit())]);
                        vec![(p, unit())]
                    };
                    b.set_column(Symbol::Sharp, stage2.id(k, l, pl, e, f), after_w2);
                    b.set_column(
                        Symbol::Sharp,
                        stage3.id(k, l, pl, e, f),
                        vec![(stage4.id(k, l, pl, e, f), unit())],
                    );
                    let after_w4 = if e == 0 && f == 0 {
                        W::gather(gather2, l + 1)
                            .into_iter()
                            .map(|(y, w)| (collected[k][y - 1], w))
                            .collect()
                    } else {
                        let r = rejected.id(k, l, pl, e, f);
                        if looped {
                            b.set_column(Symbol::RightEnd, stage4.id(k, l, pl, e, f), vec![(r, unit())]);
                        }
                        vec![(r, unit())]
                    };
                    b.set_column(Symbol::Sharp, stage4.id(k, l, pl, e, f), after_w4);
                }
            }
        }
    }

    // inverse transform of the non-gathered remainder, s[m,..] -> q[p_r,0,..,3]
    for (l, pl) in ps2.iter().enumerate() {
        for f in 0..pl {
            for m in 1..=n1 {
                let col = W::gather(scatter1, m)
                    .into_iter()
                    .map(|(r, w)| (stage3.id(r - 1, l, pl, 0, f), w))
                    .collect();
                b.set_column(Symbol::Sharp, gathered[l][f as usize][m - 1], col);
            }
        }
    }

    for k in 0..n1 {
        let col: Vec<(StateId, W)> = W::gather(gather1, k + 1)
            .into_iter()
            .map(|(z, w)| (finals[z - 1], w))
            .collect();
        let source = collected[k][n2 - 1];
        if looped {
            b.set_column(Symbol::Sharp, source, col.clone());
        }
        b.set_column(Symbol::RightEnd, source, col);
    }
    if looped {
        b.set_column(Symbol::Sharp, finals[n1 - 1], split_column());
    }
    Ok(b.build())
}

/// Quantum block machine.
pub fn build_m1q<T: Real + Float + FloatConst>(params: &M1Params) -> Result<Automaton<Complex<T>>> {
    build_m1(params, false)
}

/// Probabilistic emulation of the block machine.
pub fn build_m1p<T: Real>(params: &M1Params) -> Result<Automaton<T>> {
    build_m1(params, false)
}

/// Iterated quantum machine; `looped = false` gives [`build_m1q`].
pub fn build_m2q<T: Real + Float + FloatConst>(
    params: &M1Params,
    looped: bool,
) -> Result<Automaton<Complex<T>>> {
    build_m1(params, looped)
}

/// Iterated probabilistic machine; `looped = false` gives [`build_m1p`].
pub fn build_m2p<T: Real>(params: &M1Params, looped: bool) -> Result<Automaton<T>> {
    build_m1(params, looped)
}
