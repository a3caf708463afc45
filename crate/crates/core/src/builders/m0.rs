//! The single-pair equality machine.
//!
//! Reading `¢` splits into one branch per prime. Branch `k` computes
//! `w1 mod p_k` by long division, `#` moves the residue to a second register,
//! and `w2` is read through the inverse division map so the branch lands on
//! residue 0 exactly when `w1 = w2^R (mod p_k)`. On `$` the zero-residue
//! branches are gathered onto the accepting state `s_N`; every other residue
//! is rejected.

use num_complex::Complex;
use num_traits::{Float, FloatConst};

use super::FourierBlock;
use crate::automata::{Automaton, AutomatonBuilder, StateId, StateKind, Symbol};
use crate::error::{Error, Result};
use crate::number_theory::{forward_div_step, reverse_div_step, PrimeSet};
use crate::scalar::{Emulation, Real};

pub(crate) fn name_q(p: u64, j: u64, register: &str) -> String {
    format!("q[{p},{j},{register}]")
}

pub fn build_m0<W: Emulation>(primes: &PrimeSet) -> Result<Automaton<W>> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeSet);
    }
    let n = primes.count();
    let mut b = AutomatonBuilder::<W>::new();
    let q0 = b.add_state("q0", StateKind::NonHalting);
    b.set_initial(q0);

    // register[k][j] for phase 1 and phase 2; rej[k][j] for j >= 1
    let mut phase1: Vec<Vec<StateId>> = Vec::with_capacity(n);
    let mut phase2: Vec<Vec<StateId>> = Vec::with_capacity(n);
    let mut rej: Vec<Vec<StateId>> = Vec::with_capacity(n);
    for p in primes.iter() {
        phase1.push(
            (0..p)
                .map(|j| b.add_state(name_q(p, j, "1"), StateKind::NonHalting))
                .collect(),
        );
    }
    for p in primes.iter() {
        phase2.push(
            (0..p)
                .map(|j| b.add_state(name_q(p, j, "2"), StateKind::NonHalting))
                .collect(),
        );
    }
    for p in primes.iter() {
        rej.push(
            (1..p)
                .map(|j| b.add_state(name_q(p, j, "rej"), StateKind::Rejecting))
                .collect(),
        );
    }
    let sink: Vec<StateId> = (1..=n)
        .map(|l| {
            let kind = if l == n {
                StateKind::Accepting
            } else {
                StateKind::Rejecting
            };
            b.add_state(format!("s[{l}]"), kind)
        })
        .collect();

    let split = W::uniform(n);
    b.set_column(
        Symbol::LeftEnd,
        q0,
        phase1.iter().map(|reg| (reg[0], split.clone())).collect(),
    );

    let gather = FourierBlock::forward(n);
    for (k, p) in primes.iter().enumerate() {
        for j in 0..p {
            let ju = j as usize;
            for bit in 0..=1u8 {
                let s = Symbol::bit(bit);
                let fwd = forward_div_step(p, j, bit) as usize;
                b.set_column(s, phase1[k][ju], vec![(phase1[k][fwd], W::unit())]);
                let rev = reverse_div_step(p, j, bit) as usize;
                b.set_column(s, phase2[k][ju], vec![(phase2[k][rev], W::unit())]);
            }
            b.set_column(Symbol::Sharp, phase1[k][ju], vec![(phase2[k][ju], W::unit())]);
            let end = if j == 0 {
                W::gather(gather, k + 1)
                    .into_iter()
                    .map(|(l, w)| (sink[l - 1], w))
                    .collect()
            } else {
                vec![(rej[k][ju - 1], W::unit())]
            };
            b.set_column(Symbol::RightEnd, phase2[k][ju], end);
        }
    }
    Ok(b.build())
}

/// Quantum equality machine with Fourier gathering on `$`.
pub fn build_m0q<T: Real + Float + FloatConst>(primes: &PrimeSet) -> Result<Automaton<Complex<T>>> {
    build_m0(primes)
}

/// Probabilistic emulation: `1/N` split and deterministic jumps to `s_N`.
pub fn build_m0p<T: Real>(primes: &PrimeSet) -> Result<Automaton<T>> {
    build_m0(primes)
}
