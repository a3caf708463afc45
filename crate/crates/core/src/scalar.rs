//! Scalar abstractions.
//!
//! Automata are generic over their transition weight. A classical machine
//! carries a [`Real`] weight directly; a quantum machine carries a
//! `Complex<T>` amplitude whose observation probability is `|a|^2`. Both are
//! unified under [`Weight`], so the stepping engine, the well-formedness
//! checks and the builders are written once.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Probability rule a weight type follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Amplitudes; probability is the squared modulus.
    Quantum,
    /// Probabilities; mass is the weight itself.
    Classical,
}

/// Real scalar used for probabilities and classical transition weights.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Tolerance for probability-level checks (column sums, conservation).
    const PROB_TOL: f64;
    /// Tolerance for amplitude-level checks when this is the component type
    /// of a complex amplitude.
    const AMP_TOL: f64;

    fn from_ratio(num: u64, den: u64) -> Self;

    /// Nearest representable value; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }
}

impl Real for f64 {
    const PROB_TOL: f64 = 1e-12;
    const AMP_TOL: f64 = 1e-9;

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
}

impl Real for f32 {
    const PROB_TOL: f64 = 1e-5;
    const AMP_TOL: f64 = 1e-4;

    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x as f32)
    }
}

impl Real for BigRational {
    const PROB_TOL: f64 = 0.0;
    const AMP_TOL: f64 = 0.0;

    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
}

impl Real for Rational64 {
    const PROB_TOL: f64 = 0.0;
    const AMP_TOL: f64 = 0.0;

    fn from_ratio(num: u64, den: u64) -> Self {
        Rational64::new(num as i64, den as i64)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational64::approximate_float(x)
    }
}

/// Transition weight of an automaton: a classical probability or a quantum
/// amplitude.
pub trait Weight:
    Clone + Debug + PartialEq + Zero + Add<Output = Self> + Mul<Output = Self> + Send + Sync + 'static
{
    type Real: Real;
    const MODEL: Model;

    /// Probability carried by a state holding this weight.
    fn mass(&self) -> Self::Real;

    /// `conj(self) * other`; the summand of an inner product.
    fn inner(&self, other: &Self) -> Self;

    fn modulus(&self) -> f64;

    /// `(re, im)` as doubles for serialization.
    fn parts(&self) -> (f64, f64);

    fn from_parts(re: f64, im: f64) -> Option<Self>;

    fn from_real(r: Self::Real) -> Self;

    /// Default tolerance for well-formedness and conservation checks.
    fn tolerance() -> f64;

    /// Whether the value is a legal transition entry for this model.
    fn is_admissible(&self) -> bool;
}

impl<R: Real> Weight for R {
    type Real = R;
    const MODEL: Model = Model::Classical;

    fn mass(&self) -> R {
        self.clone()
    }

    fn inner(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn modulus(&self) -> f64 {
        self.as_f64().abs()
    }

    fn parts(&self) -> (f64, f64) {
        (self.as_f64(), 0.0)
    }

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        if im != 0.0 {
            return None;
        }
        R::from_f64(re)
    }

    fn from_real(r: R) -> Self {
        r
    }

    fn tolerance() -> f64 {
        R::PROB_TOL
    }

    fn is_admissible(&self) -> bool {
        *self >= R::zero() && *self <= R::one()
    }
}

impl<T: Real + Float> Weight for Complex<T> {
    type Real = T;
    const MODEL: Model = Model::Quantum;

    fn mass(&self) -> T {
        self.norm_sqr()
    }

    fn inner(&self, other: &Self) -> Self {
        self.conj() * other
    }

    fn modulus(&self) -> f64 {
        self.norm().as_f64()
    }

    fn parts(&self) -> (f64, f64) {
        (self.re.as_f64(), self.im.as_f64())
    }

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex::new(T::from_f64(re)?, T::from_f64(im)?))
    }

    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }

    fn tolerance() -> f64 {
        T::AMP_TOL
    }

    fn is_admissible(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Weight types the machine builders can target.
///
/// A quantum weight realises uniform splits as `1/sqrt(n)` amplitudes and
/// gathering blocks as discrete Fourier transforms; a classical weight
/// realises them as `1/n` probabilities and deterministic jumps. This is the
/// emulation relation between the two families of machines.
pub trait Emulation: Weight {
    /// Weight of every branch of a uniform split into `n` branches.
    fn uniform(n: usize) -> Self;

    /// Unit weight of a deterministic transition.
    fn unit() -> Self;

    /// Row `k` of the gathering block, as `(target index, weight)` pairs with
    /// 1-based target indices.
    fn gather(block: crate::builders::FourierBlock, k: usize) -> Vec<(usize, Self)>;
}

impl<R: Real> Emulation for R {
    fn uniform(n: usize) -> Self {
        R::from_ratio(1, n as u64)
    }

    fn unit() -> Self {
        R::one()
    }

    fn gather(block: crate::builders::FourierBlock, k: usize) -> Vec<(usize, Self)> {
        if block.is_inverse() {
            vec![(k, R::one())]
        } else {
            vec![(block.size(), R::one())]
        }
    }
}

impl<T: Real + Float + FloatConst> Emulation for Complex<T> {
    fn uniform(n: usize) -> Self {
        let n = T::from(n).expect("branch count representable");
        Complex::new(n.sqrt().recip(), T::zero())
    }

    fn unit() -> Self {
        Complex::new(T::one(), T::zero())
    }

    fn gather(block: crate::builders::FourierBlock, k: usize) -> Vec<(usize, Self)> {
        (1..=block.size())
            .map(|l| (l, block.amplitude::<T>(k, l)))
            .collect()
    }
}
