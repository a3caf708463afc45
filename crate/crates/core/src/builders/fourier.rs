use num_complex::Complex;
use num_traits::{Float, FloatConst};

/// An `N`-point discrete Fourier transform used to gather equal amplitudes
/// into one designated state.
///
/// Row `k` maps to `exp(sign * 2 pi i k l / N) / sqrt(N)` on target `l`, with
/// 1-based `k, l`. Target `N` receives phase 1 from every row, which is where
/// amplitudes interfere constructively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourierBlock {
    size: usize,
    inverse: bool,
}

impl FourierBlock {
    pub fn forward(size: usize) -> Self {
        assert!(size > 0, "Fourier block of size zero");
        FourierBlock {
            size,
            inverse: false,
        }
    }

    pub fn inverse(size: usize) -> Self {
        FourierBlock {
            inverse: true,
            ..Self::forward(size)
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn sign(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Entry `(k, l)`. The phase is evaluated from `(k * l) mod N` directly.
    pub fn amplitude<T: Float + FloatConst>(&self, k: usize, l: usize) -> Complex<T> {
        let n = self.size;
        let r = (k % n) * (l % n) % n;
        let cast = |x: usize| T::from(x).expect("index representable");
        let mut angle = T::TAU() * cast(r) / cast(n);
        if self.inverse {
            angle = -angle;
        }
        Complex::from_polar(cast(n).sqrt().recip(), angle)
    }
}
