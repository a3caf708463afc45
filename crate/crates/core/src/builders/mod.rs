//! Constructions of the equality machine, the two-check block machine, and
//! the iterated block machine, each in a quantum form and a probabilistic
//! emulation.
//!
//! Every machine is generated from the division step maps and
//! [`FourierBlock`]; the two forms share one generic builder and differ only
//! in how the [`Emulation`](crate::scalar::Emulation) weight realises splits
//! and gathering blocks.

mod fourier;
mod m0;
mod m1;

pub use fourier::FourierBlock;
pub use m0::{build_m0, build_m0p, build_m0q};
pub use m1::{
    build_m1, build_m1p, build_m1q, build_m2p, build_m2q, lemma7_params, theorem1_params,
    theorem2_params, M1Params, TheoremParams,
};
