//! Dual-code Metropolis walks for preparing Krawtchouk-weighted code states,
//! with exact small-instance oracles, bounded-distance decoding baselines and
//! the experiment drivers that reproduce the weight-spectrum studies.

pub mod bits;
pub mod code;
pub mod decode;
pub mod error;
pub mod experiments;
pub mod krawtchouk;
pub mod logval;
pub mod oracle;
pub mod rng;
pub mod spectrum;
pub mod walk;

pub use bits::{BitMatrix, BitVector};
pub use code::{CodePair, GeneratorMatrix};
pub use error::{Error, Result};
