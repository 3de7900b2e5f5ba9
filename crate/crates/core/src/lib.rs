//! A desk-scale laboratory for noisy random circuit sampling.
//!
//! The crate covers the whole pipeline from a seeded random circuit to a
//! fidelity estimate:
//!
//! * [`circuit`] generates layered random circuits and serializes them.
//! * [`simulator`] evolves a dense statevector and samples bitstrings.
//! * [`noise`] implements the toy bit-flip channels, the readout/gate
//!   decomposition and a Pauli error-injecting trajectory sampler.
//! * [`walsh`] holds the Fourier–Walsh transform, noise attenuation,
//!   low-degree truncation and the noise-stability correlation.
//! * [`xeb`] contains the linear cross-entropy estimator and its relatives
//!   (bias-corrected, maximum likelihood, product-formula prediction).
//! * [`matching`] has the randomized determinant matching test and the
//!   semi-matching sampler with its counting oracle.
//!
//! Bitstrings are stored as `u64` indices into a `2^n` array. Qubit `0` is
//! the most significant bit, so the index order is the lexicographic order
//! of the bitstring written with qubit `0` leftmost. Walsh subset masks use
//! the same bit positions.

pub mod circuit;
pub mod error;
pub mod matching;
pub mod noise;
pub mod rng;
pub mod simulator;
pub mod stats;
pub mod walsh;
pub mod xeb;

pub use error::{Error, Result};

/// Largest qubit count the dense simulator and the explicit-distribution
/// routines accept.
pub const SIMULATION_QUBIT_CAP: usize = 24;

/// Bit mask of qubit `q` inside an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n: usize, q: usize) -> u64 {
    1u64 << (n - 1 - q)
}

/// Formats basis index `x` as an `n`-character bitstring, qubit 0 first.
pub fn bitstring(n: usize, x: u64) -> String {
    (0..n)
        .map(|q| if x & qubit_mask(n, q) != 0 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring written with qubit 0 first.
pub fn parse_bitstring(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    let mut x = 0u64;
    for c in s.chars() {
        x <<= 1;
        match c {
            '0' => {}
            '1' => x |= 1,
            _ => return None,
        }
    }
    Some(x)
}
