//! Fourier–Walsh analysis on the Boolean cube.
//!
//! For a subset `S` of the qubits (a bit mask, same bit positions as basis
//! indices) the Walsh character is `W_S(x) = prod_{i in S} (1 - 2 x_i)`,
//! i.e. `(-1)^{popcount(S & x)}`. Spectra use the analysis convention
//! `f^(S) = 2^{-n} sum_x f(x) W_S(x)`, so that `f = sum_S f^(S) W_S` and a
//! probability distribution has `f^(empty) = 2^{-n}`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::simulator::OutputDistribution;
use crate::{stats, SIMULATION_QUBIT_CAP};

/// Which scaling the forward transform applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `f^(S) = 2^{-n} sum_x f(x) W_S(x)`.
    Analysis,
    /// `f^(S) = sum_x f(x) W_S(x)` (no scaling).
    Unnormalized,
}

impl Normalization {
    /// Multiplier turning a raw butterfly output into this convention.
    fn forward_scale(self, n: usize) -> f64 {
        match self {
            Normalization::Analysis => 1.0 / (1u64 << n) as f64,
            Normalization::Unnormalized => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalshSpectrum {
    n: usize,
    coefficients: Vec<f64>,
    normalization: Normalization,
}

impl WalshSpectrum {
    pub fn from_coefficients(n: usize, coefficients: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if n > SIMULATION_QUBIT_CAP {
            return Err(Error::Resource(format!("{n} variables exceeds cap {SIMULATION_QUBIT_CAP}")));
        }
        if coefficients.len() != 1 << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                found: coefficients.len(),
            });
        }
        Ok(WalshSpectrum {
            n,
            coefficients,
            normalization,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, subset: u64) -> f64 {
        self.coefficients[subset as usize]
    }

    /// Same coefficients re-expressed in the analysis convention.
    pub fn to_analysis(&self) -> WalshSpectrum {
        let scale = match self.normalization {
            Normalization::Analysis => 1.0,
            Normalization::Unnormalized => 1.0 / (1u64 << self.n) as f64,
        };
        WalshSpectrum {
            n: self.n,
            coefficients: self.coefficients.iter().map(|c| c * scale).collect(),
            normalization: Normalization::Analysis,
        }
    }

    /// Sum of squared coefficients at each degree `|S| = 0..=n`.
    pub fn weight_by_degree(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coefficients.iter().enumerate() {
            w[degree(s as u64)] += c * c;
        }
        w
    }

    /// Relative Parseval mismatch against the function the spectrum came
    /// from, honouring the spectrum's normalization tag.
    pub fn parseval_error(&self, f: &[f64]) -> f64 {
        let dim = (1u64 << self.n) as f64;
        let energy = stats::sum(self.coefficients.iter().map(|c| c * c));
        let direct = stats::sum(f.iter().map(|v| v * v));
        let expected = match self.normalization {
            Normalization::Analysis => direct / dim,
            Normalization::Unnormalized => direct * dim,
        };
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        (energy - expected).abs() / scale
    }

    /// CSV with columns `subset_mask,degree,coefficient`; masks in hex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subset_mask,degree,coefficient\n");
        for (s, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "{:#x},{},{:e}", s, degree(s as u64), c);
        }
        out
    }
}

/// `|S|`.
#[inline]
pub fn degree(subset: u64) -> usize {
    subset.count_ones() as usize
}

/// `W_S(x)`.
#[inline]
pub fn walsh_character(subset: u64, x: u64) -> f64 {
    if (subset & x).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn butterfly(values: &mut [f64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

fn log2_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::Parameter(format!("length {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    if n > SIMULATION_QUBIT_CAP {
        return Err(Error::Resource(format!("{n} variables exceeds cap {SIMULATION_QUBIT_CAP}")));
    }
    Ok(n)
}

/// Fast Walsh transform in the analysis convention, `O(n 2^n)`.
pub fn walsh_transform(f: &[f64]) -> Result<WalshSpectrum> {
    walsh_transform_with(f, Normalization::Analysis)
}

pub fn walsh_transform_with(f: &[f64], normalization: Normalization) -> Result<WalshSpectrum> {
    let n = log2_len(f.len())?;
    let mut coefficients = f.to_vec();
    butterfly(&mut coefficients);
    let scale = normalization.forward_scale(n);
    if scale != 1.0 {
        coefficients.iter_mut().for_each(|c| *c *= scale);
    }
    Ok(WalshSpectrum {
        n,
        coefficients,
        normalization,
    })
}

/// `f(x) = sum_S f^(S) W_S(x)`, exact inverse of [`walsh_transform_with`].
pub fn inverse_walsh(spectrum: &WalshSpectrum) -> Vec<f64> {
    let mut f = spectrum.coefficients.clone();
    butterfly(&mut f);
    if spectrum.normalization == Normalization::Unnormalized {
        let scale = 1.0 / (1u64 << spectrum.n) as f64;
        f.iter_mut().for_each(|v| *v *= scale);
    }
    f
}

/// Multiplies each coefficient by `(1 - 2t)^{|S|}`, the spectral action of
/// independent bit flips with rate `t`.
pub fn attenuate(spectrum: &WalshSpectrum, t: f64) -> Result<WalshSpectrum> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("flip rate {t} outside [0, 1]")));
    }
    let rho = 1.0 - 2.0 * t;
    let powers: Vec<f64> = (0..=spectrum.n as i32).map(|k| rho.powi(k)).collect();
    let coefficients = spectrum
        .coefficients
        .iter()
        .enumerate()
        .map(|(s, c)| c * powers[degree(s as u64)])
        .collect();
    Ok(WalshSpectrum {
        n: spectrum.n,
        coefficients,
        normalization: spectrum.normalization,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    /// Spectrum with every coefficient above the degree bound set to zero.
    pub spectrum: WalshSpectrum,
    /// Inverse of the truncated spectrum; may have negative entries.
    pub raw: Vec<f64>,
    /// `raw` with negatives clipped to zero and renormalized.
    pub repaired: OutputDistribution,
}

/// Low-degree approximation: keeps `|S| <= d`.
pub fn degree_truncate(spectrum: &WalshSpectrum, d: usize) -> Result<Truncation> {
    if d > spectrum.n {
        return Err(Error::Parameter(format!("degree bound {d} exceeds n = {}", spectrum.n)));
    }
    let coefficients = spectrum
        .coefficients
        .iter()
        .enumerate()
        .map(|(s, &c)| if degree(s as u64) <= d { c } else { 0.0 })
        .collect();
    let truncated = WalshSpectrum {
        n: spectrum.n,
        coefficients,
        normalization: spectrum.normalization,
    };
    let raw = inverse_walsh(&truncated);
    let clipped: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
    let total = stats::sum(clipped.iter().copied());
    if !(total > 0.0) {
        return Err(Error::Undefined("truncated function has no positive mass to renormalize".into()));
    }
    let repaired = OutputDistribution::new(spectrum.n, clipped.into_iter().map(|v| v / total).collect())?;
    Ok(Truncation {
        spectrum: truncated,
        raw,
        repaired,
    })
}

/// Noise-stability correlation of `D` with `N_t(D)`:
/// `sum_{S != 0} D^(S)^2 (1-2t)^{|S|} / sum_{S != 0} D^(S)^2`,
/// which is `cov(D, N_t D) / var(D)` over uniform `x`.
pub fn noise_correlation(dist: &OutputDistribution, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("flip rate {t} outside [0, 1]")));
    }
    let spectrum = walsh_transform(dist.probs())?;
    noise_correlation_from_spectrum(&spectrum, t)
}

pub fn noise_correlation_from_spectrum(spectrum: &WalshSpectrum, t: f64) -> Result<f64> {
    let weights = spectrum.weight_by_degree();
    let total: f64 = weights[1..].iter().sum();
    // Coefficients of a uniform distribution vanish exactly above degree 0;
    // anything this small relative to the constant term is rounding.
    let scale = weights[0].max(f64::MIN_POSITIVE);
    if total <= 1e-24 * scale {
        return Err(Error::Undefined("correlation of a constant distribution".into()));
    }
    let rho = 1.0 - 2.0 * t;
    let num: f64 = weights
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, w)| w * rho.powi(k as i32))
        .sum();
    Ok(num / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_transform(f: &[f64]) -> Vec<f64> {
        let dim = f.len() as u64;
        (0..dim)
            .map(|s| (0..dim).map(|x| f[x as usize] * walsh_character(s, x)).sum::<f64>() / dim as f64)
            .collect()
    }

    #[test]
    fn constant_function() {
        let s = walsh_transform(&[1.0; 8]).unwrap();
        assert_eq!(s.coefficient(0), 1.0);
        assert!(s.coefficients()[1..].iter().all(|&c| c == 0.0));
        assert_eq!(inverse_walsh(&s), vec![1.0; 8]);
    }

    #[test]
    fn single_character() {
        // f(x) = 1 - 2 x_1 with x_1 the leftmost bit.
        let s = walsh_transform(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        assert_eq!(s.coefficients(), &[0.0, 0.0, 1.0, 0.0]);
        let pair = WalshSpectrum::from_coefficients(2, vec![0.0, 0.0, 0.0, 1.0], Normalization::Analysis).unwrap();
        assert_eq!(inverse_walsh(&pair), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn matches_direct_sum() {
        let f = [0.3, -1.2, 4.0, 0.5, 2.25, -0.75, 1.0, 0.125];
        let fast = walsh_transform(&f).unwrap();
        for (a, b) in fast.coefficients().iter().zip(direct_transform(&f)) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(fast.parseval_error(&f) < 1e-10);
    }

    #[test]
    fn unnormalized_convention_round_trips() {
        let f = [0.1, 0.2, 0.3, 0.4];
        let s = walsh_transform_with(&f, Normalization::Unnormalized).unwrap();
        assert!(s.parseval_error(&f) < 1e-12);
        let back = inverse_walsh(&s);
        for (a, b) in back.iter().zip(f) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(s.to_analysis(), walsh_transform(&f).unwrap());
    }

    #[test]
    fn attenuation_extremes() {
        let f = [0.4, 0.1, 0.3, 0.2];
        let s = walsh_transform(&f).unwrap();
        assert_eq!(attenuate(&s, 0.0).unwrap(), s);
        let flat = attenuate(&s, 0.5).unwrap();
        assert!(flat.coefficients()[1..].iter().all(|&c| c == 0.0));
        assert!(attenuate(&s, 1.5).is_err());
    }

    #[test]
    fn truncation_edges() {
        let d = OutputDistribution::new(2, vec![0.4, 0.1, 0.3, 0.2]).unwrap();
        let s = walsh_transform(d.probs()).unwrap();
        let full = degree_truncate(&s, 2).unwrap();
        for (a, b) in full.raw.iter().zip(d.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
        let flat = degree_truncate(&s, 0).unwrap();
        assert_eq!(flat.repaired.probs(), &[0.25; 4]);
        assert!(degree_truncate(&s, 3).is_err());
        let zero = WalshSpectrum::from_coefficients(1, vec![0.0, 1.0], Normalization::Analysis).unwrap();
        assert!(matches!(degree_truncate(&zero, 0), Err(Error::Undefined(_))));
    }

    #[test]
    fn correlation_endpoints() {
        let d = OutputDistribution::new(2, vec![0.4, 0.1, 0.3, 0.2]).unwrap();
        assert_eq!(noise_correlation(&d, 0.0).unwrap(), 1.0);
        assert_eq!(noise_correlation(&d, 0.5).unwrap(), 0.0);
        let u = OutputDistribution::uniform(3).unwrap();
        assert!(matches!(noise_correlation(&u, 0.1), Err(Error::Undefined(_))));
    }

    #[test]
    fn spectrum_csv() {
        let s = walsh_transform(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("subset_mask,degree,coefficient\n0x0,0,0e0\n"));
        assert!(csv.contains("0x2,1,1e0\n"));
    }
}
