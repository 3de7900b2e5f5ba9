//! Fidelity estimation.
//!
//! All sample-based estimators work with the rescaled probabilities
//! `w_i = 2^n D(x_i)` of the observed bitstrings under the ideal
//! distribution `D`. Under the mixture `F D + (1 - F) U` the expectation of
//! `w` is `1 + alpha F` with `alpha = 2^n sum_x D(x)^2 - 1`, which is 1 on
//! average over Porter–Thomas circuits but not for any single circuit.

use std::fmt;

use crate::circuit::RandomCircuit;
use crate::error::{Error, Result};
use crate::noise::{success_probability, AveragedRates, NoiseModel};
use crate::simulator::{OutputDistribution, SampleSet};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Xeb,
    V,
    Mle,
    Predicted77,
    Predicted77Avg,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Xeb => "XEB",
            EstimatorKind::V => "V",
            EstimatorKind::Mle => "MLE",
            EstimatorKind::Predicted77 => "PREDICTED_77",
            EstimatorKind::Predicted77Avg => "PREDICTED_77_AVG",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub kind: EstimatorKind,
    /// Zero for predictions.
    pub sample_count: usize,
    /// Set when the MLE sits on the boundary `F = 0` because no sample has
    /// positive ideal probability.
    pub degenerate: bool,
}

impl FidelityEstimate {
    fn predicted(value: f64, kind: EstimatorKind) -> Self {
        FidelityEstimate {
            value,
            standard_error: 0.0,
            kind,
            sample_count: 0,
            degenerate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasConstant {
    pub alpha: f64,
    pub circuit_id: Option<String>,
}

fn scaled_probabilities(samples: &SampleSet, dist: &OutputDistribution) -> Result<Vec<f64>> {
    if samples.n() != dist.n() {
        return Err(Error::Dimension {
            expected: dist.n(),
            found: samples.n(),
        });
    }
    if samples.is_empty() {
        return Err(Error::Parameter("no samples".into()));
    }
    let scale = dist.dim_f64();
    Ok(samples.samples().iter().map(|&x| scale * dist.prob(x)).collect())
}

/// Linear XEB: `2^n mean(D(x_i)) - 1`.
pub fn f_xeb(samples: &SampleSet, dist: &OutputDistribution) -> Result<FidelityEstimate> {
    let w = scaled_probabilities(samples, dist)?;
    let k = w.len();
    Ok(FidelityEstimate {
        value: stats::mean(&w) - 1.0,
        standard_error: (stats::sample_variance(&w) / k as f64).sqrt(),
        kind: EstimatorKind::Xeb,
        sample_count: k,
        degenerate: false,
    })
}

/// `alpha = 2^n sum_x D(x)^2 - 1`.
pub fn alpha(dist: &OutputDistribution) -> BiasConstant {
    BiasConstant {
        alpha: dist.dim_f64() * stats::sum(dist.probs().iter().map(|p| p * p)) - 1.0,
        circuit_id: None,
    }
}

/// XEB divided by `alpha`: exactly unbiased for the mixture at this circuit.
pub fn v_estimator(samples: &SampleSet, dist: &OutputDistribution) -> Result<FidelityEstimate> {
    let a = alpha(dist).alpha;
    if a.abs() < 1e-12 {
        return Err(Error::Undefined("V estimator needs alpha != 0 (uniform ideal distribution)".into()));
    }
    let xeb = f_xeb(samples, dist)?;
    Ok(FidelityEstimate {
        value: xeb.value / a,
        standard_error: xeb.standard_error / a.abs(),
        kind: EstimatorKind::V,
        ..xeb
    })
}

/// Exact expectation of the XEB statistic when samples come from `source`:
/// `2^n sum_x source(x) D(x) - 1`.
pub fn exact_xeb_expectation(source: &OutputDistribution, ideal: &OutputDistribution) -> Result<f64> {
    if source.n() != ideal.n() {
        return Err(Error::Dimension {
            expected: ideal.n(),
            found: source.n(),
        });
    }
    let dot = stats::sum(source.probs().iter().zip(ideal.probs()).map(|(q, p)| q * p));
    Ok(ideal.dim_f64() * dot - 1.0)
}

/// Maximum-likelihood fidelity for the mixture `F D + (1 - F) U`.
///
/// The log-likelihood `sum_i ln(1 + F (w_i - 1))` is concave in `F`, so its
/// derivative is decreasing and bisection on the derivative over `[0, 1]`
/// brackets the maximum. The standard error is the inverse square root of
/// the observed information at the estimate.
pub fn mle_estimator(samples: &SampleSet, dist: &OutputDistribution) -> Result<FidelityEstimate> {
    let w = scaled_probabilities(samples, dist)?;
    let k = w.len();
    if w.iter().all(|&v| v == 0.0) {
        return Ok(FidelityEstimate {
            value: 0.0,
            standard_error: 0.0,
            kind: EstimatorKind::Mle,
            sample_count: k,
            degenerate: true,
        });
    }
    let slope = |f: f64| -> f64 { stats::sum(w.iter().map(|&v| (v - 1.0) / (1.0 + f * (v - 1.0)))) };
    let value = if slope(0.0) <= 0.0 {
        0.0
    } else if w.iter().all(|&v| v > 0.0) && slope(1.0) >= 0.0 {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let info = stats::sum(w.iter().map(|&v| {
        let r = (v - 1.0) / (1.0 + value * (v - 1.0));
        r * r
    }));
    Ok(FidelityEstimate {
        value,
        standard_error: if info > 0.0 { info.sqrt().recip() } else { 0.0 },
        kind: EstimatorKind::Mle,
        sample_count: k,
        degenerate: false,
    })
}

/// Product-formula prediction: every gate and every readout must succeed.
pub fn formula77(model: &NoiseModel, circuit: &RandomCircuit) -> Result<FidelityEstimate> {
    let rates = model.resolve(circuit)?;
    let value = success_probability(&rates.e1) * success_probability(&rates.e2) * success_probability(&rates.eq);
    Ok(FidelityEstimate::predicted(value, EstimatorKind::Predicted77))
}

/// `(1 - e1)^{g1} (1 - e2)^{g2} (1 - eq)^n`.
pub fn formula77_simplified(n: usize, g1: usize, g2: usize, rates: AveragedRates) -> Result<FidelityEstimate> {
    for r in [rates.e1, rates.e2, rates.eq] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!("rate {r} outside [0, 1]")));
        }
    }
    let pow = |e: f64, c: usize| (c as f64 * (-e).ln_1p()).exp();
    let value = pow(rates.e1, g1) * pow(rates.e2, g2) * pow(rates.eq, n);
    Ok(FidelityEstimate::predicted(value, EstimatorKind::Predicted77Avg))
}

/// Rough relative deviation of the product prediction under independent,
/// unbiased 20% errors in the component rates:
/// `0.2 (sqrt(n) 0.038 + sqrt(g1) 0.0016 + sqrt(g2) 0.0063)`.
pub fn formula77_deviation(n: usize, g1: usize, g2: usize) -> f64 {
    0.2 * ((n as f64).sqrt() * 0.038 + (g1 as f64).sqrt() * 0.0016 + (g2 as f64).sqrt() * 0.0063)
}

pub const HISTOGRAM_BINS: usize = 50;
pub const HISTOGRAM_MAX: f64 = 10.0;

/// Empirical density of `w_i = 2^n D(x_i)` with the Exp(1) and size-biased
/// reference densities evaluated at the bin centres.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeBiasedHistogram {
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
    /// Fraction of values at or above the last bin edge.
    pub overflow: f64,
    pub exponential: Vec<f64>,
    pub size_biased: Vec<f64>,
    /// Sorted unbinned values, kept for KS tests.
    pub values: Vec<f64>,
}

impl SizeBiasedHistogram {
    /// KS distance of the unbinned values to `F x e^{-x} + (1 - F) e^{-x}`.
    pub fn ks_to_mixture(&self, fidelity: f64) -> f64 {
        stats::ks_distance_sorted(&self.values, |z| {
            fidelity * stats::size_biased_cdf(z) + (1.0 - fidelity) * stats::exponential_cdf(z)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,empirical_density,exp_density,size_biased_density\n");
        for i in 0..self.centers.len() {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                self.centers[i], self.density[i], self.exponential[i], self.size_biased[i]
            ));
        }
        out.push_str(&format!("overflow,{:e},,\n", self.overflow));
        out
    }
}

pub fn size_biased_histogram(samples: &SampleSet, dist: &OutputDistribution) -> Result<SizeBiasedHistogram> {
    let mut values = scaled_probabilities(samples, dist)?;
    values.sort_by(f64::total_cmp);
    let bin_width = HISTOGRAM_MAX / HISTOGRAM_BINS as f64;
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    let mut overflow = 0usize;
    for &v in &values {
        let b = (v / bin_width) as usize;
        if b < HISTOGRAM_BINS {
            counts[b] += 1;
        } else {
            overflow += 1;
        }
    }
    let k = values.len() as f64;
    let centers: Vec<f64> = (0..HISTOGRAM_BINS).map(|i| (i as f64 + 0.5) * bin_width).collect();
    Ok(SizeBiasedHistogram {
        bin_width,
        density: counts.iter().map(|&c| c as f64 / (k * bin_width)).collect(),
        overflow: overflow as f64 / k,
        exponential: centers.iter().map(|x| (-x).exp()).collect(),
        size_biased: centers.iter().map(|x| x * (-x).exp()).collect(),
        centers,
        values,
    })
}

/// Law-of-total-variance split of grouped data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDecomposition {
    /// `E[var(A | B)]`.
    pub within: f64,
    /// `var(E[A | B])`.
    pub between: f64,
    /// `within + between`.
    pub total: f64,
}

/// Decomposes the pooled population variance of grouped values. Groups are
/// weighted by their size, so `total` equals the population variance of the
/// pooled data for any group sizes.
pub fn total_variance(groups: &[Vec<f64>]) -> Result<VarianceDecomposition> {
    if groups.len() < 2 {
        return Err(Error::Parameter("need at least two groups".into()));
    }
    if let Some(g) = groups.iter().find(|g| g.len() < 2) {
        return Err(Error::Parameter(format!("group of size {} (need >= 2)", g.len())));
    }
    if groups.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite value".into()));
    }
    let count: usize = groups.iter().map(Vec::len).sum();
    let weights: Vec<f64> = groups.iter().map(|g| g.len() as f64 / count as f64).collect();
    let means: Vec<f64> = groups.iter().map(|g| stats::mean(g)).collect();
    let grand = stats::sum(weights.iter().zip(&means).map(|(w, m)| w * m));
    let within = stats::sum(
        groups
            .iter()
            .zip(&weights)
            .map(|(g, w)| w * stats::population_variance(g)),
    );
    let between = stats::sum(weights.iter().zip(&means).map(|(w, m)| w * (m - grand) * (m - grand)));
    Ok(VarianceDecomposition {
        within,
        between,
        total: within + between,
    })
}
