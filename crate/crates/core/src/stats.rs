//! Small numeric helpers shared by the estimators and diagnostics.

/// Compensated (Neumaier) summation.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn mean(values: &[f64]) -> f64 {
    sum(values.iter().copied()) / values.len() as f64
}

/// Variance with divisor `len` (population convention).
pub fn population_variance(values: &[f64]) -> f64 {
    let mu = mean(values);
    sum(values.iter().map(|v| (v - mu) * (v - mu))) / values.len() as f64
}

/// Variance with divisor `len - 1`. Zero for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mu = mean(values);
    sum(values.iter().map(|v| (v - mu) * (v - mu))) / (values.len() - 1) as f64
}

/// Kolmogorov–Smirnov distance between the empirical law of `values`
/// (each with equal weight) and a continuous CDF.
pub fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_distance_sorted(&sorted, cdf)
}

pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let len = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &v) in sorted.iter().enumerate() {
        let c = cdf(v);
        let above = (i + 1) as f64 / len - c;
        let below = c - i as f64 / len;
        d = d.max(above).max(below);
    }
    d
}

/// CDF of Exp(1).
pub fn exponential_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else {
        -(-z).exp_m1()
    }
}

/// CDF of the size-biased exponential law with density `z e^{-z}`.
pub fn size_biased_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else {
        1.0 - (1.0 + z) * (-z).exp()
    }
}
