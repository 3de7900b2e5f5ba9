//! Noise channels on explicit distributions and a Pauli error-injecting
//! trajectory sampler.
//!
//! The channels are XOR-convolutions `N(D)(x) = sum_y D(x ^ y) E(y)` with an
//! error law `E` on bitstrings. Up to [`DIRECT_CONVOLUTION_MAX_QUBITS`] the
//! sum is evaluated directly in `O(4^n)`; above it goes through the Walsh
//! transform, where convolution becomes a pointwise product.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use crate::circuit::{gate_counts, Gate, Mat2, RandomCircuit};
use crate::error::{Error, Result};
use crate::rng::{self, Tag};
use crate::simulator::{check_sim_cap, OutputDistribution, Provenance, SampleSet, Sampler, StateVector};
use crate::walsh::{self, walsh_transform};
use crate::{qubit_mask, stats};

pub const DIRECT_CONVOLUTION_MAX_QUBITS: usize = 12;

/// Averaged error rates `(one-qubit gate, two-qubit gate, readout)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedRates {
    pub e1: f64,
    pub e2: f64,
    pub eq: f64,
}

/// Averages reported for the 53-qubit Sycamore experiment.
pub const SYCAMORE_AVERAGES: AveragedRates = AveragedRates {
    e1: 0.0016,
    e2: 0.0062,
    eq: 0.038,
};

/// The same averages as quoted in a second place, with a slightly higher
/// two-qubit rate and lower readout rate.
pub const SYCAMORE_AVERAGES_ALT: AveragedRates = AveragedRates {
    e1: 0.0016,
    e2: 0.0063,
    eq: 0.036,
};

/// Error rates for one class of components: one shared value or one value
/// per component.
#[derive(Debug, Clone, PartialEq)]
pub enum Rates {
    Uniform(f64),
    PerComponent(Vec<f64>),
}

impl Rates {
    fn validate(&self, what: &str) -> Result<()> {
        let ok = |r: f64| (0.0..=1.0).contains(&r);
        let bad = match self {
            Rates::Uniform(r) => (!ok(*r)).then_some(*r),
            Rates::PerComponent(v) => v.iter().copied().find(|&r| !ok(r)),
        };
        match bad {
            Some(r) => Err(Error::Domain(format!("{what} rate {r} outside [0, 1]"))),
            None => Ok(()),
        }
    }

    fn resolve(&self, count: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            Rates::Uniform(r) => Ok(vec![*r; count]),
            Rates::PerComponent(v) if v.len() == count => Ok(v.clone()),
            Rates::PerComponent(v) => Err(Error::Config(format!(
                "{what}: {} rates given for {count} components",
                v.len()
            ))),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Rates::Uniform(r) => *r,
            Rates::PerComponent(v) if v.is_empty() => 0.0,
            Rates::PerComponent(v) => stats::mean(v),
        }
    }
}

impl fmt::Display for Rates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rates::Uniform(r) => write!(f, "{r}"),
            Rates::PerComponent(v) => {
                let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Rates {
    type Err = Error;

    /// A single float is a uniform rate; a comma-separated list (even of
    /// length one, written with a trailing comma) is per-component.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad rate `{v}`")))
        };
        if s.contains(',') {
            let list = s
                .split(',')
                .filter(|v| !v.trim().is_empty())
                .map(parse)
                .collect::<Result<Vec<_>>>()?;
            Ok(Rates::PerComponent(list))
        } else {
            Ok(Rates::Uniform(parse(s)?))
        }
    }
}

/// Per-component error probabilities for gates and readout.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub one_qubit: Rates,
    pub two_qubit: Rates,
    pub readout: Rates,
}

/// A [`NoiseModel`] expanded against a specific circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRates {
    /// One entry per one-qubit gate, in application order.
    pub e1: Vec<f64>,
    /// One entry per two-qubit gate, in application order.
    pub e2: Vec<f64>,
    /// One entry per qubit.
    pub eq: Vec<f64>,
}

impl NoiseModel {
    pub fn averaged(rates: AveragedRates) -> Self {
        NoiseModel {
            one_qubit: Rates::Uniform(rates.e1),
            two_qubit: Rates::Uniform(rates.e2),
            readout: Rates::Uniform(rates.eq),
        }
    }

    pub fn noiseless() -> Self {
        NoiseModel::averaged(AveragedRates { e1: 0.0, e2: 0.0, eq: 0.0 })
    }

    pub fn validate(&self) -> Result<()> {
        self.one_qubit.validate("one-qubit gate")?;
        self.two_qubit.validate("two-qubit gate")?;
        self.readout.validate("readout")
    }

    /// Mean rate of each class.
    pub fn averages(&self) -> AveragedRates {
        AveragedRates {
            e1: self.one_qubit.mean(),
            e2: self.two_qubit.mean(),
            eq: self.readout.mean(),
        }
    }

    pub fn resolve(&self, circuit: &RandomCircuit) -> Result<ResolvedRates> {
        self.validate()?;
        let (g1, g2) = gate_counts(circuit);
        Ok(ResolvedRates {
            e1: self.one_qubit.resolve(g1, "one-qubit gates")?,
            e2: self.two_qubit.resolve(g2, "two-qubit gates")?,
            eq: self.readout.resolve(circuit.n(), "readout")?,
        })
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e1={} e2={} eq={}", self.one_qubit, self.two_qubit, self.readout)
    }
}

/// `prod (1 - e)`.
pub fn success_probability(rates: &[f64]) -> f64 {
    rates.iter().map(|e| 1.0 - e).product()
}

impl ResolvedRates {
    /// Probability that no gate fails.
    pub fn gate_fidelity(&self) -> f64 {
        success_probability(&self.e1) * success_probability(&self.e2)
    }

    /// Probability that no gate fails and no qubit is misread.
    pub fn fidelity(&self) -> f64 {
        self.gate_fidelity() * success_probability(&self.eq)
    }
}

/// Error law for the toy channels.
#[derive(Debug, Clone, PartialEq)]
pub enum ToyChannelSpec {
    /// Independent flips with rate `t` on every bit.
    Flip(f64),
    /// An explicit distribution of error patterns.
    Explicit(OutputDistribution),
    /// `sum_j w_j B_{t_j}` given as `(w_j, t_j)` pairs.
    Mixture(Vec<(f64, f64)>),
}

impl ToyChannelSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            ToyChannelSpec::Flip(t) => check_rate(*t),
            ToyChannelSpec::Explicit(e) if e.n() != n => Err(Error::Dimension {
                expected: n,
                found: e.n(),
            }),
            ToyChannelSpec::Explicit(_) => Ok(()),
            ToyChannelSpec::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::Config("empty mixture".into()));
                }
                for &(w, t) in parts {
                    if !(w >= 0.0) {
                        return Err(Error::Config(format!("negative mixture weight {w}")));
                    }
                    check_rate(t).map_err(|e| Error::Config(e.to_string()))?;
                }
                let total = stats::sum(parts.iter().map(|p| p.0));
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!("mixture weights sum to {total}")));
                }
                Ok(())
            }
        }
    }

    /// `E(y)` for every error pattern `y`.
    pub fn error_law(&self, n: usize) -> Result<Vec<f64>> {
        self.validate(n)?;
        Ok(match self {
            ToyChannelSpec::Flip(t) => binomial_law(n, *t),
            ToyChannelSpec::Explicit(e) => e.probs().to_vec(),
            ToyChannelSpec::Mixture(parts) => {
                let mut law = vec![0.0; 1 << n];
                for &(w, t) in parts {
                    for (acc, b) in law.iter_mut().zip(binomial_law(n, t)) {
                        *acc += w * b;
                    }
                }
                law
            }
        })
    }
}

fn check_rate(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("flip rate {t} outside [0, 1]")))
    }
}

/// `B_t(y) = t^{|y|} (1-t)^{n-|y|}`.
pub fn binomial_law(n: usize, t: f64) -> Vec<f64> {
    let per_weight: Vec<f64> = (0..=n as i32)
        .map(|k| t.powi(k) * (1.0 - t).powi(n as i32 - k))
        .collect();
    (0..1u64 << n).map(|y| per_weight[y.count_ones() as usize]).collect()
}

fn xor_convolve(dist: &[f64], law: &[f64], n: usize) -> Result<Vec<f64>> {
    if n <= DIRECT_CONVOLUTION_MAX_QUBITS {
        let dim = dist.len();
        Ok((0..dim)
            .map(|x| stats::sum((0..dim).map(|y| dist[x ^ y] * law[y])))
            .collect())
    } else {
        let a = walsh_transform(dist)?;
        let b = walsh_transform(law)?;
        let scale = (1u64 << n) as f64;
        let product = a
            .coefficients()
            .iter()
            .zip(b.coefficients())
            .map(|(x, y)| scale * x * y)
            .collect();
        let spec = walsh::WalshSpectrum::from_coefficients(n, product, walsh::Normalization::Analysis)?;
        Ok(walsh::inverse_walsh(&spec))
    }
}

/// `F D + (1 - F) U`.
pub fn mix_with_uniform(dist: &OutputDistribution, fidelity: f64) -> Result<OutputDistribution> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!("fidelity {fidelity} outside [0, 1]")));
    }
    let u = (1.0 - fidelity) / dist.dim_f64();
    OutputDistribution::new(dist.n(), dist.probs().iter().map(|p| fidelity * p + u).collect())
}

/// Independent bit flips with rate `t`.
pub fn bitflip_channel(dist: &OutputDistribution, t: f64) -> Result<OutputDistribution> {
    check_rate(t)?;
    let n = dist.n();
    let out = if n <= DIRECT_CONVOLUTION_MAX_QUBITS {
        xor_convolve(dist.probs(), &binomial_law(n, t), n)?
    } else {
        let spec = walsh::attenuate(&walsh_transform(dist.probs())?, t)?;
        walsh::inverse_walsh(&spec)
    };
    OutputDistribution::new(n, out)
}

pub fn general_channel(dist: &OutputDistribution, spec: &ToyChannelSpec) -> Result<OutputDistribution> {
    let n = dist.n();
    let law = spec.error_law(n)?;
    OutputDistribution::new(n, xor_convolve(dist.probs(), &law, n)?)
}

/// Readout errors with per-qubit flip probabilities `eq`. The `y = 0` term
/// is included, so the output is a full distribution.
pub fn readout_channel(dist: &OutputDistribution, eq: &[f64]) -> Result<OutputDistribution> {
    let n = dist.n();
    if eq.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: eq.len(),
        });
    }
    for &e in eq {
        check_rate(e)?;
    }
    // The product law factorizes, so flip one qubit at a time.
    let mut p = dist.probs().to_vec();
    for (q, &e) in eq.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let mask = qubit_mask(n, q) as usize;
        for block in p.chunks_exact_mut(2 * mask) {
            let (lo, hi) = block.split_at_mut(mask);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (1.0 - e) * x + e * y;
                *b = e * x + (1.0 - e) * y;
            }
        }
    }
    OutputDistribution::new(n, p)
}

/// Mixture weights of the gate/readout split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePartWeights {
    /// No error anywhere.
    pub fidelity: f64,
    /// No gate error (readout errors allowed).
    pub gate_fidelity: f64,
}

pub fn three_part_weights(model: &NoiseModel, circuit: &RandomCircuit) -> Result<ThreePartWeights> {
    let rates = model.resolve(circuit)?;
    Ok(ThreePartWeights {
        fidelity: rates.fidelity(),
        gate_fidelity: rates.gate_fidelity(),
    })
}

/// `F D + (F_g - F) N_RO + (1 - F_g) U`, where `N_RO` is the readout channel
/// conditioned on at least one flip. Equivalently `F_g R(D) + (1 - F_g) U`
/// with `R` the full readout channel.
pub fn three_part_model(
    dist: &OutputDistribution,
    model: &NoiseModel,
    circuit: &RandomCircuit,
) -> Result<OutputDistribution> {
    if dist.n() != circuit.n() {
        return Err(Error::Dimension {
            expected: circuit.n(),
            found: dist.n(),
        });
    }
    let rates = model.resolve(circuit)?;
    let fg = rates.gate_fidelity();
    let readout = readout_channel(dist, &rates.eq)?;
    let u = (1.0 - fg) / dist.dim_f64();
    OutputDistribution::new(dist.n(), readout.probs().iter().map(|p| fg * p + u).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Fault {
    gate: u32,
    /// 1..4 for one-qubit gates, 1..16 for two-qubit gates (`4 * first +
    /// second`, 0 = I, 1 = X, 2 = Y, 3 = Z).
    pauli: u8,
}

fn pauli(index: u8) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match index {
        1 => [[z, one], [one, z]],
        2 => [[z, -i], [i, z]],
        3 => [[one, z], [z, -one]],
        _ => [[one, z], [z, one]],
    }
}

fn apply_fault(state: &mut StateVector, gate: &Gate, fault: u8) {
    match *gate {
        Gate::One { qubit, .. } => state.apply_one(qubit, &pauli(fault)),
        Gate::Two { qubits: (a, b), .. } => {
            let (pa, pb) = (fault / 4, fault % 4);
            if pa != 0 {
                state.apply_one(a, &pauli(pa));
            }
            if pb != 0 {
                state.apply_one(b, &pauli(pb));
            }
        }
    }
}

/// Cap on the amplitudes kept by the per-layer prefix cache.
const PREFIX_CACHE_AMPLITUDES: usize = 1 << 22;

struct Trajectory {
    pattern: usize,
    uniform: f64,
    flips: u64,
}

/// Samples from the circuit under gate and readout noise, one trajectory per
/// sample.
///
/// After every gate `g`, with probability `e_g` a uniformly random
/// non-identity Pauli (3 choices on one qubit, 15 on two) is applied to the
/// gate's qubits. After measurement each bit `q` flips with probability
/// `e_q`. Trajectory `i` takes all its randomness from stream
/// `(seed, Trajectory, i)`.
///
/// Trajectories sharing a fault pattern share a final state, so each
/// distinct pattern is simulated once (starting from the cached ideal
/// state just before its first fault) and its trajectories then draw from
/// that state with their own variates. The result does not depend on the
/// thread count.
pub fn noisy_sampler(circuit: &RandomCircuit, model: &NoiseModel, k: usize, seed: u64) -> Result<SampleSet> {
    let n = circuit.n();
    check_sim_cap(n)?;
    if k == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let rates = model.resolve(circuit)?;

    // Flattened gate list: (layer, gate, rate).
    let mut flat: Vec<(usize, &Gate, f64)> = Vec::new();
    let (mut i1, mut i2) = (0, 0);
    for (li, layer) in circuit.layers().iter().enumerate() {
        for g in &layer.gates {
            let rate = if g.is_two_qubit() {
                i2 += 1;
                rates.e2[i2 - 1]
            } else {
                i1 += 1;
                rates.e1[i1 - 1]
            };
            flat.push((li, g, rate));
        }
    }

    let mut patterns: Vec<Vec<Fault>> = Vec::new();
    let mut lookup: HashMap<Vec<Fault>, usize> = HashMap::new();
    let mut trajectories = Vec::with_capacity(k);
    for i in 0..k {
        let mut rng = rng::stream(seed, Tag::Trajectory, i as u64);
        let mut faults = Vec::new();
        for (gi, &(_, g, rate)) in flat.iter().enumerate() {
            if rng.random::<f64>() < rate {
                let pauli = if g.is_two_qubit() {
                    rng.random_range(1..16u8)
                } else {
                    rng.random_range(1..4u8)
                };
                faults.push(Fault { gate: gi as u32, pauli });
            }
        }
        let uniform = rng.random::<f64>();
        let mut flips = 0u64;
        for (q, &e) in rates.eq.iter().enumerate() {
            if rng.random::<f64>() < e {
                flips |= qubit_mask(n, q);
            }
        }
        let pattern = *lookup.entry(faults).or_insert_with_key(|f| {
            patterns.push(f.clone());
            patterns.len() - 1
        });
        trajectories.push(Trajectory { pattern, uniform, flips });
    }

    let num_layers = circuit.layers().len();
    let prefix: Option<Vec<StateVector>> = ((num_layers + 1) << n <= PREFIX_CACHE_AMPLITUDES).then(|| {
        let mut states = Vec::with_capacity(num_layers + 1);
        let mut sv = StateVector::zero(n).expect("cap checked");
        states.push(sv.clone());
        for layer in circuit.layers() {
            sv.apply_layers(std::slice::from_ref(layer));
            states.push(sv.clone());
        }
        states
    });

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); patterns.len()];
    for (i, t) in trajectories.iter().enumerate() {
        members[t.pattern].push(i);
    }

    let drawn: Vec<Vec<(usize, u64)>> = patterns
        .par_iter()
        .zip(members.par_iter())
        .map(|(faults, idx)| {
            let start_layer = faults.first().map_or(num_layers, |f| flat[f.gate as usize].0);
            let (mut state, first_gate) = match &prefix {
                Some(states) => {
                    let first = flat.iter().position(|&(l, _, _)| l >= start_layer).unwrap_or(flat.len());
                    (states[start_layer].clone(), first)
                }
                None => (StateVector::zero(n).expect("cap checked"), 0),
            };
            let mut next = faults.iter().peekable();
            for (gi, &(_, g, _)) in flat.iter().enumerate().skip(first_gate) {
                state.apply_gate(g);
                while let Some(f) = next.next_if(|f| f.gate as usize == gi) {
                    apply_fault(&mut state, g, f.pauli);
                }
            }
            let sampler = Sampler::new(state.probabilities().probs());
            idx.iter()
                .map(|&i| {
                    let t = &trajectories[i];
                    (i, sampler.index_for(t.uniform) ^ t.flips)
                })
                .collect()
        })
        .collect();

    let mut samples = vec![0u64; k];
    for (i, x) in drawn.into_iter().flatten() {
        samples[i] = x;
    }
    Ok(SampleSet::new(n, samples)?.with_provenance(Provenance {
        circuit_id: Some(circuit.id()),
        noise: Some(model.to_string()),
        seed: Some(seed),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_random_circuit, GateConfig};
    use crate::simulator::simulate;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn skewed(n: usize) -> OutputDistribution {
        let raw: Vec<f64> = (0..1u64 << n).map(|x| 1.0 + ((x * 7919) % 13) as f64).collect();
        let s: f64 = raw.iter().sum();
        OutputDistribution::new(n, raw.into_iter().map(|v| v / s).collect()).unwrap()
    }

    #[test]
    fn mixing_with_uniform() {
        let d = OutputDistribution::point_mass(2, 0).unwrap();
        assert_eq!(mix_with_uniform(&d, 0.5).unwrap().probs(), &[0.625, 0.125, 0.125, 0.125]);
        assert_eq!(mix_with_uniform(&d, 1.0).unwrap(), d);
        assert_eq!(mix_with_uniform(&d, 0.0).unwrap().probs(), &[0.25; 4]);
        assert!(matches!(mix_with_uniform(&d, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn bitflip_basics() {
        let d = OutputDistribution::point_mass(1, 0).unwrap();
        assert!(close(bitflip_channel(&d, 0.1).unwrap().probs(), &[0.9, 0.1], 1e-15));
        let s = skewed(4);
        assert_eq!(bitflip_channel(&s, 0.0).unwrap(), s);
        assert!(close(bitflip_channel(&s, 0.5).unwrap().probs(), &[1.0 / 16.0; 16], 1e-15));
    }

    #[test]
    fn general_channel_cases() {
        let d = skewed(3);
        let id = ToyChannelSpec::Explicit(OutputDistribution::point_mass(3, 0).unwrap());
        assert!(close(general_channel(&d, &id).unwrap().probs(), d.probs(), 1e-15));
        let flip = general_channel(&d, &ToyChannelSpec::Flip(0.2)).unwrap();
        assert!(close(flip.probs(), bitflip_channel(&d, 0.2).unwrap().probs(), 1e-12));
        let mix = general_channel(&d, &ToyChannelSpec::Mixture(vec![(0.5, 0.0), (0.5, 0.5)])).unwrap();
        let expect = mix_with_uniform(&d, 0.5).unwrap();
        assert!(close(mix.probs(), expect.probs(), 1e-12));
        assert!(general_channel(&d, &ToyChannelSpec::Mixture(vec![(0.5, 0.1)])).is_err());
        assert!(general_channel(&d, &ToyChannelSpec::Mixture(vec![(1.5, 0.1), (-0.5, 0.2)])).is_err());
    }

    #[test]
    fn readout_cases() {
        let d = OutputDistribution::point_mass(2, 0).unwrap();
        let r = readout_channel(&d, &[0.1, 0.2]).unwrap();
        assert!(close(r.probs(), &[0.72, 0.18, 0.08, 0.02], 1e-15));
        let s = skewed(5);
        assert_eq!(readout_channel(&s, &[0.0; 5]).unwrap(), s);
        let a = readout_channel(&s, &[0.15; 5]).unwrap();
        assert!(close(a.probs(), bitflip_channel(&s, 0.15).unwrap().probs(), 1e-12));
        assert!(readout_channel(&s, &[0.1; 4]).is_err());
    }

    #[test]
    fn walsh_route_agrees_with_direct_route_above_threshold() {
        let d = skewed(13);
        let fast = bitflip_channel(&d, 0.07).unwrap();
        let sweep = readout_channel(&d, &[0.07; 13]).unwrap();
        assert!(close(fast.probs(), sweep.probs(), 1e-12));
    }

    #[test]
    fn three_part_edges() {
        let c = generate_random_circuit(4, 2, 1, &GateConfig::default()).unwrap();
        let d = simulate(&c).unwrap();
        let clean = three_part_model(&d, &NoiseModel::noiseless(), &c).unwrap();
        assert!(close(clean.probs(), d.probs(), 1e-15));
        let ro_only = NoiseModel {
            readout: Rates::PerComponent(vec![0.01, 0.02, 0.03, 0.04]),
            ..NoiseModel::noiseless()
        };
        let r = three_part_model(&d, &ro_only, &c).unwrap();
        let expect = readout_channel(&d, &[0.01, 0.02, 0.03, 0.04]).unwrap();
        assert!(close(r.probs(), expect.probs(), 1e-15));
    }

    #[test]
    fn rates_parse_and_resolve() {
        assert_eq!("0.25".parse::<Rates>().unwrap(), Rates::Uniform(0.25));
        assert_eq!("0.1,0.2".parse::<Rates>().unwrap(), Rates::PerComponent(vec![0.1, 0.2]));
        assert!("x".parse::<Rates>().is_err());
        let c = generate_random_circuit(3, 2, 0, &GateConfig::default()).unwrap();
        let bad = NoiseModel {
            readout: Rates::PerComponent(vec![0.1]),
            ..NoiseModel::noiseless()
        };
        assert!(matches!(bad.resolve(&c), Err(Error::Config(_))));
        let out_of_range = NoiseModel {
            one_qubit: Rates::Uniform(1.5),
            ..NoiseModel::noiseless()
        };
        assert!(matches!(out_of_range.resolve(&c), Err(Error::Domain(_))));
        let m = NoiseModel::averaged(SYCAMORE_AVERAGES);
        assert_eq!(m.to_string(), "e1=0.0016 e2=0.0062 eq=0.038");
    }

    #[test]
    fn noiseless_trajectories_match_ideal_sampling() {
        let c = generate_random_circuit(5, 4, 3, &GateConfig::default()).unwrap();
        let s = noisy_sampler(&c, &NoiseModel::noiseless(), 50_000, 8).unwrap();
        let d = simulate(&c).unwrap();
        let mut counts = vec![0f64; 32];
        for &x in s.samples() {
            counts[x as usize] += 1.0;
        }
        for (x, c) in counts.iter().enumerate() {
            let p = d.probs()[x];
            let sd = (p * (1.0 - p) / 50_000.0).sqrt();
            assert!((c / 50_000.0 - p).abs() <= 5.0 * sd + 1e-12, "x={x}");
        }
    }

    #[test]
    fn noisy_sampler_is_deterministic() {
        let c = generate_random_circuit(6, 4, 3, &GateConfig::default()).unwrap();
        let m = NoiseModel::averaged(AveragedRates { e1: 0.05, e2: 0.1, eq: 0.05 });
        let a = noisy_sampler(&c, &m, 2000, 17).unwrap();
        let b = noisy_sampler(&c, &m, 2000, 17).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, noisy_sampler(&c, &m, 2000, 18).unwrap());
    }
}
