//! Dense statevector evolution, explicit output distributions and seeded
//! sampling.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::circuit::{Gate, Layer, Mat2, Mat4, RandomCircuit};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng, Tag};
use crate::{bitstring, parse_bitstring, qubit_mask, stats, SIMULATION_QUBIT_CAP};

/// Tolerance on `sum(p) = 1` for distributions and on the statevector norm.
pub const NORM_TOL: f64 = 1e-10;

pub(crate) fn check_sim_cap(n: usize) -> Result<()> {
    if n > SIMULATION_QUBIT_CAP {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the simulation cap of {SIMULATION_QUBIT_CAP}"
        )));
    }
    if n == 0 {
        return Err(Error::Bounds("qubit count must be positive".into()));
    }
    Ok(())
}

/// Inserts a zero bit at the single-bit position `mask`.
#[inline]
fn insert_zero(x: usize, mask: usize) -> usize {
    let low = x & (mask - 1);
    ((x ^ low) << 1) | low
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        check_sim_cap(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        stats::sum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    pub fn apply_one(&mut self, qubit: usize, u: &Mat2) {
        let mask = qubit_mask(self.n, qubit) as usize;
        let [[u00, u01], [u10, u11]] = *u;
        for block in self.amps.chunks_exact_mut(2 * mask) {
            let (lo, hi) = block.split_at_mut(mask);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = u00 * x + u01 * y;
                *a1 = u10 * x + u11 * y;
            }
        }
    }

    pub fn apply_two(&mut self, (qa, qb): (usize, usize), u: &Mat4) {
        let ma = qubit_mask(self.n, qa) as usize;
        let mb = qubit_mask(self.n, qb) as usize;
        let (lo, hi) = if ma < mb { (ma, mb) } else { (mb, ma) };
        let quarter = self.amps.len() >> 2;
        let diagonal = (0..4).all(|i| (0..4).all(|j| i == j || u[i][j] == C64::new(0.0, 0.0)));
        for k in 0..quarter {
            let base = insert_zero(insert_zero(k, lo), hi);
            let idx = [base, base | mb, base | ma, base | ma | mb];
            if diagonal {
                for (r, &i) in idx.iter().enumerate() {
                    self.amps[i] *= u[r][r];
                }
            } else {
                let v = idx.map(|i| self.amps[i]);
                for (r, &i) in idx.iter().enumerate() {
                    self.amps[i] = u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
                }
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::One { qubit, unitary } => self.apply_one(*qubit, unitary),
            Gate::Two { qubits, unitary } => self.apply_two(*qubits, unitary),
        }
    }

    pub fn apply_layers(&mut self, layers: &[Layer]) {
        for g in layers.iter().flat_map(|l| l.gates.iter()) {
            self.apply_gate(g);
        }
    }

    pub fn apply_circuit(&mut self, circuit: &RandomCircuit) -> Result<()> {
        if circuit.n() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: circuit.n(),
            });
        }
        self.apply_layers(circuit.layers());
        Ok(())
    }

    /// Born-rule probabilities.
    pub fn probabilities(&self) -> OutputDistribution {
        OutputDistribution {
            n: self.n,
            probs: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }
}

/// Exact probability vector over the `2^n` bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    /// Validates and wraps a probability vector. Entries in `[-1e-12, 0)`
    /// are treated as rounding noise and set to zero.
    pub fn new(n: usize, mut probs: Vec<f64>) -> Result<Self> {
        check_sim_cap(n)?;
        if probs.len() != 1 << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                found: probs.len(),
            });
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::Domain(format!("invalid probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total = stats::sum(probs.iter().copied());
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(OutputDistribution { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_sim_cap(n)?;
        Ok(OutputDistribution {
            n,
            probs: vec![1.0 / (1u64 << n) as f64; 1 << n],
        })
    }

    pub fn point_mass(n: usize, x: u64) -> Result<Self> {
        check_sim_cap(n)?;
        if x >= 1 << n {
            return Err(Error::Bounds(format!("basis index {x} out of range")));
        }
        let mut probs = vec![0.0; 1 << n];
        probs[x as usize] = 1.0;
        Ok(OutputDistribution { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, x: u64) -> f64 {
        self.probs[x as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// `2^n`.
    pub fn dim_f64(&self) -> f64 {
        self.probs.len() as f64
    }

    /// CSV with columns `bitstring,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,probability\n");
        for (x, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{},{:e}", bitstring(self.n, x as u64), p);
        }
        out
    }
}

/// Exact ideal output distribution of `circuit`.
pub fn simulate(circuit: &RandomCircuit) -> Result<OutputDistribution> {
    let mut sv = StateVector::zero(circuit.n())?;
    sv.apply_circuit(circuit)?;
    Ok(sv.probabilities())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub circuit_id: Option<String>,
    pub noise: Option<String>,
    pub seed: Option<u64>,
}

/// Ordered bitstring samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    n: usize,
    samples: Vec<u64>,
    pub provenance: Provenance,
}

impl SampleSet {
    pub fn new(n: usize, samples: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Bounds(format!("qubit count {n} outside 1..=64")));
        }
        if n < 64 {
            if let Some(&bad) = samples.iter().find(|&&x| x >> n != 0) {
                return Err(Error::Bounds(format!("sample {bad} does not fit in {n} bits")));
            }
        }
        Ok(SampleSet {
            n,
            samples,
            provenance: Provenance::default(),
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[u64] {
        &self.samples
    }

    pub fn bitstrings(&self) -> impl Iterator<Item = String> + '_ {
        self.samples.iter().map(move |&x| bitstring(self.n, x))
    }

    /// Archive form: `n=<int>` then one bitstring per line.
    pub fn to_archive(&self) -> String {
        let mut out = String::with_capacity(8 + self.samples.len() * (self.n + 1));
        let _ = writeln!(out, "n={}", self.n);
        for s in self.bitstrings() {
            out.push_str(&s);
            out.push('\n');
        }
        out
    }

    pub fn from_archive(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "empty archive"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(1, "expected `n=<int>`"))?;
        if n == 0 || n > 64 {
            return Err(Error::parse(1, format!("qubit count {n} outside 1..=64")));
        }
        let mut samples = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.len() != n {
                return Err(Error::parse(i + 2, format!("bitstring length {} != {n}", line.len())));
            }
            let x = parse_bitstring(line).ok_or_else(|| Error::parse(i + 2, "bitstring must be ASCII 0/1"))?;
            samples.push(x);
        }
        SampleSet::new(n, samples)
    }
}

/// Inverse-CDF sampler over an explicit probability vector.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(probs: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Sampler { cumulative }
    }

    /// Index for a uniform variate `u` in `[0, 1)`.
    pub fn index_for(&self, u: f64) -> u64 {
        let total = *self.cumulative.last().unwrap();
        let target = u * total;
        let i = self.cumulative.partition_point(|&c| c <= target);
        i.min(self.cumulative.len() - 1) as u64
    }

    pub fn draw(&self, rng: &mut StreamRng) -> u64 {
        self.index_for(rng.random::<f64>())
    }
}

/// `k` independent draws from `dist`, reproducible for a fixed seed.
pub fn sample(dist: &OutputDistribution, k: usize, seed: u64) -> Result<SampleSet> {
    if k == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let sampler = Sampler::new(dist.probs());
    let mut rng = rng::stream(seed, Tag::Sampling, 0);
    let samples = (0..k).map(|_| sampler.draw(&mut rng)).collect();
    Ok(SampleSet::new(dist.n(), samples)?.with_provenance(Provenance {
        seed: Some(seed),
        ..Provenance::default()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PorterThomasDiagnostics {
    /// Mean of `2^n D(x)` over uniform `x`; always 1 for a normalized `D`.
    pub first_moment: f64,
    /// Mean of `(2^n D(x))^2` over uniform `x`; 2 for Porter–Thomas.
    pub second_moment: f64,
    /// KS distance of the values `2^n D(x)` to Exp(1).
    pub ks_distance: f64,
}

pub fn porter_thomas_diagnostics(dist: &OutputDistribution) -> PorterThomasDiagnostics {
    let scale = dist.dim_f64();
    let values: Vec<f64> = dist.probs().iter().map(|p| p * scale).collect();
    PorterThomasDiagnostics {
        first_moment: stats::mean(&values),
        second_moment: stats::sum(values.iter().map(|v| v * v)) / scale,
        ks_distance: stats::ks_distance(&values, stats::exponential_cdf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_random_circuit, GateConfig, OneQubitGateSet};

    fn circuit_with(n: usize, m: usize, seed: u64, one: OneQubitGateSet) -> RandomCircuit {
        let cfg = GateConfig {
            one_qubit: one,
            ..GateConfig::default()
        };
        generate_random_circuit(n, m, seed, &cfg).unwrap()
    }

    #[test]
    fn identity_circuit_is_point_mass() {
        let d = simulate(&circuit_with(3, 0, 0, OneQubitGateSet::Identity)).unwrap();
        assert_eq!(d.probs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn hadamard_splits_evenly() {
        let d = simulate(&circuit_with(1, 0, 0, OneQubitGateSet::Hadamard)).unwrap();
        assert!((d.prob(0) - 0.5).abs() < 1e-15);
        assert!((d.prob(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalization_identity() {
        let d = simulate(&circuit_with(12, 14, 5, OneQubitGateSet::Haar)).unwrap();
        let pt = porter_thomas_diagnostics(&d);
        assert!((pt.first_moment - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_preserved_gate_by_gate() {
        let c = circuit_with(8, 10, 2, OneQubitGateSet::Haar);
        let mut sv = StateVector::zero(8).unwrap();
        for g in c.gates() {
            sv.apply_gate(g);
            assert!((sv.norm_sqr() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn inverse_returns_to_zero_state() {
        let c = circuit_with(7, 8, 21, OneQubitGateSet::Haar);
        let mut sv = StateVector::zero(7).unwrap();
        sv.apply_circuit(&c).unwrap();
        sv.apply_layers(&c.inverse_layers());
        let p = sv.probabilities();
        assert!((p.prob(0) - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn two_qubit_layer_order_is_irrelevant() {
        let cfg = GateConfig {
            two_qubit: crate::circuit::TwoQubitGate::ISwap,
            ..GateConfig::default()
        };
        let c = generate_random_circuit(8, 4, 3, &cfg).unwrap();
        let mut layers = c.layers().to_vec();
        for l in layers.iter_mut().skip(1).step_by(2) {
            l.gates.reverse();
        }
        let shuffled = RandomCircuit::from_layers(8, 4, 3, layers).unwrap();
        let a = simulate(&c).unwrap();
        let b = simulate(&shuffled).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn two_qubit_gate_matches_kronecker_reference() {
        // CNOT with control qubit 0 on |10> gives |11>.
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_one(0, &[[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]);
        sv.apply_two((0, 1), &crate::circuit::controlled_not());
        assert_eq!(sv.probabilities().probs(), &[0.0, 0.0, 0.0, 1.0]);
        // Reversed pair: control is qubit 1, which is 0, so nothing happens.
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_one(0, &[[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]);
        sv.apply_two((1, 0), &crate::circuit::controlled_not());
        assert_eq!(sv.probabilities().probs(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn sampling_point_mass_and_determinism() {
        let d = OutputDistribution::point_mass(3, 0).unwrap();
        let s = sample(&d, 5, 1).unwrap();
        assert_eq!(s.samples(), &[0; 5]);
        let u = OutputDistribution::uniform(4).unwrap();
        assert_eq!(sample(&u, 100, 9).unwrap(), sample(&u, 100, 9).unwrap());
        assert!(sample(&u, 0, 9).is_err());
    }

    #[test]
    fn zero_probability_entries_are_never_drawn() {
        let d = OutputDistribution::new(2, vec![0.0, 0.5, 0.0, 0.5]).unwrap();
        let s = sample(&d, 10_000, 4).unwrap();
        assert!(s.samples().iter().all(|&x| x == 1 || x == 3));
    }

    #[test]
    fn uniform_frequencies() {
        let u = OutputDistribution::uniform(2).unwrap();
        let s = sample(&u, 1_000_000, 2024).unwrap();
        let mut counts = [0usize; 4];
        for &x in s.samples() {
            counts[x as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / 1e6 - 0.25).abs() < 0.002);
        }
    }

    #[test]
    fn uniform_diagnostics() {
        let pt = porter_thomas_diagnostics(&OutputDistribution::uniform(5).unwrap());
        assert_eq!(pt.second_moment, 1.0);
        assert!((pt.ks_distance - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn archive_round_trip_and_errors() {
        let s = SampleSet::new(3, vec![0, 5, 7]).unwrap();
        let text = s.to_archive();
        assert_eq!(text, "n=3\n000\n101\n111\n");
        assert_eq!(SampleSet::from_archive(&text).unwrap(), s);
        assert!(SampleSet::from_archive("n=3\n01\n").is_err());
        assert!(SampleSet::from_archive("n=2\n0x\n").is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(OutputDistribution::new(1, vec![0.7, 0.7]).is_err());
        assert!(OutputDistribution::new(1, vec![-0.1, 1.1]).is_err());
        assert!(OutputDistribution::new(2, vec![1.0]).is_err());
        assert!(matches!(StateVector::zero(25), Err(Error::Resource(_))));
    }
}
