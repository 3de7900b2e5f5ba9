//! Seeded layered random circuits.
//!
//! A circuit on `n` qubits with `m` cycles has `2m + 1` layers. Cycle `c`
//! is a full one-qubit layer (one gate per qubit) followed by a two-qubit
//! layer whose gates act on disjoint qubit pairs; a final one-qubit layer
//! closes the circuit. There are therefore exactly `n(m + 1)` one-qubit gates.
//!
//! By default one-qubit gates are independent Haar-random unitaries and the
//! two-qubit gate is `fSim(pi/2, pi/6)`, placed on a line: even cycles
//! couple `(0,1), (2,3), ...`, odd cycles couple `(1,2), (3,4), ...`.
//! Controlled-Z on the same line scrambles far too slowly: at 12 qubits and
//! 14 cycles the mean of `2^n sum_x D(x)^2` is about 2.4 instead of the
//! Porter–Thomas value 2. The swap component of the fSim gate moves
//! information along the line and gets there (about 2.00).

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng, Tag};

pub type Mat2 = [[C64; 2]; 2];
/// Two-qubit unitary in the basis `|ab>` ordered `00, 01, 10, 11`, where `a`
/// is the first qubit of the gate's pair.
pub type Mat4 = [[C64; 4]; 4];

/// Default cap on the qubit count of a generated circuit. Generation only
/// stores gates; simulation has its own, lower cap.
pub const DEFAULT_MAX_QUBITS: usize = 64;

/// Tolerance for the `U U^† = I` check.
pub const UNITARITY_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    One { qubit: usize, unitary: Mat2 },
    Two { qubits: (usize, usize), unitary: Mat4 },
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Two { .. })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::One { qubit, .. } => vec![qubit],
            Gate::Two { qubits: (a, b), .. } => vec![a, b],
        }
    }

    pub fn dagger(&self) -> Gate {
        match self {
            Gate::One { qubit, unitary } => Gate::One {
                qubit: *qubit,
                unitary: adjoint(unitary),
            },
            Gate::Two { qubits, unitary } => Gate::Two {
                qubits: *qubits,
                unitary: adjoint(unitary),
            },
        }
    }

    /// Largest entry of `|U U^† - I|`.
    pub fn unitarity_error(&self) -> f64 {
        match self {
            Gate::One { unitary, .. } => unitarity_error(unitary),
            Gate::Two { unitary, .. } => unitarity_error(unitary),
        }
    }
}

fn adjoint<const D: usize>(u: &[[C64; D]; D]) -> [[C64; D]; D] {
    let mut out = [[ZERO; D]; D];
    for (i, row) in u.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = v.conj();
        }
    }
    out
}

pub fn unitarity_error<const D: usize>(u: &[[C64; D]; D]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..D {
        for j in 0..D {
            let mut acc = ZERO;
            for k in 0..D {
                acc += u[i][k] * u[j][k].conj();
            }
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn controlled_z() -> Mat4 {
    let mut u = [[ZERO; 4]; 4];
    u[0][0] = ONE;
    u[1][1] = ONE;
    u[2][2] = ONE;
    u[3][3] = -ONE;
    u
}

pub fn controlled_not() -> Mat4 {
    let mut u = [[ZERO; 4]; 4];
    u[0][0] = ONE;
    u[1][1] = ONE;
    u[2][3] = ONE;
    u[3][2] = ONE;
    u
}

pub fn iswap() -> Mat4 {
    let i = C64::new(0.0, 1.0);
    let mut u = [[ZERO; 4]; 4];
    u[0][0] = ONE;
    u[1][2] = i;
    u[2][1] = i;
    u[3][3] = ONE;
    u
}

pub fn fsim(theta: f64, phi: f64) -> Mat4 {
    let (c, sn) = (theta.cos(), theta.sin());
    let mut u = [[ZERO; 4]; 4];
    u[0][0] = ONE;
    u[1][1] = C64::new(c, 0.0);
    u[1][2] = C64::new(0.0, -sn);
    u[2][1] = C64::new(0.0, -sn);
    u[2][2] = C64::new(c, 0.0);
    u[3][3] = C64::from_polar(1.0, -phi);
    u
}

/// Haar-random element of U(4): Gram–Schmidt on a complex Ginibre matrix,
/// which is the QR construction with the phases of `R`'s diagonal fixed.
pub fn haar_unitary4(rng: &mut StreamRng) -> Mat4 {
    loop {
        let mut cols = [[ZERO; 4]; 4];
        for col in cols.iter_mut() {
            for v in col.iter_mut() {
                *v = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
        }
        let mut ok = true;
        for j in 0..4 {
            for i in 0..j {
                let proj: C64 = (0..4).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                for r in 0..4 {
                    let sub = proj * cols[i][r];
                    cols[j][r] -= sub;
                }
            }
            let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|v| *v /= norm);
        }
        if ok {
            let mut u = [[ZERO; 4]; 4];
            for (j, col) in cols.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    u[i][j] = *v;
                }
            }
            return u;
        }
    }
}

/// Haar-random element of U(2): a uniform point `(a, b)` on the unit sphere
/// of C^2 gives the SU(2) matrix `[[a, -b*], [b, a*]]`, times a uniform phase.
pub fn haar_unitary2(rng: &mut StreamRng) -> Mat2 {
    let mut g = [0.0f64; 4];
    loop {
        for v in g.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            g.iter_mut().for_each(|v| *v /= norm);
            break;
        }
    }
    let a = C64::new(g[0], g[1]);
    let b = C64::new(g[2], g[3]);
    let phase = C64::from_polar(1.0, rng.random::<f64>() * TAU);
    [[phase * a, -phase * b.conj()], [phase * b, phase * a.conj()]]
}

#[derive(Debug, Clone, PartialEq)]
pub enum OneQubitGateSet {
    Haar,
    Identity,
    Hadamard,
    Fixed(Mat2),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwoQubitGate {
    ControlledZ,
    ControlledNot,
    ISwap,
    /// `fSim(theta, phi)`: an iSWAP-like rotation by `theta` in the
    /// `{01, 10}` block plus a conditional phase `phi` on `11`.
    FSim { theta: f64, phi: f64 },
    /// Independent Haar-random U(4) per gate.
    Haar,
    Fixed(Mat4),
}

impl TwoQubitGate {
    fn unitary(&self, rng: &mut StreamRng) -> Mat4 {
        match self {
            TwoQubitGate::ControlledZ => controlled_z(),
            TwoQubitGate::ControlledNot => controlled_not(),
            TwoQubitGate::ISwap => iswap(),
            TwoQubitGate::FSim { theta, phi } => fsim(*theta, *phi),
            TwoQubitGate::Haar => haar_unitary4(rng),
            TwoQubitGate::Fixed(u) => *u,
        }
    }
}

/// Where two-qubit gates go in each cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Qubits on a line, even cycles couple `(0,1), (2,3), ...`, odd cycles
    /// couple `(1,2), (3,4), ...`.
    Line,
    /// No two-qubit gates at all.
    Isolated,
}

impl Layout {
    pub fn pairs(self, n: usize, cycle: usize) -> Vec<(usize, usize)> {
        match self {
            Layout::Line => (cycle % 2..n.saturating_sub(1))
                .step_by(2)
                .map(|q| (q, q + 1))
                .collect(),
            Layout::Isolated => Vec::new(),
        }
    }
}

/// The default two-qubit gate.
pub const DEFAULT_TWO_QUBIT_GATE: TwoQubitGate = TwoQubitGate::FSim {
    theta: std::f64::consts::FRAC_PI_2,
    phi: std::f64::consts::FRAC_PI_6,
};

/// Gate-set descriptor for [`generate_random_circuit`].
#[derive(Debug, Clone, PartialEq)]
pub struct GateConfig {
    pub one_qubit: OneQubitGateSet,
    pub two_qubit: TwoQubitGate,
    pub layout: Layout,
    pub max_qubits: usize,
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            one_qubit: OneQubitGateSet::Haar,
            two_qubit: DEFAULT_TWO_QUBIT_GATE,
            layout: Layout::Line,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl GateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_qubits == 0 || self.max_qubits > 64 {
            return Err(Error::Config(format!(
                "max_qubits must lie in 1..=64, got {}",
                self.max_qubits
            )));
        }
        if let OneQubitGateSet::Fixed(u) = &self.one_qubit {
            let err = unitarity_error(u);
            if !(err <= UNITARITY_TOL) {
                return Err(Error::Config(format!("fixed one-qubit gate is not unitary (error {err:e})")));
            }
        }
        if let TwoQubitGate::Fixed(u) = &self.two_qubit {
            let err = unitarity_error(u);
            if !(err <= UNITARITY_TOL) {
                return Err(Error::Config(format!("fixed two-qubit gate is not unitary (error {err:e})")));
            }
        }
        Ok(())
    }
}

/// An ordered set of gates acting on pairwise disjoint qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    pub gates: Vec<Gate>,
}

impl Layer {
    pub fn is_disjoint(&self) -> bool {
        let mut seen = 0u64;
        for q in self.gates.iter().flat_map(Gate::qubits) {
            if seen & (1 << q) != 0 {
                return false;
            }
            seen |= 1 << q;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCircuit {
    n: usize,
    m: usize,
    seed: u64,
    layers: Vec<Layer>,
}

impl RandomCircuit {
    /// Assembles a circuit from explicit layers, checking the layered
    /// structure and every gate.
    pub fn from_layers(n: usize, m: usize, seed: u64, layers: Vec<Layer>) -> Result<Self> {
        let c = RandomCircuit { n, m, seed, layers };
        c.validate()?;
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Short identifier: `n<n>-m<m>-s<seed>`.
    pub fn id(&self) -> String {
        format!("n{}-m{}-s{}", self.n, self.m, self.seed)
    }

    /// All gates in application order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    /// Layers of the inverse circuit (reversed order, adjoint gates).
    pub fn inverse_layers(&self) -> Vec<Layer> {
        self.layers
            .iter()
            .rev()
            .map(|l| Layer {
                gates: l.gates.iter().rev().map(Gate::dagger).collect(),
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        if n == 0 || n > 64 {
            return Err(Error::Bounds(format!("qubit count {n} outside 1..=64")));
        }
        if self.layers.len() != 2 * m + 1 {
            return Err(Error::Config(format!(
                "expected {} layers for m={m}, found {}",
                2 * m + 1,
                self.layers.len()
            )));
        }
        let max_pairs = n / 2;
        for (i, layer) in self.layers.iter().enumerate() {
            let two = i % 2 == 1;
            for g in &layer.gates {
                if g.is_two_qubit() != two {
                    return Err(Error::Config(format!("layer {i} mixes one- and two-qubit gates")));
                }
                let qs = g.qubits();
                if qs.iter().any(|&q| q >= n) {
                    return Err(Error::Bounds(format!("gate in layer {i} addresses qubit >= {n}")));
                }
                if qs.len() == 2 && qs[0] == qs[1] {
                    return Err(Error::Config(format!("two-qubit gate in layer {i} repeats qubit {}", qs[0])));
                }
                let err = g.unitarity_error();
                if !(err <= UNITARITY_TOL) {
                    return Err(Error::Config(format!("non-unitary gate in layer {i} (error {err:e})")));
                }
            }
            if !layer.is_disjoint() {
                return Err(Error::Config(format!("layer {i} reuses a qubit")));
            }
            if !two && layer.gates.len() != n {
                return Err(Error::Config(format!(
                    "one-qubit layer {i} has {} gates, expected {n}",
                    layer.gates.len()
                )));
            }
            if two && layer.gates.len() > max_pairs {
                return Err(Error::Config(format!("two-qubit layer {i} has too many gates")));
            }
        }
        Ok(())
    }

    /// Line-oriented text form: a header `n=.. m=.. seed=..` then one gate
    /// per line, unitary entries as `re,im` pairs in row-major order with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} m={} seed={}\n", self.n, self.m, self.seed);
        for g in self.gates() {
            match g {
                Gate::One { qubit, unitary } => {
                    let _ = write!(out, "G1 q={qubit} U=");
                    write_entries(&mut out, unitary.iter().flatten());
                }
                Gate::Two { qubits: (a, b), unitary } => {
                    let _ = write!(out, "G2 q={a},{b} U=");
                    write_entries(&mut out, unitary.iter().flatten());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty circuit file"))?;
        let (n, m, seed) = parse_header(header)?;
        if n == 0 || n > 64 {
            return Err(Error::parse(1, format!("qubit count {n} outside 1..=64")));
        }
        let mut gates = Vec::new();
        for (idx, line) in lines {
            gates.push((idx + 1, parse_gate(idx + 1, line)?));
        }
        let mut layers = Vec::with_capacity(2 * m + 1);
        let mut it = gates.into_iter().peekable();
        for layer_idx in 0..2 * m + 1 {
            let mut layer = Layer::default();
            if layer_idx % 2 == 0 {
                for _ in 0..n {
                    match it.next() {
                        Some((_, g @ Gate::One { .. })) => layer.gates.push(g),
                        Some((line, _)) => return Err(Error::parse(line, "expected a G1 gate")),
                        None => return Err(Error::parse(0, "circuit ends early")),
                    }
                }
            } else {
                while let Some((_, Gate::Two { .. })) = it.peek() {
                    layer.gates.push(it.next().unwrap().1);
                }
            }
            layers.push(layer);
        }
        if let Some((line, _)) = it.next() {
            return Err(Error::parse(line, "gate after the final layer"));
        }
        RandomCircuit::from_layers(n, m, seed, layers)
    }
}

fn write_entries<'a>(out: &mut String, entries: impl Iterator<Item = &'a C64>) {
    let mut first = true;
    for z in entries {
        if !first {
            out.push(',');
        }
        first = false;
        let _ = write!(out, "{:.16e},{:.16e}", z.re, z.im);
    }
}

fn parse_header(line: &str) -> Result<(usize, usize, u64)> {
    let mut n = None;
    let mut m = None;
    let mut seed = None;
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::parse(1, format!("bad header token `{tok}`")))?;
        let bad = |_| Error::parse(1, format!("bad value in `{tok}`"));
        match k {
            "n" => n = Some(v.parse::<usize>().map_err(bad)?),
            "m" => m = Some(v.parse::<usize>().map_err(bad)?),
            "seed" => seed = Some(v.parse::<u64>().map_err(bad)?),
            _ => return Err(Error::parse(1, format!("unknown header key `{k}`"))),
        }
    }
    match (n, m, seed) {
        (Some(n), Some(m), Some(s)) => Ok((n, m, s)),
        _ => Err(Error::parse(1, "header must carry n, m and seed")),
    }
}

fn parse_gate(line_no: usize, line: &str) -> Result<Gate> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(Error::parse(line_no, "expected `G1|G2 q=.. U=..`"));
    }
    let qs = toks[1]
        .strip_prefix("q=")
        .ok_or_else(|| Error::parse(line_no, "missing q="))?;
    let qs: Vec<usize> = qs
        .split(',')
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(line_no, "bad qubit index"))?;
    let us = toks[2]
        .strip_prefix("U=")
        .ok_or_else(|| Error::parse(line_no, "missing U="))?;
    let floats: Vec<f64> = us
        .split(',')
        .map(|s| s.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(line_no, "bad float in U"))?;
    match (toks[0], qs.as_slice()) {
        ("G1", &[q]) => {
            if floats.len() != 8 {
                return Err(Error::parse(line_no, "G1 needs 8 floats"));
            }
            let mut u = [[ZERO; 2]; 2];
            for (k, pair) in floats.chunks(2).enumerate() {
                u[k / 2][k % 2] = C64::new(pair[0], pair[1]);
            }
            Ok(Gate::One { qubit: q, unitary: u })
        }
        ("G2", &[a, b]) => {
            if floats.len() != 32 {
                return Err(Error::parse(line_no, "G2 needs 32 floats"));
            }
            let mut u = [[ZERO; 4]; 4];
            for (k, pair) in floats.chunks(2).enumerate() {
                u[k / 4][k % 4] = C64::new(pair[0], pair[1]);
            }
            Ok(Gate::Two { qubits: (a, b), unitary: u })
        }
        _ => Err(Error::parse(line_no, "gate kind does not match its qubit list")),
    }
}

/// Generates the circuit for `(n, m, seed, config)`.
///
/// Layer `i` draws from its own stream `(seed, CircuitLayer, i)`, so a layer
/// never depends on how much randomness earlier layers consumed.
pub fn generate_random_circuit(n: usize, m: usize, seed: u64, config: &GateConfig) -> Result<RandomCircuit> {
    config.validate()?;
    if n == 0 || n > config.max_qubits {
        return Err(Error::Bounds(format!(
            "qubit count {n} outside 1..={}",
            config.max_qubits
        )));
    }
    if m > 100_000 {
        return Err(Error::Bounds(format!("cycle count {m} is unreasonably large")));
    }
    let mut layers = Vec::with_capacity(2 * m + 1);
    for i in 0..2 * m + 1 {
        let mut rng = rng::stream(seed, Tag::CircuitLayer, i as u64);
        let gates = if i % 2 == 0 {
            (0..n)
                .map(|q| Gate::One {
                    qubit: q,
                    unitary: match &config.one_qubit {
                        OneQubitGateSet::Haar => haar_unitary2(&mut rng),
                        OneQubitGateSet::Identity => identity2(),
                        OneQubitGateSet::Hadamard => hadamard(),
                        OneQubitGateSet::Fixed(u) => *u,
                    },
                })
                .collect()
        } else {
            config
                .layout
                .pairs(n, i / 2)
                .into_iter()
                .map(|qubits| Gate::Two {
                    qubits,
                    unitary: config.two_qubit.unitary(&mut rng),
                })
                .collect()
        };
        layers.push(Layer { gates });
    }
    Ok(RandomCircuit { n, m, seed, layers })
}

/// `(one-qubit gates, two-qubit gates)` in the circuit.
pub fn gate_counts(circuit: &RandomCircuit) -> (usize, usize) {
    circuit.gates().fold((0, 0), |(g1, g2), g| {
        if g.is_two_qubit() {
            (g1, g2 + 1)
        } else {
            (g1 + 1, g2)
        }
    })
}

/// Gate counts a circuit with this shape would have, without building it.
pub fn layout_gate_counts(n: usize, m: usize, layout: Layout) -> (usize, usize) {
    let g2 = (0..m).map(|c| layout.pairs(n, c).len()).sum();
    (n * (m + 1), g2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn haar_circuit(n: usize, m: usize, seed: u64) -> RandomCircuit {
        generate_random_circuit(n, m, seed, &GateConfig::default()).unwrap()
    }

    #[test]
    fn sycamore_sized_counts() {
        let c = haar_circuit(53, 20, 11);
        let (g1, g2) = gate_counts(&c);
        assert_eq!(g1, 1113);
        assert!(g2 <= 530);
        assert_eq!(layout_gate_counts(53, 20, Layout::Line), (g1, g2));
    }

    #[test]
    fn formula_counts() {
        for (n, m, g1, g2max) in [(53, 14, 795, 371), (12, 14, 180, 84), (1, 0, 1, 0)] {
            let (a, b) = layout_gate_counts(n, m, Layout::Line);
            assert_eq!(a, g1);
            assert!(b <= g2max);
        }
        let c = haar_circuit(1, 0, 0);
        assert_eq!(gate_counts(&c), (1, 0));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = haar_circuit(12, 14, 7);
        let b = haar_circuit(12, 14, 7);
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), haar_circuit(12, 14, 8).to_text());
    }

    #[test]
    fn gates_are_unitary_and_layers_disjoint() {
        let c = haar_circuit(9, 6, 3);
        for g in c.gates() {
            assert!(g.unitarity_error() < UNITARITY_TOL);
        }
        assert!(c.layers().iter().all(Layer::is_disjoint));
        for (i, l) in c.layers().iter().enumerate() {
            if i % 2 == 1 {
                for g in &l.gates {
                    let q = g.qubits();
                    assert_ne!(q[0], q[1]);
                }
            }
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        for (n, m) in [(1, 2), (5, 4), (6, 0)] {
            let c = haar_circuit(n, m, 99);
            let back = RandomCircuit::from_text(&c.to_text()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            generate_random_circuit(0, 2, 0, &GateConfig::default()),
            Err(Error::Bounds(_))
        ));
        assert!(matches!(
            generate_random_circuit(65, 2, 0, &GateConfig::default()),
            Err(Error::Bounds(_))
        ));
        let bad = GateConfig {
            one_qubit: OneQubitGateSet::Fixed([[ONE, ONE], [ZERO, ONE]]),
            ..GateConfig::default()
        };
        assert!(matches!(generate_random_circuit(2, 2, 0, &bad), Err(Error::Config(_))));
        let header_only = "n=2 m=1 seed=0\nG1 q=0 U=1,0,0,0,0,0,1,0\n";
        assert!(matches!(RandomCircuit::from_text(header_only), Err(Error::Parse { .. })));
        assert!(RandomCircuit::from_text("n=2 m=x seed=0").is_err());
    }

    #[test]
    fn overlapping_pairs_are_rejected() {
        let c = haar_circuit(4, 1, 0);
        let mut layers = c.layers().to_vec();
        layers[1].gates = vec![
            Gate::Two { qubits: (0, 1), unitary: controlled_z() },
            Gate::Two { qubits: (1, 2), unitary: controlled_z() },
        ];
        assert!(RandomCircuit::from_layers(4, 1, 0, layers).is_err());
    }
}
