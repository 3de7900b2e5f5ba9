//! Experiment configuration.
//!
//! The text form is flat `key = value` lines grouped under `[section]`
//! headers; `#` starts a comment. The JSON mirror nests the same keys one
//! level deep by section. Both reject unknown keys, and both round-trip
//! losslessly (floats are written in shortest round-trip form).

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use rcslab::circuit::{GateConfig, Layout, OneQubitGateSet, TwoQubitGate, DEFAULT_MAX_QUBITS};
use rcslab::noise::{NoiseModel, Rates};
use rcslab::SIMULATION_QUBIT_CAP;

use crate::CliError;

/// A value that can appear on the right of `key = value`.
pub trait ConfigValue: Sized {
    fn parse_value(s: &str) -> Result<Self, String>;
    fn render(&self) -> String;
}

macro_rules! plain_value {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn parse_value(s: &str) -> Result<Self, String> {
                s.parse().map_err(|_| format!("expected {}, got `{s}`", stringify!($t)))
            }
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

plain_value!(u64, usize, f64, bool);

impl ConfigValue for String {
    fn parse_value(s: &str) -> Result<Self, String> {
        Ok(s.to_string())
    }
    fn render(&self) -> String {
        self.clone()
    }
}

impl ConfigValue for PathBuf {
    fn parse_value(s: &str) -> Result<Self, String> {
        Ok(PathBuf::from(s))
    }
    fn render(&self) -> String {
        self.display().to_string()
    }
}

impl<T: ConfigValue> ConfigValue for Vec<T> {
    fn parse_value(s: &str) -> Result<Self, String> {
        s.split(',').map(|v| T::parse_value(v.trim())).collect()
    }
    fn render(&self) -> String {
        self.iter().map(T::render).collect::<Vec<_>>().join(",")
    }
}

/// String-valued enums: kebab-case names in both text and JSON.
macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant,)*
        }

        impl $name {
            pub const NAMES: &'static [&'static str] = &[$($text),*];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text,)* }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)*
                    _ => Err(format!("unknown {} `{s}` (expected one of: {})", stringify!($name), Self::NAMES.join(", "))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ConfigValue for $name {
            fn parse_value(s: &str) -> Result<Self, String> {
                s.parse()
            }
            fn render(&self) -> String {
                self.as_str().to_string()
            }
        }
    };
}

named_enum!(
    /// Experiment kinds; each has a matching subcommand.
    Kind {
        Simulate => "simulate",
        Sample => "sample",
        NoisySample => "noisy-sample",
        Estimate => "estimate",
        Predict => "predict",
        Walsh => "walsh",
        CorrelationScan => "correlation-scan",
        MatchSample => "match-sample",
        MatchTest => "match-test",
    }
);

named_enum!(OneQubitName { Haar => "haar", Identity => "identity", Hadamard => "hadamard" });

named_enum!(TwoQubitName {
    FSim => "fsim",
    Cz => "cz",
    Cnot => "cnot",
    ISwap => "iswap",
    Haar => "haar",
});

named_enum!(LayoutName { Line => "line", Isolated => "isolated" });

named_enum!(
    /// Where the samples of `sample`/`estimate` come from.
    Source {
        Ideal => "ideal",
        Uniform => "uniform",
        Mixture => "mixture",
        Noisy => "noisy",
        Archive => "archive",
    }
);

named_enum!(EstimatorName { Xeb => "xeb", V => "v", Mle => "mle" });

/// Noise rates: a number is one shared rate, a list is per component.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSpec(pub Rates);

impl ConfigValue for RateSpec {
    fn parse_value(s: &str) -> Result<Self, String> {
        let rates: Rates = s.parse().map_err(|e: rcslab::Error| e.to_string())?;
        Ok(RateSpec(rates))
    }
    fn render(&self) -> String {
        match &self.0 {
            Rates::Uniform(r) => r.to_string(),
            // A trailing comma keeps a one-element list a list.
            Rates::PerComponent(v) if v.len() == 1 => format!("{},", v[0]),
            Rates::PerComponent(v) => v.render(),
        }
    }
}

impl Serialize for RateSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Rates::Uniform(r) => s.serialize_f64(*r),
            Rates::PerComponent(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RateSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Many(Vec<f64>),
        }
        Ok(RateSpec(match Raw::deserialize(d)? {
            Raw::One(r) => Rates::Uniform(r),
            Raw::Many(v) => Rates::PerComponent(v),
        }))
    }
}

macro_rules! section {
    ($(#[$meta:meta])* $name:ident, $title:literal { $($(#[$fmeta:meta])* $field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields, default)]
        pub struct $name {
            $($(#[$fmeta])* #[serde(skip_serializing_if = "Option::is_none")] pub $field: Option<$ty>,)*
        }

        impl $name {
            pub const TITLE: &'static str = $title;
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// `Ok(false)` for an unknown key.
            fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
                match key {
                    $(stringify!($field) => {
                        self.$field = Some(<$ty as ConfigValue>::parse_value(value)?);
                        Ok(true)
                    })*
                    _ => Ok(false),
                }
            }

            fn has(&self, key: &str) -> bool {
                match key {
                    $(stringify!($field) => self.$field.is_some(),)*
                    _ => false,
                }
            }

            fn is_empty(&self) -> bool {
                true $(&& self.$field.is_none())*
            }

            fn write(&self, out: &mut String) {
                if self.is_empty() {
                    return;
                }
                let _ = writeln!(out, "[{}]", $title);
                $(if let Some(v) = &self.$field {
                    let _ = writeln!(out, "{} = {}", stringify!($field), ConfigValue::render(v));
                })*
                out.push('\n');
            }
        }
    };
}

section!(ExperimentSection, "experiment" {
    kind: Kind,
    /// Output directory name; derived from the kind and parameters if unset.
    id: String,
    seed: u64,
});

section!(CircuitSection, "circuit" {
    n: usize,
    m: usize,
    one_qubit: OneQubitName,
    two_qubit: TwoQubitName,
    fsim_theta: f64,
    fsim_phi: f64,
    layout: LayoutName,
    /// Circuit in the text format; replaces generation.
    file: PathBuf,
    /// Number of independent circuits for ensemble experiments.
    circuits: usize,
});

section!(SamplingSection, "sampling" {
    samples: usize,
    source: Source,
    fidelity: f64,
    /// Sample archive, for `source = archive`.
    archive: PathBuf,
});

section!(NoiseSection, "noise" {
    e1: RateSpec,
    e2: RateSpec,
    eq: RateSpec,
});

section!(EstimateSection, "estimate" {
    estimators: Vec<EstimatorName>,
});

section!(PredictSection, "predict" {
    g1: usize,
    g2: usize,
});

section!(WalshSection, "walsh" {
    flip_rate: f64,
    degree: usize,
});

section!(ScanSection, "scan" {
    n_values: Vec<usize>,
    t_values: Vec<f64>,
});

section!(MatchingSection, "matching" {
    graph: PathBuf,
    prime: u64,
    trials: usize,
});

section!(OutputSection, "output" {
    dir: PathBuf,
    write_samples: bool,
});

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub circuit: CircuitSection,
    pub sampling: SamplingSection,
    pub noise: NoiseSection,
    pub estimate: EstimateSection,
    pub predict: PredictSection,
    pub walsh: WalshSection,
    pub scan: ScanSection,
    pub matching: MatchingSection,
    pub output: OutputSection,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_N: usize = 12;
pub const DEFAULT_M: usize = 14;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_FLIP_RATE: f64 = 0.1;
pub const DEFAULT_SCAN_N: [usize; 3] = [8, 10, 12];
pub const DEFAULT_CIRCUITS_SCAN: usize = 20;
pub const MAX_SAMPLES: usize = 100_000_000;

fn line_error(line: usize, msg: impl Into<String>) -> CliError {
    CliError::ConfigLine { line, msg: msg.into() }
}

impl ExperimentConfig {
    /// Parses the text form.
    pub fn parse_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = ExperimentConfig::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| line_error(line_no, "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(line_error(
                        line_no,
                        format!("unknown section [{name}] (expected one of: {})", SECTIONS.join(", ")),
                    ));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| line_error(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let Some(sec) = section.as_deref() else {
                return Err(line_error(line_no, format!("key `{key}` before any [section] header")));
            };
            if cfg.is_set(sec, key) {
                return Err(line_error(line_no, format!("duplicate key `{key}` in [{sec}]")));
            }
            match cfg.set(sec, key, value) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(line_error(
                        line_no,
                        format!("unknown key `{key}` in [{sec}] (expected one of: {})", keys_of(sec).join(", ")),
                    ))
                }
                Err(msg) => return Err(line_error(line_no, format!("`{key}`: {msg}"))),
            }
        }
        Ok(cfg)
    }

    pub fn parse_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| line_error(e.line(), e.to_string()))
    }

    /// JSON if the file name ends in `.json` or the content starts with `{`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let parsed = if json { Self::parse_json(&text) } else { Self::parse_text(&text) };
        parsed.map_err(|e| match e {
            CliError::ConfigLine { line, msg } => CliError::Config(format!("{}:{line}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.experiment.write(&mut out);
        self.circuit.write(&mut out);
        self.sampling.write(&mut out);
        self.noise.write(&mut out);
        self.estimate.write(&mut out);
        self.predict.write(&mut out);
        self.walsh.write(&mut out);
        self.scan.write(&mut out);
        self.matching.write(&mut out);
        self.output.write(&mut out);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Applies a `section.key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let bad = || CliError::Config(format!("override `{assignment}` is not of the form section.key=value"));
        let (path, value) = assignment.split_once('=').ok_or_else(bad)?;
        let (sec, key) = path.trim().split_once('.').ok_or_else(bad)?;
        if !SECTIONS.contains(&sec) {
            return Err(CliError::Config(format!("unknown section `{sec}` in override")));
        }
        match self.set(sec, key, value.trim()) {
            Ok(true) => Ok(()),
            Ok(false) => Err(CliError::Config(format!("unknown key `{key}` in [{sec}]"))),
            Err(msg) => Err(CliError::Config(format!("`{sec}.{key}`: {msg}"))),
        }
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<bool, String> {
        match section {
            "experiment" => self.experiment.set(key, value),
            "circuit" => self.circuit.set(key, value),
            "sampling" => self.sampling.set(key, value),
            "noise" => self.noise.set(key, value),
            "estimate" => self.estimate.set(key, value),
            "predict" => self.predict.set(key, value),
            "walsh" => self.walsh.set(key, value),
            "scan" => self.scan.set(key, value),
            "matching" => self.matching.set(key, value),
            "output" => self.output.set(key, value),
            _ => Ok(false),
        }
    }

    fn is_set(&self, section: &str, key: &str) -> bool {
        match section {
            "experiment" => self.experiment.has(key),
            "circuit" => self.circuit.has(key),
            "sampling" => self.sampling.has(key),
            "noise" => self.noise.has(key),
            "estimate" => self.estimate.has(key),
            "predict" => self.predict.has(key),
            "walsh" => self.walsh.has(key),
            "scan" => self.scan.has(key),
            "matching" => self.matching.has(key),
            "output" => self.output.has(key),
            _ => false,
        }
    }

    pub fn kind(&self) -> Result<Kind, CliError> {
        self.experiment
            .kind
            .ok_or_else(|| CliError::Config("[experiment] kind is not set".into()))
    }

    pub fn seed(&self) -> u64 {
        self.experiment.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn n(&self) -> usize {
        self.circuit.n.unwrap_or(DEFAULT_N)
    }

    pub fn m(&self) -> usize {
        self.circuit.m.unwrap_or(DEFAULT_M)
    }

    pub fn samples(&self) -> usize {
        self.sampling.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn circuits(&self) -> usize {
        self.circuit.circuits.unwrap_or(1)
    }

    pub fn gate_config(&self) -> GateConfig {
        let c = &self.circuit;
        let mut g = GateConfig::default();
        if let Some(one) = c.one_qubit {
            g.one_qubit = match one {
                OneQubitName::Haar => OneQubitGateSet::Haar,
                OneQubitName::Identity => OneQubitGateSet::Identity,
                OneQubitName::Hadamard => OneQubitGateSet::Hadamard,
            };
        }
        let (theta, phi) = match g.two_qubit {
            TwoQubitGate::FSim { theta, phi } => (c.fsim_theta.unwrap_or(theta), c.fsim_phi.unwrap_or(phi)),
            _ => unreachable!("default two-qubit gate is fSim"),
        };
        g.two_qubit = match c.two_qubit.unwrap_or(TwoQubitName::FSim) {
            TwoQubitName::FSim => TwoQubitGate::FSim { theta, phi },
            TwoQubitName::Cz => TwoQubitGate::ControlledZ,
            TwoQubitName::Cnot => TwoQubitGate::ControlledNot,
            TwoQubitName::ISwap => TwoQubitGate::ISwap,
            TwoQubitName::Haar => TwoQubitGate::Haar,
        };
        if let Some(layout) = c.layout {
            g.layout = match layout {
                LayoutName::Line => Layout::Line,
                LayoutName::Isolated => Layout::Isolated,
            };
        }
        g
    }

    /// Unset rates are zero.
    pub fn noise_model(&self) -> NoiseModel {
        let get = |r: &Option<RateSpec>| r.as_ref().map(|r| r.0.clone()).unwrap_or(Rates::Uniform(0.0));
        NoiseModel {
            one_qubit: get(&self.noise.e1),
            two_qubit: get(&self.noise.e2),
            readout: get(&self.noise.eq),
        }
    }

    /// Checks every cap and cross-field requirement that can be checked
    /// without touching the file system, so that bad input fails before any
    /// heavy work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let kind = self.kind()?;
        let cfg = |msg: String| Err(CliError::Config(msg));
        let needs_state = matches!(
            kind,
            Kind::Simulate | Kind::Sample | Kind::NoisySample | Kind::Estimate | Kind::Walsh
        );
        let n = self.n();
        let cap = if needs_state { SIMULATION_QUBIT_CAP } else { DEFAULT_MAX_QUBITS };
        if self.circuit.file.is_none() && !(1..=cap).contains(&n) && kind != Kind::CorrelationScan {
            return Err(CliError::Resource(format!("n = {n} outside 1..={cap} for {kind}")));
        }
        if let Some(values) = &self.scan.n_values {
            if let Some(&bad) = values.iter().find(|&&v| !(1..=SIMULATION_QUBIT_CAP).contains(&v)) {
                return Err(CliError::Resource(format!("scan n = {bad} outside 1..={SIMULATION_QUBIT_CAP}")));
            }
        }
        if self.samples() == 0 || self.samples() > MAX_SAMPLES {
            return cfg(format!("samples must be in 1..={MAX_SAMPLES}"));
        }
        if self.circuits() == 0 {
            return cfg("circuits must be at least 1".into());
        }
        if let Some(f) = self.sampling.fidelity {
            if !(0.0..=1.0).contains(&f) {
                return cfg(format!("fidelity {f} outside [0, 1]"));
            }
        }
        for t in self.walsh.flip_rate.iter().chain(self.scan.t_values.iter().flatten()) {
            if !(0.0..=1.0).contains(t) {
                return cfg(format!("flip rate {t} outside [0, 1]"));
            }
        }
        self.noise_model().validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.gate_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.sampling.source == Some(Source::Archive) && self.sampling.archive.is_none() {
            return cfg("source = archive needs [sampling] archive".into());
        }
        if matches!(kind, Kind::MatchSample | Kind::MatchTest) && self.matching.graph.is_none() {
            return cfg(format!("{kind} needs [matching] graph"));
        }
        if matches!(self.matching.trials, Some(0)) {
            return cfg("trials must be at least 1".into());
        }
        Ok(())
    }

    /// Output directory name.
    pub fn id(&self) -> Result<String, CliError> {
        if let Some(id) = &self.experiment.id {
            if id.is_empty() || id.contains(['/', '\\']) || id == "." || id == ".." {
                return Err(CliError::Config(format!("id `{id}` is not a plain directory name")));
            }
            return Ok(id.clone());
        }
        let kind = self.kind()?;
        Ok(match kind {
            Kind::MatchSample | Kind::MatchTest | Kind::CorrelationScan => format!("{kind}-s{}", self.seed()),
            _ => format!("{kind}-n{}-m{}-s{}", self.n(), self.m(), self.seed()),
        })
    }
}

pub const SECTIONS: &[&str] = &[
    ExperimentSection::TITLE,
    CircuitSection::TITLE,
    SamplingSection::TITLE,
    NoiseSection::TITLE,
    EstimateSection::TITLE,
    PredictSection::TITLE,
    WalshSection::TITLE,
    ScanSection::TITLE,
    MatchingSection::TITLE,
    OutputSection::TITLE,
];

fn keys_of(section: &str) -> &'static [&'static str] {
    match section {
        "experiment" => ExperimentSection::KEYS,
        "circuit" => CircuitSection::KEYS,
        "sampling" => SamplingSection::KEYS,
        "noise" => NoiseSection::KEYS,
        "estimate" => EstimateSection::KEYS,
        "predict" => PredictSection::KEYS,
        "walsh" => WalshSection::KEYS,
        "scan" => ScanSection::KEYS,
        "matching" => MatchingSection::KEYS,
        "output" => OutputSection::KEYS,
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# estimate run
[experiment]
kind = estimate
seed = 7

[circuit]
n = 10
m = 8
two_qubit = iswap

[sampling]
samples = 5000
source = mixture
fidelity = 0.3

[noise]
e1 = 0.0016
eq = 0.01,0.02,0.03

[estimate]
estimators = xeb,mle
";

    #[test]
    fn text_round_trip() {
        let cfg = ExperimentConfig::parse_text(SAMPLE).unwrap();
        assert_eq!(cfg.kind().unwrap(), Kind::Estimate);
        assert_eq!(cfg.sampling.fidelity, Some(0.3));
        assert_eq!(cfg.noise.eq, Some(RateSpec(Rates::PerComponent(vec![0.01, 0.02, 0.03]))));
        let again = ExperimentConfig::parse_text(&cfg.to_text()).unwrap();
        assert_eq!(again, cfg);
        let json = ExperimentConfig::parse_json(&cfg.to_json()).unwrap();
        assert_eq!(json, cfg);
    }

    #[test]
    fn awkward_floats_survive() {
        let mut cfg = ExperimentConfig::default();
        cfg.sampling.fidelity = Some(0.1 + 0.2);
        cfg.walsh.flip_rate = Some(1e-300);
        cfg.noise.e2 = Some(RateSpec(Rates::PerComponent(vec![1.0 / 3.0])));
        assert_eq!(ExperimentConfig::parse_text(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(ExperimentConfig::parse_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_report_their_line() {
        let err = ExperimentConfig::parse_text("[experiment]\nkind = walsh\n\n[circuit]\nqubits = 4\n").unwrap_err();
        match err {
            CliError::ConfigLine { line, msg } => {
                assert_eq!(line, 5);
                assert!(msg.contains("qubits"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ExperimentConfig::parse_text("[bogus]\n"),
            Err(CliError::ConfigLine { line: 1, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse_text("n = 3\n"),
            Err(CliError::ConfigLine { line: 1, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse_text("[circuit]\nn = three\n"),
            Err(CliError::ConfigLine { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse_text("[circuit]\nn = 3\nn = 4\n"),
            Err(CliError::ConfigLine { line: 3, .. })
        ));
        assert!(ExperimentConfig::parse_json(r#"{"circuit": {"qubits": 4}}"#).is_err());
    }

    #[test]
    fn overrides() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_override("circuit.n=5").unwrap();
        cfg.apply_override("experiment.kind = walsh").unwrap();
        assert_eq!(cfg.n(), 5);
        assert!(cfg.apply_override("circuit.qubits=5").is_err());
        assert!(cfg.apply_override("n=5").is_err());
    }

    #[test]
    fn validation_catches_caps_early() {
        let mut cfg = ExperimentConfig::parse_text("[experiment]\nkind = simulate\n[circuit]\nn = 30\n").unwrap();
        assert!(matches!(cfg.validate(), Err(CliError::Resource(_))));
        cfg.experiment.kind = Some(Kind::Predict);
        cfg.validate().unwrap();
        cfg.circuit.n = Some(53);
        cfg.validate().unwrap();
        cfg.sampling.fidelity = Some(1.5);
        assert!(cfg.validate().is_err());
    }
}
