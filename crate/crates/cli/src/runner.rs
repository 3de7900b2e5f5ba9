//! Experiment kinds. Each run computes its metrics and artifacts in memory,
//! then writes them under `<out>/<id>/` next to a copy of the config,
//! `metrics.csv` and `record.json`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use rcslab::circuit::{gate_counts, generate_random_circuit, layout_gate_counts, RandomCircuit};
use rcslab::matching::{
    count_semi_matchings, lovasz_matching_test, maximum_matching, sample_semi_matchings, semi_matching_from_choices,
    BipartiteGraph, MatchingVerdict, MultiSubset, COUNT_MAX_LEFT, DEFAULT_PRIME,
};
use rcslab::noise::{mix_with_uniform, noisy_sampler, Rates};
use rcslab::rng::derive_seed;
use rcslab::simulator::{porter_thomas_diagnostics, sample, simulate, OutputDistribution, SampleSet};
use rcslab::walsh::{
    attenuate, degree_truncate, inverse_walsh, noise_correlation_from_spectrum, walsh_transform,
};
use rcslab::xeb::{
    alpha, f_xeb, formula77, formula77_deviation, formula77_simplified, mle_estimator, size_biased_histogram,
    v_estimator, FidelityEstimate,
};
use rcslab::{stats, Error};

use crate::config::{EstimatorName, ExperimentConfig, Kind, Source, DEFAULT_CIRCUITS_SCAN, DEFAULT_FLIP_RATE, DEFAULT_SCAN_N};
use crate::record::{Metric, ResultRecord};
use crate::CliError;

/// Metrics and files of one run, before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub metrics: Vec<Metric>,
    /// File name and content, in write order.
    pub artifacts: Vec<(String, String)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            metrics: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
        });
    }

    fn file(&mut self, name: &str, content: String) {
        self.artifacts.push((name.to_string(), content));
    }
}

pub const CONFIG_FILE: &str = "config.txt";
pub const METRICS_FILE: &str = "metrics.csv";
pub const RECORD_FILE: &str = "record.json";

pub const ESTIMATE_HEADER: &str =
    "circuit_id,n,m,estimator_kind,value,std_error,sample_count,predicted_77,predicted_77_avg,deviation_bound";

/// Runs `config` and writes its output directory under `out_root`.
pub fn run_experiment(config: &ExperimentConfig, out_root: &Path) -> Result<(ResultRecord, PathBuf), CliError> {
    config.validate()?;
    let id = config.id()?;
    let dir = out_root.join(&id);
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    info!("running {} into {}", config.kind()?, dir.display());

    let outcome = execute(config)?;
    let write = |name: &str, content: &str| {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| CliError::io(&path, e))
    };
    write(CONFIG_FILE, &config.to_text())?;
    for (name, content) in &outcome.artifacts {
        write(name, content)?;
    }
    let names = outcome.artifacts.iter().map(|(n, _)| n.clone()).collect();
    let record = ResultRecord::new(id, config.clone(), outcome.metrics, names);
    write(METRICS_FILE, &record.metrics_csv())?;
    write(
        RECORD_FILE,
        &serde_json::to_string_pretty(&record).expect("record serializes"),
    )?;
    Ok((record, dir))
}

/// Re-runs the config embedded in `record_path` and compares metrics and
/// every artifact byte for byte. The timestamp is not compared.
pub fn replay(record_path: &Path) -> Result<ResultRecord, CliError> {
    let text = fs::read_to_string(record_path).map_err(|e| CliError::io(record_path, e))?;
    let stored: ResultRecord =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", record_path.display())))?;
    if crate::record::config_hash(&stored.config) != stored.config_hash {
        return Err(CliError::CheckFailed("config hash does not match the embedded config".into()));
    }
    let outcome = execute(&stored.config)?;
    let names: Vec<String> = outcome.artifacts.iter().map(|(n, _)| n.clone()).collect();
    let fresh = ResultRecord {
        timestamp: stored.timestamp,
        ..ResultRecord::new(stored.id.clone(), stored.config.clone(), outcome.metrics.clone(), names)
    };
    if !fresh.same_result(&stored) {
        return Err(CliError::CheckFailed("metrics differ from the stored record".into()));
    }
    let dir = record_path.parent().unwrap_or(Path::new("."));
    for (name, content) in &outcome.artifacts {
        let path = dir.join(name);
        let on_disk = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        if on_disk != *content {
            return Err(CliError::CheckFailed(format!("{name} differs from the regenerated file")));
        }
    }
    Ok(fresh)
}

/// Computes a run without writing anything.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    match config.kind()? {
        Kind::Simulate => run_simulate(config),
        Kind::Sample => run_sample(config),
        Kind::NoisySample => run_noisy_sample(config),
        Kind::Estimate => run_estimate(config),
        Kind::Predict => run_predict(config),
        Kind::Walsh => run_walsh(config),
        Kind::CorrelationScan => run_correlation_scan(config),
        Kind::MatchSample => run_match_sample(config),
        Kind::MatchTest => run_match_test(config),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Circuit `index` of the run: from the circuit file, or generated with seed
/// `seed + index`.
fn circuit(config: &ExperimentConfig, index: usize) -> Result<RandomCircuit, CliError> {
    if let Some(path) = &config.circuit.file {
        if index > 0 {
            return Err(CliError::Config("a circuit file gives a single circuit; set circuits = 1".into()));
        }
        return Ok(RandomCircuit::from_text(&read(path)?)?);
    }
    let seed = config.seed().wrapping_add(index as u64);
    Ok(generate_random_circuit(config.n(), config.m(), seed, &config.gate_config())?)
}

fn circuit_metrics(out: &mut Outcome, c: &RandomCircuit) {
    let (g1, g2) = gate_counts(c);
    out.metric("n", c.n() as f64);
    out.metric("m", c.m() as f64);
    out.metric("g1", g1 as f64);
    out.metric("g2", g2 as f64);
}

fn write_samples(config: &ExperimentConfig) -> bool {
    config.output.write_samples.unwrap_or(true)
}

/// Samples for circuit `index` from the configured source.
fn draw(config: &ExperimentConfig, c: &RandomCircuit, d: &OutputDistribution, index: usize) -> Result<SampleSet, CliError> {
    let k = config.samples();
    let seed = derive_seed(config.seed(), index as u64);
    let source = config.sampling.source.unwrap_or(Source::Ideal);
    let set = match source {
        Source::Ideal => sample(d, k, seed)?,
        Source::Uniform => sample(&OutputDistribution::uniform(d.n())?, k, seed)?,
        Source::Mixture => sample(&mix_with_uniform(d, config.sampling.fidelity.unwrap_or(1.0))?, k, seed)?,
        Source::Noisy => noisy_sampler(c, &config.noise_model(), k, seed)?,
        Source::Archive => {
            let path = config.sampling.archive.as_ref().expect("validated");
            let set = SampleSet::from_archive(&read(path)?)?;
            if set.n() != d.n() {
                return Err(CliError::Core(Error::Dimension {
                    expected: d.n(),
                    found: set.n(),
                }));
            }
            set
        }
    };
    Ok(set)
}

fn run_simulate(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let c = circuit(config, 0)?;
    let d = simulate(&c)?;
    let mut out = Outcome::new();
    circuit_metrics(&mut out, &c);
    let pt = porter_thomas_diagnostics(&d);
    out.metric("first_moment", pt.first_moment);
    out.metric("second_moment", pt.second_moment);
    out.metric("ks_exponential", pt.ks_distance);
    out.metric("alpha", alpha(&d).alpha);
    out.file("circuit.txt", c.to_text());
    out.file("distribution.csv", d.to_csv());
    if write_samples(config) {
        out.file("samples.txt", sample(&d, config.samples(), derive_seed(config.seed(), 0))?.to_archive());
    }
    Ok(out)
}

fn estimate_metrics(out: &mut Outcome, prefix: &str, e: &FidelityEstimate) {
    out.metric(prefix.to_string(), e.value);
    out.metric(format!("{prefix}_std_error"), e.standard_error);
}

fn run_sample(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let c = circuit(config, 0)?;
    let d = simulate(&c)?;
    let samples = draw(config, &c, &d, 0)?;
    let mut out = Outcome::new();
    circuit_metrics(&mut out, &c);
    out.metric("samples", samples.len() as f64);
    estimate_metrics(&mut out, "xeb", &f_xeb(&samples, &d)?);
    out.file("circuit.txt", c.to_text());
    if write_samples(config) {
        out.file("samples.txt", samples.to_archive());
    }
    Ok(out)
}

/// Mean rate of a rate spec for the averaged formula.
fn average_rates(config: &ExperimentConfig) -> rcslab::noise::AveragedRates {
    config.noise_model().averages()
}

fn run_noisy_sample(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let c = circuit(config, 0)?;
    let d = simulate(&c)?;
    let model = config.noise_model();
    let samples = noisy_sampler(&c, &model, config.samples(), derive_seed(config.seed(), 0))?;
    let (g1, g2) = gate_counts(&c);
    let mut out = Outcome::new();
    circuit_metrics(&mut out, &c);
    out.metric("samples", samples.len() as f64);
    let xeb = f_xeb(&samples, &d)?;
    estimate_metrics(&mut out, "xeb", &xeb);
    let predicted = formula77(&model, &c)?.value;
    out.metric("predicted_77", predicted);
    out.metric("predicted_77_avg", formula77_simplified(c.n(), g1, g2, average_rates(config))?.value);
    out.metric("deviation_bound", formula77_deviation(c.n(), g1, g2));
    if predicted > 0.0 {
        out.metric("xeb_over_predicted", xeb.value / predicted);
    }
    out.file("circuit.txt", c.to_text());
    if write_samples(config) {
        out.file("samples.txt", samples.to_archive());
    }
    Ok(out)
}

struct CircuitEstimates {
    id: String,
    n: usize,
    m: usize,
    estimates: Vec<FidelityEstimate>,
    predicted_77: f64,
    predicted_77_avg: f64,
    deviation: f64,
    histogram: Option<String>,
}

fn run_estimate(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let kinds = config
        .estimate
        .estimators
        .clone()
        .unwrap_or_else(|| vec![EstimatorName::Xeb, EstimatorName::V, EstimatorName::Mle]);
    if config.sampling.source == Some(Source::Archive) && config.circuits() != 1 {
        return Err(CliError::Config("an archive holds samples for one circuit; set circuits = 1".into()));
    }
    let model = config.noise_model();
    let rows: Vec<CircuitEstimates> = (0..config.circuits())
        .into_par_iter()
        .map(|i| -> Result<CircuitEstimates, CliError> {
            let c = circuit(config, i)?;
            let d = simulate(&c)?;
            let samples = draw(config, &c, &d, i)?;
            let estimates = kinds
                .iter()
                .map(|k| match k {
                    EstimatorName::Xeb => f_xeb(&samples, &d),
                    EstimatorName::V => v_estimator(&samples, &d),
                    EstimatorName::Mle => mle_estimator(&samples, &d),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (g1, g2) = gate_counts(&c);
            let histogram = if i == 0 { Some(size_biased_histogram(&samples, &d)?.to_csv()) } else { None };
            Ok(CircuitEstimates {
                id: c.id(),
                n: c.n(),
                m: c.m(),
                estimates,
                predicted_77: formula77(&model, &c)?.value,
                predicted_77_avg: formula77_simplified(c.n(), g1, g2, model.averages())?.value,
                deviation: formula77_deviation(c.n(), g1, g2),
                histogram,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut csv = format!("{ESTIMATE_HEADER}\n");
    for r in &rows {
        for e in &r.estimates {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{}",
                r.id, r.n, r.m, e.kind, e.value, e.standard_error, e.sample_count, r.predicted_77, r.predicted_77_avg, r.deviation
            );
        }
    }
    let mut out = Outcome::new();
    out.metric("circuits", rows.len() as f64);
    out.metric("samples", config.samples() as f64);
    for (j, kind) in kinds.iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(|r| r.estimates[j].value).collect();
        let name = kind.as_str();
        out.metric(format!("{name}_mean"), stats::mean(&values));
        let se = if values.len() > 1 {
            (stats::sample_variance(&values) / values.len() as f64).sqrt()
        } else {
            rows[0].estimates[j].standard_error
        };
        out.metric(format!("{name}_std_error"), se);
    }
    out.metric("predicted_77_mean", stats::mean(&rows.iter().map(|r| r.predicted_77).collect::<Vec<_>>()));
    out.file("estimates.csv", csv);
    if let Some(h) = rows[0].histogram.clone() {
        out.file("histogram.csv", h);
    }
    Ok(out)
}

fn run_predict(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (n, m) = (config.n(), config.m());
    let layout = config.gate_config().layout;
    let (lg1, lg2) = layout_gate_counts(n, m, layout);
    let g1 = config.predict.g1.unwrap_or(lg1);
    let g2 = config.predict.g2.unwrap_or(lg2);
    let model = config.noise_model();
    let averaged = formula77_simplified(n, g1, g2, model.averages())?.value;
    let per_component = [&model.one_qubit, &model.two_qubit, &model.readout]
        .iter()
        .any(|r| matches!(r, Rates::PerComponent(_)));
    // Per-component rates need the actual gate list; uniform rates do not.
    let exact = if per_component {
        if config.predict.g1.is_some() || config.predict.g2.is_some() {
            warn!("g1/g2 overrides only affect the averaged prediction when rates are per component");
        }
        formula77(&model, &circuit(config, 0)?)?.value
    } else {
        averaged
    };
    let deviation = formula77_deviation(n, g1, g2);
    let mut out = Outcome::new();
    out.metric("n", n as f64);
    out.metric("m", m as f64);
    out.metric("g1", g1 as f64);
    out.metric("g2", g2 as f64);
    out.metric("predicted_77", exact);
    out.metric("predicted_77_avg", averaged);
    out.metric("deviation_bound", deviation);
    let id = format!("n{n}-m{m}-s{}", config.seed());
    let mut csv = format!("{ESTIMATE_HEADER}\n");
    for (kind, value) in [("PREDICTED_77", exact), ("PREDICTED_77_AVG", averaged)] {
        let _ = writeln!(csv, "{id},{n},{m},{kind},{value},0,0,{exact},{averaged},{deviation}");
    }
    out.file("estimates.csv", csv);
    Ok(out)
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (stats::mean(a), stats::mean(b));
    let cov = stats::sum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let va = stats::sum(a.iter().map(|x| (x - ma).powi(2)));
    let vb = stats::sum(b.iter().map(|y| (y - mb).powi(2)));
    cov / (va * vb).sqrt()
}

fn run_walsh(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let c = circuit(config, 0)?;
    let d = simulate(&c)?;
    let spectrum = walsh_transform(d.probs())?;
    let t = config.walsh.flip_rate.unwrap_or(DEFAULT_FLIP_RATE);
    let mut out = Outcome::new();
    circuit_metrics(&mut out, &c);
    out.metric("parseval_error", spectrum.parseval_error(d.probs()));
    out.metric("flip_rate", t);
    out.metric("noise_correlation", noise_correlation_from_spectrum(&spectrum, t)?);
    let noisy = inverse_walsh(&attenuate(&spectrum, t)?);
    out.metric("noisy_total_variation", 0.5 * stats::sum(noisy.iter().zip(d.probs()).map(|(a, b)| (a - b).abs())));

    let weights = spectrum.weight_by_degree();
    let mut by_degree = String::from("degree,weight\n");
    for (k, w) in weights.iter().enumerate() {
        let _ = writeln!(by_degree, "{k},{w:e}");
    }
    if let Some(bound) = config.walsh.degree {
        let trunc = degree_truncate(&spectrum, bound)?;
        let high: f64 = weights[1..].iter().sum();
        let kept: f64 = weights[1..=bound.min(c.n())].iter().sum();
        out.metric("degree_bound", bound as f64);
        out.metric("truncation_predicted_correlation", if high > 0.0 { (kept / high).sqrt() } else { 1.0 });
        out.metric("truncation_raw_correlation", pearson(&trunc.raw, d.probs()));
        out.metric("truncation_repaired_correlation", pearson(trunc.repaired.probs(), d.probs()));
        out.metric("truncation_negative_mass", -stats::sum(trunc.raw.iter().map(|v| v.min(0.0))));
        out.file("truncated.csv", trunc.repaired.to_csv());
    }
    out.file("spectrum.csv", spectrum.to_csv());
    out.file("degree_weights.csv", by_degree);
    Ok(out)
}

fn run_correlation_scan(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let ns = config.scan.n_values.clone().unwrap_or_else(|| DEFAULT_SCAN_N.to_vec());
    let ts = config
        .scan
        .t_values
        .clone()
        .unwrap_or_else(|| (0..=10).map(|i| i as f64 * 0.05).collect());
    let circuits = config.circuit.circuits.unwrap_or(DEFAULT_CIRCUITS_SCAN);
    let mut out = Outcome::new();
    let mut csv = String::from("n,t,mean_correlation,std_error,circuits\n");
    for &n in &ns {
        let mut local = config.clone();
        local.circuit.n = Some(n);
        local.circuit.file = None;
        info!("scan n = {n}: {circuits} circuits");
        let per_circuit: Vec<Vec<f64>> = (0..circuits)
            .into_par_iter()
            .map(|i| -> Result<Vec<f64>, CliError> {
                let spectrum = walsh_transform(simulate(&circuit(&local, i)?)?.probs())?;
                Ok(ts
                    .iter()
                    .map(|&t| noise_correlation_from_spectrum(&spectrum, t))
                    .collect::<Result<_, _>>()?)
            })
            .collect::<Result<_, _>>()?;
        for (j, &t) in ts.iter().enumerate() {
            let values: Vec<f64> = per_circuit.iter().map(|v| v[j]).collect();
            let mean = stats::mean(&values);
            let se = (stats::sample_variance(&values) / values.len() as f64).sqrt();
            let _ = writeln!(csv, "{n},{t},{mean},{se},{circuits}");
            out.metric(format!("correlation_n{n}_t{t}"), mean);
        }
    }
    out.file("scan.csv", csv);
    Ok(out)
}

fn load_graph(config: &ExperimentConfig) -> Result<BipartiteGraph, CliError> {
    let path = config.matching.graph.as_ref().expect("validated");
    Ok(BipartiteGraph::parse(&read(path)?)?)
}

/// Exact law of the sampler by enumerating choice tuples, when small enough.
const EXACT_LAW_MAX_TUPLES: u64 = 1 << 20;

fn exact_law(g: &BipartiteGraph) -> Result<Option<(HashMap<MultiSubset, u64>, u64)>, CliError> {
    let degrees: Vec<u64> = (0..g.left_size()).map(|a| g.neighbors(a).len() as u64).collect();
    let mut total = 1u64;
    for &d in &degrees {
        total = match total.checked_mul(d) {
            Some(t) if t <= EXACT_LAW_MAX_TUPLES => t,
            _ => return Ok(None),
        };
    }
    let mut law = HashMap::new();
    for mut code in 0..total {
        let choices: Vec<usize> = degrees
            .iter()
            .map(|&d| {
                let c = code % d;
                code /= d;
                c as usize
            })
            .collect();
        *law.entry(semi_matching_from_choices(g, &choices)?).or_insert(0) += 1;
    }
    Ok(Some((law, total)))
}

fn run_match_sample(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = load_graph(config)?;
    let k = config.samples();
    let mut tally: BTreeMap<MultiSubset, u64> = BTreeMap::new();
    for c in sample_semi_matchings(&g, k, config.seed())? {
        *tally.entry(c).or_insert(0) += 1;
    }
    let mut out = Outcome::new();
    out.metric("left_size", g.left_size() as f64);
    out.metric("right_size", g.right_size() as f64);
    out.metric("draws", k as f64);
    out.metric("distinct", tally.len() as f64);
    let countable = g.left_size() <= COUNT_MAX_LEFT;
    let mut csv = String::from("multiset,count,frequency,semi_matchings\n");
    for (c, &count) in &tally {
        let n_ac = if countable { count_semi_matchings(&g, c)?.to_string() } else { String::new() };
        let _ = writeln!(csv, "{c},{count},{},{n_ac}", count as f64 / k as f64);
    }
    if let Some((law, total)) = exact_law(&g)? {
        let mut chi2 = 0.0;
        for (c, &ways) in &law {
            let expected = k as f64 * ways as f64 / total as f64;
            let seen = tally.get(c).copied().unwrap_or(0) as f64;
            chi2 += (seen - expected).powi(2) / expected;
        }
        out.metric("chi_squared", chi2);
        out.metric("degrees_of_freedom", (law.len() - 1) as f64);
        out.metric("support_size", law.len() as f64);
    }
    out.file("multisets.csv", csv);
    Ok(out)
}

fn run_match_test(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = load_graph(config)?;
    let q = config.matching.prime.unwrap_or(DEFAULT_PRIME);
    let trials = config.matching.trials.unwrap_or(10);
    let outcome = lovasz_matching_test(&g, q, trials, config.seed())?;
    let oracle = maximum_matching(&g);
    let yes = outcome.verdict == MatchingVerdict::PerfectMatching;
    let mut out = Outcome::new();
    out.metric("n", g.left_size() as f64);
    out.metric("perfect_matching", if yes { 1.0 } else { 0.0 });
    out.metric("trials_run", outcome.trials as f64);
    out.metric("error_bound", outcome.error_bound);
    out.metric("maximum_matching", oracle as f64);
    out.metric("agrees_with_oracle", if yes == (oracle == g.left_size()) { 1.0 } else { 0.0 });
    Ok(out)
}
