use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

/// What a run produced. Everything except `timestamp` is a function of the
/// embedded config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub id: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub seed: u64,
    /// SHA-256 of the canonical text form of `config`.
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub metrics: Vec<Metric>,
    /// Files written next to the record, relative to its directory.
    pub artifacts: Vec<String>,
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.to_text().as_bytes()))
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl ResultRecord {
    pub fn new(id: String, config: ExperimentConfig, metrics: Vec<Metric>, artifacts: Vec<String>) -> Self {
        ResultRecord {
            id,
            timestamp: now(),
            seed: config.seed(),
            config_hash: config_hash(&config),
            config,
            metrics,
            artifacts,
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// `name,value` lines. Values use the shortest round-trip form.
    pub fn metrics_csv(&self) -> String {
        let mut out = String::from("name,value\n");
        for m in &self.metrics {
            out.push_str(&format!("{},{}\n", m.name, m.value));
        }
        out
    }

    /// Equal up to the timestamp.
    pub fn same_result(&self, other: &ResultRecord) -> bool {
        ResultRecord {
            timestamp: other.timestamp,
            ..self.clone()
        } == *other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_tracks_config_content() {
        let mut a = ExperimentConfig::default();
        a.apply_override("experiment.kind=predict").unwrap();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.apply_override("circuit.n=53").unwrap();
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn record_json_round_trip() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_override("experiment.kind=predict").unwrap();
        let r = ResultRecord::new(
            "x".into(),
            cfg,
            vec![Metric {
                name: "f".into(),
                value: 0.1 + 0.2,
            }],
            vec![],
        );
        let back: ResultRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.same_result(&ResultRecord { timestamp: 0, ..r.clone() }));
        assert_eq!(r.metrics_csv(), "name,value\nf,0.30000000000000004\n");
    }
}
