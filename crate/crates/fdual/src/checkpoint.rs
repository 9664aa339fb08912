//! Checkpoint files for resumable searches.
//!
//! A checkpoint stores the hash of the search configuration, the ids of the
//! frontier tasks already finished, and for each of them its statistics and
//! hits, so a resumed run can rebuild the exact result of an uninterrupted one.

use std::fs;
use std::io::Write;
use std::path::Path;

use fdual_core::search::{SearchStats, TaskOutcome};
use fdual_core::{Mode, SearchConfig, Symmetry};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::CertificateFile;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("i/o on checkpoint: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error("checkpoint belongs to a different search (config hash {found}, expected {expected})")]
    HashMismatch { expected: String, found: String },
}

/// The parts of a [`SearchConfig`] that define the task universe. Budget,
/// worker count and paths are deliberately absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    pub orders: Vec<u32>,
    pub target_size: usize,
    pub mode: String,
    pub symmetry: String,
    pub frontier_depth: usize,
    pub prefix: Vec<usize>,
    pub automorphism_cap: usize,
}

impl ConfigJson {
    pub fn from_config(config: &SearchConfig) -> Self {
        ConfigJson {
            orders: config.spec.orders().to_vec(),
            target_size: config.target_size,
            mode: mode_name(config.mode).to_string(),
            symmetry: symmetry_name(config.symmetry).to_string(),
            frontier_depth: config.frontier_depth,
            prefix: config.prefix.clone(),
            automorphism_cap: config.automorphism_cap,
        }
    }

    /// SHA-256 of the compact JSON serialization, hex encoded.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Pair => "pair",
        Mode::SelfDual => "self_dual",
    }
}

pub fn symmetry_name(symmetry: Symmetry) -> &'static str {
    match symmetry {
        Symmetry::None => "none",
        Symmetry::Translation => "translation",
        Symmetry::Affine => "affine",
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsJson {
    pub nodes_visited: u64,
    pub leaves_tested: u64,
    pub pruned_by_symmetry: u64,
    pub pruned_by_screen: u64,
    pub expanded: u64,
    pub hits: u64,
}

impl From<SearchStats> for StatsJson {
    fn from(s: SearchStats) -> Self {
        StatsJson {
            nodes_visited: s.nodes_visited,
            leaves_tested: s.leaves_tested,
            pruned_by_symmetry: s.pruned_by_symmetry,
            pruned_by_screen: s.pruned_by_screen,
            expanded: s.expanded,
            hits: s.hits,
        }
    }
}

impl From<StatsJson> for SearchStats {
    fn from(s: StatsJson) -> Self {
        SearchStats {
            nodes_visited: s.nodes_visited,
            leaves_tested: s.leaves_tested,
            pruned_by_symmetry: s.pruned_by_symmetry,
            pruned_by_screen: s.pruned_by_screen,
            expanded: s.expanded,
            hits: s.hits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRecord {
    pub task: Vec<usize>,
    pub stats: StatsJson,
    pub hits: Vec<CertificateFile>,
}

impl TaskRecord {
    pub fn from_outcome(outcome: &TaskOutcome) -> Self {
        TaskRecord {
            task: outcome.task.chosen.clone(),
            stats: outcome.stats.into(),
            hits: outcome.hits.iter().map(CertificateFile::from_certificate).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointRecord {
    pub version: String,
    pub config_hash: String,
    pub config: ConfigJson,
    /// Finished task ids in completion order.
    pub completed: Vec<Vec<usize>>,
    /// Sum over the finished tasks.
    pub stats: StatsJson,
    pub results: Vec<TaskRecord>,
}

impl CheckpointRecord {
    pub fn new(config: &SearchConfig) -> Self {
        let config = ConfigJson::from_config(config);
        CheckpointRecord {
            version: fdual_core::VERSION.to_string(),
            config_hash: config.hash(),
            config,
            completed: Vec::new(),
            stats: StatsJson::default(),
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, record: TaskRecord) {
        let mut total: SearchStats = self.stats.into();
        total.merge(&record.stats.into());
        self.stats = total.into();
        self.completed.push(record.task.clone());
        self.results.push(record);
    }
}

/// Writes through a temporary file and a rename so a kill never leaves a torn checkpoint.
pub fn checkpoint_save(path: &Path, record: &CheckpointRecord) -> Result<(), CheckpointError> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(record).expect("checkpoint serializes").as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Loads a checkpoint and refuses it unless it was written for `config`.
pub fn checkpoint_load(path: &Path, config: &SearchConfig) -> Result<CheckpointRecord, CheckpointError> {
    let text = fs::read_to_string(path)?;
    let record: CheckpointRecord = serde_json::from_str(&text).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    let expected = ConfigJson::from_config(config).hash();
    if record.config_hash != expected || record.config.hash() != expected {
        return Err(CheckpointError::HashMismatch { expected, found: record.config_hash });
    }
    if record.completed.len() != record.results.len()
        || record.completed.iter().zip(&record.results).any(|(id, r)| *id != r.task)
    {
        return Err(CheckpointError::Corrupt("completed list and task results disagree".into()));
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fdual_core::GroupSpec;

    fn config() -> SearchConfig {
        SearchConfig::new(GroupSpec::new(vec![2, 8]).unwrap(), 4, Mode::Pair)
    }

    #[test]
    fn hash_ignores_budget_but_not_size() {
        let a = ConfigJson::from_config(&config()).hash();
        let b = ConfigJson::from_config(&config().with_budget(Some(10))).hash();
        assert_eq!(a, b);
        let other = SearchConfig::new(GroupSpec::new(vec![2, 8]).unwrap(), 8, Mode::Pair);
        assert_ne!(a, ConfigJson::from_config(&other).hash());
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn save_load_and_refusals() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let mut record = CheckpointRecord::new(&config());
        record.push(TaskRecord {
            task: vec![0, 1],
            stats: StatsJson { nodes_visited: 3, ..Default::default() },
            hits: vec![],
        });
        checkpoint_save(&path, &record).unwrap();
        assert_eq!(checkpoint_load(&path, &config()).unwrap(), record);

        let other = SearchConfig::new(GroupSpec::new(vec![16]).unwrap(), 4, Mode::Pair);
        assert!(matches!(checkpoint_load(&path, &other), Err(CheckpointError::HashMismatch { .. })));

        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(checkpoint_load(&path, &config()), Err(CheckpointError::Corrupt(_))));
    }
}
