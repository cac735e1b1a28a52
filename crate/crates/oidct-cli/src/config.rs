//! Experiment configuration shared by the train and eval commands.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("quality factor list is empty")]
    EmptyQfList,

    #[error("quality factor {0} is outside 1..=100")]
    QfOutOfRange(u8),

    #[error("ridge lambda must be finite and non-negative, got {0}")]
    BadLambda(f64),

    #[error("training and test sets overlap on {0}")]
    TrainTestOverlap(PathBuf),
}

/// Inputs for a train or eval run. Training and test sets must be disjoint;
/// a violation is a hard error at construction time.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub train_paths: Vec<PathBuf>,
    pub test_paths: Vec<PathBuf>,
    pub qf_list: Vec<u8>,
    /// Explicit ridge weight; `None` selects the per-accumulator default
    /// `1e-6 * trace(auto) / 64`.
    pub ridge_lambda: Option<f64>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(
        train_paths: Vec<PathBuf>,
        test_paths: Vec<PathBuf>,
        qf_list: Vec<u8>,
        ridge_lambda: Option<f64>,
        output_dir: PathBuf,
    ) -> Result<Self, ConfigError> {
        if qf_list.is_empty() {
            return Err(ConfigError::EmptyQfList);
        }
        for &qf in &qf_list {
            if qf < 1 || qf > 100 {
                return Err(ConfigError::QfOutOfRange(qf));
            }
        }
        if let Some(lambda) = ridge_lambda {
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(ConfigError::BadLambda(lambda));
            }
        }
        let train_set: BTreeSet<PathBuf> = train_paths.iter().map(|p| normalize(p)).collect();
        for test in &test_paths {
            if train_set.contains(&normalize(test)) {
                return Err(ConfigError::TrainTestOverlap(test.clone()));
            }
        }
        Ok(Self {
            train_paths,
            test_paths,
            qf_list,
            ridge_lambda,
            output_dir,
        })
    }
}

/// Canonical form for overlap detection; falls back to the lexical path for
/// files that do not (yet) exist.
fn normalize(path: &Path) -> PathBuf {
    path.canonicalize().unwrap_or_else(|_| path.to_path_buf())
}
