use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("instance {0:?} has no tokens")]
    EmptyInstance(String),

    #[error("position {position} is out of range for an instance of length {len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("invalid model spec: {0}")]
    InvalidModel(String),

    #[error("instance {id:?} has {len} tokens, above the exact Shapley cap of {cap}; use sampled Shapley")]
    InstanceTooLong { id: String, len: usize, cap: usize },

    #[error("invalid explainer config: {0}")]
    InvalidExplainerConfig(String),

    #[error("ranking has {got} positions but the instance has {expected}")]
    RankingLength { expected: usize, got: usize },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("instance {0:?} has no clearly relevant token to judge against")]
    EmptyRelevantSet(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("no verdicts to aggregate")]
    NoVerdicts,

    #[error("invalid harness config: {0}")]
    InvalidHarnessConfig(String),

    #[error("invalid corpus spec: {0}")]
    InvalidCorpusSpec(String),

    #[error("invalid run config: {0}")]
    InvalidRunConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {source}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Stable machine-readable kind, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidToken(_) => "invalid_token",
            Error::EmptyInstance(_) => "empty_instance",
            Error::PositionOutOfRange { .. } => "position_out_of_range",
            Error::InvalidModel(_) => "invalid_model",
            Error::InstanceTooLong { .. } => "instance_too_long",
            Error::InvalidExplainerConfig(_) => "invalid_explainer_config",
            Error::RankingLength { .. } => "ranking_length",
            Error::InvalidRanking(_) => "invalid_ranking",
            Error::EmptyRelevantSet(_) => "empty_relevant_set",
            Error::EmptyCorpus => "empty_corpus",
            Error::NoVerdicts => "no_verdicts",
            Error::InvalidHarnessConfig(_) => "invalid_harness_config",
            Error::InvalidCorpusSpec(_) => "invalid_corpus_spec",
            Error::InvalidRunConfig(_) => "invalid_run_config",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
