use std::process::ExitCode;

use citeclass::analytics::AnalyticsError;
use citeclass::baseline::BaselineError;
use citeclass::cluster::ClusterError;
use citeclass::corpus::{CorpusError, ManifestError};
use citeclass::evaluation::EvaluationError;
use citeclass::io::ArtifactError;
use citeclass::synth::SynthError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or parameters.
    #[error("{0}")]
    Usage(String),
    /// Missing, malformed or inconsistent inputs.
    #[error("{0}")]
    Data(String),
    /// Failures writing outputs and broken internal invariants.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        })
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        CliError::Data(format!("manifest: {e}"))
    }
}

impl From<ArtifactError> for CliError {
    fn from(e: ArtifactError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<BaselineError> for CliError {
    fn from(e: BaselineError) -> Self {
        match e {
            BaselineError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvaluationError> for CliError {
    fn from(e: EvaluationError) -> Self {
        match e {
            EvaluationError::Cluster(c) => c.into(),
            EvaluationError::EmptyResolutions => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Invalid(_) => CliError::Usage(e.to_string()),
            SynthError::Io { .. } => CliError::Internal(e.to_string()),
        }
    }
}
