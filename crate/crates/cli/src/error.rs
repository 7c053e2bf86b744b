use std::path::PathBuf;

use covsynth_core::attack::AttackError;
use covsynth_core::scenario::ScenarioError;
use covsynth_core::synthesis::SynthesisError;
use covsynth_core::verify::VerifyError;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<ParseError>,
    },
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::At {
            line,
            message: message.into(),
        }
    }

    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        ParseError::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// Line number of the innermost positioned error, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::At { line, .. } => Some(*line),
            ParseError::InFile { source, .. } => source.line(),
            ParseError::Io { .. } => None,
        }
    }
}

impl From<(usize, ScenarioError)> for ParseError {
    fn from((line, e): (usize, ScenarioError)) -> Self {
        ParseError::at(line, e.to_string())
    }
}

/// Failures of a CLI run, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Input(String),
}
