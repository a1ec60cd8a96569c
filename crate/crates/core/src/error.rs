use std::fmt;
use std::path::PathBuf;

/// One offending configuration field and why it was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIssue {
    pub field: String,
    pub message: String,
}

impl FieldIssue {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn join_issues(issues: &[FieldIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn suggestion_suffix(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean `{s}`?)"),
        None => String::new(),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {}", join_issues(.0))]
    InvalidConfig(Vec<FieldIssue>),

    #[error("degenerate geometry: UE coincides with the BS antenna")]
    DegenerateGeometry,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`{}", suggestion_suffix(.suggestion))]
    UnknownKey {
        line: usize,
        key: String,
        suggestion: Option<String>,
    },

    #[error("unknown preset `{0}` (expected one of: uma-fullbuffer, rma-ftp, rma-ftp-lowq)")]
    UnknownPreset(String),

    #[error("measurement window is empty (UE time must be positive)")]
    EmptyMeasurement,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SimError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        SimError::InvalidConfig(vec![FieldIssue::new(field, message)])
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user input rather than runtime failures.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            SimError::InvalidConfig(_)
                | SimError::Parse { .. }
                | SimError::UnknownKey { .. }
                | SimError::UnknownPreset(_)
        )
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
