use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 2;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub subcommand: &'static str,
    pub inputs: Value,
    pub outcome: String,
    pub summary: String,
    pub result: Value,
    /// Wall-clock milliseconds; the only field that varies between runs.
    pub timing_ms: f64,
    #[serde(skip)]
    pub exit_code: u8,
}

impl RunReport {
    pub fn new(subcommand: &'static str, inputs: Value) -> Self {
        Self {
            subcommand,
            inputs,
            outcome: String::new(),
            summary: String::new(),
            result: Value::Null,
            timing_ms: 0.0,
            exit_code: EXIT_OK,
        }
    }

    pub fn render(&self, compact: bool) -> String {
        if compact {
            serde_json::to_string(self).expect("report serializes")
        } else {
            serde_json::to_string_pretty(self).expect("report serializes")
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(entdim::Error),
    Io { path: String, message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io { path, message } => format!("{path}: {message}"),
        }
    }
}

impl<E: Into<entdim::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Core(e.into())
    }
}
