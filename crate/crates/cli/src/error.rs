use std::fmt;

/// A failure mapped onto the binary's exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Verification(String),
    Input(String),
    Budget(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// Library errors become input errors, except for the subset budget.
    pub fn from_core(context: &str, err: majur::Error) -> Self {
        match err {
            majur::Error::BudgetExceeded { .. } => {
                CliError::Budget(format!("{context}: {err} (rerun with --force-budget to lift the cap)"))
            }
            other => CliError::Input(format!("{context}: {other}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
