use lplab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help or version output requested; not a failure.
    #[error("{0}")]
    Display(String),
    #[error("{0}")]
    Validation(String),
    #[error("numerical quality check failed: {0}")]
    Refinement(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn from_clap(e: clap::Error) -> Self {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                CliError::Display(e.render().to_string())
            }
            _ => {
                let text = e.render().to_string();
                CliError::Validation(text.trim_start_matches("error: ").trim_end().to_string())
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Display(_) => 0,
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Refinement(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Refinement { .. } => CliError::Refinement(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
