use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `line` is 0 when the problem is not tied to one line.
    #[error("config error in {origin}{}: {message}", if *line > 0 { format!(" line {line}") } else { String::new() })]
    Config { origin: String, line: usize, message: String },
    #[error(transparent)]
    Model(#[from] pushgate_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{0} row(s) failed validity checks (see the flags column); pass --force to accept them")]
    Validity(usize),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Validity(_) => 3,
            _ => 1,
        }
    }
}
