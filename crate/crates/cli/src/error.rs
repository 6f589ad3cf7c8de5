use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("numerical backend failure: {0}")]
    Numerical(String),

    #[error("budget or scan cap exceeded: {0}")]
    Budget(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidSpec(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<mimo_outage::Error> for CliError {
    fn from(e: mimo_outage::Error) -> Self {
        use mimo_outage::Error as E;
        match e {
            E::Domain(_) | E::InvalidConfig(_) => CliError::InvalidSpec(e.to_string()),
            E::RankDeficient { .. } | E::ResampleLimit { .. } => CliError::Numerical(e.to_string()),
            E::BudgetExceeded { .. } | E::ScanCap { .. } => CliError::Budget(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
