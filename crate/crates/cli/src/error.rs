use trustcalc::TrustError;

/// A failure, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag values: exit 1.
    Usage(anyhow::Error),
    /// Unreadable or unsuitable input: exit 2.
    Data(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(anyhow::anyhow!(msg.into()))
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    pub fn inner(&self) -> &anyhow::Error {
        match self {
            CliError::Usage(e) | CliError::Data(e) => e,
        }
    }

    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Usage(e) => CliError::Usage(e.context(what.to_string())),
            CliError::Data(e) => CliError::Data(e.context(what.to_string())),
        }
    }
}

impl From<TrustError> for CliError {
    fn from(e: TrustError) -> Self {
        match e {
            TrustError::InvalidParameter(_) | TrustError::SelfAssessment(_) => CliError::Usage(e.into()),
            _ => CliError::Data(e.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.into())
    }
}
