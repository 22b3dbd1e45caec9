use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The steady state does not exist or is not physical (e.g. `kappa_s <= 0`).
    #[error("unphysical operating point: {reason} (power {power} W, last residual {residual:e})")]
    Unphysical {
        reason: String,
        power: f64,
        residual: f64,
    },

    /// A closed-form approximant was asked for outside its regime.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// `-i omega I - M` is singular to working precision.
    #[error("singular frequency-domain system at omega = {omega} rad/s")]
    Singular { omega: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
