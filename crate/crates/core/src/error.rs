use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("no unique solution: {0}")]
    NoUniqueSolution(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("pair (A, B) is not controllable: {0}")]
    Uncontrollable(String),

    #[error("evaluation at a pole (s = {0})")]
    Pole(f64),

    #[error("outside the stated scope: {0}")]
    OutOfScope(String),

    /// P_y is singular, so the optimal anchor -P_y^{-1} P_z does not exist.
    #[error("anchor matrix unavailable: {0}")]
    AnchorUnavailable(String),

    /// The rate-anchoring matrix of a predetermined-rate Taylor rule is singular.
    #[error("initial rates do not anchor the forward-looking variables: {0}")]
    NoAnchor(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by the caller's input rather than the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::OutOfScope(_) | Error::Uncontrollable(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
