use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid coefficient matrix: {0}")]
    InvalidMatrix(String),

    #[error("ellipticity violated: |mu| = {mu_abs} is not below 1")]
    EllipticityViolation { mu_abs: f64 },

    #[error("singular point ({x}, {y})")]
    SingularPoint { x: f64, y: f64 },

    #[error("point ({x}, {y}) lies outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("constant undefined: {0}")]
    ConstantUndefined(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("assembly failed at quadrature node ({x}, {y}) of triangle {triangle}: {reason}")]
    Assembly {
        triangle: usize,
        x: f64,
        y: f64,
        reason: String,
    },

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    /// Numeric failures (as opposed to bad inputs) are reported with a
    /// distinct exit status by the command-line front end.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Assembly { .. }
                | Error::SingularSystem(_)
                | Error::Convergence { .. }
                | Error::Numeric(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn ensure_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {x}")))
    }
}
