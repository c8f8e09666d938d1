use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Pade denominator system is singular (condition estimate {condition:.3e})")]
    SingularPadeSystem { condition: f64 },

    #[error("Pade denominator nearly vanishes at t = {t} (|den| = {value:.3e})")]
    PoleProximity { t: f64, value: f64 },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("no root of the shift condition in [{lo:.6e}, {hi:.6e}]")]
    NoRootInDomain { lo: f64, hi: f64 },

    #[error("harmonic frequency squared is not positive ({omega_sq:.6e}) at q0 = {q0:.6e}")]
    OmegaDomainError { q0: f64, omega_sq: f64 },

    #[error("zero pivot at hierarchy order {order}")]
    ZeroPivot { order: usize },

    #[error("requested order {requested} exceeds the supported maximum {max}")]
    OrderOverflow { requested: usize, max: usize },

    #[error("not enough series coefficients: need {need}, have {have}")]
    ShortSeries { need: usize, have: usize },

    #[error("finite-difference eigenvalue not converged: extrapolated {extrapolated:.8}, fine grid {fine:.8}")]
    NotConverged { extrapolated: f64, fine: f64 },

    #[error("eigenvector amplitude {amplitude:.3e} at the outer boundary; domain too small")]
    DomainTooSmall { amplitude: f64 },

    #[error("invalid dot parameters: gamma = {gamma}, gamma_d = {gamma_d}")]
    InvalidDot { gamma: f64, gamma_d: f64 },

    #[error("state ({k}, {m}) does not cluster onto an integral s-state")]
    NonIntegralCluster { k: usize, m: i64 },

    #[error("{label}: {source}")]
    State {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach a state label to an error coming out of the engine.
    pub fn for_state(self, label: impl Into<String>) -> Self {
        Error::State {
            label: label.into(),
            source: Box::new(self),
        }
    }

    /// The underlying error with any state annotation stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::State { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
