use thiserror::Error;

/// Everything that can go wrong while building or solving a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("transition energy eps2 = {eps2} is not positive (need omega_m > sqrt(dw^2/4 + xi^2))")]
    Positivity { eps2: f64 },

    #[error("dispersive shift undefined at zero detuning")]
    DegenerateDetuning,

    #[error("steady state undefined: rate denominator `{which}` vanishes")]
    DegenerateRates { which: &'static str },

    #[error("rates decouple the dark state |lambda3>; use the dark-sector steady state")]
    DarkSector,

    #[error("rates are not in the dark sector")]
    NotDarkSector,

    #[error("`{name}` = {value} outside [{min}, {max}]")]
    Range {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("generator kernel has dimension {dim}, expected 1 or 2")]
    KernelDimension { dim: usize },

    #[error("population {index} = {value} is not positive")]
    NonPositivePopulation { index: usize, value: f64 },

    #[error("population ratios are inconsistent (relative mismatch {mismatch:e})")]
    InconsistentRatios { mismatch: f64 },

    #[error("step control failed at t = {t}: step size {h:e}")]
    ToleranceFailure { t: f64, h: f64 },

    #[error("trace drifted by {drift:e} at t = {t}")]
    InvariantBreach { t: f64, drift: f64 },

    #[error("eigensolver residual {residual:e} exceeds tolerance")]
    EigensolverFailure { residual: f64 },

    #[error("state carries no entanglement anywhere in the temperature bracket")]
    NoEntanglement,

    #[error("no sign change of `{quantity}` inside the bracket")]
    NoRoot { quantity: &'static str },

    #[error("density matrix invalid: {reason}")]
    InvalidState { reason: String },
}

pub type Result<T, E = PhysicsError> = std::result::Result<T, E>;
