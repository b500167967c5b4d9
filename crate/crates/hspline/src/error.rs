use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The point set cannot determine polynomials of the named degree
    /// (some nonzero polynomial of that degree vanishes on every point).
    #[error("point set is not a determining set for polynomials of degree {degree}")]
    Unisolvency { degree: u32 },

    /// Dense solve produced residuals beyond tolerance, or the condition
    /// estimate exceeded the hard limit.
    #[error("interpolation system too ill-conditioned (estimate {condition:.3e}): {detail}")]
    IllConditioned { condition: f64, detail: String },

    /// The kernel quadratic form came out significantly negative on a
    /// moment-constrained coefficient vector; h must be conditionally
    /// positive definite, so this signals a kernel or solver bug.
    #[error(
        "conditional positive definiteness violated: quadratic form {quadratic_form:.6e} \
         below -{tolerance:.3e}"
    )]
    CpdViolation { quadratic_form: f64, tolerance: f64 },

    /// Exactly zero pivot block during factorization.
    #[error("solver breakdown: {0}")]
    SolverBreakdown(String),

    /// A bound was requested at a spacing above its admissible threshold
    /// (`delta_0` for subcube spacing, `d_0` for fill distance).
    #[error(
        "bound hypothesis violated: {form} spacing {spacing:.6e} exceeds {threshold_name} \
         \u{2248} {threshold_str} (ln {ln_threshold:.6})"
    )]
    HypothesisViolated {
        form: String,
        spacing: f64,
        threshold_name: String,
        threshold_str: String,
        ln_threshold: f64,
    },

    #[error("rate fit unavailable: {0}")]
    FitUnavailable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
