use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density model `{model}` rejected: {reason}")]
    InvalidDensity { model: String, reason: String },

    #[error("density is not finite at r = {r} (grid overflow)")]
    Overflow { r: f64 },

    #[error("series needs {required} terms, more than K_max = {k_max}")]
    SeriesTruncation { required: usize, k_max: usize },

    #[error("coefficient a_{k}({r}) = {value:e} violates the bound [0, {bound:e}]")]
    CoefficientBound { k: usize, r: f64, value: f64, bound: f64 },

    #[error("step size underflow at r = {r} (lambda = {lambda})")]
    StepUnderflow { r: f64, lambda: Complex64 },

    #[error("spectral cutoff lambda_max = {lambda_max} too small (tail {tail:e}); need about {required}")]
    SpectralCutoff { lambda_max: f64, tail: f64, required: f64 },

    #[error("collocation system ill-conditioned: condition number {0:e}")]
    IllConditioned(f64),

    #[error("expansion residual {residual:e} exceeds {tolerance:e}")]
    ExpansionResidual { residual: f64, tolerance: f64 },

    #[error("function has unbounded support")]
    UnboundedSupport,

    #[error("winding number unstable on box boundary: {0}")]
    UnstableWinding(String),

    #[error("found {found} zeros in box, more than the allowed {max}")]
    TooManyZeros { found: usize, max: usize },

    #[error("CFL condition violated: dt = {dt} > 0.5 * dr = {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("domain r_max = {r_max} too small; need at least {required}")]
    DomainTooSmall { r_max: f64, required: f64 },

    #[error("heat mass {leak:e} reached the outer boundary; use r_max >= {required_r_max}")]
    BoundaryLeak { leak: f64, required_r_max: f64 },

    #[error("|F bump| = {value:e} at lambda = {lambda} is too close to zero; shrink lambda_max")]
    DivisionGuard { lambda: f64, value: f64 },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidDensity { .. } => "invalid_density",
            Error::Overflow { .. } => "overflow",
            Error::SeriesTruncation { .. } => "series_truncation",
            Error::CoefficientBound { .. } => "coefficient_bound",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::SpectralCutoff { .. } => "spectral_cutoff",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::ExpansionResidual { .. } => "expansion_residual",
            Error::UnboundedSupport => "unbounded_support",
            Error::UnstableWinding(_) => "unstable_winding",
            Error::TooManyZeros { .. } => "too_many_zeros",
            Error::Cfl { .. } => "cfl",
            Error::DomainTooSmall { .. } => "domain_too_small",
            Error::BoundaryLeak { .. } => "boundary_leak",
            Error::DivisionGuard { .. } => "division_guard",
            Error::NotConverged(_) => "not_converged",
            Error::Config(_) => "config",
        }
    }
}
