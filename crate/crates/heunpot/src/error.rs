use crate::C64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("triad {0:?} (doubled exponents) is not permissible")]
    NotPermissible([i8; 3]),
    #[error("gamma = {0} is a non-positive integer")]
    PoleAtGamma(C64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("argument {0} lies on the branch cut [1, +inf)")]
    ArgumentOnCut(C64),
    #[error("parameter {name} = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("singular points are not pairwise distinct")]
    CoincidentSingularities,
    #[error("|z| = {modulus} is outside the convergence disk of radius {radius}")]
    OutsideDisk { modulus: f64, radius: f64 },
    #[error("indicial coefficient R_{0} vanishes")]
    IndicialDegenerate(usize),
    #[error("recurrence coefficient R_{0} vanishes")]
    RecurrenceBreakdown(usize),
    #[error("termination precondition violated: {0}")]
    TerminationPrecondition(String),
    #[error("triad exponents do not give a polynomial r(z)")]
    NonIntegerExponent,
    #[error("r(z) vanishes at z = {0}")]
    PoleAtZ(f64),
    #[error("branch violation: {0}")]
    BranchViolation(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("x = {0} lies outside the selected branch of z(x)")]
    OutOfBranch(f64),
    #[error("inversion of x(z) failed: {0}")]
    InversionFailure(String),
    #[error("triad {0:?} (doubled exponents) has no conditionally integrable restriction")]
    UnsupportedTriad([i8; 3]),
    #[error("gamma - 1 = {0} is a non-positive integer")]
    GammaDegenerate(C64),
    #[error("integration step underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("grid too coarse or too close to the branch ends: {0}")]
    GridTooCoarse(String),
    #[error("numerical differentiation broke down at x = {0}")]
    DerivativeBreakdown(f64),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotPermissible(_)
                | Error::ParameterOutOfRange { .. }
                | Error::CoincidentSingularities
                | Error::NonIntegerExponent
                | Error::UnsupportedTriad(_)
                | Error::InvalidSpec(_)
                | Error::TerminationPrecondition(_)
        )
    }
}
