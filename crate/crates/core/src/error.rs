use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The two lattice directions are numerically collinear.
    #[error("degenerate lattice: |sin(theta2 - theta1)| = {sin_delta:.3e} is below {min:.0e}")]
    DegenerateLattice { sin_delta: f64, min: f64 },

    /// A ReLU network stepsize that is not the reciprocal of an integer >= 2.
    #[error("stepsize {0} is not the reciprocal of an integer >= 2")]
    InvalidStepsize(f64),

    /// Adaptive quadrature ran out of refinement levels before two successive
    /// estimates agreed.
    #[error(
        "quadrature under-resolved: successive refinements differ by {rel_change:.3e} \
         (target {target:.1e}) after {levels} doublings"
    )]
    QuadratureUnderResolved {
        rel_change: f64,
        target: f64,
        levels: usize,
    },

    /// Conjugate gradients missed the residual target within the iteration cap.
    #[error(
        "solver did not converge: relative residual {residual:.3e} after {iterations} \
         iterations (target {target:.1e})"
    )]
    SolverDiverged {
        residual: f64,
        iterations: usize,
        target: f64,
    },

    #[error("test function '{0}' does not provide a spatial Hessian")]
    HessianUnavailable(String),

    #[error("test function '{0}' does not provide a Fourier transform")]
    FourierUnavailable(String),

    #[error("test function '{0}' has no effective support rectangle")]
    SupportUnavailable(String),

    #[error("unknown test function '{0}'")]
    UnknownFunction(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by unusable input rather than numerical failure.
    /// The CLI maps these to exit code 2 and the rest to exit code 3.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(
            self,
            Error::QuadratureUnderResolved { .. } | Error::SolverDiverged { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
