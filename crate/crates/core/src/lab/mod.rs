//! Numerical oracle on finite complex-hermitian realizations of `b`, `O`, `E`.

mod closed_forms;
mod flow;
mod funcs;
mod model;
mod sweep;

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

pub use closed_forms::{
    eriksen_t, exact_z, flow_unitary, nw_exact, riccati_order, riccati_residual, sign_operator,
    special_class_z0, EriksenT,
};
pub use flow::{
    beta_flow_unitary, double_bracket_flow, flow_representation_check, phi, representation_at,
    representation_residuals, FlowSample, FlowTrajectory, RepresentationCheck,
};
pub use funcs::{commutator, hermitian_eigen, hermitian_function, is_hermitian, spectral_norm};
pub use model::MatrixModel;
pub use sweep::{
    convergence_sweep, evaluate_symbolic, exp_anti_hermitian, loglog_slope, omega_u_unitary_check,
    SPoint, SweepResult,
};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("dimension {0} must be even and at least 4")]
    BadDimension(usize),
    #[error(
        "no well-conditioned model after {redraws} redraws (smallest |eigenvalue| {smallest:e})"
    )]
    Degenerate { redraws: usize, smallest: f64 },
    #[error("spectrum too close to zero: smallest |eigenvalue| {0:e}")]
    SingularSpectrum(f64),
    #[error("2 s |H| = {0} exceeds the overflow guard 40")]
    OverflowGuard(f64),
    #[error("linear solve residual {0:e} exceeds tolerance")]
    IllConditioned(f64),
    #[error("an eigenvalue of b*sign(H) lies within {0:e} of -1")]
    EigenvalueMinusOne(f64),
    #[error("artanh argument has eigenvalue {re}{im:+}i on or beyond the branch cut")]
    BranchFailure { re: f64, im: f64 },
    #[error("model field part is nonzero; the special-class formula needs E = 0")]
    NotSpecialClass,
    #[error("step size collapsed below {0:e} at s = {1}")]
    StepCollapse(f64, f64),
    #[error("expression contains the generator F, which has no matrix realization")]
    FGeneratorPresent,
    #[error("coefficient has no limit at s -> infinity")]
    NonConvergent,
}
