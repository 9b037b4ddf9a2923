//! Exact perturbation series and numerical checks for the flow-equation block
//! diagonalization of Dirac-type Hamiltonians `H = b + k O + k^2 E`.
//!
//! * [`algebra`]: exact operator algebra, text and JSON forms.
//! * [`series`]: the perturbation recursions and the identities they satisfy.
//! * [`lab`]: dense complex-hermitian matrix models used as a numerical oracle.

pub mod algebra;
pub mod lab;
pub mod series;
