//! Linear response of the dense resonant medium.
//!
//! These closed-form and quadrature results double as the reference against
//! which the nonlinear marching solver is checked in the weak-field limit.

mod asymptotic;
mod bessel;
mod dispersion;
mod propagate;

pub use asymptotic::{asymptotic_field, interference_spectrum, stationary_frequency, stationary_terms};
pub use bessel::{bessel_j1, j1_over_half_x};
pub use dispersion::{
    coupling_diagnostics, dispersion_curve, group_velocity, linear_transmission, wavevector,
    CouplingDiagnostics, DispersionSample, DEFAULT_RINGING_MARGIN,
};
pub use propagate::{
    propagate_convolution, propagate_fourier, propagate_spectrum, ringing_kernel, transfer_function,
};
