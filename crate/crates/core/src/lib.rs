//! Coherent pump-probe propagation in an optically dense two-level medium.
//!
//! Units: the cooperative frequency `ω_c` and the speed of light are both
//! one, so times are `t·ω_c`, detunings `ω/ω_c` and depths `z·ω_c/c`.

pub mod analysis;
pub mod error;
mod fft;
pub mod grid;
pub mod lindisp;
pub mod mbsolver;
pub mod medium;
pub mod pulse;

pub use error::{Error, Result};
pub use grid::{ComplexEnvelope, TimeGrid};
pub use medium::{BeamGeometry, MediumParams};
pub use pulse::{gaussian_pulse, pulse_area, pulse_energy, spectral_fwhm_to_a, PulseSpec};
