//! Observables derived from simulated envelopes: spectra, transmission
//! ratios, near-resonance feature classification and ringing node times.

mod features;
mod nodes;
mod spectrum;
mod transmission;

pub use features::{feature_report, FeatureKind, FeatureReport, FeatureSettings, DEFAULT_CORE_ABSORPTION, DEFAULT_SIGNIFICANCE, DEFAULT_WINDOW};
pub use nodes::{find_beat_nodes, find_ringing_nodes, find_ringing_nodes_with, DEFAULT_NODE_FRACTION};
pub use spectrum::{spectral_extrema, spectrum, Spectrum};
pub use transmission::{transmission, TransmissionCurve, DEFAULT_FLOOR};
