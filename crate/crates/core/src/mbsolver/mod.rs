//! Nonlinear pump and first-order probe propagation.

mod bloch;
mod march;

pub use bloch::{
    bloch_derivatives, probe_derivatives, pump_derivatives, step_full, step_pump, sweep_full, sweep_pump,
    ProbePoint, PumpPoint, StatePoint,
};
pub use march::{
    simulate_pump_probe, simulate_single_beam, BlochIntegrator, FieldCorrector, MarchOrder, MediumState, SolverConfig,
    SolverDiagnostics, Trajectory, MAX_QUIET_DZ,
};
