//! Sweeps over levels, the structure checks, and the zigzag
//! example's angle and modulus certificates.

mod checks;
mod sweep;
mod zigzag;

pub use checks::{check_euler, check_main, check_region_boundaries, CheckReport, ClauseResult};
pub use sweep::{read_sweep_csv, sweep, sweep_to_csv, ExceptionalInterval, SweepResult, SweepRow, SWEEP_CSV_HEADER};
pub use zigzag::{
    angle_bounds, default_probes, omega, verify_zigzag_omega, AngleBound, OmegaProbe, OmegaReport, Regime, OMEGA_RADII,
    PITCH_DIVISOR,
};
