//! Analytic gain, photon-number dynamics and added noise of dissipative,
//! dispersive four-wave-mixing Josephson traveling-wave parametric
//! amplifiers, with a moment-equation integrator as an independent check.

pub mod cli;
pub mod constants;
pub mod device;
pub mod dispersion;
pub mod error;
pub mod mixing;
pub mod noise;
pub mod oracle;

pub use device::{
    derive_constants, load_device, parse_device, DerivedConstants, Device, DeviceParams, RpmParams,
};
pub use dispersion::{
    lambda_bare, lambda_rpm, rpm_impedance, wave_number, Dispersion, DispersionSample,
};
pub use error::{Error, InvalidReason, Mode, Result};
pub use mixing::{
    gain_rate, pump_amplitude, zeta_functions, Coupling, ModeCoefficients, PumpConfig,
};
pub use noise::{
    added_noise, bose_einstein, damping, f_bar, output_photon_number, power_gain, quantum_gain,
    NoiseReport, PhotonFieldState,
};
pub use oracle::{drift_matrix, integrate_moments, MomentState};
