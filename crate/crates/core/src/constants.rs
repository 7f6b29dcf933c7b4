//! Physical constants (CODATA 2018, exact SI where defined).

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Reduced magnetic flux quantum ħ/(2e) (Wb).
pub const PHI0_REDUCED: f64 = HBAR / (2.0 * ELEMENTARY_CHARGE);

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
