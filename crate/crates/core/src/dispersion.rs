//! Linear propagation: dispersion factors, wave numbers and the loading
//! impedance of the resonant phase-matchers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::device::{DerivedConstants, Device, DeviceParams};
use crate::error::{Error, InvalidReason, Result};

/// Relative distance to the loading pole below which a frequency is rejected.
pub const POLE_TOL: f64 = 1e-9;

/// Largest accepted |Im Λ_RPM| / |Re Λ_RPM| after cancellation.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Which dispersion relation the signal, idler and pump propagate under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dispersion {
    #[default]
    Bare,
    Rpm,
}

impl fmt::Display for Dispersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dispersion::Bare => "bare",
            Dispersion::Rpm => "rpm",
        })
    }
}

impl FromStr for Dispersion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bare" => Ok(Dispersion::Bare),
            "rpm" => Ok(Dispersion::Rpm),
            other => Err(format!("unknown dispersion `{other}` (expected bare|rpm)")),
        }
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveFrequency(omega))
    }
}

/// Λ(ω) = 1/(1 − ω² L_J0 C_J), the junction-capacitance dispersion factor.
pub fn lambda_bare(omega: f64, d: &DerivedConstants) -> Result<f64> {
    check_frequency(omega)?;
    let denom = 1.0 - omega * omega * d.l_j0 * d.c_j;
    if omega >= d.omega_j || denom <= 0.0 {
        return Err(Error::PlasmaCutoff { omega, omega_j: d.omega_j });
    }
    Ok(1.0 / denom)
}

/// Cell impedance to ground with the phase-matching resonator attached.
pub fn rpm_impedance(omega: f64, p: &DeviceParams) -> Result<Complex64> {
    check_frequency(omega)?;
    let rpm = p.rpm.as_ref().ok_or(Error::MissingRpm)?;
    let w2 = omega * omega;
    let pole = 1.0 - (rpm.c_resonator + rpm.c_coupling) * rpm.l_resonator * w2;
    if pole.abs() < POLE_TOL {
        return Err(Error::StopbandPole { omega });
    }
    let branch = omega * rpm.c_coupling * (1.0 - rpm.l_resonator * rpm.c_resonator * w2) / pole;
    let admittance = Complex64::new(0.0, omega * p.c_ground + branch);
    Ok(admittance.inv())
}

/// Λ_RPM(ω) = Λ(ω) / (iω Z(ω) C'Δz).
pub fn lambda_rpm(omega: f64, p: &DeviceParams, d: &DerivedConstants) -> Result<f64> {
    let bare = lambda_bare(omega, d)?;
    let z = rpm_impedance(omega, p)?;
    let value = bare / (Complex64::new(0.0, omega * p.c_ground) * z);
    if value.re <= 0.0 || value.im.abs() > IMAG_RESIDUE_TOL * value.re.abs() {
        return Err(Error::Stopband { omega, lambda: value.re });
    }
    Ok(value.re)
}

/// Dispersion factor under the chosen relation.
pub fn lambda(omega: f64, device: &Device, disp: Dispersion) -> Result<f64> {
    match disp {
        Dispersion::Bare => lambda_bare(omega, &device.derived),
        Dispersion::Rpm => lambda_rpm(omega, &device.params, &device.derived),
    }
}

/// k(ω) = ω sqrt(Λ) / v_r.
pub fn wave_number(omega: f64, lambda: f64, d: &DerivedConstants) -> f64 {
    omega * lambda.sqrt() / d.v_ref
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub omega: f64,
    pub lambda: Option<f64>,
    pub k: Option<f64>,
    pub invalid: Option<InvalidReason>,
}

impl DispersionSample {
    pub fn is_valid(&self) -> bool {
        self.invalid.is_none()
    }

    /// Phase velocity ω/k.
    pub fn phase_velocity(&self) -> Option<f64> {
        self.k.map(|k| self.omega / k)
    }
}

/// Sweep-friendly evaluation: errors become flagged samples.
pub fn sample(omega: f64, device: &Device, disp: Dispersion) -> Result<DispersionSample> {
    match lambda(omega, device, disp) {
        Ok(l) => Ok(DispersionSample {
            omega,
            lambda: Some(l),
            k: Some(wave_number(omega, l, &device.derived)),
            invalid: None,
        }),
        Err(e) => {
            let reason = match e {
                Error::PlasmaCutoff { .. } => InvalidReason::PlasmaCutoff,
                Error::StopbandPole { .. } | Error::Stopband { .. } => InvalidReason::RpmStopband,
                Error::NonpositiveFrequency(_) => InvalidReason::NonpositiveFrequency,
                other => return Err(other),
            };
            Ok(DispersionSample { omega, lambda: None, k: None, invalid: Some(reason) })
        }
    }
}
