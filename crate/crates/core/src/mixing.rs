//! Four-wave-mixing coefficients and the analytic signal/idler evolution.

use num_complex::Complex64;

use crate::device::Device;
use crate::dispersion::{lambda, wave_number, Dispersion};
use crate::error::{Error, Mode, Result};
use crate::noise::{bose_einstein, damping};

/// |g·t| below which sinh(gt)/g is replaced by its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Relative distance |ω − ω_p|/ω_p at which a point is flagged degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Classical undepleted pump and bath temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    pub omega_p: f64,
    /// I_p / I_c.
    pub pump_ratio: f64,
    pub temperature: f64,
    pub dispersion: Dispersion,
    pub lambda_p: f64,
    pub k_p: f64,
    /// Classical pump amplitude A_p,0 (Wb).
    pub a_p0: f64,
}

impl PumpConfig {
    pub fn new(
        device: &Device,
        omega_p: f64,
        pump_ratio: f64,
        temperature: f64,
        dispersion: Dispersion,
    ) -> Result<Self> {
        if !(pump_ratio.is_finite() && (0.0..1.0).contains(&pump_ratio)) {
            return Err(Error::Constraint {
                field: "pump_ratio",
                reason: format!("must lie in [0, 1), got {pump_ratio}"),
            });
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::Constraint {
                field: "temperature",
                reason: format!("must be finite and non-negative, got {temperature}"),
            });
        }
        if dispersion == Dispersion::Rpm && !device.has_rpm() {
            return Err(Error::MissingRpm);
        }
        let lambda_p = lambda(omega_p, device, dispersion).map_err(|e| e.in_mode(Mode::Pump))?;
        let k_p = wave_number(omega_p, lambda_p, &device.derived);
        let a_p0 = pump_amplitude_from_k(device, k_p, pump_ratio);
        Ok(PumpConfig { omega_p, pump_ratio, temperature, dispersion, lambda_p, k_p, a_p0 })
    }
}

fn pump_amplitude_from_k(device: &Device, k_p: f64, pump_ratio: f64) -> f64 {
    let i_p = pump_ratio * device.params.i_critical;
    device.derived.l_j0 * i_p / (k_p * device.params.cell_length)
}

/// A_p,0 = L_J0 I_p / (k_p Δz).
pub fn pump_amplitude(
    device: &Device,
    omega_p: f64,
    pump_ratio: f64,
    dispersion: Dispersion,
) -> Result<f64> {
    let lambda_p = lambda(omega_p, device, dispersion).map_err(|e| e.in_mode(Mode::Pump))?;
    let k_p = wave_number(omega_p, lambda_p, &device.derived);
    Ok(pump_amplitude_from_k(device, k_p, pump_ratio))
}

/// Phase-modulation and mixing coefficients at one signal frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub theta_s: f64,
    pub theta_i: f64,
    pub theta_p: f64,
    pub chi_prime: f64,
}

/// θ(ω) = k_p² Δz² Λ(ω) ω A_p,0² / (8 L_J0² I_c²).
pub fn theta(device: &Device, pump: &PumpConfig, omega: f64, lambda: f64) -> f64 {
    let scale =
        pump.k_p * device.params.cell_length / (device.derived.l_j0 * device.params.i_critical);
    scale * scale * lambda * omega * pump.a_p0 * pump.a_p0 / 8.0
}

/// χ′ = k_p² Δz² sqrt(Λ_s Λ_i) sqrt(ω_s ω_i) / (16 L_J0² I_c²).
pub fn chi_prime(
    device: &Device,
    pump: &PumpConfig,
    omega: f64,
    lambda_s: f64,
    lambda_i: f64,
) -> f64 {
    let omega_i = 2.0 * pump.omega_p - omega;
    let scale =
        pump.k_p * device.params.cell_length / (device.derived.l_j0 * device.params.i_critical);
    scale * scale * (lambda_s * lambda_i).sqrt() * (omega * omega_i).sqrt() / 16.0
}

fn check_band(omega: f64, omega_p: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 * omega_p {
        Ok(())
    } else {
        Err(Error::OutsidePumpBand { omega, omega_p })
    }
}

fn mode_lambdas(device: &Device, pump: &PumpConfig, omega: f64) -> Result<(f64, f64)> {
    check_band(omega, pump.omega_p)?;
    let ls = lambda(omega, device, pump.dispersion).map_err(|e| e.in_mode(Mode::Signal))?;
    let li = lambda(2.0 * pump.omega_p - omega, device, pump.dispersion)
        .map_err(|e| e.in_mode(Mode::Idler))?;
    Ok((ls, li))
}

pub fn coupling_coefficients(device: &Device, pump: &PumpConfig, omega: f64) -> Result<Coupling> {
    let (ls, li) = mode_lambdas(device, pump, omega)?;
    Ok(Coupling {
        theta_s: theta(device, pump, omega, ls),
        theta_i: theta(device, pump, 2.0 * pump.omega_p - omega, li),
        theta_p: theta(device, pump, pump.omega_p, pump.lambda_p) / 2.0,
        chi_prime: chi_prime(device, pump, omega, ls, li),
    })
}

/// ΔΩ = 2(ω_p + θ_p)√Λ_p − (ω + θ_s)√Λ_s − (ω_i + θ_i)√Λ_i.
pub fn phase_mismatch_total(
    omega: f64,
    omega_p: f64,
    lambda_s: f64,
    lambda_i: f64,
    lambda_p: f64,
    c: &Coupling,
) -> f64 {
    let omega_i = 2.0 * omega_p - omega;
    2.0 * (omega_p + c.theta_p) * lambda_p.sqrt()
        - (omega + c.theta_s) * lambda_s.sqrt()
        - (omega_i + c.theta_i) * lambda_i.sqrt()
}

/// Principal-branch g = sqrt(a² + κ²) with a = (γ_s − γ_i + 2iΔΩ)/4.
pub fn gain_rate(gamma_s: f64, gamma_i: f64, d_omega: f64, kappa: f64) -> Complex64 {
    let a = asymmetry(gamma_s, gamma_i, d_omega);
    (a * a + kappa * kappa).sqrt()
}

fn asymmetry(gamma_s: f64, gamma_i: f64, d_omega: f64) -> Complex64 {
    Complex64::new((gamma_s - gamma_i) / 4.0, d_omega / 2.0)
}

/// Everything the closed-form solution needs at one signal frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub omega: f64,
    pub omega_idler: f64,
    pub lambda_s: f64,
    pub lambda_i: f64,
    pub lambda_p: f64,
    pub k_p: f64,
    pub theta_s: f64,
    pub theta_i: f64,
    pub theta_p: f64,
    pub chi_prime: f64,
    pub a_p0: f64,
    /// κ = χ′ A_p,0² (Λ_s Λ_i)^{1/4}, the effective mixing rate.
    pub kappa: f64,
    pub d_omega_total: f64,
    pub gamma_s: f64,
    pub gamma_i: f64,
    pub nbar_s: f64,
    pub nbar_i: f64,
    /// (γ_s − γ_i + 2iΔΩ)/4, equal to g·η.
    pub a: Complex64,
    /// −iκ, equal to g·ρ.
    pub b: Complex64,
    pub g: Complex64,
    /// Signal and idler coincide (ω = ω_p).
    pub degenerate: bool,
}

impl ModeCoefficients {
    pub fn compute(device: &Device, pump: &PumpConfig, omega: f64) -> Result<Self> {
        let (lambda_s, lambda_i) = mode_lambdas(device, pump, omega)?;
        let omega_idler = 2.0 * pump.omega_p - omega;
        let c = Coupling {
            theta_s: theta(device, pump, omega, lambda_s),
            theta_i: theta(device, pump, omega_idler, lambda_i),
            theta_p: theta(device, pump, pump.omega_p, pump.lambda_p) / 2.0,
            chi_prime: chi_prime(device, pump, omega, lambda_s, lambda_i),
        };
        let d_omega =
            phase_mismatch_total(omega, pump.omega_p, lambda_s, lambda_i, pump.lambda_p, &c);
        let kappa = c.chi_prime * pump.a_p0 * pump.a_p0 * (lambda_s * lambda_i).powf(0.25);
        let gamma_s = damping(omega, device);
        let gamma_i = damping(omega_idler, device);
        let mut m = ModeCoefficients::from_rates(gamma_s, gamma_i, d_omega, kappa);
        m.omega = omega;
        m.omega_idler = omega_idler;
        m.lambda_s = lambda_s;
        m.lambda_i = lambda_i;
        m.lambda_p = pump.lambda_p;
        m.k_p = pump.k_p;
        m.theta_s = c.theta_s;
        m.theta_i = c.theta_i;
        m.theta_p = c.theta_p;
        m.chi_prime = c.chi_prime;
        m.a_p0 = pump.a_p0;
        m.nbar_s = bose_einstein(omega, pump.temperature);
        m.nbar_i = bose_einstein(omega_idler, pump.temperature);
        m.degenerate = ((omega - pump.omega_p) / pump.omega_p).abs() < DEGENERATE_TOL;
        Ok(m)
    }

    /// Coefficients built directly from the four rates, with unit dispersion,
    /// zero phase modulation, unit pump amplitude and a vacuum bath.
    pub fn from_rates(gamma_s: f64, gamma_i: f64, d_omega: f64, kappa: f64) -> Self {
        let a = asymmetry(gamma_s, gamma_i, d_omega);
        ModeCoefficients {
            omega: f64::NAN,
            omega_idler: f64::NAN,
            lambda_s: 1.0,
            lambda_i: 1.0,
            lambda_p: 1.0,
            k_p: f64::NAN,
            theta_s: 0.0,
            theta_i: 0.0,
            theta_p: 0.0,
            chi_prime: kappa,
            a_p0: 1.0,
            kappa,
            d_omega_total: d_omega,
            gamma_s,
            gamma_i,
            nbar_s: 0.0,
            nbar_i: 0.0,
            a,
            b: Complex64::new(0.0, -kappa),
            g: gain_rate(gamma_s, gamma_i, d_omega, kappa),
            degenerate: false,
        }
    }

    pub fn with_occupations(mut self, nbar_s: f64, nbar_i: f64) -> Self {
        self.nbar_s = nbar_s;
        self.nbar_i = nbar_i;
        self
    }

    /// η = a/g; not finite when g = 0.
    pub fn eta(&self) -> Complex64 {
        self.a / self.g
    }

    /// ρ = b/g; not finite when g = 0.
    pub fn rho(&self) -> Complex64 {
        self.b / self.g
    }

    /// γ_s + γ_i.
    pub fn total_damping(&self) -> f64 {
        self.gamma_s + self.gamma_i
    }

    /// e^{−(γ_s+γ_i)t/2}.
    pub fn envelope(&self, t: f64) -> f64 {
        (-self.total_damping() * t / 2.0).exp()
    }

    /// Same coefficients with g replaced by −g.
    pub fn flipped_branch(&self) -> Self {
        ModeCoefficients { g: -self.g, ..*self }
    }
}

/// sinh(gt)/g by the library call.
pub fn sinhc_direct(g: Complex64, t: f64) -> Complex64 {
    (g * t).sinh() / g
}

/// sinh(gt)/g ≈ t(1 + (gt)²/6).
pub fn sinhc_series(g: Complex64, t: f64) -> Complex64 {
    let x = g * t;
    t * (1.0 + x * x / 6.0)
}

pub fn sinhc(g: Complex64, t: f64) -> Complex64 {
    if (g * t).norm() < SERIES_THRESHOLD {
        sinhc_series(g, t)
    } else {
        sinhc_direct(g, t)
    }
}

/// (ζ₁, ζ₂) = (cosh(gt) − η sinh(gt), ρ sinh(gt)).
pub fn zeta_functions(m: &ModeCoefficients, t: f64) -> (Complex64, Complex64) {
    let s = sinhc(m.g, t);
    ((m.g * t).cosh() - m.a * s, m.b * s)
}
