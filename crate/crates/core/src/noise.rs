//! Dielectric loss, thermal occupation, output photon number, gains and
//! added noise.

use num_complex::Complex64;

use crate::constants::{HBAR, K_B};
use crate::device::Device;
use crate::error::{Error, Result};
use crate::mixing::{zeta_functions, ModeCoefficients};

/// Relative size of the F̄ denominator, compared with its largest term,
/// below which the quadrature path is used.
pub const FBAR_DEGENERACY_TOL: f64 = 1e-12;

/// Relative accuracy requested from the adaptive quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-9;

/// Slack allowed on the Caves bound.
pub const SQL_TOL: f64 = 1e-9;

/// γ(ω) = ω sqrt(C/L_J0) Z₀ tanδ.
pub fn damping(omega: f64, device: &Device) -> f64 {
    let d = &device.derived;
    omega * (device.params.c_ground / d.l_j0).sqrt() * d.z0 * device.params.loss_tangent
}

/// n̄ = 1/(exp(ħω/k_BT) − 1), exactly zero at T = 0.
pub fn bose_einstein(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// Second moments of the signal/idler pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonFieldState {
    pub n_signal: f64,
    pub n_idler: f64,
    /// ⟨â_i â_s⟩.
    pub c_si: Complex64,
}

/// Largest |c|² allowed by Cauchy-Schwarz: min(n_s (n_i + 1), (n_s + 1) n_i).
pub fn correlation_bound(n_s: f64, n_i: f64) -> f64 {
    n_s * n_i + n_s.min(n_i)
}

/// Absolute slack on |c|² ≤ [`correlation_bound`].
pub fn physicality_slack(n_s: f64, n_i: f64) -> f64 {
    1e-9 * (1.0 + (n_s + 1.0) * (n_i + 1.0))
}

pub fn is_physical(n_s: f64, n_i: f64, c: Complex64) -> bool {
    n_s >= -1e-9
        && n_i >= -1e-9
        && c.norm_sqr() <= correlation_bound(n_s, n_i) + physicality_slack(n_s, n_i)
}

impl PhotonFieldState {
    pub fn new(n_signal: f64, n_idler: f64, c_si: Complex64) -> Result<Self> {
        if !(n_signal.is_finite() && n_signal >= 0.0) {
            return Err(Error::Constraint {
                field: "n_signal",
                reason: format!("must be finite and non-negative, got {n_signal}"),
            });
        }
        if !(n_idler.is_finite() && n_idler >= 0.0) {
            return Err(Error::Constraint {
                field: "n_idler",
                reason: format!("must be finite and non-negative, got {n_idler}"),
            });
        }
        if !is_physical(n_signal, n_idler, c_si) {
            return Err(Error::Constraint {
                field: "c_si",
                reason: format!(
                    "|c|^2 = {:.6e} exceeds n_s n_i + min(n_s, n_i) = {:.6e}",
                    c_si.norm_sqr(),
                    correlation_bound(n_signal, n_idler)
                ),
            });
        }
        Ok(PhotonFieldState { n_signal, n_idler, c_si })
    }

    /// N_s photons in the signal, vacuum idler, no correlation.
    pub fn signal(n_signal: f64) -> Result<Self> {
        PhotonFieldState::new(n_signal, 0.0, Complex64::new(0.0, 0.0))
    }
}

/// Closed-form F̄(ω, t), or `None` where it is not defined.
pub fn f_bar_closed(m: &ModeCoefficients, t: f64) -> Option<f64> {
    let (gs, gi) = (m.gamma_s, m.gamma_i);
    if gs <= 0.0 || gi <= 0.0 {
        return None;
    }
    let a2 = m.a.norm_sqr();
    let b2 = m.b.norm_sqr();
    let gsum = gs + gi;
    let terms = [4.0 * gs * gi * a2, (gs * gi).powi(2), gsum * gsum * b2];
    let denom = terms[0] + terms[1] - terms[2];
    let largest = terms.iter().cloned().fold(0.0, f64::max);
    if denom.abs() < FBAR_DEGENERACY_TOL * largest {
        return None;
    }
    let (z1, z2) = zeta_functions(m, t);
    let growth = (gsum * t / 2.0).exp();
    let mixed = m.b * z1 + (2.0 * m.a + gi) * z2;
    let num = -b2 * gi * gi * z1.norm_sqr() + b2 * (gs * gi + gi * gi) * (z2.norm_sqr() + growth)
        - gs * gi * mixed.norm_sqr();
    Some(num / denom)
}

/// F̄ from γ_i e^{Γt/2} ∫₀ᵗ e^{−Γs/2} |ζ₂(s)|² ds, Γ = γ_s + γ_i.
pub fn f_bar_quadrature(m: &ModeCoefficients, t: f64) -> f64 {
    if t <= 0.0 || m.gamma_i == 0.0 {
        return 0.0;
    }
    let gsum = m.total_damping();
    let f = |s: f64| (-gsum * s / 2.0).exp() * zeta_functions(m, s).1.norm_sqr();
    m.gamma_i * (gsum * t / 2.0).exp() * adaptive_simpson(&f, 0.0, t, QUADRATURE_RTOL)
}

/// Evolution of the bath-driven part of the signal photon number.
pub fn f_bar(m: &ModeCoefficients, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    f_bar_closed(m, t).unwrap_or_else(|| f_bar_quadrature(m, t))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // coarse pass fixes the absolute tolerance from the integral's scale
    let n = 64;
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=2 * n).map(|i| a + 0.5 * h * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let coarse: f64 = (0..n)
        .map(|i| simpson(ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], xs[2 * i], xs[2 * i + 2]))
        .sum();
    let tol = rtol * coarse.abs().max(f64::MIN_POSITIVE) / n as f64;
    (0..n)
        .map(|i| {
            let whole = simpson(ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], xs[2 * i], xs[2 * i + 2]);
            recurse(
                f,
                xs[2 * i],
                xs[2 * i + 2],
                ys[2 * i],
                ys[2 * i + 1],
                ys[2 * i + 2],
                whole,
                tol,
                40,
            )
        })
        .sum()
}

/// N_s(t) split into the part proportional to N_s,0 and the rest.
struct PhotonTerms {
    gain: f64,
    rest: f64,
}

fn photon_terms(state: &PhotonFieldState, m: &ModeCoefficients, t: f64) -> PhotonTerms {
    let (z1, z2) = zeta_functions(m, t);
    let e = m.envelope(t);
    let gain = z1.norm_sqr() * e;
    let cross = 2.0 * (state.c_si * z1 * z2.conj()).re * e;
    let idler = (state.n_idler + m.nbar_s + 1.0) * z2.norm_sqr() * e;
    let bath = (m.nbar_s + m.nbar_i + 1.0) * f_bar(m, t) * e;
    PhotonTerms { gain, rest: m.nbar_s * (1.0 - gain) + idler + cross + bath }
}

/// Expected signal photon number after propagation time t.
pub fn output_photon_number(state: &PhotonFieldState, m: &ModeCoefficients, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(state.n_signal);
    }
    let p = photon_terms(state, m, t);
    let n = state.n_signal * p.gain + p.rest;
    if n < -1e-9 {
        return Err(Error::Consistency(format!(
            "negative output photon number {n:.6e} at ω = {:.6e} rad/s",
            m.omega
        )));
    }
    Ok(n.max(0.0))
}

/// G = |ζ₁|² e^{−(γ_s+γ_i)t/2}.
pub fn power_gain(m: &ModeCoefficients, t: f64) -> f64 {
    zeta_functions(m, t).0.norm_sqr() * m.envelope(t)
}

/// G_q = N_s(t)/N_s,0.
pub fn quantum_gain(state: &PhotonFieldState, m: &ModeCoefficients, t: f64) -> Result<f64> {
    if state.n_signal <= 0.0 {
        return Err(Error::Domain(
            "quantum gain needs a nonzero initial signal photon number".into(),
        ));
    }
    Ok(output_photon_number(state, m, t)? / state.n_signal)
}

/// ½|1 − 1/G|.
pub fn sql_bound(gain: f64) -> f64 {
    0.5 * (1.0 - 1.0 / gain).abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseReport {
    pub gain_power: f64,
    /// N_s(t)/N_s,0; NaN when N_s,0 = 0.
    pub gain_quantum: f64,
    pub added_noise: f64,
    pub sql_bound: f64,
    pub thermal_occupation_s: f64,
    pub thermal_occupation_i: f64,
    pub photon_number: f64,
}

/// Input-referred added noise A = (N_s(t) + ½)/G − N_s,0 − ½.
pub fn added_noise(state: &PhotonFieldState, m: &ModeCoefficients, t: f64) -> Result<NoiseReport> {
    let p = photon_terms(state, m, t);
    if p.gain.is_nan() || p.gain <= 0.0 {
        return Err(Error::Domain(format!(
            "power gain {:.6e} is not positive at ω = {:.6e} rad/s",
            p.gain, m.omega
        )));
    }
    let photon_number = output_photon_number(state, m, t)?;
    let a = (p.rest + 0.5) / p.gain - 0.5;
    let sql = sql_bound(p.gain);
    if p.gain >= 1.0 && a < sql - SQL_TOL {
        return Err(Error::Consistency(format!(
            "added noise {a:.9e} below the quantum limit {sql:.9e} at G = {:.6e}",
            p.gain
        )));
    }
    let gain_quantum = if state.n_signal > 0.0 { photon_number / state.n_signal } else { f64::NAN };
    Ok(NoiseReport {
        gain_power: p.gain,
        gain_quantum,
        added_noise: a,
        sql_bound: sql,
        thermal_occupation_s: m.nbar_s,
        thermal_occupation_i: m.nbar_i,
        photon_number,
    })
}
