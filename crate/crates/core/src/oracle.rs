//! Independent check of the closed-form results: fixed-step RK4 integration
//! of the second-moment equations of the damped, thermally driven
//! coupled-mode system.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mixing::ModeCoefficients;
use crate::noise::{is_physical, PhotonFieldState};

pub const MIN_STEPS: usize = 1000;
pub const DEFAULT_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub n_s: f64,
    pub n_i: f64,
    /// ⟨â_i â_s⟩.
    pub c: Complex64,
    pub t: f64,
}

/// M = [[−γ_s/2 − iΔΩ/2, −iκ], [iκ, −γ_i/2 + iΔΩ/2]].
pub fn drift_matrix(m: &ModeCoefficients) -> Matrix2<Complex64> {
    let dw = m.d_omega_total;
    Matrix2::new(
        Complex64::new(-m.gamma_s / 2.0, -dw / 2.0),
        Complex64::new(0.0, -m.kappa),
        Complex64::new(0.0, m.kappa),
        Complex64::new(-m.gamma_i / 2.0, dw / 2.0),
    )
}

/// Eigenvalues of the drift matrix from a complex Schur decomposition.
pub fn drift_eigenvalues(m: &ModeCoefficients) -> [Complex64; 2] {
    let schur = drift_matrix(m).schur();
    let (_, t) = schur.unpack();
    [t[(0, 0)], t[(1, 1)]]
}

/// Right-hand side of the moment system for state (n_s, n_i, Re c, Im c).
fn rhs(m: &ModeCoefficients, y: [f64; 4]) -> [f64; 4] {
    let [n_s, n_i, cr, ci] = y;
    let c = Complex64::new(cr, ci);
    let k = m.kappa;
    let (gs, gi) = (m.gamma_s, m.gamma_i);
    // 2Re(M12 c*) = 2Re(−iκ c*) = −2κ Im(c); 2Re(M21 c) = 2Re(iκ c) = −2κ Im(c)
    let dns = -gs * n_s - 2.0 * k * ci + gs * m.nbar_s;
    let dni = -gi * n_i - 2.0 * k * ci + gi * m.nbar_i;
    let dc = Complex64::new(-(gs + gi) / 2.0, -m.d_omega_total) * c
        + Complex64::new(0.0, -k) * (n_s + n_i + 1.0);
    [dns, dni, dc.re, dc.im]
}

fn axpy(y: [f64; 4], h: f64, k: [f64; 4]) -> [f64; 4] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

/// Integrate the moments from `state0` to `t_end` with `steps` RK4 steps.
pub fn integrate_moments(
    m: &ModeCoefficients,
    state0: &PhotonFieldState,
    t_end: f64,
    steps: usize,
) -> Result<MomentState> {
    trajectory(m, state0, t_end, steps, 1).map(|v| *v.last().expect("trajectory is never empty"))
}

/// States on `samples` + 1 evenly spaced times in [0, t_end].
pub fn trajectory(
    m: &ModeCoefficients,
    state0: &PhotonFieldState,
    t_end: f64,
    steps: usize,
    samples: usize,
) -> Result<Vec<MomentState>> {
    if steps < MIN_STEPS {
        return Err(Error::Constraint {
            field: "steps",
            reason: format!("at least {MIN_STEPS} integration steps required, got {steps}"),
        });
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::Domain(format!("integration end time {t_end} must be >= 0")));
    }
    let samples = samples.max(1);
    let steps = steps.div_ceil(samples) * samples;
    let per_sample = steps / samples;
    let h = t_end / steps as f64;
    let mut y = [state0.n_signal, state0.n_idler, state0.c_si.re, state0.c_si.im];
    let at = |y: [f64; 4], i: usize| MomentState {
        n_s: y[0],
        n_i: y[1],
        c: Complex64::new(y[2], y[3]),
        t: t_end * i as f64 / steps as f64,
    };
    let mut out = Vec::with_capacity(samples + 1);
    out.push(at(y, 0));
    for i in 1..=steps {
        let k1 = rhs(m, y);
        let k2 = rhs(m, axpy(y, h / 2.0, k1));
        let k3 = rhs(m, axpy(y, h / 2.0, k2));
        let k4 = rhs(m, axpy(y, h, k3));
        for j in 0..4 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let c = Complex64::new(y[2], y[3]);
        if !is_physical(y[0], y[1], c) {
            return Err(Error::Consistency(format!(
                "unphysical moments at t = {:.6e} s: n_s = {:.9e}, n_i = {:.9e}, c = {:.9e}{:+.9e}i",
                at(y, i).t,
                y[0],
                y[1],
                c.re,
                c.im
            )));
        }
        if i % per_sample == 0 {
            out.push(at(y, i));
        }
    }
    Ok(out)
}

/// Power gain from two runs that differ by one initial signal photon, with
/// the bath at zero temperature.
pub fn power_gain_oracle(m: &ModeCoefficients, t: f64, steps: usize) -> Result<f64> {
    let cold = m.with_occupations(0.0, 0.0);
    let one = integrate_moments(&cold, &PhotonFieldState::signal(1.0)?, t, steps)?;
    let zero = integrate_moments(&cold, &PhotonFieldState::signal(0.0)?, t, steps)?;
    Ok(one.n_s - zero.n_s)
}

/// F̄ from the vacuum response minus the idler-to-signal transfer.
pub fn f_bar_oracle(m: &ModeCoefficients, t: f64, steps: usize) -> Result<f64> {
    let cold = m.with_occupations(0.0, 0.0);
    let vacuum = integrate_moments(&cold, &PhotonFieldState::signal(0.0)?, t, steps)?;
    let idler = PhotonFieldState::new(0.0, 1.0, Complex64::new(0.0, 0.0))?;
    let with_idler = integrate_moments(&cold, &idler, t, steps)?;
    let transfer = with_idler.n_s - vacuum.n_s;
    Ok((vacuum.n_s - transfer) / m.envelope(t))
}
