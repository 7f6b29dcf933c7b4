//! Python bindings. Frequencies cross the boundary in Hz, times in seconds.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use jtwpa_core::cli::{self, SweepKind, SweepSpec};
use jtwpa_core::constants::TWO_PI;
use jtwpa_core::{dispersion, mixing, noise, oracle};

fn err(e: jtwpa_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_dispersion(s: &str) -> PyResult<jtwpa_core::Dispersion> {
    s.parse().map_err(PyValueError::new_err)
}

fn state(n_signal: f64, n_idler: f64, c_si: Complex64) -> PyResult<noise::PhotonFieldState> {
    noise::PhotonFieldState::new(n_signal, n_idler, c_si).map_err(err)
}

#[pyclass(frozen, module = "jtwpa")]
struct Device {
    inner: jtwpa_core::Device,
}

#[pymethods]
impl Device {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        jtwpa_core::Device::load(path).map(|inner| Device { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        jtwpa_core::Device::from_json(text).map(|inner| Device { inner }).map_err(err)
    }

    #[getter]
    fn l_j0(&self) -> f64 {
        self.inner.derived.l_j0
    }

    #[getter]
    fn c_j(&self) -> f64 {
        self.inner.derived.c_j
    }

    #[getter]
    fn omega_j(&self) -> f64 {
        self.inner.derived.omega_j
    }

    #[getter]
    fn v_ref(&self) -> f64 {
        self.inner.derived.v_ref
    }

    #[getter]
    fn t_ref_total(&self) -> f64 {
        self.inner.derived.t_ref_total
    }

    #[getter]
    fn z0(&self) -> f64 {
        self.inner.derived.z0
    }

    #[getter]
    fn has_rpm(&self) -> bool {
        self.inner.has_rpm()
    }

    /// Dispersion factor at `freq_hz` under "bare" or "rpm".
    #[pyo3(signature = (freq_hz, dispersion = "bare"))]
    fn dispersion_factor(&self, freq_hz: f64, dispersion: &str) -> PyResult<f64> {
        dispersion::lambda(TWO_PI * freq_hz, &self.inner, parse_dispersion(dispersion)?)
            .map_err(err)
    }

    fn damping(&self, freq_hz: f64) -> f64 {
        noise::damping(TWO_PI * freq_hz, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Device(n_cells={}, l_j0={:.4e}, c_j={:.4e}, rpm={})",
            self.inner.params.n_cells,
            self.inner.derived.l_j0,
            self.inner.derived.c_j,
            self.inner.has_rpm()
        )
    }
}

#[pyclass(frozen, module = "jtwpa")]
struct Pump {
    inner: mixing::PumpConfig,
}

#[pymethods]
impl Pump {
    #[new]
    #[pyo3(signature = (device, freq_hz, ratio, temperature = 0.0, dispersion = "bare"))]
    fn new(
        device: &Device,
        freq_hz: f64,
        ratio: f64,
        temperature: f64,
        dispersion: &str,
    ) -> PyResult<Self> {
        mixing::PumpConfig::new(
            &device.inner,
            TWO_PI * freq_hz,
            ratio,
            temperature,
            parse_dispersion(dispersion)?,
        )
        .map(|inner| Pump { inner })
        .map_err(err)
    }

    #[getter]
    fn omega_p(&self) -> f64 {
        self.inner.omega_p
    }

    #[getter]
    fn a_p0(&self) -> f64 {
        self.inner.a_p0
    }

    #[getter]
    fn k_p(&self) -> f64 {
        self.inner.k_p
    }

    #[getter]
    fn lambda_p(&self) -> f64 {
        self.inner.lambda_p
    }
}

#[pyclass(frozen, module = "jtwpa")]
struct ModeCoefficients {
    inner: mixing::ModeCoefficients,
}

macro_rules! getters {
    ($($name:ident: $ty:ty),* $(,)?) => {
        #[pymethods]
        impl ModeCoefficients {
            $(
                #[getter]
                fn $name(&self) -> $ty {
                    self.inner.$name
                }
            )*

            #[getter]
            fn eta(&self) -> Complex64 {
                self.inner.eta()
            }

            #[getter]
            fn rho(&self) -> Complex64 {
                self.inner.rho()
            }

            #[staticmethod]
            #[pyo3(signature = (gamma_s, gamma_i, d_omega, kappa, nbar_s = 0.0, nbar_i = 0.0))]
            fn from_rates(gamma_s: f64, gamma_i: f64, d_omega: f64, kappa: f64, nbar_s: f64, nbar_i: f64) -> Self {
                ModeCoefficients {
                    inner: mixing::ModeCoefficients::from_rates(gamma_s, gamma_i, d_omega, kappa)
                        .with_occupations(nbar_s, nbar_i),
                }
            }
        }
    };
}

getters!(
    omega: f64,
    omega_idler: f64,
    lambda_s: f64,
    lambda_i: f64,
    lambda_p: f64,
    theta_s: f64,
    theta_i: f64,
    theta_p: f64,
    chi_prime: f64,
    kappa: f64,
    d_omega_total: f64,
    gamma_s: f64,
    gamma_i: f64,
    nbar_s: f64,
    nbar_i: f64,
    g: Complex64,
    degenerate: bool,
);

#[pyfunction]
fn coefficients(device: &Device, pump: &Pump, freq_hz: f64) -> PyResult<ModeCoefficients> {
    mixing::ModeCoefficients::compute(&device.inner, &pump.inner, TWO_PI * freq_hz)
        .map(|inner| ModeCoefficients { inner })
        .map_err(err)
}

#[pyfunction]
fn zeta_functions(m: &ModeCoefficients, t: f64) -> (Complex64, Complex64) {
    mixing::zeta_functions(&m.inner, t)
}

#[pyfunction]
fn power_gain(m: &ModeCoefficients, t: f64) -> f64 {
    noise::power_gain(&m.inner, t)
}

#[pyfunction]
fn f_bar(m: &ModeCoefficients, t: f64) -> f64 {
    noise::f_bar(&m.inner, t)
}

#[pyfunction]
fn bose_einstein(freq_hz: f64, temperature: f64) -> f64 {
    noise::bose_einstein(TWO_PI * freq_hz, temperature)
}

#[pyfunction]
#[pyo3(signature = (m, t, n_signal = 1.0, n_idler = 0.0, c_si = Complex64::new(0.0, 0.0)))]
fn output_photon_number(
    m: &ModeCoefficients,
    t: f64,
    n_signal: f64,
    n_idler: f64,
    c_si: Complex64,
) -> PyResult<f64> {
    noise::output_photon_number(&state(n_signal, n_idler, c_si)?, &m.inner, t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, t, n_signal = 1.0, n_idler = 0.0, c_si = Complex64::new(0.0, 0.0)))]
fn added_noise<'py>(
    py: Python<'py>,
    m: &ModeCoefficients,
    t: f64,
    n_signal: f64,
    n_idler: f64,
    c_si: Complex64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = noise::added_noise(&state(n_signal, n_idler, c_si)?, &m.inner, t).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("gain_power", r.gain_power)?;
    d.set_item("gain_quantum", r.gain_quantum)?;
    d.set_item("added_noise", r.added_noise)?;
    d.set_item("sql_bound", r.sql_bound)?;
    d.set_item("photon_number", r.photon_number)?;
    d.set_item("thermal_occupation_s", r.thermal_occupation_s)?;
    d.set_item("thermal_occupation_i", r.thermal_occupation_i)?;
    Ok(d)
}

/// Second moments (n_s, n_i, c) after RK4 integration to `t_end`.
#[pyfunction]
#[pyo3(signature = (m, t_end, steps = oracle::DEFAULT_STEPS, n_signal = 1.0, n_idler = 0.0, c_si = Complex64::new(0.0, 0.0)))]
fn integrate_moments(
    m: &ModeCoefficients,
    t_end: f64,
    steps: usize,
    n_signal: f64,
    n_idler: f64,
    c_si: Complex64,
) -> PyResult<(f64, f64, Complex64)> {
    let s = oracle::integrate_moments(&m.inner, &state(n_signal, n_idler, c_si)?, t_end, steps)
        .map_err(err)?;
    Ok((s.n_s, s.n_i, s.c))
}

type Row = (f64, Option<f64>, Option<f64>, Option<f64>, Option<f64>, bool, Option<String>);

/// Spectrum rows (frequency_hz, gain_db, photon_number, added_noise,
/// sql_limit, valid, reason).
#[pyfunction]
#[pyo3(signature = (device, pump_freq_hz, pump_ratio, f_min, f_max, points, temperature = 0.0, dispersion = "bare", n_signal = 1.0, total_input = false))]
#[allow(clippy::too_many_arguments)]
fn spectrum(
    device: &Device,
    pump_freq_hz: f64,
    pump_ratio: f64,
    f_min: f64,
    f_max: f64,
    points: usize,
    temperature: f64,
    dispersion: &str,
    n_signal: f64,
    total_input: bool,
) -> PyResult<Vec<Row>> {
    let spec = SweepSpec {
        kind: SweepKind::Noise,
        f_min,
        f_max,
        n_points: points,
        f_pump: pump_freq_hz,
        pump_ratio,
        temperature,
        dispersion: parse_dispersion(dispersion)?,
        initial_state: state(n_signal, 0.0, Complex64::new(0.0, 0.0))?,
        t_samples: 0,
    };
    let table = cli::noise_spectrum(&device.inner, &spec, total_input).map_err(err)?;
    Ok(table
        .rows
        .into_iter()
        .map(|r| {
            (
                r.frequency_hz,
                r.gain_db,
                r.photon_number,
                r.added_noise,
                r.sql_limit,
                r.valid,
                r.invalid_reason,
            )
        })
        .collect())
}

/// Signal photon number on `t_samples` times in [0, t_r].
#[pyfunction]
#[pyo3(signature = (device, pump_freq_hz, pump_ratio, signal_freq_hz, t_samples = 101, temperature = 0.0, dispersion = "bare", n_signal = 1.0))]
#[allow(clippy::too_many_arguments)]
fn dynamics(
    device: &Device,
    pump_freq_hz: f64,
    pump_ratio: f64,
    signal_freq_hz: f64,
    t_samples: usize,
    temperature: f64,
    dispersion: &str,
    n_signal: f64,
) -> PyResult<Vec<(f64, f64)>> {
    let spec = SweepSpec {
        kind: SweepKind::Dynamics,
        f_min: f64::NAN,
        f_max: f64::NAN,
        n_points: 0,
        f_pump: pump_freq_hz,
        pump_ratio,
        temperature,
        dispersion: parse_dispersion(dispersion)?,
        initial_state: state(n_signal, 0.0, Complex64::new(0.0, 0.0))?,
        t_samples,
    };
    cli::dynamics(&device.inner, &spec, signal_freq_hz).map_err(err)
}

#[pymodule]
fn jtwpa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Device>()?;
    m.add_class::<Pump>()?;
    m.add_class::<ModeCoefficients>()?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_functions, m)?)?;
    m.add_function(wrap_pyfunction!(power_gain, m)?)?;
    m.add_function(wrap_pyfunction!(f_bar, m)?)?;
    m.add_function(wrap_pyfunction!(bose_einstein, m)?)?;
    m.add_function(wrap_pyfunction!(output_photon_number, m)?)?;
    m.add_function(wrap_pyfunction!(added_noise, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_moments, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(dynamics, m)?)?;
    Ok(())
}
