//! Unit-cell circuit description of a Josephson-embedded transmission line.
//!
//! All values are SI (F, H, A, m, rad/s). The JSON device file uses the same
//! units except for the plasma frequency, which is given as an ordinary
//! frequency in Hz.

use std::path::Path;

use serde::Deserialize;

use crate::constants::{PHI0_REDUCED, TWO_PI};
use crate::error::{Error, Result};

/// Relative tolerance for the ω_J = 1/sqrt(L_J0 C_J) identity.
pub const JUNCTION_CONSISTENCY_TOL: f64 = 1e-9;

/// Capacitively coupled LC resonator placed in every cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpmParams {
    pub c_coupling: f64,
    pub c_resonator: f64,
    pub l_resonator: f64,
}

impl RpmParams {
    /// Angular frequency where the resonator branch carries no current.
    pub fn series_zero(&self) -> f64 {
        1.0 / (self.l_resonator * self.c_resonator).sqrt()
    }

    /// Angular frequency of the pole of the loading admittance.
    pub fn pole(&self) -> f64 {
        1.0 / (self.l_resonator * (self.c_resonator + self.c_coupling)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams {
    /// Ground capacitance of one cell, C'Δz.
    pub c_ground: f64,
    pub cell_length: f64,
    pub n_cells: u32,
    pub i_critical: f64,
    pub c_junction: Option<f64>,
    /// Linear cell inductance L_J0.
    pub l_cell: Option<f64>,
    /// Junction plasma frequency in rad/s.
    pub plasma_freq: Option<f64>,
    pub rpm: Option<RpmParams>,
    pub loss_tangent: f64,
    pub z0_override: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub l_j0: f64,
    pub c_j: f64,
    pub omega_j: f64,
    /// Dispersionless reference velocity Δz/sqrt(L_J0 C).
    pub v_ref: f64,
    /// Reference travel time over the full line.
    pub t_ref_total: f64,
    pub z0: f64,
}

/// Validated parameters together with their derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub params: DeviceParams,
    pub derived: DerivedConstants,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RpmFile {
    c_coupling_f: f64,
    c_resonator_f: f64,
    l_resonator_h: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    c_ground_f: f64,
    cell_length_m: f64,
    n_cells: i64,
    i_critical_a: f64,
    #[serde(default)]
    c_junction_f: Option<f64>,
    #[serde(default)]
    l_cell_h: Option<f64>,
    #[serde(default)]
    plasma_freq_hz: Option<f64>,
    #[serde(default)]
    rpm: Option<RpmFile>,
    loss_tangent: f64,
    #[serde(default)]
    z0_ohm: Option<f64>,
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Constraint {
            field,
            reason: format!("must be finite and strictly positive, got {value}"),
        })
    }
}

fn positive_opt(field: &'static str, value: Option<f64>) -> Result<()> {
    value.map_or(Ok(()), |v| positive(field, v))
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        positive("c_ground", self.c_ground)?;
        positive("cell_length", self.cell_length)?;
        if self.n_cells == 0 {
            return Err(Error::Constraint {
                field: "n_cells",
                reason: "must be at least 1".into(),
            });
        }
        positive("i_critical", self.i_critical)?;
        positive_opt("c_junction", self.c_junction)?;
        positive_opt("l_cell", self.l_cell)?;
        positive_opt("plasma_freq", self.plasma_freq)?;
        positive_opt("z0_override", self.z0_override)?;
        if let Some(rpm) = &self.rpm {
            positive("rpm.c_coupling", rpm.c_coupling)?;
            positive("rpm.c_resonator", rpm.c_resonator)?;
            positive("rpm.l_resonator", rpm.l_resonator)?;
        }
        if !(self.loss_tangent.is_finite() && self.loss_tangent >= 0.0) {
            return Err(Error::Constraint {
                field: "loss_tangent",
                reason: format!("must be finite and non-negative, got {}", self.loss_tangent),
            });
        }
        Ok(())
    }

    /// Parameters with every member of {L_J0, C_J, ω_J} and Z_0 filled in.
    pub fn with_derived(&self, d: &DerivedConstants) -> DeviceParams {
        DeviceParams {
            c_junction: Some(d.c_j),
            l_cell: Some(d.l_j0),
            plasma_freq: Some(d.omega_j),
            z0_override: Some(d.z0),
            ..self.clone()
        }
    }
}

/// Parse a device description from JSON text.
pub fn parse_device(text: &str) -> Result<DeviceParams> {
    let file: DeviceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n_cells =
        u32::try_from(file.n_cells).ok().filter(|&n| n >= 1).ok_or_else(|| Error::Constraint {
            field: "n_cells",
            reason: format!("must be a positive integer, got {}", file.n_cells),
        })?;
    let params = DeviceParams {
        c_ground: file.c_ground_f,
        cell_length: file.cell_length_m,
        n_cells,
        i_critical: file.i_critical_a,
        c_junction: file.c_junction_f,
        l_cell: file.l_cell_h,
        plasma_freq: file.plasma_freq_hz.map(|f| f * TWO_PI),
        rpm: file.rpm.map(|r| RpmParams {
            c_coupling: r.c_coupling_f,
            c_resonator: r.c_resonator_f,
            l_resonator: r.l_resonator_h,
        }),
        loss_tangent: file.loss_tangent,
        z0_override: file.z0_ohm,
    };
    params.validate()?;
    Ok(params)
}

pub fn load_device(path: impl AsRef<Path>) -> Result<DeviceParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::DeviceFile { path: path.display().to_string(), source })?;
    parse_device(&text)
}

/// Resolve the junction triple {L_J0, C_J, ω_J}, the reference velocity and
/// the line impedance.
///
/// L_J0 comes from `l_cell` when given, otherwise from the (C_J, ω_J) pair,
/// otherwise from φ₀/I_c. The remaining member of the triple follows from
/// ω_J² L_J0 C_J = 1.
pub fn derive_constants(p: &DeviceParams) -> Result<DerivedConstants> {
    p.validate()?;
    let (l_j0, c_j, omega_j) = match (p.l_cell, p.c_junction, p.plasma_freq) {
        (Some(l), Some(c), Some(w)) => {
            let implied = 1.0 / (l * c).sqrt();
            if ((implied - w) / w).abs() > JUNCTION_CONSISTENCY_TOL {
                return Err(Error::Constraint {
                    field: "plasma_freq",
                    reason: format!(
                        "inconsistent with l_cell and c_junction (1/sqrt(LC) = {implied:.9e} rad/s, given {w:.9e} rad/s)"
                    ),
                });
            }
            (l, c, w)
        }
        (Some(l), Some(c), None) => (l, c, 1.0 / (l * c).sqrt()),
        (Some(l), None, Some(w)) => (l, 1.0 / (w * w * l), w),
        (None, Some(c), Some(w)) => (1.0 / (w * w * c), c, w),
        (None, Some(c), None) => {
            let l = PHI0_REDUCED / p.i_critical;
            (l, c, 1.0 / (l * c).sqrt())
        }
        (None, None, Some(w)) => {
            let l = PHI0_REDUCED / p.i_critical;
            (l, 1.0 / (w * w * l), w)
        }
        (Some(_), None, None) | (None, None, None) => {
            return Err(Error::Underdetermined(
                "need c_junction or plasma_freq_hz to fix the junction capacitance".into(),
            ))
        }
    };
    let per_cell = (l_j0 * p.c_ground).sqrt();
    let v_ref = p.cell_length / per_cell;
    let t_ref_total = f64::from(p.n_cells) * p.cell_length / v_ref;
    let z0 = p.z0_override.unwrap_or_else(|| (l_j0 / p.c_ground).sqrt());
    Ok(DerivedConstants { l_j0, c_j, omega_j, v_ref, t_ref_total, z0 })
}

impl Device {
    pub fn new(params: DeviceParams) -> Result<Self> {
        let derived = derive_constants(&params)?;
        Ok(Device { params, derived })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Device::new(load_device(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Device::new(parse_device(text)?)
    }

    pub fn has_rpm(&self) -> bool {
        self.params.rpm.is_some()
    }
}
