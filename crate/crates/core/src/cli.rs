//! Command-line front end: sweeps, time series and comparison with
//! measured gain data.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::TWO_PI;
use crate::device::Device;
use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::mixing::{ModeCoefficients, PumpConfig};
use crate::noise::{added_noise, output_photon_number, PhotonFieldState};

pub const SPECTRUM_HEADER: &str =
    "frequency_hz,gain_db,photon_number,added_noise,sql_limit,valid,invalid_reason";
pub const DYNAMICS_HEADER: &str = "t_s,photon_number";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    GainSpectrum,
    Dynamics,
    Noise,
    Compare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub f_min: f64,
    pub f_max: f64,
    pub n_points: usize,
    /// Pump frequency in Hz.
    pub f_pump: f64,
    pub pump_ratio: f64,
    pub temperature: f64,
    pub dispersion: Dispersion,
    pub initial_state: PhotonFieldState,
    pub t_samples: usize,
}

impl SweepSpec {
    pub fn validate(&self, device: &Device) -> Result<()> {
        if self.kind != SweepKind::Dynamics && self.kind != SweepKind::Compare {
            if !(self.f_min > 0.0 && self.f_min.is_finite()) {
                return Err(constraint("f_min", format!("must be positive, got {}", self.f_min)));
            }
            if !(self.f_max > self.f_min && self.f_max.is_finite()) {
                return Err(constraint(
                    "f_max",
                    format!("must exceed f_min = {}, got {}", self.f_min, self.f_max),
                ));
            }
            if self.n_points < 2 {
                return Err(constraint(
                    "points",
                    format!("need at least 2, got {}", self.n_points),
                ));
            }
        }
        if self.kind == SweepKind::Dynamics && self.t_samples < 2 {
            return Err(constraint(
                "t_samples",
                format!("need at least 2, got {}", self.t_samples),
            ));
        }
        if !(self.f_pump > 0.0 && self.f_pump.is_finite()) {
            return Err(constraint("pump_freq", format!("must be positive, got {}", self.f_pump)));
        }
        if self.dispersion == Dispersion::Rpm && !device.has_rpm() {
            return Err(Error::MissingRpm);
        }
        Ok(())
    }

    pub fn pump(&self, device: &Device) -> Result<PumpConfig> {
        PumpConfig::new(
            device,
            TWO_PI * self.f_pump,
            self.pump_ratio,
            self.temperature,
            self.dispersion,
        )
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n_points;
        let step = (self.f_max - self.f_min) / (n - 1) as f64;
        (0..n).map(|i| if i + 1 == n { self.f_max } else { self.f_min + step * i as f64 }).collect()
    }
}

fn constraint(field: &'static str, reason: String) -> Error {
    Error::Constraint { field, reason }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub frequency_hz: f64,
    pub gain_db: Option<f64>,
    pub photon_number: Option<f64>,
    pub added_noise: Option<f64>,
    pub sql_limit: Option<f64>,
    pub valid: bool,
    /// Reason token for invalid rows, `degenerate` at ω = ω_p.
    pub invalid_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

fn num(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        let _ = write!(out, "{v:.8e}");
    }
}

impl SpectrumTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(80 * (self.rows.len() + 1));
        out.push_str(SPECTRUM_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{:.8e},", r.frequency_hz);
            num(&mut out, r.gain_db);
            out.push(',');
            num(&mut out, r.photon_number);
            out.push(',');
            num(&mut out, r.added_noise);
            out.push(',');
            num(&mut out, r.sql_limit);
            out.push(',');
            out.push_str(if r.valid { "true" } else { "false" });
            out.push(',');
            out.push_str(r.invalid_reason.as_deref().unwrap_or(""));
            out.push('\n');
        }
        out
    }
}

/// One spectrum row; sweep-invalid frequencies become flagged rows.
pub fn evaluate_point(
    device: &Device,
    pump: &PumpConfig,
    state: &PhotonFieldState,
    frequency_hz: f64,
    total_input: bool,
) -> Result<SpectrumRow> {
    let m = match ModeCoefficients::compute(device, pump, TWO_PI * frequency_hz) {
        Ok(m) => m,
        Err(e) => {
            let reason = e.invalid_token().ok_or(e)?;
            return Ok(SpectrumRow {
                frequency_hz,
                gain_db: None,
                photon_number: None,
                added_noise: None,
                sql_limit: None,
                valid: false,
                invalid_reason: Some(reason),
            });
        }
    };
    let r = added_noise(state, &m, device.derived.t_ref_total)?;
    let offset = if total_input { 0.5 } else { 0.0 };
    Ok(SpectrumRow {
        frequency_hz,
        gain_db: Some(10.0 * r.gain_power.log10()),
        photon_number: Some(r.photon_number),
        added_noise: Some(r.added_noise + offset),
        sql_limit: Some(r.sql_bound),
        valid: true,
        invalid_reason: m.degenerate.then(|| "degenerate".to_string()),
    })
}

fn sweep(device: &Device, spec: &SweepSpec, total_input: bool) -> Result<SpectrumTable> {
    spec.validate(device)?;
    let pump = spec.pump(device)?;
    let rows = spec
        .frequencies()
        .par_iter()
        .map(|&f| evaluate_point(device, &pump, &spec.initial_state, f, total_input))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable { rows })
}

pub fn gain_spectrum(device: &Device, spec: &SweepSpec) -> Result<SpectrumTable> {
    sweep(device, spec, false)
}

/// Added-noise spectrum; `total_input` adds the half quantum of the input
/// vacuum to the added-noise column.
pub fn noise_spectrum(
    device: &Device,
    spec: &SweepSpec,
    total_input: bool,
) -> Result<SpectrumTable> {
    sweep(device, spec, total_input)
}

/// Signal photon number on `t_samples` evenly spaced times in [0, t_r].
pub fn dynamics(device: &Device, spec: &SweepSpec, f_signal: f64) -> Result<Vec<(f64, f64)>> {
    spec.validate(device)?;
    let pump = spec.pump(device)?;
    let m = ModeCoefficients::compute(device, &pump, TWO_PI * f_signal)?;
    let t_r = device.derived.t_ref_total;
    let n = spec.t_samples;
    (0..n)
        .map(|k| {
            let t = if k + 1 == n { t_r } else { t_r * k as f64 / (n - 1) as f64 };
            Ok((t, output_photon_number(&spec.initial_state, &m, t)?))
        })
        .collect()
}

pub fn dynamics_csv(series: &[(f64, f64)]) -> String {
    let mut out = String::from(DYNAMICS_HEADER);
    out.push('\n');
    for (t, n) in series {
        let _ = writeln!(out, "{t:.8e},{n:.8e}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub rms_db: f64,
    pub max_abs_db: f64,
    pub n_points_used: usize,
    pub n_rows_skipped: usize,
}

/// Measured (frequency, gain dB) pairs and the number of malformed rows.
pub fn read_measured(text: &str) -> Result<(Vec<(f64, f64)>, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers =
        reader.headers().map_err(|e| Error::Data(format!("measured CSV header: {e}")))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("measured CSV has no `{name}` column")))
    };
    let (fi, gi) = (column("frequency_hz")?, column("gain_db")?);
    let mut points = Vec::new();
    let mut skipped = 0;
    for record in reader.records() {
        let parsed = record.ok().and_then(|r| {
            let f = r.get(fi)?.parse::<f64>().ok()?;
            let g = r.get(gi)?.parse::<f64>().ok()?;
            (f.is_finite() && g.is_finite()).then_some((f, g))
        });
        match parsed {
            Some(p) => points.push(p),
            None => skipped += 1,
        }
    }
    Ok((points, skipped))
}

/// Model gain at each measured frequency (optionally restricted to
/// [f_min, f_max]) against the measurement.
pub fn compare(
    device: &Device,
    spec: &SweepSpec,
    measured: &[(f64, f64)],
    skipped: usize,
) -> Result<CompareReport> {
    spec.validate(device)?;
    let pump = spec.pump(device)?;
    let in_range = |f: f64| {
        (spec.f_min.is_nan() || f >= spec.f_min) && (spec.f_max.is_nan() || f <= spec.f_max)
    };
    let diffs = measured
        .par_iter()
        .filter(|(f, _)| in_range(*f))
        .map(|&(f, g)| {
            let row = evaluate_point(device, &pump, &spec.initial_state, f, false)?;
            Ok(row.gain_db.map(|model| model - g))
        })
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = diffs.into_iter().flatten().collect();
    if diffs.is_empty() {
        return Err(Error::Data("no measured point overlaps the valid model range".into()));
    }
    let n = diffs.len();
    let rms = (diffs.iter().map(|d| d * d).sum::<f64>() / n as f64).sqrt();
    let max = diffs.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    Ok(CompareReport { rms_db: rms, max_abs_db: max, n_points_used: n, n_rows_skipped: skipped })
}

/// Parse a number with an optional SI prefix, e.g. `5.965G`, `20m`, `1.2e9`.
pub fn parse_quantity(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let prefixes = [
        ('T', 1e12),
        ('G', 1e9),
        ('M', 1e6),
        ('k', 1e3),
        ('m', 1e-3),
        ('u', 1e-6),
        ('µ', 1e-6),
        ('n', 1e-9),
        ('p', 1e-12),
        ('f', 1e-15),
    ];
    let (body, scale) = match s.chars().last() {
        Some(c) => match prefixes.iter().find(|(p, _)| *p == c) {
            Some(&(_, scale)) => (&s[..s.len() - c.len_utf8()], scale),
            None => (s, 1.0),
        },
        None => return Err("empty value".into()),
    };
    let value: f64 = body.parse().map_err(|_| format!("not a number: `{s}`"))?;
    if !value.is_finite() {
        return Err(format!("not a finite number: `{s}`"));
    }
    Ok(value * scale)
}

#[derive(Parser, Debug)]
#[command(name = "jtwpa", version, about = "JTWPA gain, photon-number and added-noise simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power gain across a frequency sweep.
    GainSpectrum(SweepArgs),
    /// Signal photon number along the line at one frequency.
    Dynamics(DynamicsArgs),
    /// Added noise and quantum limit across a frequency sweep.
    Noise(NoiseArgs),
    /// Compare model gain with a measured gain CSV.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Device parameter file (JSON).
    #[arg(long)]
    device: PathBuf,
    /// Pump frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    pump_freq: f64,
    /// Pump current relative to the critical current.
    #[arg(long, value_parser = parse_quantity)]
    pump_ratio: f64,
    /// Bath temperature (K).
    #[arg(long, value_parser = parse_quantity, default_value = "0")]
    temp: f64,
    /// bare or rpm.
    #[arg(long, default_value = "bare")]
    dispersion: Dispersion,
    /// Initial signal photon number.
    #[arg(long, value_parser = parse_quantity, default_value = "1")]
    n_signal: f64,
    /// Initial idler photon number.
    #[arg(long, value_parser = parse_quantity, default_value = "0")]
    n_idler: f64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RangeArgs {
    /// Lowest signal frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    f_min: f64,
    /// Highest signal frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    f_max: f64,
    /// Number of evenly spaced points.
    #[arg(long)]
    points: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Report A + 1/2, the total input-referred noise.
    #[arg(long)]
    total_input: bool,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Signal frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    signal_freq: f64,
    /// Number of output times over [0, t_r].
    #[arg(long, default_value_t = 101)]
    t_samples: usize,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// CSV with frequency_hz and gain_db columns.
    #[arg(long)]
    measured: PathBuf,
    /// Ignore measured points below this frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    f_min: Option<f64>,
    /// Ignore measured points above this frequency (Hz).
    #[arg(long, value_parser = parse_quantity)]
    f_max: Option<f64>,
}

impl CommonArgs {
    fn spec(&self, kind: SweepKind) -> Result<SweepSpec> {
        Ok(SweepSpec {
            kind,
            f_min: f64::NAN,
            f_max: f64::NAN,
            n_points: 0,
            f_pump: self.pump_freq,
            pump_ratio: self.pump_ratio,
            temperature: self.temp,
            dispersion: self.dispersion,
            initial_state: PhotonFieldState::new(
                self.n_signal,
                self.n_idler,
                Complex64::new(0.0, 0.0),
            )?,
            t_samples: 0,
        })
    }
}

impl SweepArgs {
    fn spec(&self, kind: SweepKind) -> Result<SweepSpec> {
        Ok(SweepSpec {
            f_min: self.range.f_min,
            f_max: self.range.f_max,
            n_points: self.range.points,
            ..self.common.spec(kind)?
        })
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::GainSpectrum(a) => {
            let device = Device::load(&a.common.device)?;
            let table = gain_spectrum(&device, &a.spec(SweepKind::GainSpectrum)?)?;
            emit(a.common.out.as_deref(), &table.to_csv(), stdout)
        }
        Command::Noise(a) => {
            let device = Device::load(&a.sweep.common.device)?;
            let table = noise_spectrum(&device, &a.sweep.spec(SweepKind::Noise)?, a.total_input)?;
            emit(a.sweep.common.out.as_deref(), &table.to_csv(), stdout)
        }
        Command::Dynamics(a) => {
            let device = Device::load(&a.common.device)?;
            let spec = SweepSpec { t_samples: a.t_samples, ..a.common.spec(SweepKind::Dynamics)? };
            let series = dynamics(&device, &spec, a.signal_freq)?;
            emit(a.common.out.as_deref(), &dynamics_csv(&series), stdout)
        }
        Command::Compare(a) => {
            let device = Device::load(&a.common.device)?;
            let spec = SweepSpec {
                f_min: a.f_min.unwrap_or(f64::NAN),
                f_max: a.f_max.unwrap_or(f64::NAN),
                ..a.common.spec(SweepKind::Compare)?
            };
            let text = std::fs::read_to_string(&a.measured)
                .map_err(|e| Error::Data(format!("cannot read {}: {e}", a.measured.display())))?;
            let (points, skipped) = read_measured(&text)?;
            if skipped > 0 {
                let _ = writeln!(
                    stderr,
                    "warning: skipped {skipped} malformed row(s) in {}",
                    a.measured.display()
                );
            }
            let report = compare(&device, &spec, &points, skipped)?;
            let mut json = serde_json::to_string(&report)
                .map_err(|e| Error::Data(format!("cannot encode report: {e}")))?;
            json.push('\n');
            emit(a.common.out.as_deref(), &json, stdout)
        }
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
