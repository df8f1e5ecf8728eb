//! Command-line front end: impedance sweeps over γ, field-profile dumps and the self-check
//! suite. Exit codes: 0 success, 1 computational or I/O failure, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{make_params, PlasmaParams};
use crate::error::Error;
use crate::oracle::{fourier_impedance, OracleConfig};
use crate::solution::{
    boundary_field_residual, check_residue_identity, compute_coefficients, compute_j, field_e, field_h, impedance_from_j,
    impedance_reduced, jump_integral_residual, FieldProfile,
};
use crate::spectrum::analyze;
use crate::Complex64;

pub const CSV_HEADER: [&str; 9] = ["gamma", "re_Z0", "im_Z0", "abs_Z0", "arg_Z0", "n_zeros", "eta0_re", "eta0_im", "status"];
pub const PROFILE_HEADER: [&str; 4] = ["x", "re_e", "im_e", "abs_e"];

/// Default γ window for the overview and the resonance close-up.
pub const WIDE_WINDOW: (f64, f64) = (0.01, 2.0);
pub const RESONANCE_WINDOW: (f64, f64) = (0.9, 1.1);
/// Default self-check panel, `ε = v_c = 1e-3`.
pub const DEFAULT_PANEL: [f64; 5] = [0.1, 0.5, 0.9, 1.0, 1.3];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Window {
    /// γ ∈ [0.01, 2]
    Wide,
    /// γ ∈ [0.9, 1.1]
    Resonance,
}

#[derive(Debug, Parser)]
#[command(name = "plasma-skin", version, about = "Surface impedance and fields of a Maxwellian plasma half-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensionless impedance Z0 and the discrete spectrum over a γ grid
    Sweep(SweepArgs),
    /// Field profile e(x) on a log-spaced depth grid
    Profile(ProfileArgs),
    /// Identity residuals, boundary conditions and oracle agreement on a panel of points
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// default range when --gamma-start/--gamma-end are not given
    #[arg(long, value_enum, default_value = "wide")]
    pub window: Window,
    #[arg(long)]
    pub gamma_start: Option<f64>,
    #[arg(long)]
    pub gamma_end: Option<f64>,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub scale: Scale,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub vc: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub vc: f64,
    #[arg(long, default_value_t = 20.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SelfcheckArgs {
    /// JSON list of {"gamma", "epsilon", "v_c"} objects
    #[arg(long)]
    pub panel: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// γ grid of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub gamma_start: f64,
    pub gamma_end: f64,
    pub n_points: usize,
    pub scale: Scale,
    pub epsilon: f64,
    pub v_c: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.gamma_start) || !positive(self.gamma_end) || !(self.gamma_start < self.gamma_end) {
            return Err(CliError::Usage(format!(
                "need 0 < gamma_start < gamma_end, got {} and {}",
                self.gamma_start, self.gamma_end
            )));
        }
        if self.n_points < 2 {
            return Err(CliError::Usage(format!("need at least 2 points, got {}", self.n_points)));
        }
        if !positive(self.epsilon) || !positive(self.v_c) {
            return Err(CliError::Usage("epsilon and v_c must be positive".into()));
        }
        Ok(())
    }

    pub fn gammas(&self) -> Vec<f64> {
        let n = self.n_points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.gamma_end;
                }
                let s = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.gamma_start + (self.gamma_end - self.gamma_start) * s,
                    Scale::Log => self.gamma_start * (self.gamma_end / self.gamma_start).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    NearBoundary,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NearBoundary => "near_boundary",
            RowStatus::Error => "error",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(RowStatus::Ok),
            "near_boundary" => Some(RowStatus::NearBoundary),
            "error" => Some(RowStatus::Error),
            _ => None,
        }
    }
}

/// One sweep point. Numeric fields are empty unless `status` is `ok`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SweepRow {
    pub gamma: f64,
    pub re_Z0: Option<f64>,
    pub im_Z0: Option<f64>,
    pub abs_Z0: Option<f64>,
    pub arg_Z0: Option<f64>,
    pub n_zeros: Option<usize>,
    pub eta0_re: Option<f64>,
    pub eta0_im: Option<f64>,
    pub status: RowStatus,
}

impl SweepRow {
    fn failed(gamma: f64, e: &Error) -> Self {
        let status = if e.is_near_boundary() { RowStatus::NearBoundary } else { RowStatus::Error };
        SweepRow {
            gamma,
            re_Z0: None,
            im_Z0: None,
            abs_Z0: None,
            arg_Z0: None,
            n_zeros: None,
            eta0_re: None,
            eta0_im: None,
            status,
        }
    }
}

/// Impedance and leading zero at one point.
pub fn sweep_point(gamma: f64, epsilon: f64, v_c: f64) -> SweepRow {
    let eval = || -> Result<SweepRow, Error> {
        let p = make_params(gamma, epsilon, v_c)?;
        let spectrum = analyze(&p)?;
        let z = impedance_from_j(&p, compute_j(&p)?, 1.0)?.z0;
        let eta0 = spectrum.zeros[0];
        Ok(SweepRow {
            gamma,
            re_Z0: Some(z.re),
            im_Z0: Some(z.im),
            abs_Z0: Some(z.re.hypot(z.im)),
            arg_Z0: Some(z.im.atan2(z.re)),
            n_zeros: Some(spectrum.n_zeros),
            eta0_re: Some(eta0.re),
            eta0_im: Some(eta0.im),
            status: RowStatus::Ok,
        })
    };
    eval().unwrap_or_else(|e| SweepRow::failed(gamma, &e))
}

/// One row per grid point, in γ order; solver failures become status rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    Ok(spec.gammas().par_iter().map(|&g| sweep_point(g, spec.epsilon, spec.v_c)).collect())
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record([
            format!("{:.16e}", r.gamma),
            fmt(r.re_Z0),
            fmt(r.im_Z0),
            fmt(r.abs_Z0),
            fmt(r.arg_Z0),
            r.n_zeros.map(|n| n.to_string()).unwrap_or_default(),
            fmt(r.eta0_re),
            fmt(r.eta0_im),
            r.status.as_str().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(r: R) -> Result<Vec<SweepRow>, CliError> {
    let mut rd = csv::Reader::from_reader(r);
    if rd.headers()?.iter().ne(CSV_HEADER) {
        return Err(CliError::Io("unexpected sweep header".into()));
    }
    let bad = |what: &str| CliError::Io(format!("malformed sweep field {what}"));
    let num = |s: &str| -> Result<Option<f64>, CliError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad(s))
        }
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        rows.push(SweepRow {
            gamma: f(0).parse().map_err(|_| bad(f(0)))?,
            re_Z0: num(f(1))?,
            im_Z0: num(f(2))?,
            abs_Z0: num(f(3))?,
            arg_Z0: num(f(4))?,
            n_zeros: if f(5).is_empty() { None } else { Some(f(5).parse().map_err(|_| bad(f(5)))?) },
            eta0_re: num(f(6))?,
            eta0_im: num(f(7))?,
            status: RowStatus::parse(f(8)).ok_or_else(|| bad(f(8)))?,
        });
    }
    Ok(rows)
}

/// `0` followed by `n - 1` log-spaced depths from `x_max·1e-4` to `x_max`.
pub fn profile_grid(x_max: f64, n: usize) -> Vec<f64> {
    let mut x = vec![0.0];
    if n == 2 {
        x.push(x_max);
        return x;
    }
    let m = n - 1;
    for i in 0..m {
        let s = i as f64 / (m - 1) as f64;
        x.push(if i == m - 1 { x_max } else { x_max * 10f64.powf(-4.0 * (1.0 - s)) });
    }
    x
}

/// `e(x)` on [`profile_grid`].
pub fn compute_profile(p: &PlasmaParams<f64>, x_max: f64, n: usize) -> Result<FieldProfile<f64>, CliError> {
    if !(x_max > 0.0) || !x_max.is_finite() || n < 2 {
        return Err(CliError::Usage(format!("need x_max > 0 and at least 2 points, got {x_max} and {n}")));
    }
    let c = compute_coefficients(p)?;
    Ok(field_e(&profile_grid(x_max, n), &c, p)?)
}

pub fn write_profile_csv<W: Write>(w: W, profile: &FieldProfile<f64>) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(PROFILE_HEADER)?;
    for (x, e) in profile.x_grid.iter().zip(&profile.e_values) {
        out.write_record([format!("{x:.16e}"), format!("{:.16e}", e.re), format!("{:.16e}", e.im), format!("{:.16e}", e.norm())])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the profile CSV to `out`.
pub fn dump_profile(p: &PlasmaParams<f64>, x_max: f64, n: usize, out: &Path) -> Result<FieldProfile<f64>, CliError> {
    let profile = compute_profile(p, x_max, n)?;
    write_profile_csv(BufWriter::new(File::create(out)?), &profile)?;
    Ok(profile)
}

/// Parameter point of a self-check panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelPoint {
    pub gamma: f64,
    pub epsilon: f64,
    pub v_c: f64,
}

pub fn default_panel() -> Vec<PanelPoint> {
    DEFAULT_PANEL.iter().map(|&gamma| PanelPoint { gamma, epsilon: 1e-3, v_c: 1e-3 }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

fn check(name: &str, tolerance: f64, value: Result<f64, Error>) -> CheckResult {
    match value {
        Ok(v) => CheckResult { name: name.into(), value: Some(v), tolerance, passed: v < tolerance, error: None },
        Err(e) => CheckResult { name: name.into(), value: None, tolerance, passed: false, error: Some(e.to_string()) },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Checked,
    SkippedNearBoundary,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: PanelPoint,
    pub status: PointStatus,
    pub checks: Vec<CheckResult>,
    pub error: Option<String>,
}

impl PointReport {
    pub fn passed(&self) -> bool {
        match self.status {
            PointStatus::Checked => self.checks.iter().all(|c| c.passed),
            PointStatus::SkippedNearBoundary => true,
            PointStatus::Error => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfcheckReport {
    pub points: Vec<PointReport>,
    pub passed: bool,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn specularity(c: &crate::solution::SolutionCoefficients<f64>, p: &PlasmaParams<f64>) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for mu in [0.3, 1.0, 2.2] {
        let hp = field_h(0.0, mu, c, p)?;
        let hm = field_h(0.0, -mu, c, p)?;
        worst = worst.max((hp - hm).norm() / hp.norm().max(1.0));
    }
    Ok(worst)
}

/// All identity, boundary-condition and cross-method checks at one point.
pub fn check_point(point: PanelPoint) -> PointReport {
    let setup = make_params(point.gamma, point.epsilon, point.v_c).and_then(|p| Ok((p, compute_coefficients(&p)?)));
    let (p, c) = match setup {
        Ok(v) => v,
        Err(e) => {
            let status = if e.is_near_boundary() { PointStatus::SkippedNearBoundary } else { PointStatus::Error };
            return PointReport { point, status, checks: Vec::new(), error: Some(e.to_string()) };
        }
    };
    let z = impedance_from_j(&p, c.j, 1.0);
    let checks = vec![
        check("boundary_field_reconstruction", 1e-6, boundary_field_residual(&c, &p)),
        check("jump_integral", 1e-6, jump_integral_residual(&c, &p)),
        check("residue_identity", 1e-8, check_residue_identity(Complex64::new(0.0, 2.0), &c, &p)),
        check("boundary_condition", 1e-6, field_e(&[0.0], &c, &p).map(|f| (f.e_values[0] - c.e_s).norm())),
        check("specular_reflection", 1e-5, specularity(&c, &p)),
        check(
            "oracle_impedance",
            1e-6,
            z.clone().and_then(|z| Ok(rel(fourier_impedance(&p, &OracleConfig::default())?.z, z.z))),
        ),
        check("dual_form_impedance", 1e-9, z.and_then(|z| Ok(rel(impedance_reduced(&p)?.z, z.z)))),
    ];
    PointReport { point, status: PointStatus::Checked, checks, error: None }
}

pub fn run_selfcheck(points: &[PanelPoint]) -> Result<SelfcheckReport, CliError> {
    if points.is_empty() {
        return Err(CliError::Usage("self-check panel is empty".into()));
    }
    let points: Vec<PointReport> = points.par_iter().map(|&pt| check_point(pt)).collect();
    let passed = points.iter().all(PointReport::passed);
    Ok(SelfcheckReport { points, passed })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn sweep_command(args: &SweepArgs) -> Result<(), CliError> {
    let (lo, hi) = match args.window {
        Window::Wide => WIDE_WINDOW,
        Window::Resonance => RESONANCE_WINDOW,
    };
    let spec = SweepSpec {
        gamma_start: args.gamma_start.unwrap_or(lo),
        gamma_end: args.gamma_end.unwrap_or(hi),
        n_points: args.points,
        scale: args.scale,
        epsilon: args.epsilon,
        v_c: args.vc,
    };
    let rows = run_sweep(&spec)?;
    let mut out = output(&args.out)?;
    match args.format {
        Format::Csv => write_sweep_csv(&mut out, &rows)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn profile_command(args: &ProfileArgs) -> Result<(), CliError> {
    let p = make_params(args.gamma, args.epsilon, args.vc).map_err(|e| CliError::Usage(e.to_string()))?;
    let profile = compute_profile(&p, args.xmax, args.points)?;
    let mut out = output(&args.out)?;
    write_profile_csv(&mut out, &profile)?;
    out.flush()?;
    Ok(())
}

fn selfcheck_command(args: &SelfcheckArgs) -> Result<bool, CliError> {
    let panel = match &args.panel {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<Vec<PanelPoint>>(&text).map_err(|e| CliError::Usage(format!("panel file: {e}")))?
        }
        None => default_panel(),
    };
    let report = run_selfcheck(&panel)?;
    let mut out = output(&args.out)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(report.passed)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> ExitCode
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => sweep_command(a).map(|_| true),
        Command::Profile(a) => profile_command(a).map(|_| true),
        Command::Selfcheck(a) => selfcheck_command(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("plasma-skin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> SweepSpec {
        SweepSpec { gamma_start: 0.5, gamma_end: 1.5, n_points: n, scale: Scale::Linear, epsilon: 1e-3, v_c: 1e-3 }
    }

    #[test]
    fn spec_validation_and_grid() {
        assert!(spec(2).validate().is_ok());
        assert!(matches!(spec(1).validate(), Err(CliError::Usage(_))));
        assert!(SweepSpec { gamma_start: 2.0, ..spec(5) }.validate().is_err());
        assert!(SweepSpec { gamma_start: 0.0, ..spec(5) }.validate().is_err());
        let g = SweepSpec { scale: Scale::Log, gamma_start: 0.01, gamma_end: 1.0, ..spec(3) }.gammas();
        assert!((g[1] - 0.1).abs() < 1e-15);
        assert_eq!(g[2], 1.0);
    }

    #[test]
    fn two_point_sweep() {
        let rows = run_sweep(&spec(2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].gamma < rows[1].gamma);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok);
            let (re, im) = (r.re_Z0.unwrap(), r.im_Z0.unwrap());
            assert!((r.abs_Z0.unwrap() - re.hypot(im)).abs() <= 1e-14 * r.abs_Z0.unwrap());
            let arg = r.arg_Z0.unwrap();
            assert!(arg > -std::f64::consts::PI && arg <= std::f64::consts::PI);
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut rows = run_sweep(&spec(3)).unwrap();
        rows.push(SweepRow::failed(2.0, &Error::SpectralBoundary { mu: 1.0, magnitude: 1e-9 }));
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("gamma,re_Z0,im_Z0,abs_Z0,arg_Z0,n_zeros,eta0_re,eta0_im,status\n"));
        assert!(text.lines().last().unwrap().ends_with(",,,,,,,near_boundary"));
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn profile_grid_shape() {
        assert_eq!(profile_grid(20.0, 2), vec![0.0, 20.0]);
        let g = profile_grid(20.0, 50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 20.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn selfcheck_edge_cases() {
        assert!(matches!(run_selfcheck(&[]), Err(CliError::Usage(_))));
        let r = run_selfcheck(&[PanelPoint { gamma: 0.5, epsilon: 1e-3, v_c: 1e3 }]).unwrap();
        assert_eq!(r.points.len(), 1);
    }
}
