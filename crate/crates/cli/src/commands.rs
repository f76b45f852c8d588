use rayon::prelude::*;
use serde::Serialize;

use kgosc::verify::{
    self, check_conservation, check_normalization, check_prescription_shift, check_spectrum,
    default_conservation_setup, default_normalization_cases, CaseKind, SpectrumOptions, Spacings,
    VerificationReport,
};
use kgosc::{
    charge_density_factor, energy_levels, lambda_required, BackgroundConfig, Branch, Error, ModeState,
    Prescription, QuantumNumbers,
};

use crate::args::{BranchArg, FormatArg, RunConfig, Suite, VerifyArgs};
use crate::output::{emit, fmt_f64, fmt_opt, rows_json, to_json, Table, SCHEMA_VERSION};
use crate::CliError;

const SPECTRUM_COLUMNS: [&str; 14] = [
    "case",
    "prescription",
    "M",
    "omega",
    "g",
    "a",
    "c",
    "k",
    "l",
    "n_r",
    "n",
    "lambda",
    "E",
    "status",
];

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    case: String,
    prescription: &'static str,
    #[serde(rename = "M")]
    mass: f64,
    omega: f64,
    g: f64,
    a: f64,
    c: f64,
    k: f64,
    l: i32,
    n_r: u32,
    n: u32,
    lambda: f64,
    #[serde(rename = "E")]
    energy: Option<f64>,
    status: &'static str,
}

impl SpectrumRow {
    fn cells(&self) -> Vec<String> {
        vec![
            self.case.clone(),
            self.prescription.to_string(),
            fmt_f64(self.mass),
            fmt_f64(self.omega),
            fmt_f64(self.g),
            fmt_f64(self.a),
            fmt_f64(self.c),
            fmt_f64(self.k),
            self.l.to_string(),
            self.n_r.to_string(),
            self.n.to_string(),
            fmt_f64(self.lambda),
            fmt_opt(self.energy),
            self.status.to_string(),
        ]
    }
}

fn quantum_numbers(cfg: &RunConfig) -> Vec<QuantumNumbers> {
    cfg.l
        .iter()
        .flat_map(|&l| cfg.n_r.iter().map(move |&n_r| QuantumNumbers::new(l, n_r)))
        .collect()
}

pub fn spectrum_rows(cfg: &RunConfig) -> Vec<SpectrumRow> {
    let p = &cfg.params;
    let mut rows = Vec::new();
    for qn in quantum_numbers(cfg) {
        let row = |energy: Option<f64>, status: &'static str| SpectrumRow {
            case: cfg.config.case_label().to_string(),
            prescription: cfg.prescription.label(),
            mass: p.mass(),
            omega: p.omega(),
            g: p.g(),
            a: cfg.config.a(),
            c: cfg.config.c(),
            k: p.k(),
            l: qn.l,
            n_r: qn.n_r,
            n: qn.principal(),
            lambda: lambda_required(p, qn),
            energy,
            status,
        };
        match energy_levels(p, &cfg.config, cfg.prescription, qn) {
            Ok(levels) => {
                let status = if levels.degenerate { "degenerate" } else { "ok" };
                rows.extend(levels.roots().map(|e| row(Some(e), status)));
            }
            Err(Error::ComplexEnergy { .. }) => {
                rows.push(row(None, "complex_energy"));
                rows.push(row(None, "complex_energy"));
            }
            Err(_) => rows.push(row(None, "degenerate_dispersion")),
        }
    }
    rows
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let rows = spectrum_rows(cfg);
    let text = match cfg.format {
        FormatArg::Csv => {
            let mut t = Table::new(SPECTRUM_COLUMNS);
            rows.iter().for_each(|r| t.push(r.cells()));
            t.to_csv()
        }
        FormatArg::Json => rows_json(&rows),
    };
    emit(&text, cfg.out.as_deref())
}

fn physical(e: Error) -> CliError {
    CliError::Physical(e.to_string())
}

fn single_mode(cfg: &RunConfig, branch: Branch) -> Result<(QuantumNumbers, ModeState), CliError> {
    let qns = quantum_numbers(cfg);
    if qns.len() != 1 {
        return Err(CliError::Usage("exactly one --l and one --nr value required".into()));
    }
    let qn = qns[0];
    let mode = ModeState::normalized(&cfg.params, &cfg.config, cfg.prescription, qn, branch).map_err(physical)?;
    Ok((qn, mode))
}

#[derive(Serialize)]
struct WaveRow {
    r: f64,
    psi: f64,
    j0: f64,
}

pub fn cmd_wavefunction(cfg: &RunConfig, branch: BranchArg, r_max: Option<f64>, points: usize) -> Result<(), CliError> {
    let r_max = r_max.unwrap_or_else(|| (80.0 / cfg.params.m_omega()).sqrt());
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(CliError::Usage("--r-max must be finite and > 0".into()));
    }
    if points < 2 {
        return Err(CliError::Usage("--grid-points must be >= 2".into()));
    }
    let (_, mode) = single_mode(cfg, branch.into())?;
    let factor = charge_density_factor(&cfg.config, &cfg.params, mode.energy);
    let rows: Vec<WaveRow> = (0..points)
        .map(|i| {
            let r = if i + 1 == points { r_max } else { r_max * i as f64 / (points - 1) as f64 };
            let u = mode.radial.reduced(r);
            WaveRow {
                r,
                psi: mode.radial.eval(r),
                j0: factor * u * u,
            }
        })
        .collect();
    let text = match cfg.format {
        FormatArg::Csv => {
            let mut t = Table::new(["r", "psi", "j0"]);
            for row in &rows {
                t.push(vec![fmt_f64(row.r), fmt_f64(row.psi), fmt_f64(row.j0)]);
            }
            t.to_csv()
        }
        FormatArg::Json => rows_json(&rows),
    };
    emit(&text, cfg.out.as_deref())
}

#[derive(Serialize)]
struct NormRow {
    case: String,
    prescription: &'static str,
    l: i32,
    n_r: u32,
    n: u32,
    branch: &'static str,
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "N")]
    norm: f64,
    charge: f64,
}

pub fn cmd_normalize(cfg: &RunConfig) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for qn in quantum_numbers(cfg) {
        let levels = energy_levels(&cfg.params, &cfg.config, cfg.prescription, qn).map_err(physical)?;
        for branch in [Branch::Plus, Branch::Minus] {
            let Some(energy) = branch.pick(&levels) else { continue };
            let norm = kgosc::normalization_constant(&cfg.params, &cfg.config, qn, energy).map_err(physical)?;
            rows.push(NormRow {
                case: cfg.config.case_label().to_string(),
                prescription: cfg.prescription.label(),
                l: qn.l,
                n_r: qn.n_r,
                n: qn.principal(),
                branch: branch.label(),
                energy,
                norm,
                charge: charge_density_factor(&cfg.config, &cfg.params, energy).signum(),
            });
        }
    }
    let text = match cfg.format {
        FormatArg::Csv => {
            let p = &cfg.params;
            let mut t = Table::new([
                "case", "prescription", "M", "omega", "g", "a", "c", "k", "l", "n_r", "n", "branch", "E", "N", "charge",
            ]);
            for r in &rows {
                t.push(vec![
                    r.case.clone(),
                    r.prescription.to_string(),
                    fmt_f64(p.mass()),
                    fmt_f64(p.omega()),
                    fmt_f64(p.g()),
                    fmt_f64(cfg.config.a()),
                    fmt_f64(cfg.config.c()),
                    fmt_f64(p.k()),
                    r.l.to_string(),
                    r.n_r.to_string(),
                    r.n.to_string(),
                    r.branch.to_string(),
                    fmt_f64(r.energy),
                    fmt_f64(r.norm),
                    fmt_f64(r.charge),
                ]);
            }
            t.to_csv()
        }
        FormatArg::Json => rows_json(&rows),
    };
    emit(&text, cfg.out.as_deref())
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    suite: &'static str,
    passed: bool,
    reports: &'a [VerificationReport],
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Spectrum => "spectrum",
        Suite::Normalization => "normalization",
        Suite::Conservation => "conservation",
        Suite::Prescription => "prescription",
        Suite::All => "all",
    }
}

pub fn run_checks(args: &VerifyArgs) -> Result<Vec<VerificationReport>, CliError> {
    let selected = |s: Suite| args.suite == s || args.suite == Suite::All;
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Usage("--tol must be finite and >= 0".into()));
        }
    }
    let mut reports = Vec::new();
    if selected(Suite::Spectrum) {
        let defaults = SpectrumOptions::default();
        let opts = SpectrumOptions {
            tolerance: args.tol.unwrap_or(defaults.tolerance),
            points: args.grid_points.unwrap_or(defaults.points),
            r_max: args.r_max,
        };
        reports.push(check_spectrum(
            &verify::default_config_grid(),
            Prescription::Corrected,
            verify::DEFAULT_SPECTRUM_MAX_N,
            &opts,
        ));
    }
    if selected(Suite::Normalization) {
        let cases = default_normalization_cases();
        let order = verify::required_quad_order(&cases);
        let report = check_normalization(&cases, order, args.tol.unwrap_or(verify::NORMALIZATION_TOL))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        reports.push(report);
    }
    if selected(Suite::Conservation) {
        for kind in [CaseKind::A, CaseKind::B, CaseKind::C] {
            let (config, params, s1, s2) = default_conservation_setup(kind);
            let report = check_conservation(
                &config,
                &params,
                (s1, s2),
                Spacings::default(),
                args.tol.unwrap_or(verify::CONSERVATION_TOL),
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            reports.push(report);
        }
    }
    if selected(Suite::Prescription) {
        reports.push(check_prescription_shift(
            &verify::full_config_grid(),
            verify::DEFAULT_PRESCRIPTION_MAX_N,
            args.tol.unwrap_or(verify::PRESCRIPTION_TOL),
        ));
    }
    Ok(reports)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let reports = run_checks(args)?;
    let passed = reports.iter().all(|r| r.passed);
    let text = to_json(&VerifyOutput {
        schema_version: SCHEMA_VERSION,
        suite: suite_name(args.suite),
        passed,
        reports: &reports,
    });
    emit(&text, args.out.as_deref())?;
    if passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    G,
    A,
    C,
    K,
    Omega,
}

impl Axis {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "g" => Self::G,
            "a" => Self::A,
            "c" => Self::C,
            "k" => Self::K,
            "omega" => Self::Omega,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Self::G => "g",
            Self::A => "a",
            Self::C => "c",
            Self::K => "k",
            Self::Omega => "omega",
        }
    }
}

fn apply_axis(base: &RunConfig, axis: Axis, value: f64) -> Result<RunConfig, CliError> {
    let mut cfg = base.clone();
    let usage = |e: Error| CliError::Usage(e.to_string());
    match axis {
        Axis::G => cfg.params = cfg.params.with_g(value).map_err(usage)?,
        Axis::K => cfg.params = cfg.params.with_k(value).map_err(usage)?,
        Axis::Omega => cfg.params = cfg.params.with_omega(value).map_err(usage)?,
        Axis::A => {
            cfg.config = match cfg.config {
                BackgroundConfig::TimeLike { .. } => BackgroundConfig::TimeLike { a: value },
                BackgroundConfig::Mixed { c, .. } => BackgroundConfig::Mixed { a: value, c },
                BackgroundConfig::SpaceLike { .. } => {
                    return Err(CliError::Usage("axis a is not available for case B".into()))
                }
            }
        }
        Axis::C => {
            cfg.config = match cfg.config {
                BackgroundConfig::SpaceLike { .. } => BackgroundConfig::SpaceLike { c: value },
                BackgroundConfig::Mixed { a, .. } => BackgroundConfig::Mixed { a, c: value },
                BackgroundConfig::TimeLike { .. } => {
                    return Err(CliError::Usage("axis c is not available for case A".into()))
                }
            }
        }
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct SweepRow {
    value: f64,
    #[serde(flatten)]
    row: SpectrumRow,
}

/// Axis values `start + i (stop - start) / (steps - 1)`, the last pinned to `stop`.
pub fn axis_values(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                stop
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

pub fn cmd_sweep(base: &RunConfig, axis: &str, start: f64, stop: f64, steps: usize) -> Result<(), CliError> {
    let axis = Axis::parse(axis)
        .ok_or_else(|| CliError::Usage(format!("invalid sweep axis `{axis}`; expected g, a, c, k or omega")))?;
    if steps < 2 {
        return Err(CliError::Usage("--steps must be >= 2".into()));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(CliError::Usage("--start and --stop must be finite".into()));
    }
    if stop < start {
        return Err(CliError::Usage("--stop must not be below --start".into()));
    }
    let values = axis_values(start, stop, steps);
    // validate every point before any output
    let configs = values
        .iter()
        .map(|&v| apply_axis(base, axis, v))
        .collect::<Result<Vec<_>, _>>()?;
    // collect keeps axis order regardless of completion order
    let blocks: Vec<Vec<SpectrumRow>> = configs.par_iter().map(spectrum_rows).collect();
    let rows: Vec<SweepRow> = values
        .iter()
        .zip(blocks)
        .flat_map(|(&value, block)| block.into_iter().map(move |row| SweepRow { value, row }))
        .collect();
    let text = match base.format {
        FormatArg::Csv => {
            let header = std::iter::once(format!("sweep_{}", axis.name()))
                .chain(SPECTRUM_COLUMNS.iter().map(|s| s.to_string()));
            let mut t = Table::new(header);
            for r in &rows {
                let mut cells = vec![fmt_f64(r.value)];
                cells.extend(r.row.cells());
                t.push(cells);
            }
            t.to_csv()
        }
        FormatArg::Json => rows_json(&rows),
    };
    emit(&text, base.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_end_exactly() {
        let v = axis_values(0.0, 1.0, 11);
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[10], 1.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn axis_names() {
        for name in ["g", "a", "c", "k", "omega"] {
            assert_eq!(Axis::parse(name).unwrap().name(), name);
        }
        assert!(Axis::parse("M").is_none());
    }
}
