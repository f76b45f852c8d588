//! Verification harness: closed forms against numerical oracles.
//!
//! Every check sweeps its inputs to completion. A sub-case that errors is
//! recorded in the report rather than aborting the sweep.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    charge_density_factor, four_current, normalization_constant, radial_wavefunction, ModeState,
    SpacetimePoint, Superposition,
};
use crate::error::{invalid, Error, Result};
use crate::model::{energy_levels, BackgroundConfig, Branch, ModelParams, Prescription, QuantumNumbers};
use crate::solver::{energies_from_lambda, richardson_lambda, GridSpec, DEFAULT_POINTS};
use crate::specfun::gauss_laguerre;

pub const SPECTRUM_TOL: f64 = 1e-6;
pub const NORMALIZATION_TOL: f64 = 1e-8;
/// Allowed distance of the mesh-halving factor from 4.
pub const CONSERVATION_TOL: f64 = 0.5;
pub const PRESCRIPTION_TOL: f64 = 1e-14;
pub const DEFAULT_SPECTRUM_MAX_N: u32 = 2;
pub const DEFAULT_PRESCRIPTION_MAX_N: u32 = 6;
pub const NORMALIZATION_DRAWS: usize = 20;
pub const NORMALIZATION_SEED: u64 = 0x4b47_4f53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Passed,
    Failed,
    Skipped,
}

/// One compared quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub expected: Option<f64>,
    pub actual: Option<f64>,
    pub error: Option<f64>,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub mode: ErrorMode,
    pub tolerance: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_factor: Option<f64>,
    #[serde(rename = "cases")]
    pub details: Vec<CaseRecord>,
}

impl VerificationReport {
    fn new(check: &str, mode: ErrorMode, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            mode,
            tolerance,
            max_abs_error: 0.0,
            max_rel_error: 0.0,
            passed: true,
            convergence_factor: None,
            details: Vec::new(),
        }
    }

    fn compare(&mut self, label: String, params: BTreeMap<String, f64>, expected: f64, actual: f64) {
        let abs = (actual - expected).abs();
        let rel = if expected == 0.0 { abs } else { abs / expected.abs() };
        let err = match self.mode {
            ErrorMode::Relative => rel,
            ErrorMode::Absolute => abs,
        };
        // NaN never passes
        let ok = err <= self.tolerance;
        self.max_abs_error = self.max_abs_error.max(abs);
        self.max_rel_error = self.max_rel_error.max(rel);
        if !ok {
            self.passed = false;
        }
        self.details.push(CaseRecord {
            label,
            params,
            expected: Some(expected),
            actual: Some(actual),
            error: Some(err),
            status: if ok { CaseStatus::Passed } else { CaseStatus::Failed },
            note: None,
        });
    }

    fn fail(&mut self, label: String, params: BTreeMap<String, f64>, note: String) {
        self.passed = false;
        self.details.push(CaseRecord {
            label,
            params,
            expected: None,
            actual: None,
            error: None,
            status: CaseStatus::Failed,
            note: Some(note),
        });
    }

    fn skip(&mut self, label: String, params: BTreeMap<String, f64>, note: String) {
        self.details.push(CaseRecord {
            label,
            params,
            expected: None,
            actual: None,
            error: None,
            status: CaseStatus::Skipped,
            note: Some(note),
        });
    }

    /// Error compared against the tolerance, per the report's mode.
    pub fn max_error(&self) -> f64 {
        match self.mode {
            ErrorMode::Relative => self.max_rel_error,
            ErrorMode::Absolute => self.max_abs_error,
        }
    }

    pub fn count(&self, status: CaseStatus) -> usize {
        self.details.iter().filter(|c| c.status == status).count()
    }
}

fn param_map(params: &ModelParams, config: &BackgroundConfig) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("M".into(), params.mass());
    m.insert("omega".into(), params.omega());
    m.insert("g".into(), params.g());
    m.insert("k".into(), params.k());
    m.insert("a".into(), config.a());
    m.insert("c".into(), config.c());
    m
}

fn with_qn(mut m: BTreeMap<String, f64>, qn: QuantumNumbers) -> BTreeMap<String, f64> {
    m.insert("l".into(), f64::from(qn.l));
    m.insert("n_r".into(), f64::from(qn.n_r));
    m
}

fn case_label(config: &BackgroundConfig, qn: QuantumNumbers, branch: Branch) -> String {
    format!("{} l={} n_r={} {}", config.case_label(), qn.l, qn.n_r, branch.label())
}

/// One configuration per case with `M = omega = 1` and `g = 0.5`.
pub fn default_config_grid() -> Vec<(ModelParams, BackgroundConfig)> {
    vec![
        (ModelParams::new(1.0, 1.0, 0.5, 0.5).unwrap(), BackgroundConfig::TimeLike { a: 1.0 }),
        (ModelParams::new(1.0, 1.0, 0.5, 1.0).unwrap(), BackgroundConfig::SpaceLike { c: 1.0 }),
        (ModelParams::new(1.0, 1.0, 0.5, 1.0).unwrap(), BackgroundConfig::Mixed { a: 1.0, c: 1.0 }),
    ]
}

/// Full product `g in {-0.5, 0, 0.5, 1}`, `a, c in {0, 1}`, `k in {0, 1}`
/// over the three configurations, `M = omega = 1`.
pub fn full_config_grid() -> Vec<(ModelParams, BackgroundConfig)> {
    let mut out = Vec::new();
    for g in [-0.5, 0.0, 0.5, 1.0] {
        for k in [0.0, 1.0] {
            let p = ModelParams::new(1.0, 1.0, g, k).unwrap();
            for a in [0.0, 1.0] {
                out.push((p, BackgroundConfig::TimeLike { a }));
            }
            for c in [0.0, 1.0] {
                out.push((p, BackgroundConfig::SpaceLike { c }));
            }
            for a in [0.0, 1.0] {
                for c in [0.0, 1.0] {
                    out.push((p, BackgroundConfig::Mixed { a, c }));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub tolerance: f64,
    pub points: usize,
    /// Defaults to the tail bound of each parameter set.
    pub r_max: Option<f64>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            tolerance: SPECTRUM_TOL,
            points: DEFAULT_POINTS,
            r_max: None,
        }
    }
}

/// (M omega bits, |l|, r_max bits, points)
type LambdaKey = (u64, u32, u64, usize);

/// Closed-form energies against energies obtained from Richardson-extrapolated
/// finite-difference eigenvalues, for every `(l, n_r)` with `n <= max_n`.
pub fn check_spectrum(
    grid: &[(ModelParams, BackgroundConfig)],
    presc: Prescription,
    max_n: u32,
    opts: &SpectrumOptions,
) -> VerificationReport {
    let mut report = VerificationReport::new("spectrum", ErrorMode::Relative, opts.tolerance);
    // the radial problem depends only on (M omega, |l|) and the grid
    let mut cache: HashMap<LambdaKey, std::result::Result<Vec<f64>, Error>> = HashMap::new();
    let qns = QuantumNumbers::up_to_principal(max_n);
    for (params, config) in grid {
        let spec = match opts.r_max {
            Some(r) => GridSpec::new(r, opts.points),
            None => Ok(GridSpec::with_points(params, opts.points)),
        };
        let spec = match spec {
            Ok(s) => s,
            Err(e) => {
                report.fail(config.case_label().to_string(), param_map(params, config), e.to_string());
                continue;
            }
        };
        for &qn in &qns {
            let base = with_qn(param_map(params, config), qn);
            let al = qn.abs_l();
            let key = (params.m_omega().to_bits(), al, spec.r_max().to_bits(), spec.points());
            let lambdas = cache.entry(key).or_insert_with(|| {
                let count = ((max_n - al) / 2 + 1) as usize;
                richardson_lambda(params, al as i32, count, spec).map(|s| s.lambdas)
            });
            let lambda = match lambdas {
                Ok(ls) => ls[qn.n_r as usize],
                Err(e) => {
                    report.fail(case_label(config, qn, Branch::Plus), base, e.to_string());
                    continue;
                }
            };
            let closed = energy_levels(params, config, presc, qn);
            let numeric = energies_from_lambda(lambda, params, config, presc);
            match (closed, numeric) {
                (Ok(c), Ok(n)) => {
                    for branch in [Branch::Plus, Branch::Minus] {
                        match (branch.pick(&c), branch.pick(&n)) {
                            (Some(x), Some(y)) => {
                                report.compare(case_label(config, qn, branch), base.clone(), x, y)
                            }
                            (None, None) => {}
                            _ => report.fail(
                                case_label(config, qn, branch),
                                base.clone(),
                                "branch present on one side only".into(),
                            ),
                        }
                    }
                }
                (Err(a), Err(b)) if std::mem::discriminant(&a) == std::mem::discriminant(&b) => {
                    report.skip(case_label(config, qn, Branch::Plus), base, a.to_string());
                }
                (c, n) => report.fail(
                    case_label(config, qn, Branch::Plus),
                    base,
                    format!("closed form {:?} vs numeric {:?}", c.err(), n.err()),
                ),
            }
        }
    }
    report
}

/// A mode whose charge integral is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationCase {
    pub params: ModelParams,
    pub config: BackgroundConfig,
    pub presc: Prescription,
    pub qn: QuantumNumbers,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    A,
    B,
    C,
}

fn draw_config(kind: CaseKind, rng: &mut ChaCha8Rng) -> BackgroundConfig {
    match kind {
        CaseKind::A => BackgroundConfig::TimeLike { a: rng.gen_range(-1.5..1.5) },
        CaseKind::B => BackgroundConfig::SpaceLike { c: rng.gen_range(-1.5..1.5) },
        CaseKind::C => BackgroundConfig::Mixed {
            a: rng.gen_range(-1.5..1.5),
            c: rng.gen_range(-1.5..1.5),
        },
    }
}

/// `count` seeded draws with `n <= 8`, keeping only modes that have a real
/// energy and a non-vanishing charge density.
pub fn random_normalization_cases(kind: CaseKind, count: usize, seed: u64) -> Vec<NormalizationCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let params = match ModelParams::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(-0.5..1.0),
            rng.gen_range(-2.0..2.0),
        ) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let config = draw_config(kind, &mut rng);
        let l: i32 = rng.gen_range(-4..=4);
        let n_r = rng.gen_range(0..=(8 - l.unsigned_abs()) / 2);
        let presc = if rng.gen_bool(0.5) { Prescription::Corrected } else { Prescription::Original };
        let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let case = NormalizationCase {
            params,
            config,
            presc,
            qn: QuantumNumbers::new(l, n_r),
            branch,
        };
        if ModeState::normalized(&params, &config, presc, case.qn, branch).is_ok() {
            out.push(case);
        }
    }
    out
}

/// 20 random draws per configuration, plus fixed cases including one with
/// vanishing charge density.
pub fn default_normalization_cases() -> Vec<NormalizationCase> {
    let mut cases = vec![
        NormalizationCase {
            params: ModelParams::new(1.0, 1.0, 1.0, 0.0).unwrap(),
            config: BackgroundConfig::TimeLike { a: 1.0 },
            presc: Prescription::Corrected,
            qn: QuantumNumbers::new(0, 0),
            branch: Branch::Plus,
        },
        NormalizationCase {
            params: ModelParams::new(1.0, 1.0, 0.5, 1.0).unwrap(),
            config: BackgroundConfig::SpaceLike { c: 1.0 },
            presc: Prescription::Corrected,
            qn: QuantumNumbers::new(1, 1),
            branch: Branch::Plus,
        },
        // double root E = acgk / (1 + a^2 g) = 1
        NormalizationCase {
            params: ModelParams::new(1.0, 1.0, 1.0, 1.0).unwrap(),
            config: BackgroundConfig::Mixed { a: 1.0, c: 2.0 },
            presc: Prescription::Corrected,
            qn: QuantumNumbers::new(0, 0),
            branch: Branch::Plus,
        },
    ];
    for (i, kind) in [CaseKind::A, CaseKind::B, CaseKind::C].into_iter().enumerate() {
        cases.extend(random_normalization_cases(kind, NORMALIZATION_DRAWS, NORMALIZATION_SEED + i as u64));
    }
    cases
}

/// Smallest Gauss-Laguerre order that integrates every case exactly.
pub fn required_quad_order(cases: &[NormalizationCase]) -> usize {
    cases.iter().map(|c| c.qn.n_r as usize + 2).max().unwrap_or(2)
}

/// `int_0^inf J^0 r dr` (per unit angle and length) by Gauss-Laguerre after
/// `x = M omega r^2`, expected to be `+1` for positive and `-1` for negative
/// charge.
pub fn charge_integral(case: &NormalizationCase, quad_order: usize) -> Result<(f64, f64)> {
    let NormalizationCase {
        params,
        config,
        presc,
        qn,
        branch,
    } = *case;
    let levels = energy_levels(&params, &config, presc, qn)?;
    let energy = branch
        .pick(&levels)
        .ok_or_else(|| invalid("branch", "absent for a degenerate dispersion relation"))?;
    let norm = normalization_constant(&params, &config, qn, energy)?;
    let sol = radial_wavefunction(&params, qn, norm)?;
    let factor = charge_density_factor(&config, &params, energy);
    let alpha = f64::from(qn.abs_l());
    let rule = gauss_laguerre(quad_order, alpha)?;
    let mw = params.m_omega();
    let integral = rule.integrate(|x| {
        let r = (x / mw).sqrt();
        let psi = sol.eval(r);
        factor * psi * psi / (2.0 * mw * r) / (x.powf(alpha) * (-x).exp())
    });
    Ok((factor.signum(), integral))
}

pub fn check_normalization(
    cases: &[NormalizationCase],
    quad_order: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let needed = required_quad_order(cases);
    if quad_order < needed {
        return Err(invalid("quad_order", format!("{quad_order} < max n_r + 2 = {needed}")));
    }
    let mut report = VerificationReport::new("normalization", ErrorMode::Absolute, tolerance);
    for case in cases {
        let label = case_label(&case.config, case.qn, case.branch);
        let params = with_qn(param_map(&case.params, &case.config), case.qn);
        match charge_integral(case, quad_order) {
            Ok((expected, actual)) => report.compare(label, params, expected, actual),
            Err(e @ (Error::ZeroDensity { .. } | Error::ComplexEnergy { .. })) => {
                report.skip(label, params, e.to_string())
            }
            Err(e) => report.fail(label, params, e.to_string()),
        }
    }
    Ok(report)
}

/// Finite-difference steps in `t`, `r` and `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spacings {
    pub t: f64,
    pub r: f64,
    pub z: f64,
}

impl Spacings {
    pub fn halved(&self) -> Self {
        Self {
            t: 0.5 * self.t,
            r: 0.5 * self.r,
            z: 0.5 * self.z,
        }
    }
}

impl Default for Spacings {
    fn default() -> Self {
        Self { t: 0.02, r: 0.02, z: 0.02 }
    }
}

/// Points where the discrete divergence is sampled.
pub fn sample_points() -> Vec<SpacetimePoint> {
    let mut pts = Vec::new();
    for t in [0.3, 1.1] {
        for r in [0.5, 1.0, 1.7] {
            for z in [0.2, 0.9] {
                pts.push(SpacetimePoint { t, r, phi: 0.4, z });
            }
        }
    }
    pts
}

/// Largest `|d_t J^0 + (1/r) d_r(r J^r) + d_z J^z|` over `points`, by central
/// differences. With a shared `l` the `phi` term vanishes identically.
pub fn divergence_residual(
    state: &Superposition,
    config: &BackgroundConfig,
    params: &ModelParams,
    h: Spacings,
    points: &[SpacetimePoint],
) -> f64 {
    let j = |p: SpacetimePoint| four_current(state, config, params, p);
    points
        .iter()
        .map(|&p| {
            let dt = (j(SpacetimePoint { t: p.t + h.t, ..p }).j0 - j(SpacetimePoint { t: p.t - h.t, ..p }).j0)
                / (2.0 * h.t);
            let (r_out, r_in) = (p.r + h.r, p.r - h.r);
            let dr = (r_out * j(SpacetimePoint { r: r_out, ..p }).jr - r_in * j(SpacetimePoint { r: r_in, ..p }).jr)
                / (2.0 * h.r * p.r);
            let dz = (j(SpacetimePoint { z: p.z + h.z, ..p }).jz - j(SpacetimePoint { z: p.z - h.z, ..p }).jz)
                / (2.0 * h.z);
            (dt + dr + dz).abs()
        })
        .fold(0.0, f64::max)
}

/// Two normalized modes sharing `l` with different `n_r` and `k`.
pub fn default_conservation_setup(kind: CaseKind) -> (BackgroundConfig, ModelParams, ModeState, ModeState) {
    let params = ModelParams::new(1.0, 1.0, 0.5, 0.3).unwrap();
    let config = match kind {
        CaseKind::A => BackgroundConfig::TimeLike { a: 0.8 },
        CaseKind::B => BackgroundConfig::SpaceLike { c: 0.7 },
        CaseKind::C => BackgroundConfig::Mixed { a: 0.8, c: 0.7 },
    };
    let first = ModeState::normalized(&params, &config, Prescription::Corrected, QuantumNumbers::new(1, 0), Branch::Plus)
        .expect("valid default mode");
    let other = params.with_k(-0.6).unwrap();
    let second = ModeState::normalized(&other, &config, Prescription::Corrected, QuantumNumbers::new(1, 1), Branch::Plus)
        .expect("valid default mode");
    (config, params, first, second)
}

/// The discrete divergence of a two-mode superposition must shrink by a factor
/// `4 +- tolerance` when all spacings are halved.
pub fn check_conservation(
    config: &BackgroundConfig,
    params: &ModelParams,
    states: (ModeState, ModeState),
    h: Spacings,
    tolerance: f64,
) -> Result<VerificationReport> {
    if states.0.l != states.1.l {
        return Err(invalid("states", "both modes must share l"));
    }
    let points = sample_points();
    let state = Superposition::pair(states.0, states.1);
    let coarse = divergence_residual(&state, config, params, h, &points);
    let fine = divergence_residual(&state, config, params, h.halved(), &points);
    let factor = coarse / fine;

    let mut report = VerificationReport::new("conservation", ErrorMode::Absolute, tolerance);
    let mut m = param_map(params, config);
    m.insert("l".into(), f64::from(states.0.l));
    m.insert("E1".into(), states.0.energy);
    m.insert("E2".into(), states.1.energy);
    m.insert("k1".into(), states.0.k);
    m.insert("k2".into(), states.1.k);
    m.insert("residual_h".into(), coarse);
    m.insert("residual_h_half".into(), fine);
    report.compare(format!("{} two-mode", config.case_label()), m, 4.0, factor);
    report.convergence_factor = Some(factor);
    Ok(report)
}

/// `E_Original(n) = E_Corrected(n + 2)` for every branch, via `n_r + 1`.
pub fn check_prescription_shift(
    grid: &[(ModelParams, BackgroundConfig)],
    max_n: u32,
    tolerance: f64,
) -> VerificationReport {
    let mut report = VerificationReport::new("prescription", ErrorMode::Relative, tolerance);
    for (params, config) in grid {
        for qn in QuantumNumbers::up_to_principal(max_n) {
            let shifted = QuantumNumbers::new(qn.l, qn.n_r + 1);
            let base = with_qn(param_map(params, config), qn);
            let orig = energy_levels(params, config, Prescription::Original, qn);
            let corr = energy_levels(params, config, Prescription::Corrected, shifted);
            match (orig, corr) {
                (Ok(o), Ok(c)) => {
                    for branch in [Branch::Plus, Branch::Minus] {
                        if let (Some(x), Some(y)) = (branch.pick(&c), branch.pick(&o)) {
                            report.compare(case_label(config, qn, branch), base.clone(), x, y);
                        }
                    }
                }
                (Err(a), Err(b)) if a == b => report.skip(case_label(config, qn, Branch::Plus), base, a.to_string()),
                (o, c) => report.fail(
                    case_label(config, qn, Branch::Plus),
                    base,
                    format!("original {:?} vs corrected {:?}", o.err(), c.err()),
                ),
            }
        }
    }
    report
}
