//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

mod common;

use std::time::{Duration, Instant};

use common::{golden_path, run, GOLDENS};
use kgosc::specfun::{gauss_laguerre, laguerre, laguerre_pair, ln_gamma};
use kgosc::verify::{
    check_conservation, check_normalization, check_prescription_shift, check_spectrum, default_conservation_setup,
    full_config_grid, random_normalization_cases, required_quad_order, CaseKind, SpectrumOptions, Spacings,
    NORMALIZATION_DRAWS, NORMALIZATION_SEED,
};
use kgosc::{energy_levels, BackgroundConfig, ModelParams, Prescription, QuantumNumbers};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECTRUM_TOL: f64 = 1e-6;
const SPECTRUM_MAX_N: u32 = 6;
const SPECTRUM_BUDGET: Duration = Duration::from_secs(60);
const NORMALIZATION_TOL: f64 = 1e-8;
const NORMALIZATION_BUDGET: Duration = Duration::from_secs(5);
const CONSERVATION_RANGE: (f64, f64) = (3.5, 4.5);
const CONSERVATION_BUDGET: Duration = Duration::from_secs(10);
const SHIFT_TOL: f64 = 1e-14;
const SHIFT_MAX_N: u32 = 6;
const COLLAPSE_TOL: f64 = 1e-14;
const RECURRENCE_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-8;
const GAMMA_TOL: f64 = 1e-12;

struct Outcome {
    passed: bool,
    summary: String,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn spectrum() -> Outcome {
    let start = Instant::now();
    let opts = SpectrumOptions {
        tolerance: SPECTRUM_TOL,
        ..Default::default()
    };
    let r = check_spectrum(&full_config_grid(), Prescription::Corrected, SPECTRUM_MAX_N, &opts);
    let elapsed = start.elapsed();
    Outcome {
        passed: r.passed && elapsed < SPECTRUM_BUDGET,
        summary: format!(
            "{} comparisons, max rel error {:.3e} (tol {SPECTRUM_TOL:e}), {:.2?} (budget {SPECTRUM_BUDGET:?})",
            r.details.len(),
            r.max_rel_error,
            elapsed
        ),
    }
}

fn normalization() -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut worst = 0.0f64;
    let mut count = 0;
    for (i, kind) in [CaseKind::A, CaseKind::B, CaseKind::C].into_iter().enumerate() {
        let cases = random_normalization_cases(kind, NORMALIZATION_DRAWS, NORMALIZATION_SEED + i as u64);
        match check_normalization(&cases, required_quad_order(&cases), NORMALIZATION_TOL) {
            Ok(r) => {
                passed &= r.passed && r.details.len() == NORMALIZATION_DRAWS;
                worst = worst.max(r.max_abs_error);
                count += r.details.len();
            }
            Err(_) => passed = false,
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: passed && elapsed < NORMALIZATION_BUDGET,
        summary: format!(
            "{count} modes, max |Q - (+-1)| {worst:.3e} (tol {NORMALIZATION_TOL:e}), {elapsed:.2?} (budget {NORMALIZATION_BUDGET:?})"
        ),
    }
}

fn conservation() -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut factors = Vec::new();
    for kind in [CaseKind::A, CaseKind::B, CaseKind::C] {
        let (config, params, s1, s2) = default_conservation_setup(kind);
        let half_width = 0.5 * (CONSERVATION_RANGE.1 - CONSERVATION_RANGE.0);
        match check_conservation(&config, &params, (s1, s2), Spacings::default(), half_width) {
            Ok(r) => {
                let f = r.convergence_factor.unwrap_or(f64::NAN);
                passed &= r.passed && (CONSERVATION_RANGE.0..=CONSERVATION_RANGE.1).contains(&f);
                factors.push(format!("{}={f:.4}", config.case_label()));
            }
            Err(_) => passed = false,
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: passed && elapsed < CONSERVATION_BUDGET,
        summary: format!(
            "halving factors {} (range {:?}), {elapsed:.2?} (budget {CONSERVATION_BUDGET:?})",
            factors.join(" "),
            CONSERVATION_RANGE
        ),
    }
}

fn prescription_shift() -> Outcome {
    let r = check_prescription_shift(&full_config_grid(), SHIFT_MAX_N, SHIFT_TOL);
    Outcome {
        passed: r.passed && r.count(kgosc::verify::CaseStatus::Passed) > 0,
        summary: format!(
            "{} comparisons, max rel error {:.3e} (tol {SHIFT_TOL:e})",
            r.details.len(),
            r.max_rel_error
        ),
    }
}

fn limit_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for _ in 0..500 {
        let params = ModelParams::new(
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(-0.5..1.5),
            rng.gen_range(-2.0..2.0),
        )
        .unwrap();
        let (a, c) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        for presc in [Prescription::Corrected, Prescription::Original] {
            for qn in QuantumNumbers::up_to_principal(6) {
                let pairs = [
                    (BackgroundConfig::TimeLike { a }, BackgroundConfig::Mixed { a, c: 0.0 }),
                    (BackgroundConfig::SpaceLike { c }, BackgroundConfig::Mixed { a: 0.0, c }),
                ];
                for (x, y) in pairs {
                    match (energy_levels(&params, &x, presc, qn), energy_levels(&params, &y, presc, qn)) {
                        (Ok(lx), Ok(ly)) => {
                            for (ex, ey) in lx.roots().zip(ly.roots()) {
                                worst = worst.max(rel(ex, ey));
                                checked += 1;
                            }
                        }
                        (Err(ex), Err(ey)) if ex == ey => {}
                        _ => worst = f64::INFINITY,
                    }
                }
            }
        }
        // g = 0 collapses all three cases onto E^2 = M^2 + k^2 + 2 M omega n
        let free = params.with_g(0.0).unwrap();
        for qn in QuantumNumbers::up_to_principal(6) {
            let (m, w, k) = (free.mass(), free.omega(), free.k());
            let e2 = m * m + k * k + 2.0 * m * w * f64::from(qn.principal());
            for cfg in [
                BackgroundConfig::TimeLike { a },
                BackgroundConfig::SpaceLike { c },
                BackgroundConfig::Mixed { a, c },
            ] {
                match energy_levels(&free, &cfg, Prescription::Corrected, qn) {
                    Ok(lv) => {
                        for e in lv.roots() {
                            worst = worst.max(rel(e * e, e2));
                            checked += 1;
                        }
                    }
                    Err(_) => worst = f64::INFINITY,
                }
            }
        }
    }
    Outcome {
        passed: worst <= COLLAPSE_TOL,
        summary: format!("{checked} comparisons, max rel error {worst:.3e} (tol {COLLAPSE_TOL:e})"),
    }
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut recurrence = 0.0f64;
    for _ in 0..5000 {
        let n: u32 = rng.gen_range(1..=30);
        let alpha: f64 = rng.gen_range(-0.9..=10.0);
        let x: f64 = rng.gen_range(0.0..=50.0);
        let (ln, lnm1) = laguerre_pair(n, alpha, x);
        let nf = f64::from(n);
        let terms = [(nf + 1.0) * laguerre(n + 1, alpha, x), (2.0 * nf + 1.0 + alpha - x) * ln, (nf + alpha) * lnm1];
        let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
        recurrence = recurrence.max((terms[0] - terms[1] + terms[2]).abs() / scale);
    }

    let mut orthogonality = 0.0f64;
    for &alpha in &[-0.5, 0.0, 1.0, 2.5, 6.0] {
        let max_deg = 10u32;
        let rule = gauss_laguerre(2 * max_deg as usize + 1, alpha).unwrap();
        for n in 0..=max_deg {
            let norm = (ln_gamma(f64::from(n) + alpha + 1.0).unwrap() - ln_gamma(f64::from(n) + 1.0).unwrap()).exp();
            for m in 0..=n {
                let q = rule.integrate(|x| laguerre(n, alpha, x) * laguerre(m, alpha, x));
                let expected = if n == m { norm } else { 0.0 };
                orthogonality = orthogonality.max((q - expected).abs() / norm);
            }
        }
    }

    let pi_sqrt = std::f64::consts::PI.sqrt();
    let gamma = [
        rel(ln_gamma(1.0).unwrap().exp(), 1.0),
        rel(ln_gamma(5.0).unwrap().exp(), 24.0),
        rel(ln_gamma(0.5).unwrap().exp(), pi_sqrt),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);

    Outcome {
        passed: recurrence <= RECURRENCE_TOL && orthogonality <= ORTHOGONALITY_TOL && gamma <= GAMMA_TOL,
        summary: format!(
            "recurrence {recurrence:.3e} (tol {RECURRENCE_TOL:e}), orthogonality {orthogonality:.3e} (tol {ORTHOGONALITY_TOL:e}), gamma {gamma:.3e} (tol {GAMMA_TOL:e})"
        ),
    }
}

fn cli_goldens() -> Outcome {
    let mut mismatches = Vec::new();
    for (name, args) in GOLDENS {
        let expected = std::fs::read(golden_path(name)).unwrap_or_default();
        let first = run(args);
        let second = run(args);
        if first.stdout != expected || first.stdout != second.stdout || first.status.code() != Some(0) {
            mismatches.push(*name);
        }
    }
    let dir = std::env::temp_dir().join(format!("kgosc-acceptance-{}", std::process::id()));
    let missing = dir.join("no/such/dir/out.csv");
    let exits = [
        (0, run(&["verify", "all"]).status.code()),
        (1, run(&["verify", "spectrum", "--tol", "1e-12"]).status.code()),
        (2, run(&["spectrum", "--bogus"]).status.code()),
        (3, run(&["spectrum", "--out", missing.to_str().unwrap()]).status.code()),
        (4, run(&["wavefunction", "--case", "C", "--g", "1", "--a", "1", "--c", "2", "--k", "1"]).status.code()),
    ];
    let bad_exits: Vec<String> = exits
        .iter()
        .filter(|(want, got)| Some(*want) != *got)
        .map(|(want, got)| format!("want {want} got {got:?}"))
        .collect();
    Outcome {
        passed: mismatches.is_empty() && bad_exits.is_empty(),
        summary: format!(
            "{} goldens byte-identical, {} mismatched {:?}; exit codes 0-4 {}",
            GOLDENS.len() - mismatches.len(),
            mismatches.len(),
            mismatches,
            if bad_exits.is_empty() { "all exercised".to_string() } else { bad_exits.join(", ") }
        ),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("spectrum oracle agreement", spectrum),
        ("normalization by quadrature", normalization),
        ("current conservation order", conservation),
        ("prescription shift", prescription_shift),
        ("limit collapses", limit_collapse),
        ("special functions", special_functions),
        ("cli goldens and exit codes", cli_goldens),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "[{}] {}. {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.summary
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
