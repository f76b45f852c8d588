//! Closed-form eigenfunctions, normalization constants, charge density and
//! the conserved four-current.
//!
//! The charge density of a single mode is `J^0 = F * |Psi|^2` with a
//! configuration-dependent factor `F`. The normalization integrates
//! `J^0 * r` over `r` only, with the angular and longitudinal factors
//! absorbed into the plane-wave normalization, so that
//! `int_0^inf F * psi(r)^2 dr = sign(F)`.
//!
//! For the mixed background the `d_z` part of the density carries the
//! coefficient `acg`, which yields the `(1 + a^2 g)E - acgk` denominator of
//! the closed-form constant.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::{energy_levels, BackgroundConfig, Branch, ModelParams, Prescription, QuantumNumbers};
use crate::specfun::{laguerre, laguerre_derivative, ln_gamma};

/// `psi(r) = N r^(|l|+1/2) exp(-M omega r^2/2) L_{n_r}^(|l|)(M omega r^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialSolution {
    norm: f64,
    l: i32,
    n_r: u32,
    m_omega: f64,
}

impl RadialSolution {
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn m_omega(&self) -> f64 {
        self.m_omega
    }

    fn alpha(&self) -> f64 {
        f64::from(self.l.unsigned_abs())
    }

    /// `psi(r)`.
    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.reduced(r) * r.sqrt()
    }

    /// `u(r) = psi(r) / sqrt(r)`, the transverse profile of `Psi`.
    pub fn reduced(&self, r: f64) -> f64 {
        let x = self.m_omega * r * r;
        self.norm * r.powi(self.l.abs()) * (-0.5 * x).exp() * laguerre(self.n_r, self.alpha(), x)
    }

    /// `du/dr`, using `d/dx L_n^(a) = -L_{n-1}^(a+1)`.
    pub fn reduced_derivative(&self, r: f64) -> f64 {
        let x = self.m_omega * r * r;
        let al = self.l.abs();
        let lag = laguerre(self.n_r, self.alpha(), x);
        let dlag = laguerre_derivative(self.n_r, self.alpha(), x);
        let envelope = (-0.5 * x).exp();
        let power = r.powi(al);
        let d_power = if al == 0 { 0.0 } else { f64::from(al) * r.powi(al - 1) };
        // d/dr [r^|l| e^{-x/2} L(x)], dx/dr = 2 M omega r
        let d_rest = -self.m_omega * r * lag + 2.0 * self.m_omega * r * dlag;
        self.norm * envelope * (d_power * lag + power * d_rest)
    }
}

pub fn radial_wavefunction(params: &ModelParams, qn: QuantumNumbers, norm: f64) -> Result<RadialSolution> {
    if !(norm.is_finite() && norm > 0.0) {
        return Err(invalid("norm", format!("must be finite and > 0, got {norm}")));
    }
    Ok(RadialSolution {
        norm,
        l: qn.l,
        n_r: qn.n_r,
        m_omega: params.m_omega(),
    })
}

/// `F` in `J^0 = F |Psi|^2`: `(1 + a^2 g)E/M` (timelike), `E/M` (spacelike),
/// `((1 + a^2 g)E - acgk)/M` (mixed).
pub fn charge_density_factor(config: &BackgroundConfig, params: &ModelParams, energy: f64) -> f64 {
    let (a, c, g) = (config.a(), config.c(), params.g());
    ((1.0 + a * a * g) * energy - a * c * g * params.k()) / params.mass()
}

fn zero_density_condition(config: &BackgroundConfig) -> &'static str {
    match config {
        BackgroundConfig::TimeLike { .. } => "(1 + a^2 g)|E|",
        BackgroundConfig::SpaceLike { .. } => "|E|",
        BackgroundConfig::Mixed { .. } => "|(1 + a^2 g)E - acgk|",
    }
}

/// Closed-form `N_n`, computed as `exp(ln N)`.
///
/// The denominator is `|M F|`, i.e. `(1 + a^2 g)|E|`, `|E|` or
/// `|(1 + a^2 g)E - acgk|` for the three configurations.
pub fn normalization_constant(
    params: &ModelParams,
    config: &BackgroundConfig,
    qn: QuantumNumbers,
    energy: f64,
) -> Result<f64> {
    let (a, c, g) = (config.a(), config.c(), params.g());
    let time_part = (1.0 + a * a * g) * energy;
    let cross = a * c * g * params.k();
    let density = (time_part - cross).abs();
    let scale = time_part.abs().max(cross.abs());
    if !density.is_finite() || density <= 8.0 * f64::EPSILON * scale {
        return Err(Error::ZeroDensity {
            condition: zero_density_condition(config),
        });
    }
    let al = f64::from(qn.abs_l());
    let nr = f64::from(qn.n_r);
    let ln_n2 = std::f64::consts::LN_2 + (al + 2.0) * params.mass().ln() + (al + 1.0) * params.omega().ln()
        + ln_gamma(nr + 1.0)?
        - density.ln()
        - ln_gamma(al + nr + 1.0)?;
    Ok((0.5 * ln_n2).exp())
}

/// A single stationary mode `Psi = u(r) exp(-iEt + il phi + ikz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeState {
    pub energy: f64,
    pub k: f64,
    pub l: i32,
    pub radial: RadialSolution,
}

impl ModeState {
    /// The normalized mode on the given branch, with `k` taken from `params`.
    pub fn normalized(
        params: &ModelParams,
        config: &BackgroundConfig,
        presc: Prescription,
        qn: QuantumNumbers,
        branch: Branch,
    ) -> Result<Self> {
        let levels = energy_levels(params, config, presc, qn)?;
        let energy = branch.pick(&levels).ok_or_else(|| {
            invalid("branch", "minus branch is absent for a degenerate dispersion relation")
        })?;
        let norm = normalization_constant(params, config, qn, energy)?;
        Ok(Self {
            energy,
            k: params.k(),
            l: qn.l,
            radial: radial_wavefunction(params, qn, norm)?,
        })
    }

    fn phase(&self, t: f64, phi: f64, z: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.energy * t + f64::from(self.l) * phi + self.k * z)
    }
}

/// One mode or a two-mode superposition with complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    terms: Vec<(Complex64, ModeState)>,
}

impl Superposition {
    pub fn single(mode: ModeState) -> Self {
        Self {
            terms: vec![(Complex64::new(1.0, 0.0), mode)],
        }
    }

    pub fn pair(first: ModeState, second: ModeState) -> Self {
        Self::weighted_pair(Complex64::new(1.0, 0.0), first, Complex64::new(1.0, 0.0), second)
    }

    pub fn weighted_pair(w1: Complex64, first: ModeState, w2: Complex64, second: ModeState) -> Self {
        Self {
            terms: vec![(w1, first), (w2, second)],
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeState> {
        self.terms.iter().map(|(_, m)| m)
    }
}

/// Cylindrical spacetime point `(t, r, phi, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

/// Physical cylindrical components of `J^mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurrentSample {
    pub j0: f64,
    pub jr: f64,
    pub jphi: f64,
    pub jz: f64,
}

/// `J^mu = -(1/M) Im[Psi* (d^mu Psi + g v^mu v^nu d_nu Psi)]` with
/// `d^mu = (d_t, -grad)`, evaluated from analytic derivatives. `M` and `g`
/// come from `params`; each mode carries its own `k`.
pub fn four_current(
    state: &Superposition,
    config: &BackgroundConfig,
    params: &ModelParams,
    point: SpacetimePoint,
) -> CurrentSample {
    let SpacetimePoint { t, r, phi, z } = point;
    let zero = Complex64::new(0.0, 0.0);
    let (mut psi, mut d_t, mut d_r, mut d_phi, mut d_z) = (zero, zero, zero, zero, zero);
    for (w, mode) in &state.terms {
        let base = w * mode.phase(t, phi, z);
        let u = base * mode.radial.reduced(r);
        psi += u;
        d_t += u * Complex64::new(0.0, -mode.energy);
        d_phi += u * Complex64::new(0.0, f64::from(mode.l));
        d_z += u * Complex64::new(0.0, mode.k);
        d_r += base * mode.radial.reduced_derivative(r);
    }
    let (a, c, g) = (config.a(), config.c(), params.g());
    let v_dot_d = d_t * a + d_z * c;
    let conj = psi.conj();
    let scale = -1.0 / params.mass();
    CurrentSample {
        j0: scale * (conj * (d_t + v_dot_d * (g * a))).im,
        jr: scale * (conj * (-d_r)).im,
        jphi: scale * (conj * (-d_phi / r)).im,
        jz: scale * (conj * (-d_z + v_dot_d * (g * c))).im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gauss_laguerre;
    use approx::assert_relative_eq;

    fn params(m: f64, w: f64, g: f64, k: f64) -> ModelParams {
        ModelParams::new(m, w, g, k).unwrap()
    }

    // int_0^inf F psi^2 dr through the substitution x = M omega r^2
    fn charge_integral(sol: &RadialSolution, factor: f64) -> f64 {
        let alpha = sol.alpha();
        let rule = gauss_laguerre(sol.n_r() as usize + 2, alpha).unwrap();
        let mw = sol.m_omega();
        rule.integrate(|x| {
            let r = (x / mw).sqrt();
            let psi = sol.eval(r);
            // dr = dx / (2 M omega r); divide out the rule's weight
            factor * psi * psi / (2.0 * mw * r) / (x.powf(alpha) * (-x).exp())
        })
    }

    #[test]
    fn ground_state_value() {
        let sol = radial_wavefunction(&params(1.0, 1.0, 0.0, 0.0), QuantumNumbers::new(0, 0), 2f64.sqrt()).unwrap();
        assert_relative_eq!(sol.eval(1.0), 2f64.sqrt() * (-0.5f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(sol.eval(1.0), 0.8577639, epsilon = 1e-7);
        assert_eq!(sol.eval(0.0), 0.0);
    }

    #[test]
    fn first_radial_excitation_has_node_at_one() {
        let sol = radial_wavefunction(&params(1.0, 1.0, 0.0, 0.0), QuantumNumbers::new(0, 1), 1.0).unwrap();
        assert!(sol.eval(1.0).abs() < 1e-15);
        assert!(sol.eval(0.9) > 0.0);
        assert!(sol.eval(1.1) < 0.0);
    }

    #[test]
    fn node_count_equals_n_r() {
        let p = params(1.3, 0.8, 0.0, 0.0);
        for l in [-2, 0, 1, 3] {
            for n_r in 0..6 {
                let sol = radial_wavefunction(&p, QuantumNumbers::new(l, n_r), 1.0).unwrap();
                let samples: Vec<f64> = (1..20_000).map(|i| sol.eval(i as f64 * 1e-3)).collect();
                let zeros = samples.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
                assert_eq!(zeros, n_r as usize, "l {l} n_r {n_r}");
            }
        }
    }

    #[test]
    fn rejects_non_positive_norm() {
        assert!(radial_wavefunction(&params(1.0, 1.0, 0.0, 0.0), QuantumNumbers::new(0, 0), 0.0).is_err());
    }

    #[test]
    fn reduced_derivative_matches_finite_difference() {
        let sol = radial_wavefunction(&params(1.2, 0.9, 0.0, 0.0), QuantumNumbers::new(2, 3), 0.7).unwrap();
        let h = 1e-6;
        for &r in &[0.3, 0.8, 1.5, 2.4] {
            let fd = (sol.reduced(r + h) - sol.reduced(r - h)) / (2.0 * h);
            assert!((sol.reduced_derivative(r) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn normalization_rest_frame() {
        let n = normalization_constant(
            &params(1.0, 1.0, 0.0, 0.0),
            &BackgroundConfig::TimeLike { a: 0.0 },
            QuantumNumbers::new(0, 0),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(n, 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn normalization_case_a_by_quadrature() {
        let p = params(1.0, 1.0, 1.0, 0.0);
        let cfg = BackgroundConfig::TimeLike { a: 1.0 };
        let qn = QuantumNumbers::new(0, 0);
        let e = 0.5f64.sqrt();
        let n = normalization_constant(&p, &cfg, qn, e).unwrap();
        let sol = radial_wavefunction(&p, qn, n).unwrap();
        let q = charge_integral(&sol, charge_density_factor(&cfg, &p, e));
        assert!((q - 1.0).abs() < 1e-8, "{q}");
    }

    #[test]
    fn negative_branch_normalizes_to_minus_one() {
        let p = params(1.0, 0.7, 0.5, 0.4);
        let cfg = BackgroundConfig::Mixed { a: 0.8, c: 1.1 };
        let qn = QuantumNumbers::new(-2, 1);
        let mode = ModeState::normalized(&p, &cfg, Prescription::Corrected, qn, Branch::Minus).unwrap();
        let q = charge_integral(&mode.radial, charge_density_factor(&cfg, &p, mode.energy));
        assert!((q + 1.0).abs() < 1e-8, "{q}");
    }

    #[test]
    fn zero_density_is_rejected() {
        let p = params(1.0, 1.0, 0.5, 1.0);
        let cfg = BackgroundConfig::Mixed { a: 1.0, c: 1.0 };
        let e = (1.0 * 1.0 * 0.5 * 1.0) / (1.0 + 0.5);
        let err = normalization_constant(&p, &cfg, QuantumNumbers::new(0, 0), e).unwrap_err();
        assert!(matches!(err, Error::ZeroDensity { .. }));
        let err = normalization_constant(&p, &BackgroundConfig::SpaceLike { c: 1.0 }, QuantumNumbers::new(0, 0), 0.0)
            .unwrap_err();
        assert!(matches!(err, Error::ZeroDensity { .. }));
    }

    #[test]
    fn charge_density_examples() {
        assert_eq!(
            charge_density_factor(&BackgroundConfig::SpaceLike { c: 3.0 }, &params(1.0, 1.0, 0.7, 0.0), 2.0),
            2.0
        );
        assert_eq!(
            charge_density_factor(&BackgroundConfig::TimeLike { a: 1.0 }, &params(1.0, 1.0, 1.0, 0.0), 1.0),
            2.0
        );
        let f = charge_density_factor(
            &BackgroundConfig::Mixed { a: 1.0, c: 1.0 },
            &params(1.0, 1.0, 0.5, 1.0),
            1.3874259,
        );
        assert_relative_eq!(f, 1.5 * 1.3874259 - 0.5, max_relative = 1e-15);
        assert_relative_eq!(f, 1.5811388, epsilon = 1e-6);
    }

    #[test]
    fn case_collapse_of_normalization() {
        let p = params(1.4, 0.6, 0.3, 0.9);
        let qn = QuantumNumbers::new(1, 2);
        let a_case = normalization_constant(&p, &BackgroundConfig::TimeLike { a: 0.7 }, qn, 1.9).unwrap();
        let c_case = normalization_constant(&p, &BackgroundConfig::Mixed { a: 0.7, c: 0.0 }, qn, 1.9).unwrap();
        assert_relative_eq!(a_case, c_case, max_relative = 1e-12);
        let b_case = normalization_constant(&p, &BackgroundConfig::SpaceLike { c: 1.2 }, qn, 1.9).unwrap();
        let c_case = normalization_constant(&p, &BackgroundConfig::Mixed { a: 0.0, c: 1.2 }, qn, 1.9).unwrap();
        assert_relative_eq!(b_case, c_case, max_relative = 1e-12);
    }

    #[test]
    fn radial_orthogonality() {
        let p = params(0.9, 1.3, 0.0, 0.0);
        for l in [0, 1, -3] {
            let sols: Vec<_> = (0..5)
                .map(|n_r| radial_wavefunction(&p, QuantumNumbers::new(l, n_r), 1.0).unwrap())
                .collect();
            let alpha = f64::from(l.unsigned_abs());
            let rule = gauss_laguerre(8, alpha).unwrap();
            let mw = p.m_omega();
            let overlap = |a: &RadialSolution, b: &RadialSolution| {
                rule.integrate(|x| {
                    let r = (x / mw).sqrt();
                    a.eval(r) * b.eval(r) / (2.0 * mw * r) / (x.powf(alpha) * (-x).exp())
                })
            };
            for i in 0..5 {
                let diag = overlap(&sols[i], &sols[i]);
                for j in 0..i {
                    assert!(overlap(&sols[i], &sols[j]).abs() <= 1e-8 * diag);
                }
            }
        }
    }

    #[test]
    fn single_mode_current() {
        let p = params(1.0, 1.0, 0.6, 0.5);
        let cfg = BackgroundConfig::TimeLike { a: 0.9 };
        let mode =
            ModeState::normalized(&p, &cfg, Prescription::Corrected, QuantumNumbers::new(1, 1), Branch::Plus).unwrap();
        let state = Superposition::single(mode);
        let at = |t: f64| SpacetimePoint { t, r: 0.8, phi: 0.3, z: -0.4 };
        let j1 = four_current(&state, &cfg, &p, at(0.0));
        let j2 = four_current(&state, &cfg, &p, at(5.3));
        assert!(j1.jr.abs() < 1e-16);
        assert_relative_eq!(j1.j0, j2.j0, max_relative = 1e-13);
        let u = mode.radial.reduced(0.8);
        let f = charge_density_factor(&cfg, &p, mode.energy);
        assert_relative_eq!(j1.j0, f * u * u, max_relative = 1e-13);
    }
}
