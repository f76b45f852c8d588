//! Physical parameters, background-vector configurations, operator ordering
//! and the dispersion relation linking the radial eigenvalue to the energy.
//!
//! Natural units throughout. With the mode ansatz
//! `Psi = psi(r)/sqrt(r) * exp(-iEt + il*phi + ikz)` every configuration
//! reduces to the same radial operator with eigenvalue
//! `Lambda = alpha*E^2 + beta*E - M^2 - k_coeff*k^2 + sigma*2*M*omega`,
//! and the bound-state condition `Lambda = 2*M*omega*(n + 1)` turns this into
//!
//! ```text
//! alpha*E^2 + beta*E = M^2 + k_coeff*k^2 + 2*M*omega*(n + 1 - sigma)
//! ```

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Mass, oscillator frequency, Lorentz-violation coupling and longitudinal
/// wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    mass: f64,
    omega: f64,
    g: f64,
    k: f64,
}

impl ModelParams {
    /// Rejects non-positive or non-finite `mass` and `omega`; `omega = 0`
    /// leaves the radial operator without bound states.
    pub fn new(mass: f64, omega: f64, g: f64, k: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid("M", format!("must be finite and > 0, got {mass}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        if !g.is_finite() {
            return Err(invalid("g", format!("must be finite, got {g}")));
        }
        if !k.is_finite() {
            return Err(invalid("k", format!("must be finite, got {k}")));
        }
        Ok(Self { mass, omega, g, k })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// The product `M*omega`, the only combination the radial operator sees.
    pub fn m_omega(&self) -> f64 {
        self.mass * self.omega
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(self.mass, self.omega, self.g, k)
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.mass, self.omega, g, self.k)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.mass, omega, self.g, self.k)
    }
}

/// Magnetic quantum number `l` and radial quantum number `n_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    pub l: i32,
    pub n_r: u32,
}

impl QuantumNumbers {
    pub fn new(l: i32, n_r: u32) -> Self {
        Self { l, n_r }
    }

    pub fn abs_l(&self) -> u32 {
        self.l.unsigned_abs()
    }

    /// Principal quantum number `n = 2*n_r + |l|`.
    pub fn principal(&self) -> u32 {
        2 * self.n_r + self.abs_l()
    }

    /// All `(l, n_r)` pairs with signed `l` and principal number `<= max_n`,
    /// ordered by `n`, then `l` ascending.
    pub fn up_to_principal(max_n: u32) -> Vec<QuantumNumbers> {
        let mut out = Vec::new();
        for n in 0..=max_n {
            let max_l = n as i32;
            for l in -max_l..=max_l {
                let rest = n - l.unsigned_abs();
                if rest % 2 == 0 {
                    out.push(QuantumNumbers::new(l, rest / 2));
                }
            }
        }
        out
    }
}

/// The constant background four-vector `v^mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum BackgroundConfig {
    /// `v^mu = (a, 0, 0, 0)`, case A.
    TimeLike { a: f64 },
    /// `v^mu = (0, 0, 0, c)`, case B.
    SpaceLike { c: f64 },
    /// `v^mu = (a, 0, 0, c)`, case C.
    Mixed { a: f64, c: f64 },
}

impl BackgroundConfig {
    /// Time component `v^0` (zero for `SpaceLike`).
    pub fn a(&self) -> f64 {
        match *self {
            Self::TimeLike { a } | Self::Mixed { a, .. } => a,
            Self::SpaceLike { .. } => 0.0,
        }
    }

    /// Longitudinal component `v^z` (zero for `TimeLike`).
    pub fn c(&self) -> f64 {
        match *self {
            Self::SpaceLike { c } | Self::Mixed { c, .. } => c,
            Self::TimeLike { .. } => 0.0,
        }
    }

    pub fn case_label(&self) -> char {
        match self {
            Self::TimeLike { .. } => 'A',
            Self::SpaceLike { .. } => 'B',
            Self::Mixed { .. } => 'C',
        }
    }
}

/// Operator ordering used in the oscillator substitution
/// `p.p -> (p + iM*omega*r).(p - iM*omega*r)`.
///
/// Commuting `r_j` past `p_j` in the transverse plane produces a constant
/// `+-2*M*omega`; the reversed ordering `(p - iM*omega*r).(p + iM*omega*r)`
/// flips its sign. `Original` reconstructs the equation obtained with that
/// reversed ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prescription {
    Corrected,
    Original,
}

impl Prescription {
    /// Sign of the `2*M*omega` term in the wave equation.
    pub fn sigma(&self) -> f64 {
        match self {
            Self::Corrected => 1.0,
            Self::Original => -1.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Corrected => "corrected",
            Self::Original => "original",
        }
    }
}

/// `alpha*E^2 + beta*E = M^2 + k_coeff*k^2 + 2*M*omega*(n + 1 - sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub k_coeff: f64,
    pub prescription: Prescription,
}

impl DispersionCoefficients {
    /// Right-hand side at principal quantum number `n`.
    pub fn rhs(&self, params: &ModelParams, n: u32) -> f64 {
        // n + 1 - sigma is an exact small integer, so the Original ordering at
        // n follows the same arithmetic as Corrected at n + 2.
        let shift = f64::from(n) + 1.0 - self.prescription.sigma();
        let m = params.mass;
        m * m + self.k_coeff * params.k * params.k + 2.0 * m * params.omega * shift
    }

    /// Right-hand side for a given radial eigenvalue `lambda`, bypassing the
    /// quantization condition.
    pub fn rhs_from_lambda(&self, params: &ModelParams, lambda: f64) -> f64 {
        let m = params.mass;
        lambda + m * m + self.k_coeff * params.k * params.k
            - self.prescription.sigma() * 2.0 * m * params.omega
    }

    /// Solves `alpha*E^2 + beta*E = rhs`.
    pub fn solve(&self, rhs: f64, lambda: f64) -> Result<EnergyLevels> {
        solve_quadratic(self.alpha, self.beta, rhs, lambda)
    }
}

/// Roots of the dispersion relation for one set of quantum numbers.
///
/// In the single-root case (`alpha = 0`) the root is stored in `e_plus` and
/// `e_minus` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevels {
    pub e_plus: Option<f64>,
    pub e_minus: Option<f64>,
    pub lambda: f64,
    pub degenerate: bool,
}

impl EnergyLevels {
    /// Returned roots, `e_plus` first.
    pub fn roots(&self) -> impl Iterator<Item = f64> {
        self.e_plus.into_iter().chain(self.e_minus)
    }
}

/// Which root of the dispersion relation a mode sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn pick(&self, levels: &EnergyLevels) -> Option<f64> {
        match self {
            Self::Plus => levels.e_plus,
            Self::Minus => levels.e_minus,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Plus => "plus",
            Self::Minus => "minus",
        }
    }
}

/// Coefficients of the dispersion relation.
///
/// All three configurations go through the same `(a, c)` arithmetic, so
/// `Mixed { a, c: 0 }` reproduces `TimeLike { a }` and `Mixed { a: 0, c }`
/// reproduces `SpaceLike { c }` bit for bit.
pub fn dispersion_coefficients(
    params: &ModelParams,
    config: &BackgroundConfig,
    presc: Prescription,
) -> DispersionCoefficients {
    let (a, c, g, k) = (config.a(), config.c(), params.g, params.k);
    // (v.d)^2 = a^2 d_t^2 + 2ac d_t d_z + c^2 d_z^2 acting on exp(-iEt + ikz)
    let alpha = 1.0 + g * a * a;
    let beta = -2.0 * a * c * g * k;
    let k_coeff = 1.0 - g * c * c;
    DispersionCoefficients {
        alpha,
        beta: if beta == 0.0 { 0.0 } else { beta },
        k_coeff,
        prescription: presc,
    }
}

/// Radial eigenvalue fixed by the bound-state condition,
/// `Lambda = 2*M*omega*(2*n_r + |l| + 1)`.
pub fn lambda_required(params: &ModelParams, qn: QuantumNumbers) -> f64 {
    2.0 * params.m_omega() * (f64::from(qn.principal()) + 1.0)
}

pub fn energy_levels(
    params: &ModelParams,
    config: &BackgroundConfig,
    presc: Prescription,
    qn: QuantumNumbers,
) -> Result<EnergyLevels> {
    let coeffs = dispersion_coefficients(params, config, presc);
    coeffs.solve(coeffs.rhs(params, qn.principal()), lambda_required(params, qn))
}

fn solve_quadratic(alpha: f64, beta: f64, rhs: f64, lambda: f64) -> Result<EnergyLevels> {
    if alpha == 0.0 {
        if beta == 0.0 {
            return Err(Error::DegenerateDispersion);
        }
        return Ok(EnergyLevels {
            e_plus: Some(rhs / beta),
            e_minus: None,
            lambda,
            degenerate: true,
        });
    }
    let (hi, lo) = if beta == 0.0 {
        let sq = rhs / alpha;
        if sq < 0.0 {
            return Err(Error::ComplexEnergy {
                discriminant: 4.0 * alpha * rhs,
            });
        }
        let e = sq.sqrt();
        (e, -e)
    } else {
        let disc = beta * beta + 4.0 * alpha * rhs;
        if disc < 0.0 {
            return Err(Error::ComplexEnergy { discriminant: disc });
        }
        // larger-magnitude root first, the other from the product -rhs/alpha
        let q = -0.5 * (beta + beta.signum() * disc.sqrt());
        let r1 = q / alpha;
        let r2 = -rhs / q;
        if r1 >= r2 {
            (r1, r2)
        } else {
            (r2, r1)
        }
    };
    Ok(EnergyLevels {
        e_plus: Some(hi),
        e_minus: Some(lo),
        lambda,
        degenerate: false,
    })
}
