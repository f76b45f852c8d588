//! Log-gamma, generalized Laguerre polynomials and Gauss-Laguerre quadrature.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain {
            function: "ln_gamma",
            reason: format!("argument must be finite and > 0, got {x}"),
        });
    }
    if x < 0.5 {
        // Gamma(x) = Gamma(x + 1) / x keeps the series argument >= 0.5
        return Ok(lanczos(x + 1.0) - x.ln());
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// `L_n^(alpha)(x)` by the forward three-term recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    laguerre_pair(n, alpha, x).0
}

/// `(L_n^(alpha)(x), L_{n-1}^(alpha)(x))`, with `L_{-1} = 0`.
pub fn laguerre_pair(n: u32, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `d/dx L_n^(alpha)(x) = -L_{n-1}^(alpha+1)(x)`.
pub fn laguerre_derivative(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre(n - 1, alpha + 1.0, x)
    }
}

/// Gauss-Laguerre rule for the weight `x^alpha * exp(-x)` on `(0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`, approximating `int_0^inf x^alpha e^-x f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_REL_TOL: f64 = 1e-14;

/// Nodes are the roots of `L_order^(alpha)`, found by Newton iteration from
/// asymptotic initial guesses; weights from the derivative formula.
pub fn gauss_laguerre(order: usize, alpha: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Domain {
            function: "gauss_laguerre",
            reason: "order must be >= 1".into(),
        });
    }
    if !alpha.is_finite() || alpha <= -1.0 {
        return Err(Error::Domain {
            function: "gauss_laguerre",
            reason: format!("alpha must be finite and > -1, got {alpha}"),
        });
    }
    let n = order as u32;
    let nf = order as f64;
    // ln(Gamma(n + alpha + 1) / n!)
    let ln_scale = ln_gamma(nf + alpha + 1.0)? - ln_gamma(nf + 1.0)?;

    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let mut z = 0.0;
    for i in 0..order {
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                    * (z - nodes[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = laguerre_pair(n, alpha, z);
            // x L_n' = n L_n - (n + alpha) L_{n-1}
            let dp = (nf * p - (nf + alpha) * p_prev) / z;
            let step = p / dp;
            z -= step;
            if step.abs() <= NEWTON_REL_TOL * z.abs() {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::Convergence(format!(
                "Laguerre node {i} of order {order}, alpha = {alpha}"
            )));
        }
        let (p, p_prev) = laguerre_pair(n, alpha, z);
        let dp = (nf * p - (nf + alpha) * p_prev) / z;
        // w_i = Gamma(n + alpha + 1) / (n! * x_i * L_n'(x_i)^2)
        let w = (ln_scale - z.ln() - 2.0 * dp.abs().ln()).exp();
        nodes.push(z);
        weights.push(w);
    }

    if nodes[0] <= 0.0 || nodes.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Convergence(format!(
            "Laguerre nodes of order {order}, alpha = {alpha} not strictly increasing"
        )));
    }
    Ok(QuadratureRule {
        order,
        alpha,
        nodes,
        weights,
    })
}
