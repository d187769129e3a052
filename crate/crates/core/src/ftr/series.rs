//! The coefficients `d_j` and the normalized mixture weights
//! `w_j = (m^m / Γ(m)) K^j d_j / j!`, which sum to one.
//!
//! Two evaluations of `d_j` live here. [`coeff_d_legendre`] is the finite
//! double sum over Legendre functions, evaluated in complex arithmetic. Its
//! terms alternate in sign and cancel catastrophically once `j` grows past a
//! few tens, so it serves as a cross-check only. [`coeff_d`] evaluates the
//! same quantity through the Laplace integral that generates those Legendre
//! functions,
//!
//! ```text
//! d_j = Γ(j+m) / π ∫_0^π (1 + Δ cos θ)^j / (m + K + KΔ cos θ)^{j+m} dθ,
//! ```
//!
//! whose integrand is positive and periodic, so the trapezoidal rule converges
//! geometrically without cancellation.

use num_complex::Complex64;
use rayon::prelude::*;

use super::FtrParams;
use crate::error::{Error, Result};
use crate::specfun::{legendre_p_signed_ln, ln_gamma_pos, SpecfunError};

/// Default truncation tolerance for [`build_series`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest truncation order [`build_series`] will reach before giving up.
pub const MAX_TRUNCATION_ORDER: usize = 2048;

// consecutive sub-tolerance weights required before the series may stop
const TAIL_RUN: usize = 5;
const BLOCK: usize = 32;
const MAX_NODES: usize = 1 << 20;

/// Truncated weight series for one fading shape (K, m, Δ).
///
/// The weights do not depend on 2σ², so one series serves a whole SNR sweep.
#[derive(Debug, Clone)]
pub struct CoeffSeries {
    k_ratio: f64,
    m: f64,
    delta: f64,
    tol: f64,
    ln_coeffs: Vec<f64>,
    weights: Vec<f64>,
    normalization_defect: f64,
    ln_factorials: Vec<f64>,
}

impl CoeffSeries {
    /// Index J of the last retained term.
    pub fn truncation_order(&self) -> usize {
        self.weights.len() - 1
    }

    /// |Σ w_j − 1| over the retained terms.
    pub fn normalization_defect(&self) -> f64 {
        self.normalization_defect
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln d_j`; every `d_j` is strictly positive.
    pub fn ln_coeffs(&self) -> &[f64] {
        &self.ln_coeffs
    }

    /// `d_j` as a plain float. Large orders overflow to `+inf`; use
    /// [`CoeffSeries::ln_coeffs`] there.
    pub fn coeff(&self, j: usize) -> f64 {
        self.ln_coeffs[j].exp()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn k_ratio(&self) -> f64 {
        self.k_ratio
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True when the series was built for the fading shape of `p`.
    pub fn matches(&self, p: &FtrParams) -> bool {
        p.same_shape(self.k_ratio, self.m, self.delta)
    }

    pub(crate) fn check(&self, p: &FtrParams) -> Result<()> {
        if self.matches(p) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "series built for K={}, m={}, Δ={} used with {p}",
                self.k_ratio, self.m, self.delta
            )))
        }
    }

    pub(crate) fn ln_factorial(&self, j: usize) -> f64 {
        self.ln_factorials[j]
    }
}

/// `ln d_j` through the Laplace integral.
fn ln_coeff(j: usize, k_ratio: f64, m: f64, delta: f64) -> Result<f64> {
    let a = m + k_ratio;
    let b = k_ratio * delta;
    let jf = j as f64;
    let ln_gamma = ln_gamma_pos(jf + m);
    if delta == 0.0 {
        return Ok(ln_gamma - (jf + m) * a.ln());
    }
    let log_integrand = |theta: f64| {
        let c = theta.cos();
        let num = if j == 0 { 0.0 } else { jf * (delta * c).ln_1p() };
        num - (jf + m) * (a + b * c).ln()
    };

    let mut n = 64usize;
    let nodes: Vec<f64> = (0..=n).map(|i| log_integrand(std::f64::consts::PI * i as f64 / n as f64)).collect();
    let shift = nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum: f64 = nodes.iter().map(|h| (h - shift).exp()).sum::<f64>()
        - 0.5 * ((nodes[0] - shift).exp() + (nodes[n] - shift).exp());
    let mut estimate = sum / n as f64;
    while n < MAX_NODES {
        let refine: f64 = (0..n)
            .map(|i| (log_integrand(std::f64::consts::PI * (2 * i + 1) as f64 / (2 * n) as f64) - shift).exp())
            .sum();
        sum += refine;
        n *= 2;
        let next = sum / n as f64;
        // geometric convergence: once two levels agree to 1e-14 the finer one is at rounding level
        let converged = (next - estimate).abs() <= 1e-14 * next;
        estimate = next;
        if converged {
            return Ok(ln_gamma + shift + estimate.ln());
        }
    }
    Err(Error::Numerical(format!("Laplace integral for d_{j} did not converge (K={k_ratio}, m={m}, Δ={delta})")))
}

/// The coefficient `d_j` for the fading shape of `p`.
pub fn coeff_d(j: usize, p: &FtrParams) -> Result<f64> {
    let v = ln_coeff(j, p.k_ratio(), p.m(), p.delta())?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::overflow(format!("d_{j} exceeds f64 range for {p}")).into())
    }
}

/// Result of the Legendre double-sum evaluation of `d_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreExpansion {
    pub value: f64,
    /// |Im| / |Re| of the complex sum before the imaginary part is dropped.
    pub imag_residue: f64,
    /// Σ|terms| / |Σ terms|; the factor by which rounding error is amplified.
    pub condition: f64,
}

/// `d_j` from the double sum over k ≤ j, l ≤ k of binomials, (Δ/2)^k,
/// Γ(j+m+2l−k), the phase e^{iπ(2l−k)/2}, ((m+K)² − (KΔ)²)^{−(j+m)/2} and
/// `P_{j+m−1}^{k−2l}` at `(m+K)/sqrt((m+K)² − (KΔ)²)`.
///
/// The Legendre function in that sum is the Ferrers-type function continued
/// across the cut at x = 1 on the principal branch, `e^{−iπμ/2} P_ν^μ(x)` in
/// terms of the real off-cut function from [`crate::specfun::legendre_p`].
/// The two phases multiply to a real number, so the imaginary part of the sum
/// vanishes; its residue is reported rather than silently dropped.
pub fn coeff_d_legendre(j: usize, p: &FtrParams) -> Result<LegendreExpansion> {
    let (m, delta) = (p.m(), p.delta());
    let radicand = p.legendre_radicand();
    let x = p.legendre_argument();
    let nu = j as f64 + m - 1.0;
    let jf = j as f64;
    let ln_fact = |n: usize| ln_gamma_pos(n as f64 + 1.0);
    let ln_binom = |n: usize, r: usize| ln_fact(n) - ln_fact(r) - ln_fact(n - r);

    let mut terms: Vec<(f64, Complex64)> = Vec::new();
    for k in 0..=j {
        if k > 0 && delta == 0.0 {
            break;
        }
        let ln_delta = if k == 0 { 0.0 } else { k as f64 * (delta / 2.0).ln() };
        for l in 0..=k {
            let order = k as i32 - 2 * l as i32;
            let (ln_p, sign_p) = legendre_p_signed_ln(nu, order, x)?;
            if sign_p == 0.0 {
                continue;
            }
            let ln_mag = ln_binom(j, k) + ln_delta + ln_binom(k, l) + ln_gamma_pos(jf + m + (2 * l) as f64 - k as f64)
                - 0.5 * (jf + m) * radicand.ln()
                + ln_p;
            let phase_formula = Complex64::from_polar(1.0, std::f64::consts::PI * (2 * l as i32 - k as i32) as f64 / 2.0);
            let branch = Complex64::from_polar(1.0, -std::f64::consts::PI * order as f64 / 2.0);
            terms.push((ln_mag, phase_formula * branch * sign_p));
        }
    }
    let shift = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for (ln_mag, phase) in &terms {
        let mag = (ln_mag - shift).exp();
        sum += phase * mag;
        abs_sum += mag;
    }
    let value = sum.re.signum() * (shift + sum.re.abs().ln()).exp();
    if !value.is_finite() {
        return Err(SpecfunError::overflow(format!("d_{j} exceeds f64 range for {p}")).into());
    }
    Ok(LegendreExpansion {
        value,
        imag_residue: (sum.im / sum.re).abs(),
        condition: abs_sum / sum.re.abs(),
    })
}

/// Builds the weight series, stopping at the first J where the last five
/// weights are each below `tol` and |Σ w − 1| < `tol`.
pub fn build_series(p: &FtrParams, tol: f64) -> Result<CoeffSeries> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidParameter(format!("truncation tolerance must lie in (0, 1e-3], got {tol}")));
    }
    let (k_ratio, m, delta) = (p.k_ratio(), p.m(), p.delta());
    let ln_weight_prefactor = m * m.ln() - ln_gamma_pos(m);
    let mut ln_coeffs = Vec::new();
    let mut weights = Vec::new();
    let mut ln_factorials = Vec::new();
    let mut total = 0.0;

    let push = |j: usize, ln_d: f64, ln_coeffs: &mut Vec<f64>, weights: &mut Vec<f64>, lf: &mut Vec<f64>| {
        let ln_fact = ln_gamma_pos(j as f64 + 1.0);
        let w = if j == 0 {
            (ln_weight_prefactor + ln_d).exp()
        } else if k_ratio == 0.0 {
            0.0
        } else {
            (ln_weight_prefactor + j as f64 * k_ratio.ln() + ln_d - ln_fact).exp()
        };
        ln_coeffs.push(ln_d);
        weights.push(w);
        lf.push(ln_fact);
        w
    };

    if k_ratio == 0.0 {
        // every j > 0 weight carries K^j and vanishes identically
        let w0 = push(0, ln_coeff(0, k_ratio, m, delta)?, &mut ln_coeffs, &mut weights, &mut ln_factorials);
        return Ok(CoeffSeries {
            k_ratio,
            m,
            delta,
            tol,
            ln_coeffs,
            weights,
            normalization_defect: (w0 - 1.0).abs(),
            ln_factorials,
        });
    }

    let mut start = 0;
    while start <= MAX_TRUNCATION_ORDER {
        let end = (start + BLOCK).min(MAX_TRUNCATION_ORDER + 1);
        let block: Vec<f64> = (start..end)
            .into_par_iter()
            .map(|j| ln_coeff(j, k_ratio, m, delta))
            .collect::<Result<_>>()?;
        for (offset, ln_d) in block.into_iter().enumerate() {
            let j = start + offset;
            total += push(j, ln_d, &mut ln_coeffs, &mut weights, &mut ln_factorials);
            let defect = (total - 1.0).abs();
            let tail_small = j + 1 >= TAIL_RUN && weights[j + 1 - TAIL_RUN..].iter().all(|w| w.abs() < tol);
            if tail_small && defect < tol {
                return Ok(CoeffSeries {
                    k_ratio,
                    m,
                    delta,
                    tol,
                    ln_coeffs,
                    weights,
                    normalization_defect: defect,
                    ln_factorials,
                });
            }
        }
        start = end;
    }
    Err(Error::Numerical(format!(
        "weight series for K={k_ratio}, m={m}, Δ={delta} needs more than {MAX_TRUNCATION_ORDER} terms at tol={tol}"
    )))
}
