//! Ergodic capacity under the four power-adaptation policies, exact and in
//! the high-SNR limit, plus the OPRA cutoff solver.
//!
//! Every exact evaluator is written in terms of the scaled upper incomplete
//! gamma `G(s, x) = e^x x^{-s} Γ(s, x)` and Poisson probabilities, so no
//! intermediate product overflows at small or large 2σ². With `c = 2σ²`:
//!
//! ```text
//! ORA   Σ_j w_j S_j(1/c),                        S_j(x) = Σ_{s=-j}^{0} G(s, x)
//! OPRA  Σ_j w_j Σ_{p<=j} pois(j-p; x) S_p(x),    x = γ₀/c
//! TCI   ln(1 + 1/T) · F̄(γ₀),                    T = Σ_j w_j Γ(j, x) / (j! c)
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::ftr::{build_series, cdf, poisson_table, CoeffSeries, FtrParams};
use crate::specfun::{digamma_int_plus_one, exp_int_e1, upper_inc_gamma_scaled, EULER_GAMMA};

/// Residual the OPRA cutoff must reach on the power constraint.
pub const OPRA_RESIDUAL_TOL: f64 = 1e-10;

const BRACKET: (f64, f64) = (1e-12, 10.0);
const MAX_ROOT_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    Opra,
    Ora,
    Ci,
    Tci { cutoff: f64 },
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Opra => "opra",
            Policy::Ora => "ora",
            Policy::Ci => "ci",
            Policy::Tci { .. } => "tci",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Tci { cutoff } => write!(f, "tci(γ₀={cutoff})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyResult {
    pub policy: Policy,
    pub capacity_nats: f64,
    /// γ₀ in use: solved for OPRA, supplied for TCI.
    pub cutoff: Option<f64>,
    pub truncation_order: usize,
    /// |f(γ₀) − 1| of the OPRA power constraint.
    pub solver_residual: Option<f64>,
    /// Set when E{1/γ} diverges and channel inversion cannot carry any rate.
    pub divergent: bool,
}

impl PolicyResult {
    fn plain(policy: Policy, capacity_nats: f64, s: &CoeffSeries) -> Self {
        Self {
            policy,
            capacity_nats: capacity_nats.max(0.0),
            cutoff: None,
            truncation_order: s.truncation_order(),
            solver_residual: None,
            divergent: false,
        }
    }
}

/// `G(-k, x)` for `k = 0..=n`.
///
/// The downward recurrence `G(-k) = (1 - x G(-k+1)) / k` multiplies errors by
/// `x / k`, so it is only used once `k >= x`; below that each order comes from
/// its own continued fraction.
fn scaled_gamma_table(x: f64, n: usize) -> Result<Vec<f64>> {
    let mut g = Vec::with_capacity(n + 1);
    g.push(upper_inc_gamma_scaled(0.0, x)?);
    for k in 1..=n {
        let kf = k as f64;
        let v = if kf >= x { (1.0 - x * g[k - 1]) / kf } else { upper_inc_gamma_scaled(-kf, x)? };
        g.push(v);
    }
    Ok(g)
}

fn partial_sums(g: &[f64]) -> Vec<f64> {
    g.iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

fn check_cutoff(g0: f64) -> Result<()> {
    if g0 > 0.0 && g0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("cutoff γ₀ must be finite and > 0, got {g0}")))
    }
}

/// `Γ(j, x) / j!` for every retained `j`, from the cumulative Poisson sums
/// (`E₁(x)` at `j = 0`).
fn upper_gamma_over_factorial(x: f64, s: &CoeffSeries) -> Result<Vec<f64>> {
    let pois = poisson_table(x, s);
    let mut out = Vec::with_capacity(s.len());
    out.push(exp_int_e1(x)?);
    let mut running = 0.0;
    for j in 1..s.len() {
        running += pois[j - 1];
        out.push(running / j as f64);
    }
    Ok(out)
}

/// The OPRA power-constraint function `f(γ₀) = ∫_{γ₀}^∞ (1/γ₀ − 1/γ) f_γ(γ) dγ`.
/// The cutoff solves `f(γ₀) = 1`; `f` decreases strictly in `γ₀`.
pub fn opra_constraint(s: &CoeffSeries, p: &FtrParams, g0: f64) -> Result<f64> {
    s.check(p)?;
    check_cutoff(g0)?;
    let c = p.two_sigma2();
    let x = g0 / c;
    let pois = poisson_table(x, s);
    let tail = upper_gamma_over_factorial(x, s)?;
    let mut running = 0.0;
    let mut acc = 0.0;
    for (j, w) in s.weights().iter().enumerate() {
        running += pois[j];
        acc += w * (running.min(1.0) / g0 - tail[j] / c);
    }
    Ok(acc)
}

fn solve_cutoff(s: &CoeffSeries, p: &FtrParams) -> Result<(f64, f64)> {
    let g = |t: f64| opra_constraint(s, p, t.exp()).map(|v| v - 1.0);
    let (mut lo, mut hi) = (BRACKET.0.ln(), BRACKET.1.ln());
    let (mut g_lo, mut g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::Numerical(format!(
            "OPRA cutoff is not bracketed by [{}, {}] for {p}: f-1 = {g_lo:e}, {g_hi:e}",
            BRACKET.0, BRACKET.1
        )));
    }
    // Illinois regula falsi in ln γ₀, falling back to bisection when the
    // secant step stalls
    let mut side = 0i8;
    let mut best = (lo, g_lo.abs());
    for _ in 0..MAX_ROOT_ITERATIONS {
        let secant = hi - g_hi * (hi - lo) / (g_hi - g_lo);
        let t = if secant.is_finite() && secant > lo && secant < hi { secant } else { 0.5 * (lo + hi) };
        let gt = g(t)?;
        if gt.abs() < best.1 {
            best = (t, gt.abs());
        }
        if gt == 0.0 || best.1 < 0.01 * OPRA_RESIDUAL_TOL || hi - lo < 1e-15 {
            break;
        }
        if gt > 0.0 {
            lo = t;
            g_lo = gt;
            if side == 1 {
                g_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = t;
            g_hi = gt;
            if side == -1 {
                g_lo *= 0.5;
            }
            side = -1;
        }
    }
    Ok((best.0.exp(), best.1))
}

/// Solves the OPRA cutoff γ₀ and returns it with its constraint residual.
pub fn opra_cutoff(s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    opra_cutoff_with_residual(s, p).map(|(g0, _)| g0)
}

/// [`opra_cutoff`] plus `|f(γ₀) − 1|`. Fails when the residual stays above
/// [`OPRA_RESIDUAL_TOL`].
pub fn opra_cutoff_with_residual(s: &CoeffSeries, p: &FtrParams) -> Result<(f64, f64)> {
    s.check(p)?;
    let (g0, residual) = solve_cutoff(s, p)?;
    if residual < OPRA_RESIDUAL_TOL {
        Ok((g0, residual))
    } else {
        Err(Error::Numerical(format!("OPRA cutoff residual {residual:e} exceeds {OPRA_RESIDUAL_TOL:e} for {p}")))
    }
}

fn opra_capacity_at(s: &CoeffSeries, p: &FtrParams, g0: f64) -> Result<f64> {
    let x = g0 / p.two_sigma2();
    let n = s.truncation_order();
    let pois = poisson_table(x, s);
    let sums = partial_sums(&scaled_gamma_table(x, n)?);
    let w = s.weights();
    let mut acc = 0.0;
    for (q, s_q) in sums.iter().enumerate() {
        let inner: f64 = w[q..].iter().zip(&pois).map(|(wj, pj)| wj * pj).sum();
        acc += s_q * inner;
    }
    Ok(acc)
}

/// OPRA capacity with the cutoff solved from the power constraint. If the
/// solver cannot reach the residual target the series is rebuilt once at
/// `tol / 100` before giving up.
pub fn ec_opra(s: &CoeffSeries, p: &FtrParams) -> Result<PolicyResult> {
    s.check(p)?;
    let (g0, residual, value, order) = match solve_cutoff(s, p)? {
        (g0, r) if r < OPRA_RESIDUAL_TOL => (g0, r, opra_capacity_at(s, p, g0)?, s.truncation_order()),
        _ => {
            let finer = build_series(p, s.tol() / 100.0)?;
            let (g0, r) = opra_cutoff_with_residual(&finer, p)?;
            (g0, r, opra_capacity_at(&finer, p, g0)?, finer.truncation_order())
        }
    };
    Ok(PolicyResult {
        policy: Policy::Opra,
        capacity_nats: value.max(0.0),
        cutoff: Some(g0),
        truncation_order: order,
        solver_residual: Some(residual),
        divergent: false,
    })
}

/// `Σ_j w_j ψ(j+1)`, the shape-only part of every high-SNR asymptote.
fn mean_digamma(s: &CoeffSeries) -> f64 {
    s.weights().iter().enumerate().map(|(j, w)| w * digamma_int_plus_one(j)).sum()
}

/// High-SNR OPRA capacity `ln 2σ² − ln γ₀ + Σ_j w_j ψ(j+1)`.
pub fn ec_opra_asymptotic(s: &CoeffSeries, p: &FtrParams, g0: f64) -> Result<f64> {
    s.check(p)?;
    check_cutoff(g0)?;
    Ok(p.two_sigma2().ln() - g0.ln() + mean_digamma(s))
}

/// ORA capacity `E{ln(1 + γ)}`.
pub fn ec_ora(s: &CoeffSeries, p: &FtrParams) -> Result<PolicyResult> {
    s.check(p)?;
    let x = 1.0 / p.two_sigma2();
    let sums = partial_sums(&scaled_gamma_table(x, s.truncation_order())?);
    let value: f64 = s.weights().iter().zip(&sums).map(|(w, v)| w * v).sum();
    Ok(PolicyResult::plain(Policy::Ora, value, s))
}

/// High-SNR ORA capacity `ln 2σ² + Σ_j w_j ψ(j+1)`.
pub fn ec_ora_asymptotic(s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    Ok(p.two_sigma2().ln() + mean_digamma(s))
}

/// The same asymptote through `∂E{γ^n}/∂n` at `n = 0`. It differs from
/// [`ec_ora_asymptotic`] only by `ln 2σ²` times the series normalization
/// defect.
pub fn ec_ora_asymptotic_moments(s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    crate::ftr::moment_log_derivative(0.0, s, p)
}

/// Channel-inversion capacity `ln(1 + 1/E{1/γ})`. E{1/γ} diverges whenever
/// the j = 0 weight is nonzero, which holds for every valid FTR shape; the
/// result is then zero and flagged divergent.
pub fn ec_ci(s: &CoeffSeries, p: &FtrParams) -> Result<PolicyResult> {
    s.check(p)?;
    if s.weights()[0] != 0.0 {
        return Ok(PolicyResult { divergent: true, ..PolicyResult::plain(Policy::Ci, 0.0, s) });
    }
    let c = p.two_sigma2();
    let inv_mean: f64 = s.weights().iter().enumerate().skip(1).map(|(j, w)| w / (j as f64 * c)).sum();
    Ok(PolicyResult::plain(Policy::Ci, (1.0 / inv_mean).ln_1p(), s))
}

/// Truncated channel inversion with cutoff `g0`:
/// `ln(1 + 1/∫_{γ₀}^∞ f_γ/γ dγ) · P(γ >= γ₀)`.
pub fn ec_tci(s: &CoeffSeries, p: &FtrParams, g0: f64) -> Result<PolicyResult> {
    s.check(p)?;
    check_cutoff(g0)?;
    let c = p.two_sigma2();
    let x = g0 / c;
    let pois = poisson_table(x, s);
    let tail = upper_gamma_over_factorial(x, s)?;
    let mut running = 0.0;
    let mut inv_tail = 0.0;
    let mut survival = 0.0;
    for (j, w) in s.weights().iter().enumerate() {
        running += pois[j];
        inv_tail += w * tail[j] / c;
        survival += w * running.min(1.0);
    }
    let value = if inv_tail > 0.0 { (1.0 / inv_tail).ln_1p() * survival } else { 0.0 };
    Ok(PolicyResult { cutoff: Some(g0), ..PolicyResult::plain(Policy::Tci { cutoff: g0 }, value, s) })
}

/// High-SNR TCI capacity `ln 2σ² − ln(w₀ ξ + Σ_{j>=1} w_j / j)` with
/// `ξ = −ln γ₀ + ln 2σ² + ψ(1)`.
pub fn ec_tci_asymptotic(s: &CoeffSeries, p: &FtrParams, g0: f64) -> Result<f64> {
    s.check(p)?;
    check_cutoff(g0)?;
    let ln_c = p.two_sigma2().ln();
    let xi = -g0.ln() + ln_c - EULER_GAMMA;
    let w = s.weights();
    let arg = w[0] * xi + w.iter().enumerate().skip(1).map(|(j, wj)| wj / j as f64).sum::<f64>();
    if arg > 0.0 {
        Ok(ln_c - arg.ln())
    } else {
        Err(crate::specfun::SpecfunError::domain(format!(
            "TCI asymptote needs a positive log argument, got {arg:e} (γ₀={g0}, {p})"
        ))
        .into())
    }
}

/// TCI cutoff whose outage probability `P(γ < γ₀)` equals `target`.
pub fn tci_cutoff_for_outage(s: &CoeffSeries, p: &FtrParams, target: f64) -> Result<f64> {
    s.check(p)?;
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("outage target must lie in (0, 1), got {target}")));
    }
    let mut lo = 0.0;
    let mut hi = p.mean_snr();
    let mut doublings = 0;
    while cdf(hi, s, p)? < target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Numerical(format!("outage {target} not reached for {p}")));
        }
    }
    for _ in 0..MAX_ROOT_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if cdf(mid, s, p)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Dispatches one policy.
pub fn evaluate(policy: Policy, s: &CoeffSeries, p: &FtrParams) -> Result<PolicyResult> {
    match policy {
        Policy::Opra => ec_opra(s, p),
        Policy::Ora => ec_ora(s, p),
        Policy::Ci => ec_ci(s, p),
        Policy::Tci { cutoff } => ec_tci(s, p, cutoff),
    }
}

/// High-SNR asymptote matching [`evaluate`]; `None` for CI. `result` must be
/// the exact evaluation of the same policy, whose cutoff is reused.
pub fn asymptotic(result: &PolicyResult, s: &CoeffSeries, p: &FtrParams) -> Result<Option<f64>> {
    match result.policy {
        Policy::Opra => ec_opra_asymptotic(s, p, result.cutoff.unwrap_or(1.0)).map(Some),
        Policy::Ora => ec_ora_asymptotic(s, p).map(Some),
        Policy::Ci => Ok(None),
        Policy::Tci { cutoff } => ec_tci_asymptotic(s, p, cutoff).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rayleigh(c: f64) -> (CoeffSeries, FtrParams) {
        let p = FtrParams::new(0.0, 1.0, 0.0, c).unwrap();
        (build_series(&p, 1e-9).unwrap(), p)
    }

    #[test]
    fn rayleigh_ora_closed_form() {
        for c in [0.01, 1.0, 10.0, 100.0] {
            let (s, p) = rayleigh(c);
            let want = (1.0 / c).exp() * exp_int_e1(1.0 / c).unwrap();
            let got = ec_ora(&s, &p).unwrap().capacity_nats;
            assert!((got / want - 1.0).abs() < 1e-13, "c={c}");
        }
    }

    #[test]
    fn rayleigh_opra_is_e1_at_the_cutoff() {
        let (s, p) = rayleigh(10.0);
        let r = ec_opra(&s, &p).unwrap();
        let g0 = r.cutoff.unwrap();
        assert!(r.solver_residual.unwrap() < OPRA_RESIDUAL_TOL);
        assert!((r.capacity_nats - exp_int_e1(g0 / 10.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn scaled_table_matches_direct_calls() {
        for x in [0.05, 0.9, 3.0, 40.0] {
            let t = scaled_gamma_table(x, 60).unwrap();
            for (k, v) in t.iter().enumerate() {
                let direct = upper_inc_gamma_scaled(-(k as f64), x).unwrap();
                assert!((v / direct - 1.0).abs() < 1e-12, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn ci_is_zero_and_divergent() {
        let p = FtrParams::new(10.0, 10.5, 0.5, 1.0).unwrap();
        let s = build_series(&p, 1e-9).unwrap();
        let r = ec_ci(&s, &p).unwrap();
        assert_eq!(r.capacity_nats, 0.0);
        assert!(r.divergent);
    }

    #[test]
    fn rejects_bad_cutoffs() {
        let (s, p) = rayleigh(1.0);
        assert!(ec_tci(&s, &p, 0.0).is_err());
        assert!(ec_opra_asymptotic(&s, &p, -1.0).is_err());
        assert!(tci_cutoff_for_outage(&s, &p, 1.0).is_err());
    }
}
