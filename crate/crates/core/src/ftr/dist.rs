//! PDF, CDF and moments of the instantaneous SNR as weighted Poisson/Gamma
//! mixtures over the retained series terms.

use super::{CoeffSeries, FtrParams};
use crate::error::{Error, Result};
use crate::specfun::{digamma_pos, ln_gamma_pos, regularized_gamma_p, SpecfunError};

/// Poisson probabilities `x^j e^{-x} / j!` for `j = 0..=series.truncation_order()`.
pub(crate) fn poisson_table(x: f64, s: &CoeffSeries) -> Vec<f64> {
    let n = s.len();
    if x == 0.0 {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        return v;
    }
    let lnx = x.ln();
    (0..n).map(|j| (j as f64 * lnx - x - s.ln_factorial(j)).exp()).collect()
}

fn check_point(g: f64, name: &str) -> Result<()> {
    if g >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} needs γ >= 0, got {g}")))
    }
}

/// Density of the instantaneous SNR at `g`.
pub fn pdf(g: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    check_point(g, "pdf")?;
    if g.is_infinite() {
        return Ok(0.0);
    }
    let c = p.two_sigma2();
    let pois = poisson_table(g / c, s);
    let v: f64 = s.weights().iter().zip(&pois).map(|(w, q)| w * q).sum::<f64>() / c;
    Ok(v.max(0.0))
}

/// Complementary CDF `Σ_j w_j e^{-x} Σ_{n<=j} x^n/n!` with `x = g / 2σ²`.
pub fn ccdf(g: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    check_point(g, "ccdf")?;
    if g.is_infinite() {
        return Ok(0.0);
    }
    let pois = poisson_table(g / p.two_sigma2(), s);
    let mut running = 0.0;
    let mut acc = 0.0;
    for (w, q) in s.weights().iter().zip(&pois) {
        running += q;
        acc += w * running.min(1.0);
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// CDF in the finite-sum form `Σ_j w_j (1 − e^{-x} Σ_{n<=j} x^n/n!)`.
pub fn cdf(g: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    check_point(g, "cdf")?;
    if g.is_infinite() {
        return Ok(1.0);
    }
    let pois = poisson_table(g / p.two_sigma2(), s);
    let mut running = 0.0;
    let mut acc = 0.0;
    for (w, q) in s.weights().iter().zip(&pois) {
        running += q;
        acc += w * (1.0 - running).max(0.0);
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// CDF as the weighted sum of regularized lower incomplete gammas
/// `Σ_j w_j Υ(j+1, x) / j!`. Kept alongside [`cdf`] as an independent form.
pub fn cdf_lower_gamma_form(g: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    check_point(g, "cdf")?;
    let x = g / p.two_sigma2();
    let mut acc = 0.0;
    for (j, w) in s.weights().iter().enumerate() {
        acc += w * regularized_gamma_p(j as f64 + 1.0, x)?;
    }
    Ok(acc)
}

/// Moment `E{γ^n} = Σ_j w_j Γ(n+j+1)/j! (2σ²)^n` for real `n >= 0`.
pub fn moment(n: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    if !(n > -1.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!("moment order must be finite and > -1, got {n}")));
    }
    let ln_c = p.two_sigma2().ln();
    let v: f64 = s
        .weights()
        .iter()
        .enumerate()
        .map(|(j, w)| w * (ln_gamma_pos(n + j as f64 + 1.0) - s.ln_factorial(j) + n * ln_c).exp())
        .sum();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::overflow(format!("moment of order {n} exceeds f64 range for {p}")).into())
    }
}

/// `∂E{γ^n}/∂n = Σ_j w_j Γ(n+j+1)/j! (2σ²)^n [ln 2σ² + ψ(n+j+1)]`.
pub fn moment_log_derivative(n: f64, s: &CoeffSeries, p: &FtrParams) -> Result<f64> {
    s.check(p)?;
    if !(n > -1.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!("moment order must be finite and > -1, got {n}")));
    }
    let ln_c = p.two_sigma2().ln();
    let v: f64 = s
        .weights()
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let a = n + j as f64 + 1.0;
            w * (ln_gamma_pos(a) - s.ln_factorial(j) + n * ln_c).exp() * (ln_c + digamma_pos(a))
        })
        .sum();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::overflow(format!("moment derivative of order {n} exceeds f64 range for {p}")).into())
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_series;
    use super::*;

    #[test]
    fn rayleigh_reduction() {
        let p = FtrParams::new(0.0, 1.0, 0.0, 2.0).unwrap();
        let s = build_series(&p, 1e-9).unwrap();
        for g in [0.0, 0.5, 1.0, 7.0] {
            let want = (-g / 2.0f64).exp() / 2.0;
            assert!((pdf(g, &s, &p).unwrap() - want).abs() < 1e-15);
            assert!((cdf(g, &s, &p).unwrap() + (-g / 2.0f64).exp_m1()).abs() < 1e-15);
        }
        assert!((moment(1.0, &s, &p).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn endpoints() {
        let p = FtrParams::new(10.0, 10.5, 0.5, 1.0).unwrap();
        let s = build_series(&p, 1e-9).unwrap();
        assert_eq!(cdf(0.0, &s, &p).unwrap(), 0.0);
        assert_eq!(cdf(f64::INFINITY, &s, &p).unwrap(), 1.0);
        assert!((moment(0.0, &s, &p).unwrap() - 1.0).abs() < 1e-9);
        assert!(pdf(-1.0, &s, &p).is_err());
    }

    #[test]
    fn mismatched_series_is_rejected() {
        let p = FtrParams::new(10.0, 10.5, 0.5, 1.0).unwrap();
        let s = build_series(&p, 1e-9).unwrap();
        let q = FtrParams::new(10.0, 2.5, 0.5, 1.0).unwrap();
        assert!(pdf(1.0, &s, &q).is_err());
        // a different 2σ² is fine
        let r = p.with_two_sigma2(5.0).unwrap();
        assert!(pdf(1.0, &s, &r).is_ok());
    }
}
