//! Associated Legendre function of the first kind off the cut, `P_ν^μ(x)`
//! for real degree, integer order and `x >= 1`.
//!
//! Negative orders come from the Pfaff-transformed hypergeometric form
//!
//! ```text
//! P_ν^{-μ}(x) = w^{μ/2} / μ! · ((x+1)/2)^ν · ₂F₁(-ν, μ-ν; μ+1; w),   w = (x-1)/(x+1)
//! ```
//!
//! whose argument stays in [0, 1) for every `x >= 1`. Positive orders follow
//! from the order reflection `P_ν^{μ} = [Γ(ν+μ+1)/Γ(ν-μ+1)] P_ν^{-μ}`, with the
//! gamma ratio expanded as a finite product so integer degrees need no poles.

use super::gamma::ln_gamma_pos;
use super::{SpecfunError, SpecfunResult, MAX_ITERATIONS};

const EPS: f64 = 1e-17;
const RESCALE: f64 = 1e200;

/// `P_ν^μ(x)` as a plain `f64`.
pub fn legendre_p(degree: f64, order: i32, x: f64) -> SpecfunResult<f64> {
    let (ln_abs, sign) = legendre_p_signed_ln(degree, order, x)?;
    if sign == 0.0 {
        return Ok(0.0);
    }
    let v = sign * ln_abs.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::overflow(format!("P_{degree}^{order}({x}) exceeds f64 range")))
    }
}

/// `P_ν^μ(x)` as `(ln|P|, sign)`; `sign` is 0.0 when the value is exactly zero.
pub fn legendre_p_signed_ln(degree: f64, order: i32, x: f64) -> SpecfunResult<(f64, f64)> {
    if !degree.is_finite() || !x.is_finite() {
        return Err(SpecfunError::domain(format!("legendre_p needs finite arguments, got ν={degree}, x={x}")));
    }
    if x < 1.0 {
        return Err(SpecfunError::domain(format!("legendre_p is defined here for x >= 1, got {x}")));
    }
    let mu = order.unsigned_abs();
    let (mut ln_abs, mut sign) = negative_order(degree, mu, x)?;
    if sign == 0.0 || order <= 0 {
        return Ok((ln_abs, sign));
    }
    // Γ(ν+μ+1)/Γ(ν-μ+1) = Π_{i=1-μ}^{μ} (ν + i)
    for i in (1 - mu as i64)..=(mu as i64) {
        let factor = degree + i as f64;
        if factor == 0.0 {
            return Ok((f64::NEG_INFINITY, 0.0));
        }
        ln_abs += factor.abs().ln();
        sign *= factor.signum();
    }
    Ok((ln_abs, sign))
}

fn negative_order(degree: f64, mu: u32, x: f64) -> SpecfunResult<(f64, f64)> {
    if x == 1.0 {
        return Ok(if mu == 0 { (0.0, 1.0) } else { (f64::NEG_INFINITY, 0.0) });
    }
    let w = (x - 1.0) / (x + 1.0);
    let (ln_f, sign) = hypergeometric(degree, mu, w)?;
    if sign == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let m = mu as f64;
    let ln_prefactor = 0.5 * m * w.ln() - ln_gamma_pos(m + 1.0) + degree * ((x + 1.0) / 2.0).ln();
    Ok((ln_prefactor + ln_f, sign))
}

/// `₂F₁(-ν, μ-ν; μ+1; w)` for `0 < w < 1`, returned as `(ln|F|, sign)`.
fn hypergeometric(degree: f64, mu: u32, w: f64) -> SpecfunResult<(f64, f64)> {
    let a = -degree;
    let b = mu as f64 - degree;
    let c = mu as f64 + 1.0;
    let tail_factor = w / (1.0 - w);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut ln_scale = 0.0_f64;
    for n in 0..MAX_ITERATIONS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * w;
        sum += term;
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        // past n > ν every ratio is positive and below w, so the tail is geometric
        if term == 0.0 || (nf > degree && term.abs() * tail_factor <= EPS * sum.abs()) {
            if sum == 0.0 {
                return Ok((f64::NEG_INFINITY, 0.0));
            }
            return Ok((ln_scale + sum.abs().ln(), sum.signum()));
        }
    }
    Err(SpecfunError::no_convergence(format!(
        "hypergeometric series for P_{degree}^-{mu} did not converge at w={w}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_one() {
        for nu in [0.0, 0.5, 3.25, 40.0] {
            assert_eq!(legendre_p(nu, 0, 1.0).unwrap(), 1.0);
            assert_eq!(legendre_p(nu, 2, 1.0).unwrap(), 0.0);
            assert_eq!(legendre_p(nu, -3, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn low_degree_polynomials() {
        for x in [1.0, 1.3, 2.0, 5.0] {
            assert!((legendre_p(1.0, 0, x).unwrap() - x).abs() < 1e-14 * x);
            let p2 = 0.5 * (3.0 * x * x - 1.0);
            assert!((legendre_p(2.0, 0, x).unwrap() - p2).abs() < 1e-13 * p2);
            // type-3 convention: P_1^1(x) = sqrt(x^2 - 1)
            let p11 = (x * x - 1.0).sqrt();
            assert!((legendre_p(1.0, 1, x).unwrap() - p11).abs() < 1e-13 * p11.max(1.0));
            // order above an integer degree vanishes
            assert_eq!(legendre_p(2.0, 3, x).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_inside_the_cut() {
        assert!(legendre_p(1.5, 0, 0.99).is_err());
    }
}
