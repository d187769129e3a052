//! Incomplete gamma functions and the exponential integral.
//!
//! The workhorse is the scaled upper function `G(s, x) = e^x x^{-s} Γ(s, x)`,
//! which stays O(1)-ish for every order the capacity sums need and satisfies
//! `G(s, x) = (x G(s+1, x) - 1) / s`.

use super::gamma::{ln_gamma_1p, ln_gamma_pos, EULER_GAMMA};
use super::{SpecfunError, SpecfunResult, MAX_ITERATIONS};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
// largest argument that exp() can take without overflowing
const LN_MAX: f64 = 709.78;

fn check_finite(name: &str, s: f64, x: f64) -> SpecfunResult<()> {
    if s.is_finite() && x.is_finite() {
        Ok(())
    } else {
        Err(SpecfunError::domain(format!("{name}({s}, {x}) needs finite arguments")))
    }
}

/// Σ_n x^n / ((s+1)...(s+n)); then P(s,x) = x^s e^{-x} / Γ(s+1) times this.
fn lower_series(s: f64, x: f64) -> SpecfunResult<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut a = s;
    for _ in 0..MAX_ITERATIONS {
        a += 1.0;
        term *= x / a;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(SpecfunError::no_convergence(format!("lower incomplete gamma series at s={s}, x={x}")))
}

/// Continued fraction for the scaled upper function, modified Lentz.
/// Converges quickly for `x >= 1` when `s <= 0`, or `x >= s + 1`.
fn upper_cf(s: f64, x: f64) -> SpecfunResult<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITERATIONS {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(SpecfunError::no_convergence(format!("upper incomplete gamma continued fraction at s={s}, x={x}")))
}

/// Γ(f, x) for `f` in [0, 1) and `0 < x < 1`, written so the pole of Γ(f)
/// at `f -> 0` cancels analytically:
/// `Γ(f,x) = (Γ(1+f) - 1)/f - (x^f - 1)/f - x^f Σ_{n>=1} (-x)^n / (n! (f+n))`.
fn upper_small_x(f: f64, x: f64) -> SpecfunResult<f64> {
    let lnx = x.ln();
    let (gamma_part, power_part) = if f == 0.0 {
        (-EULER_GAMMA, lnx)
    } else {
        let lg = if f <= 0.5 { ln_gamma_1p(f) } else { ln_gamma_pos(1.0 + f) };
        (lg.exp_m1() / f, (f * lnx).exp_m1() / f)
    };
    let mut term = 1.0;
    let mut tail = 0.0;
    let mut converged = false;
    for n in 1..MAX_ITERATIONS {
        term *= -x / n as f64;
        let t = term / (f + n as f64);
        tail += t;
        if t.abs() < EPS * tail.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecfunError::no_convergence(format!("small-x incomplete gamma series at f={f}, x={x}")));
    }
    Ok(gamma_part - power_part - (f * lnx).exp() * tail)
}

/// Scaled upper incomplete gamma `e^x x^{-s} Γ(s, x)` for any real `s` and `x > 0`.
pub fn upper_inc_gamma_scaled(s: f64, x: f64) -> SpecfunResult<f64> {
    check_finite("upper_inc_gamma_scaled", s, x)?;
    if !(x > 0.0) {
        return Err(SpecfunError::domain(format!("upper incomplete gamma needs x > 0, got x={x}")));
    }
    let value = if x >= 1.0 && (s <= 0.0 || x >= s + 1.0) {
        upper_cf(s, x)?
    } else if s > 0.0 && (s >= 1.0 || x >= 1.0) {
        // x < s + 1: complement of the lower series is well conditioned
        let p = lower_series(s, x)? * (s * x.ln() - x - ln_gamma_pos(s + 1.0)).exp();
        let q = 1.0 - p;
        let ln_value = ln_gamma_pos(s) + q.ln() + x - s * x.ln();
        if ln_value > LN_MAX {
            return Err(SpecfunError::overflow(format!("scaled upper incomplete gamma at s={s}, x={x}")));
        }
        ln_value.exp()
    } else {
        // x < 1, s < 1: seed at the fractional order and recur downwards
        let floor = s.floor();
        let f = s - floor;
        let steps = (-floor) as usize;
        let mut g = upper_small_x(f, x)? * (x - f * x.ln()).exp();
        let mut order = f;
        for _ in 0..steps {
            order -= 1.0;
            g = (x * g - 1.0) / order;
        }
        g
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SpecfunError::overflow(format!("scaled upper incomplete gamma at s={s}, x={x}")))
    }
}

/// Upper incomplete gamma Γ(s, x) for any real `s` (including zero and
/// negative integers) and `x > 0`.
pub fn upper_inc_gamma(s: f64, x: f64) -> SpecfunResult<f64> {
    let g = upper_inc_gamma_scaled(s, x)?;
    let ln_factor = s * x.ln() - x;
    if ln_factor + g.ln() > LN_MAX {
        return Err(SpecfunError::overflow(format!("x^s e^-x overflows at s={s}, x={x}")));
    }
    Ok(g * ln_factor.exp())
}

/// Exponential integral E₁(x) = Γ(0, x), `x > 0`.
pub fn exp_int_e1(x: f64) -> SpecfunResult<f64> {
    upper_inc_gamma(0.0, x)
}

/// Lower incomplete gamma Υ(s, x) for `s > 0`, `x >= 0` (x may be +∞).
pub fn lower_inc_gamma(s: f64, x: f64) -> SpecfunResult<f64> {
    if !(s > 0.0) || !s.is_finite() || !(x >= 0.0) {
        return Err(SpecfunError::domain(format!("lower_inc_gamma needs s > 0, x >= 0, got s={s}, x={x}")));
    }
    let ln_gamma_s = ln_gamma_pos(s);
    if ln_gamma_s > LN_MAX {
        return Err(SpecfunError::overflow(format!("Γ({s}) exceeds f64 range")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(ln_gamma_s.exp());
    }
    let p = regularized_gamma_p(s, x)?;
    Ok(p * ln_gamma_s.exp())
}

/// Regularized lower incomplete gamma P(s, x) = Υ(s, x) / Γ(s), `s > 0`, `x >= 0`.
pub fn regularized_gamma_p(s: f64, x: f64) -> SpecfunResult<f64> {
    let (p, _) = regularized_pair(s, x)?;
    Ok(p)
}

/// Regularized upper incomplete gamma Q(s, x) = Γ(s, x) / Γ(s), `s > 0`, `x >= 0`.
pub fn regularized_gamma_q(s: f64, x: f64) -> SpecfunResult<f64> {
    let (_, q) = regularized_pair(s, x)?;
    Ok(q)
}

fn regularized_pair(s: f64, x: f64) -> SpecfunResult<(f64, f64)> {
    if !(s > 0.0) || !s.is_finite() || !(x >= 0.0) {
        return Err(SpecfunError::domain(format!("regularized gamma needs s > 0, x >= 0, got s={s}, x={x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    if x < s + 1.0 {
        let p = lower_series(s, x)? * (s * x.ln() - x - ln_gamma_pos(s + 1.0)).exp();
        Ok((p, 1.0 - p))
    } else {
        let q = upper_cf(s, x)? * (s * x.ln() - x - ln_gamma_pos(s)).exp();
        Ok((1.0 - q, q))
    }
}
