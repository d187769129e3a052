//! Gamma and digamma for positive real arguments.

use super::{SpecfunError, SpecfunResult};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// zeta(k) - 1 for k = 2, 3, ..., 60
const ZETA_MINUS_ONE: [f64; 59] = [
    6.44934066848226406e-01,
    2.02056903159594292e-01,
    8.23232337111381857e-02,
    3.69277551433699266e-02,
    1.73430619844491402e-02,
    8.34927738192282713e-03,
    4.07735619794433960e-03,
    2.00839282608221426e-03,
    9.94575127818085256e-04,
    4.94188604119464529e-04,
    2.46086553308048320e-04,
    1.22713347578489145e-04,
    6.12481350587048277e-05,
    3.05882363070204933e-05,
    1.52822594086518710e-05,
    7.63719763789976257e-06,
    3.81729326499984022e-06,
    1.90821271655393897e-06,
    9.53962033872796212e-07,
    4.76932986787806447e-07,
    2.38450502727733004e-07,
    1.19219925965311064e-07,
    5.96081890512594801e-08,
    2.98035035146522793e-08,
    1.49015548283650427e-08,
    7.45071178983543006e-09,
    3.72533402478845728e-09,
    1.86265972351304914e-09,
    9.31327432419668166e-10,
    4.65662906503378366e-10,
    2.32831183367650534e-10,
    1.16415501727005193e-10,
    5.82077208790270145e-11,
    2.91038504449710001e-11,
    1.45519218910419849e-11,
    7.27595983505748180e-12,
    3.63797954737865086e-12,
    1.81898965030706607e-12,
    9.09494784026388841e-13,
    4.54747378304215422e-13,
    2.27373684582465244e-13,
    1.13686840768022791e-13,
    5.68434198762758542e-14,
    2.84217097688930200e-14,
    1.42108548280316083e-14,
    7.10542739521085271e-15,
    3.55271369133711393e-15,
    1.77635684357912041e-15,
    8.88178421093081619e-16,
    4.44089210314381313e-16,
    2.22044605079804191e-16,
    1.11022302514106615e-16,
    5.55111512484548099e-17,
    2.77555756213612391e-17,
    1.38777878097252319e-17,
    6.93889390454415344e-18,
    3.46944695216592254e-18,
    1.73472347604757655e-18,
    8.67361738011993300e-19,
];

/// `ln Γ(1 + f)` for `|f| <= 0.5`, accurate to a few ulp relative even as `f -> 0`.
pub(crate) fn ln_gamma_1p(f: f64) -> f64 {
    debug_assert!(f.abs() <= 0.5 + 1e-12);
    // ln Γ(1+f) = -γf + (f - ln(1+f)) + Σ_{k>=2} (-1)^k (ζ(k) - 1) f^k / k
    let mut acc = 0.0;
    let mut pow = f;
    for (i, z) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -f;
        let term = z * pow / k;
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    // pow carries (-1)^(k-1) f^k, so flip the sign once at the end
    -EULER_GAMMA * f + (f - f.ln_1p()) - acc
}

fn stirling_ln_gamma(x: f64) -> f64 {
    // Valid for x >= 10; the omitted term is below 1e-17 there.
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in C {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> SpecfunResult<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_1p(x) - x.ln()
    } else if x < 1.5 {
        ln_gamma_1p(x - 1.0)
    } else if x < 2.5 {
        let f = x - 2.0;
        f.ln_1p() + ln_gamma_1p(f)
    } else if x < 10.0 {
        // walk down into [1.5, 2.5) and multiply the shifted factors back in
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        let f = y - 2.0;
        f.ln_1p() + ln_gamma_1p(f) + prod.ln()
    } else {
        stirling_ln_gamma(x)
    }
}

/// Γ(x) for `x > 0`; overflows to an error past x ≈ 171.6.
pub fn gamma(x: f64) -> SpecfunResult<f64> {
    let v = log_gamma(x)?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::overflow(format!("gamma({x}) exceeds f64 range")))
    }
}

/// Digamma ψ(x) for `x > 0`.
pub fn digamma(x: f64) -> SpecfunResult<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::domain(format!("digamma requires finite x > 0, got {x}")));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 12.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // Bernoulli tail: -Σ B_2k / (2k x^2k)
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    shift + x.ln() - 0.5 / x - tail
}

/// ψ(n + 1) for integer `n >= 0`: harmonic number minus γ.
pub fn digamma_int_plus_one(n: usize) -> f64 {
    if n < 64 {
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        h - EULER_GAMMA
    } else {
        digamma_pos(n as f64 + 1.0)
    }
}
