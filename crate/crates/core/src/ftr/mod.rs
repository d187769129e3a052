//! Fluctuating two-ray fading: parameters, the mixture-weight series and the
//! distribution of the instantaneous SNR.

mod dist;
mod series;

use std::fmt;

use crate::error::{Error, Result};

pub use dist::{ccdf, cdf, cdf_lower_gamma_form, moment, moment_log_derivative, pdf};

pub(crate) use dist::poisson_table;
pub use series::{
    build_series, coeff_d, coeff_d_legendre, CoeffSeries, LegendreExpansion, DEFAULT_TOL,
    MAX_TRUNCATION_ORDER,
};

/// FTR fading parameters.
///
/// `k_ratio` is the specular-to-diffuse power ratio K, `m` the shape of the
/// unit-mean Gamma fluctuation, `delta` the specular similarity Δ and
/// `two_sigma2` the diffuse power 2σ² in linear SNR units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtrParams {
    k_ratio: f64,
    m: f64,
    delta: f64,
    two_sigma2: f64,
}

impl FtrParams {
    pub fn new(k_ratio: f64, m: f64, delta: f64, two_sigma2: f64) -> Result<Self> {
        if !(k_ratio >= 0.0) || !k_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!("K must be finite and >= 0, got {k_ratio}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("m must be finite and > 0, got {m}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta must lie in [0, 1], got {delta}")));
        }
        if !(two_sigma2 > 0.0) || !two_sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!("2σ² must be finite and > 0, got {two_sigma2}")));
        }
        let p = Self { k_ratio, m, delta, two_sigma2 };
        if !(p.legendre_radicand() > 0.0) {
            return Err(Error::InvalidParameter(format!("(m+K)^2 - (KΔ)^2 must be positive for {p}")));
        }
        Ok(p)
    }

    /// Parameters whose 2σ² reproduces the average SNR `avg_snr` (linear) under `link`.
    pub fn from_avg_snr(k_ratio: f64, m: f64, delta: f64, avg_snr: f64, link: &LinkBudget) -> Result<Self> {
        if !(avg_snr > 0.0) || !avg_snr.is_finite() {
            return Err(Error::InvalidParameter(format!("average SNR must be finite and > 0, got {avg_snr}")));
        }
        Self::new(k_ratio, m, delta, link.two_sigma2(avg_snr, k_ratio))
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

    pub fn two_sigma2(&self) -> f64 {
        self.two_sigma2
    }

    /// Same fading shape at a different diffuse power.
    pub fn with_two_sigma2(&self, two_sigma2: f64) -> Result<Self> {
        Self::new(self.k_ratio, self.m, self.delta, two_sigma2)
    }

    /// Mean SNR E{γ} = 2σ²(1 + K).
    pub fn mean_snr(&self) -> f64 {
        self.two_sigma2 * (1.0 + self.k_ratio)
    }

    /// (m+K)² − (KΔ)².
    pub fn legendre_radicand(&self) -> f64 {
        let a = self.m + self.k_ratio;
        let b = self.k_ratio * self.delta;
        (a - b) * (a + b)
    }

    /// Legendre argument (m+K) / sqrt((m+K)² − (KΔ)²), always >= 1.
    pub fn legendre_argument(&self) -> f64 {
        ((self.m + self.k_ratio) / self.legendre_radicand().sqrt()).max(1.0)
    }

    pub(crate) fn same_shape(&self, k_ratio: f64, m: f64, delta: f64) -> bool {
        self.k_ratio == k_ratio && self.m == m && self.delta == delta
    }
}

impl fmt::Display for FtrParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}, m={}, Δ={}, 2σ²={}", self.k_ratio, self.m, self.delta, self.two_sigma2)
    }
}

/// Link budget tying the diffuse power to the average received SNR:
/// `γ̄ = P_t · (E_b/N_0) · 2σ² · (1 + K) · r^{-η}`.
///
/// With every field at 1 (the default) this is `γ̄ = 2σ²(1 + K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub eb_over_n0: f64,
    pub path_loss_exp: f64,
    pub distance: f64,
    pub tx_power: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self { eb_over_n0: 1.0, path_loss_exp: 1.0, distance: 1.0, tx_power: 1.0 }
    }
}

impl LinkBudget {
    pub fn new(eb_over_n0: f64, path_loss_exp: f64, distance: f64, tx_power: f64) -> Result<Self> {
        for (name, v) in [
            ("Eb/N0", eb_over_n0),
            ("path-loss exponent", path_loss_exp),
            ("distance", distance),
            ("transmit power", tx_power),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { eb_over_n0, path_loss_exp, distance, tx_power })
    }

    /// Multiplier from 2σ²(1+K) to γ̄.
    pub fn gain(&self) -> f64 {
        self.tx_power * self.eb_over_n0 * self.distance.powf(-self.path_loss_exp)
    }

    pub fn avg_snr(&self, two_sigma2: f64, k_ratio: f64) -> f64 {
        self.gain() * two_sigma2 * (1.0 + k_ratio)
    }

    pub fn two_sigma2(&self, avg_snr: f64, k_ratio: f64) -> f64 {
        avg_snr / (self.gain() * (1.0 + k_ratio))
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(v: f64) -> f64 {
    10.0 * v.log10()
}
