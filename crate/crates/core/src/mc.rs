//! Monte-Carlo ground truth drawn from the physical FTR signal model
//!
//! ```text
//! γ = |√ζ V₁ e^{iφ₁} + √ζ V₂ e^{iφ₂} + X + iY|²
//! ```
//!
//! with ζ ~ Gamma(m, mean 1), uniform phases, X, Y ~ N(0, σ²) and specular
//! amplitudes `V₁,₂ = √(σ²K(1 ± √(1−Δ²)))`.
//!
//! Samples are generated in fixed-size chunks. Chunk `i` draws from ChaCha8
//! stream `i` of the configured seed, and per-chunk statistics are merged in
//! chunk order, so results are bit-identical for a given (seed, chunk size,
//! sample count) whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};
use rayon::prelude::*;

use crate::capacity::Policy;
use crate::error::{Error, Result};
use crate::ftr::FtrParams;

pub const MIN_SAMPLES: usize = 1000;
pub const DEFAULT_CHUNK_SIZE: usize = 1 << 16;
/// Samples below this are clamped before taking 1/γ.
pub const CLAMP_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        Self { samples, seed, chunk_size: DEFAULT_CHUNK_SIZE }.validated()
    }

    pub fn with_chunk_size(self, chunk_size: usize) -> Result<Self> {
        Self { chunk_size, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "Monte-Carlo needs at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidParameter("chunk size must be positive".into()));
        }
        Ok(self)
    }

    fn chunks(&self) -> impl IndexedParallelIterator<Item = (u64, usize)> + '_ {
        let n = self.samples.div_ceil(self.chunk_size);
        (0..n).into_par_iter().map(move |i| (i as u64, self.chunk_size.min(self.samples - i * self.chunk_size)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √samples (delta method for TCI and CI).
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    /// Samples raised to [`CLAMP_FLOOR`] before inversion.
    pub clamped: u64,
    /// CI only: running mean of 1/γ after 10³, 10⁴, ... samples.
    pub checkpoints: Vec<(usize, f64)>,
}

impl McEstimate {
    /// (analytic − mean) / std_error.
    pub fn z_score(&self, analytic: f64) -> f64 {
        (analytic - self.mean) / self.std_error
    }
}

/// Draws FTR SNR samples for one fading realization each.
#[derive(Debug, Clone)]
pub struct SnrSampler {
    gamma: Gamma<f64>,
    diffuse: Normal<f64>,
    v1: f64,
    v2: f64,
}

impl SnrSampler {
    pub fn new(p: &FtrParams) -> Result<Self> {
        let sigma2 = 0.5 * p.two_sigma2();
        let root = (1.0 - p.delta() * p.delta()).max(0.0).sqrt();
        let gamma = Gamma::new(p.m(), 1.0 / p.m())
            .map_err(|e| Error::InvalidParameter(format!("Gamma fluctuation for {p}: {e}")))?;
        let diffuse =
            Normal::new(0.0, sigma2.sqrt()).map_err(|e| Error::InvalidParameter(format!("diffuse term for {p}: {e}")))?;
        Ok(Self {
            gamma,
            diffuse,
            v1: (sigma2 * p.k_ratio() * (1.0 + root)).sqrt(),
            v2: (sigma2 * p.k_ratio() * (1.0 - root)).sqrt(),
        })
    }

    /// Specular amplitudes (V₁, V₂).
    pub fn amplitudes(&self) -> (f64, f64) {
        (self.v1, self.v2)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let tau = std::f64::consts::TAU;
        let z = self.gamma.sample(rng).sqrt();
        let (s1, c1) = (tau * rng.random::<f64>()).sin_cos();
        let (s2, c2) = (tau * rng.random::<f64>()).sin_cos();
        let re = z * (self.v1 * c1 + self.v2 * c2) + self.diffuse.sample(rng);
        let im = z * (self.v1 * s1 + self.v2 * s2) + self.diffuse.sample(rng);
        re * re + im * im
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// All samples of a run, in chunk order.
pub fn sample_snr(p: &FtrParams, cfg: &McConfig) -> Result<Vec<f64>> {
    let sampler = SnrSampler::new(p)?;
    let chunks: Vec<Vec<f64>> = cfg
        .chunks()
        .map(|(i, n)| {
            let mut rng = chunk_rng(cfg.seed, i);
            (0..n).map(|_| sampler.sample(&mut rng)).collect()
        })
        .collect();
    Ok(chunks.concat())
}

/// Running first and second co-moments of a pair (u, v), mergeable.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mu: f64,
    mv: f64,
    cuu: f64,
    cvv: f64,
    cuv: f64,
}

impl Moments {
    fn push(&mut self, u: f64, v: f64) {
        self.n += 1.0;
        let du = u - self.mu;
        let dv = v - self.mv;
        self.mu += du / self.n;
        self.mv += dv / self.n;
        self.cuu += du * (u - self.mu);
        self.cvv += dv * (v - self.mv);
        self.cuv += du * (v - self.mv);
    }

    fn merge(self, o: Self) -> Self {
        let n = self.n + o.n;
        if n == 0.0 {
            return self;
        }
        let du = o.mu - self.mu;
        let dv = o.mv - self.mv;
        let f = self.n * o.n / n;
        Self {
            n,
            mu: self.mu + du * o.n / n,
            mv: self.mv + dv * o.n / n,
            cuu: self.cuu + o.cuu + du * du * f,
            cvv: self.cvv + o.cvv + dv * dv * f,
            cuv: self.cuv + o.cuv + du * dv * f,
        }
    }

    fn var_u(&self) -> f64 {
        self.cuu / (self.n - 1.0)
    }
}

#[derive(Debug, Default)]
struct ChunkStats {
    moments: Moments,
    clamped: u64,
    // (global sample count, Σ 1/γ over the chunk so far)
    marks: Vec<(usize, f64)>,
    inv_sum: f64,
}

/// Merged moments, clamp count and CI checkpoints.
type RunOutput = (Moments, u64, Vec<(usize, f64)>);

fn run<F>(p: &FtrParams, cfg: &McConfig, track_marks: bool, f: F) -> Result<RunOutput>
where
    F: Fn(f64) -> (f64, f64) + Sync,
{
    let sampler = SnrSampler::new(p)?;
    let stats: Vec<ChunkStats> = cfg
        .chunks()
        .map(|(i, n)| {
            let mut rng = chunk_rng(cfg.seed, i);
            let base = i as usize * cfg.chunk_size;
            let mut st = ChunkStats::default();
            for k in 0..n {
                let mut g = sampler.sample(&mut rng);
                if g < CLAMP_FLOOR {
                    g = CLAMP_FLOOR;
                    st.clamped += 1;
                }
                let (u, v) = f(g);
                st.moments.push(u, v);
                if track_marks {
                    st.inv_sum += 1.0 / g;
                    let count = base + k + 1;
                    if count >= MIN_SAMPLES && is_power_of_ten(count) {
                        st.marks.push((count, st.inv_sum));
                    }
                }
            }
            st
        })
        .collect();

    let mut total = Moments::default();
    let mut clamped = 0;
    let mut prefix = 0.0;
    let mut checkpoints = Vec::new();
    for st in stats {
        total = total.merge(st.moments);
        clamped += st.clamped;
        for (count, partial) in st.marks {
            checkpoints.push((count, (prefix + partial) / count as f64));
        }
        prefix += st.inv_sum;
    }
    Ok((total, clamped, checkpoints))
}

fn is_power_of_ten(mut n: usize) -> bool {
    while n > 0 && n.is_multiple_of(10) {
        n /= 10;
    }
    n == 1
}

/// Empirical capacity under `policy`. OPRA needs its solved cutoff in `g0`;
/// TCI uses the cutoff it carries.
///
/// For CI the estimate is `ln(1 + 1/mean(1/γ))`, which drifts towards zero as
/// the sample count grows; `checkpoints` records the running mean of 1/γ.
pub fn mc_capacity(policy: Policy, p: &FtrParams, g0: Option<f64>, cfg: &McConfig) -> Result<McEstimate> {
    let finish = |mean: f64, std_error: f64, clamped: u64, checkpoints: Vec<(usize, f64)>| McEstimate {
        mean,
        std_error,
        samples: cfg.samples,
        seed: cfg.seed,
        clamped,
        checkpoints,
    };
    let n = cfg.samples as f64;
    match policy {
        Policy::Ora => {
            let (m, c, _) = run(p, cfg, false, |g| (g.ln_1p(), 0.0))?;
            Ok(finish(m.mu, (m.var_u() / n).sqrt(), c, Vec::new()))
        }
        Policy::Opra => {
            let g0 = require_cutoff(g0)?;
            let (m, c, _) = run(p, cfg, false, |g| (if g > g0 { (g / g0).ln() } else { 0.0 }, 0.0))?;
            Ok(finish(m.mu, (m.var_u() / n).sqrt(), c, Vec::new()))
        }
        Policy::Tci { cutoff } => {
            let g0 = require_cutoff(Some(cutoff))?;
            let (m, c, _) = run(p, cfg, false, |g| if g >= g0 { (1.0 / g, 1.0) } else { (0.0, 0.0) })?;
            let (mean, se) = ratio_estimate(&m);
            Ok(finish(mean, se, c, Vec::new()))
        }
        Policy::Ci => {
            let (m, c, marks) = run(p, cfg, true, |g| (1.0 / g, 1.0))?;
            let (mean, se) = ratio_estimate(&m);
            Ok(finish(mean, se, c, marks))
        }
    }
}

/// `ln(1 + 1/ū)·v̄` with its delta-method standard error.
fn ratio_estimate(m: &Moments) -> (f64, f64) {
    let (u, v) = (m.mu, m.mv);
    if u <= 0.0 {
        return (0.0, 0.0);
    }
    let l = (1.0 / u).ln_1p();
    let du = -v / (u * (u + 1.0));
    let dv = l;
    let var = (du * du * m.cuu + 2.0 * du * dv * m.cuv + dv * dv * m.cvv) / (m.n - 1.0);
    (l * v, (var.max(0.0) / m.n).sqrt())
}

fn require_cutoff(g0: Option<f64>) -> Result<f64> {
    match g0 {
        Some(g) if g > 0.0 && g.is_finite() => Ok(g),
        Some(g) => Err(Error::InvalidParameter(format!("cutoff γ₀ must be finite and > 0, got {g}"))),
        None => Err(Error::InvalidParameter("OPRA Monte-Carlo needs the solved cutoff γ₀".into())),
    }
}

/// Sample mean of `(1/γ₀ − 1/γ)·1{γ > γ₀}`; equals 1 at the OPRA cutoff.
pub fn mc_power_constraint(p: &FtrParams, g0: f64, cfg: &McConfig) -> Result<McEstimate> {
    let g0 = require_cutoff(Some(g0))?;
    let (m, c, _) = run(p, cfg, false, |g| (if g > g0 { 1.0 / g0 - 1.0 / g } else { 0.0 }, 0.0))?;
    Ok(McEstimate {
        mean: m.mu,
        std_error: (m.var_u() / cfg.samples as f64).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
        clamped: c,
        checkpoints: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitudes_invert_power_and_similarity() {
        let p = FtrParams::new(10.0, 10.5, 0.5, 2.0).unwrap();
        let (v1, v2) = SnrSampler::new(&p).unwrap().amplitudes();
        assert!((v1 * v1 + v2 * v2 - 2.0 * 10.0).abs() < 1e-12);
        assert!((2.0 * v1 * v2 / (v1 * v1 + v2 * v2) - 0.5).abs() < 1e-12);
        let eq = FtrParams::new(10.0, 10.5, 1.0, 2.0).unwrap();
        let (a, b) = SnrSampler::new(&eq).unwrap().amplitudes();
        assert_eq!(a, b);
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let data: Vec<(f64, f64)> = (0..100).map(|i| ((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut whole = Moments::default();
        data.iter().for_each(|&(u, v)| whole.push(u, v));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        data[..37].iter().for_each(|&(u, v)| a.push(u, v));
        data[37..].iter().for_each(|&(u, v)| b.push(u, v));
        let merged = a.merge(b);
        assert!((merged.cuu - whole.cuu).abs() < 1e-12);
        assert!((merged.cuv - whole.cuv).abs() < 1e-12);
        assert!((merged.mv - whole.mv).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(999, 1).is_err());
        assert!(McConfig::new(1000, 1).unwrap().with_chunk_size(0).is_err());
        assert!(is_power_of_ten(10_000) && !is_power_of_ten(2000));
    }
}
