mod common;

use common::ks_distance;
use ftr_capacity::capacity::{ec_opra, ec_ora, ec_tci, Policy};
use ftr_capacity::ftr::{build_series, cdf, db_to_linear, FtrParams, LinkBudget};
use ftr_capacity::mc::*;
use ftr_capacity::specfun::exp_int_e1;

fn reference(m: f64, snr_db: f64) -> FtrParams {
    FtrParams::from_avg_snr(10.0, m, 0.5, db_to_linear(snr_db), &LinkBudget::default()).unwrap()
}

fn ks_against_cdf(p: &FtrParams, seed: u64) -> f64 {
    let s = build_series(p, 1e-9).unwrap();
    let mut x = sample_snr(p, &McConfig::new(1_000_000, seed).unwrap()).unwrap();
    x.sort_by(f64::total_cmp);
    ks_distance(&x, |g| cdf(g, &s, p).unwrap())
}

#[test]
fn sampler_matches_analytic_cdf() {
    let p = FtrParams::new(10.0, 10.5, 0.5, 1.0).unwrap();
    let d = ks_against_cdf(&p, 7);
    assert!(d < 0.002, "KS {d}");
}

#[test]
fn sampler_matches_at_equal_amplitudes() {
    let p = FtrParams::new(10.0, 10.5, 1.0, 1.0).unwrap();
    let d = ks_against_cdf(&p, 8);
    assert!(d < 0.002, "KS {d}");
}

#[test]
fn rayleigh_samples_have_the_diffuse_mean() {
    let p = FtrParams::new(0.0, 1.0, 0.0, 3.0).unwrap();
    let x = sample_snr(&p, &McConfig::new(1_000_000, 3).unwrap()).unwrap();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - 3.0).abs() < 3.0 * (var / n).sqrt());
}

#[test]
fn rayleigh_ora_estimate() {
    let p = FtrParams::new(0.0, 1.0, 0.0, 10.0).unwrap();
    let est = mc_capacity(Policy::Ora, &p, None, &McConfig::new(1_000_000, 11).unwrap()).unwrap();
    let oracle = 0.1f64.exp() * exp_int_e1(0.1).unwrap();
    assert!(est.z_score(oracle).abs() < 3.0, "{est:?} vs {oracle}");
}

#[test]
fn opra_and_power_constraint_at_20_db() {
    let p = reference(10.5, 20.0);
    let s = build_series(&p, 1e-9).unwrap();
    let exact = ec_opra(&s, &p).unwrap();
    let g0 = exact.cutoff.unwrap();
    let cfg = McConfig::new(1_000_000, 21).unwrap();
    let est = mc_capacity(Policy::Opra, &p, Some(g0), &cfg).unwrap();
    assert!(est.z_score(exact.capacity_nats).abs() < 3.0);
    let power = mc_power_constraint(&p, g0, &cfg).unwrap();
    assert!(power.z_score(1.0).abs() < 3.0, "{power:?}");
}

#[test]
fn tci_at_10_db() {
    let p = reference(10.5, 10.0);
    let s = build_series(&p, 1e-9).unwrap();
    let exact = ec_tci(&s, &p, 0.1).unwrap().capacity_nats;
    let est = mc_capacity(Policy::Tci { cutoff: 0.1 }, &p, None, &McConfig::new(1_000_000, 5).unwrap()).unwrap();
    assert!(est.z_score(exact).abs() < 3.0, "{est:?} vs {exact}");
}

#[test]
fn opra_needs_a_cutoff() {
    let p = reference(2.5, 0.0);
    assert!(mc_capacity(Policy::Opra, &p, None, &McConfig::new(1000, 1).unwrap()).is_err());
}

#[test]
fn reproducible_across_thread_counts() {
    let p = reference(2.5, 10.0);
    let cfg = McConfig::new(200_000, 99).unwrap().with_chunk_size(4096).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| mc_capacity(Policy::Ora, &p, None, &cfg).unwrap());
    let b = many.install(|| mc_capacity(Policy::Ora, &p, None, &cfg).unwrap());
    assert_eq!(a, b);
    let c = mc_capacity(Policy::Ora, &p, None, &McConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn standard_error_scales_with_root_n() {
    let p = reference(10.5, 20.0);
    let se: Vec<f64> = [10_000usize, 100_000, 1_000_000]
        .iter()
        .map(|&n| mc_capacity(Policy::Ora, &p, None, &McConfig::new(n, 42).unwrap()).unwrap().std_error)
        .collect();
    for w in se.windows(2) {
        let ratio = w[1] / w[0];
        assert!((ratio / 0.316 - 1.0).abs() < 0.2, "{ratio}");
    }
}

#[test]
fn ora_estimate_matches_analytic_on_reference_channel() {
    let p = reference(10.5, 20.0);
    let s = build_series(&p, 1e-9).unwrap();
    let exact = ec_ora(&s, &p).unwrap().capacity_nats;
    let est = mc_capacity(Policy::Ora, &p, None, &McConfig::new(1_000_000, 2).unwrap()).unwrap();
    assert!(est.z_score(exact).abs() < 3.0);
}

#[test]
fn inverse_mean_keeps_growing() {
    let p = reference(10.5, 10.0);
    let est = mc_capacity(Policy::Ci, &p, None, &McConfig::new(10_000_000, 17).unwrap()).unwrap();
    let marks = &est.checkpoints;
    assert_eq!(marks.iter().map(|m| m.0).collect::<Vec<_>>(), vec![1000, 10_000, 100_000, 1_000_000, 10_000_000]);
    assert!(marks[4].1 > marks[1].1, "{marks:?}");
}
