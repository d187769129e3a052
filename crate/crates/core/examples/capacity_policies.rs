//! All four power and rate adaptation policies at one operating point.
use ftr_capacity::capacity::{asymptotic, evaluate, Policy};
use ftr_capacity::ftr::{build_series, db_to_linear, FtrParams, LinkBudget, DEFAULT_TOL};

fn main() -> ftr_capacity::Result<()> {
    let snr_db = 20.0;
    let p = FtrParams::from_avg_snr(10.0, 10.5, 0.5, db_to_linear(snr_db), &LinkBudget::default())?;
    let s = build_series(&p, DEFAULT_TOL)?;
    println!("K = 10, m = 10.5, Δ = 0.5 at {snr_db} dB (2σ² = {:.4})", p.two_sigma2());
    for policy in [Policy::Opra, Policy::Ora, Policy::Ci, Policy::Tci { cutoff: 0.1 }] {
        let r = evaluate(policy, &s, &p)?;
        let asym = asymptotic(&r, &s, &p)?.map(|a| format!("{a:.5}")).unwrap_or_else(|| "-".into());
        let note = if r.divergent { "  (E[1/γ] diverges)" } else { "" };
        println!("{:<12} {:.5} nats = {:.5} bit/s/Hz, high-SNR form {asym}{note}",
            policy.to_string(), r.capacity_nats, r.capacity_nats / std::f64::consts::LN_2);
    }
    Ok(())
}
