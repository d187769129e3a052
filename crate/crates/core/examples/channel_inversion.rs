//! Why full channel inversion carries no rate: E[1/γ] grows without bound.
use ftr_capacity::capacity::{ec_ci, ec_tci, tci_cutoff_for_outage, Policy};
use ftr_capacity::ftr::{build_series, db_to_linear, FtrParams, LinkBudget, DEFAULT_TOL};
use ftr_capacity::mc::{mc_capacity, McConfig};

fn main() -> ftr_capacity::Result<()> {
    let p = FtrParams::from_avg_snr(10.0, 10.5, 0.5, db_to_linear(20.0), &LinkBudget::default())?;
    let s = build_series(&p, DEFAULT_TOL)?;
    let ci = ec_ci(&s, &p)?;
    println!("CI: {} nats, divergent = {}", ci.capacity_nats, ci.divergent);

    let est = mc_capacity(Policy::Ci, &p, None, &McConfig::new(10_000_000, 3)?)?;
    // rare deep fades keep pushing the estimate up; there is no limit to converge to
    println!("running sample mean of 1/γ:");
    for (n, mean) in &est.checkpoints {
        println!("  n = {n:>9}  {mean:.4}");
    }

    // truncating the deepest fades restores a finite rate
    for outage in [0.001, 0.01, 0.1] {
        let g0 = tci_cutoff_for_outage(&s, &p, outage)?;
        println!("TCI at {:>5.1}% outage: γ₀ = {g0:.5}, {:.5} nats", outage * 100.0, ec_tci(&s, &p, g0)?.capacity_nats);
    }
    Ok(())
}
