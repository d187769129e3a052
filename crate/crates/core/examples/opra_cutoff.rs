//! Water-filling cutoff γ₀ versus average SNR.
use ftr_capacity::capacity::{opra_constraint, opra_cutoff_with_residual};
use ftr_capacity::ftr::{build_series, db_to_linear, FtrParams, LinkBudget, DEFAULT_TOL};

fn main() -> ftr_capacity::Result<()> {
    let shape = FtrParams::new(10.0, 2.5, 0.5, 1.0)?;
    let s = build_series(&shape, DEFAULT_TOL)?;
    println!("{:>7} {:>12} {:>10} {:>14}", "snr_dB", "gamma0", "residual", "f(gamma0/2)");
    for db in (-20..=60).step_by(10) {
        let p = FtrParams::from_avg_snr(10.0, 2.5, 0.5, db_to_linear(db as f64), &LinkBudget::default())?;
        let (g0, res) = opra_cutoff_with_residual(&s, &p)?;
        // the constraint is decreasing, so halving γ₀ overshoots the power budget
        println!("{db:>7} {g0:>12.8} {res:>10.1e} {:>14.6}", opra_constraint(&s, &p, g0 / 2.0)?);
    }
    Ok(())
}
