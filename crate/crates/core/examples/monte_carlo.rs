//! Simulated capacities against the closed forms.
use ftr_capacity::capacity::{ec_opra, ec_ora, ec_tci, Policy};
use ftr_capacity::ftr::{build_series, db_to_linear, FtrParams, LinkBudget, DEFAULT_TOL};
use ftr_capacity::mc::{mc_capacity, mc_power_constraint, McConfig};

fn main() -> ftr_capacity::Result<()> {
    let p = FtrParams::from_avg_snr(10.0, 2.5, 0.5, db_to_linear(10.0), &LinkBudget::default())?;
    let s = build_series(&p, DEFAULT_TOL)?;
    let cfg = McConfig::new(1_000_000, 42)?;

    let opra = ec_opra(&s, &p)?;
    let g0 = opra.cutoff;
    for (policy, exact) in [
        (Policy::Opra, opra.capacity_nats),
        (Policy::Ora, ec_ora(&s, &p)?.capacity_nats),
        (Policy::Tci { cutoff: 0.1 }, ec_tci(&s, &p, 0.1)?.capacity_nats),
    ] {
        let est = mc_capacity(policy, &p, g0, &cfg)?;
        println!("{:<10} exact {exact:.6}  mc {:.6} ± {:.6}  z = {:+.2}",
            policy.name(), est.mean, est.std_error, est.z_score(exact));
    }
    let power = mc_power_constraint(&p, g0.unwrap(), &cfg)?;
    println!("E[1/γ₀ − 1/γ; γ > γ₀] = {:.6} ± {:.6} (target 1)", power.mean, power.std_error);
    Ok(())
}
