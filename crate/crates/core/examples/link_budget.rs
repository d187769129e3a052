//! Mapping a physical link to the diffuse power 2σ².
//!
//! The SNR distribution has mean 2σ²(1+K), and the average SNR on a sweep
//! axis is that times the link gain. Holding the axis value fixed, a lossier
//! link means a larger 2σ² and so a larger rate.
use ftr_capacity::capacity::ec_ora;
use ftr_capacity::ftr::{build_series, db_to_linear, linear_to_db, FtrParams, LinkBudget, DEFAULT_TOL};

fn main() -> ftr_capacity::Result<()> {
    let shape = FtrParams::new(10.0, 10.5, 0.5, 1.0)?;
    let s = build_series(&shape, DEFAULT_TOL)?;
    let target = db_to_linear(20.0);
    println!("average SNR held at {:.0} dB", linear_to_db(target));
    println!("{:>6} {:>10} {:>14} {:>10}", "r", "gain dB", "2σ²", "ORA nats");
    for r in [1.0, 2.0, 5.0, 10.0, 20.0] {
        // Eb/N0 of 30 dB, path-loss exponent 3, unit transmit power
        let link = LinkBudget::new(db_to_linear(30.0), 3.0, r, 1.0)?;
        let p = FtrParams::from_avg_snr(10.0, 10.5, 0.5, target, &link)?;
        println!("{r:>6} {:>10.2} {:>14.6e} {:>10.5}", linear_to_db(link.gain()), p.two_sigma2(), ec_ora(&s, &p)?.capacity_nats);
    }
    Ok(())
}
