//! PDF, CDF and moments of the instantaneous SNR.
use ftr_capacity::ftr::{build_series, ccdf, cdf, moment, pdf, FtrParams, DEFAULT_TOL};

fn main() -> ftr_capacity::Result<()> {
    for m in [2.5, 10.5] {
        let p = FtrParams::new(10.0, m, 0.5, 1.0)?;
        let s = build_series(&p, DEFAULT_TOL)?;
        println!("m = {m}: mean {:.6} (E[γ] from series {:.6}), E[γ²] {:.4}",
            p.mean_snr(), moment(1.0, &s, &p)?, moment(2.0, &s, &p)?);
        println!("{:>8} {:>12} {:>12} {:>12}", "gamma", "pdf", "cdf", "ccdf");
        for g in [0.1, 1.0, 5.0, 11.0, 20.0, 40.0] {
            println!("{g:>8} {:>12.6e} {:>12.6e} {:>12.6e}", pdf(g, &s, &p)?, cdf(g, &s, &p)?, ccdf(g, &s, &p)?);
        }
        println!();
    }
    Ok(())
}
