//! Mixture weights of the SNR distribution and the Legendre cross-check.
use ftr_capacity::ftr::{build_series, coeff_d, coeff_d_legendre, FtrParams, DEFAULT_TOL};

fn main() -> ftr_capacity::Result<()> {
    let p = FtrParams::new(10.0, 10.5, 0.5, 1.0)?;
    let s = build_series(&p, DEFAULT_TOL)?;
    println!("{p}");
    println!("truncation order J = {}, |Σw − 1| = {:.2e}", s.truncation_order(), s.normalization_defect());

    println!("{:>3} {:>24} {:>24} {:>10}", "j", "d_j (integral)", "d_j (Legendre)", "cond");
    for j in [0, 1, 2, 5, 10, 20] {
        let leg = coeff_d_legendre(j, &p)?;
        println!("{j:>3} {:>24.16e} {:>24.16e} {:>10.1e}", coeff_d(j, &p)?, leg.value, leg.condition);
    }

    // most of the mass sits near j ≈ K
    let (peak, w) = s.weights().iter().enumerate().fold((0, 0.0), |a, (j, &w)| if w > a.1 { (j, w) } else { a });
    println!("largest weight w_{peak} = {w:.6}");
    Ok(())
}
