//! Capacity-vs-SNR sweep for two shadowing levels, written as CSV.
//!
//! `cargo run --example sweep_csv -- out_dir` writes sweep_m2.5.csv and
//! sweep_m10.5.csv; without an argument the first table goes to stdout.
use std::fs::File;
use std::path::PathBuf;

use ftr_capacity::{run_sweep, SweepSpec};

fn main() -> ftr_capacity::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from);
    for m in [2.5, 10.5] {
        let sweep = run_sweep(&SweepSpec::reference(m))?;
        match &dir {
            Some(d) => {
                let path = d.join(format!("sweep_m{m}.csv"));
                sweep.write_csv(File::create(&path)?)?;
                println!("wrote {} rows to {}", sweep.rows.len(), path.display());
            }
            None if m == 2.5 => sweep.write_csv(std::io::stdout().lock())?,
            None => {}
        }
    }
    Ok(())
}
