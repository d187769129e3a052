//! Average-SNR sweeps of every policy, the data behind a capacity-vs-SNR chart.

use std::io::Write;

use rayon::prelude::*;

use crate::capacity::{asymptotic, evaluate, Policy};
use crate::error::{Error, Result};
use crate::ftr::{build_series, db_to_linear, CoeffSeries, FtrParams, LinkBudget};

pub const SWEEP_HEADER: [&str; 6] = ["snr_db", "policy", "exact_nats", "asymptotic_nats", "cutoff", "trunc_order"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub k_ratio: f64,
    pub m: f64,
    pub delta: f64,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub points: usize,
    pub policies: Vec<Policy>,
    pub link: LinkBudget,
    pub tol: f64,
}

impl SweepSpec {
    /// The reference chart setup: K = 10, Δ = 0.5, 0 to 40 dB, all four policies
    /// with TCI at γ₀ = 0.1.
    pub fn reference(m: f64) -> Self {
        Self {
            k_ratio: 10.0,
            m,
            delta: 0.5,
            snr_db_start: 0.0,
            snr_db_stop: 40.0,
            points: 41,
            policies: vec![Policy::Opra, Policy::Ora, Policy::Ci, Policy::Tci { cutoff: 0.1 }],
            link: LinkBudget::default(),
            tol: crate::ftr::DEFAULT_TOL,
        }
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let step = (self.snr_db_stop - self.snr_db_start) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.snr_db_start + step * i as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.snr_db_stop > self.snr_db_start) {
            return Err(Error::InvalidParameter(format!(
                "sweep stop {} dB must exceed start {} dB",
                self.snr_db_stop, self.snr_db_start
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidParameter(format!("a sweep needs at least 2 points, got {}", self.points)));
        }
        if self.policies.is_empty() {
            return Err(Error::InvalidParameter("a sweep needs at least one policy".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub policy: Policy,
    pub exact_nats: f64,
    pub asymptotic_nats: Option<f64>,
    pub cutoff: Option<f64>,
    pub trunc_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrSweep {
    pub rows: Vec<SweepRow>,
}

fn policy_rank(p: &Policy) -> u8 {
    match p {
        Policy::Opra => 0,
        Policy::Ora => 1,
        Policy::Ci => 2,
        Policy::Tci { .. } => 3,
    }
}

fn point(spec: &SweepSpec, series: &CoeffSeries, policies: &[Policy], snr_db: f64) -> Result<Vec<SweepRow>> {
    let p = FtrParams::from_avg_snr(spec.k_ratio, spec.m, spec.delta, db_to_linear(snr_db), &spec.link)?;
    policies
        .iter()
        .map(|&policy| {
            let r = evaluate(policy, series, &p)?;
            Ok(SweepRow {
                snr_db,
                policy,
                exact_nats: r.capacity_nats,
                asymptotic_nats: asymptotic(&r, series, &p)?,
                cutoff: r.cutoff,
                trunc_order: r.truncation_order,
            })
        })
        .collect()
}

/// Evaluates every (point, policy) pair. Points run in parallel on the
/// current rayon pool; rows come back ordered by SNR, then opra, ora, ci, tci.
pub fn run_sweep(spec: &SweepSpec) -> Result<SnrSweep> {
    spec.validate()?;
    let shape = FtrParams::new(spec.k_ratio, spec.m, spec.delta, 1.0)?;
    let series = build_series(&shape, spec.tol)?;
    let mut policies = spec.policies.clone();
    policies.sort_by_key(policy_rank);
    let rows: Vec<Vec<SweepRow>> =
        spec.snr_grid().into_par_iter().map(|db| point(spec, &series, &policies, db)).collect::<Result<_>>()?;
    Ok(SnrSweep { rows: rows.concat() })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SnrSweep {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(e.into());
        w.write_record(SWEEP_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.snr_db.to_string(),
                r.policy.name().to_string(),
                r.exact_nats.to_string(),
                opt(r.asymptotic_nats),
                opt(r.cutoff),
                r.trunc_order.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}
