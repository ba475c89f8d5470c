//! Performance profiles: for each method, the fraction of matrices on which
//! its time is within a factor `tau` of the fastest method.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{ensure, Result};
use serde::{Deserialize, Serialize};

use crate::record::BenchRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub method: String,
    pub tau: f64,
    pub fraction: f64,
}

/// `1, 1 + step, ..., max`.
pub fn tau_grid(max: f64, step: f64) -> Result<Vec<f64>> {
    ensure!(step > 0.0 && max >= 1.0, "tau grid needs step > 0 and max >= 1");
    let steps = ((max - 1.0) / step + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| 1.0 + i as f64 * step).collect())
}

/// Profile curves over the records' matrices. Failed runs never count as
/// within any ratio; a matrix on which every method failed counts against
/// all of them.
pub fn performance_profile(records: &[BenchRecord], taus: &[f64]) -> Vec<ProfilePoint> {
    let mut methods: Vec<&str> = Vec::new();
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for r in records {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
        let b = best.entry(&r.matrix).or_insert(f64::INFINITY);
        if r.ok() {
            *b = b.min(r.seconds);
        }
    }
    let nmat = best.len().max(1) as f64;
    let mut out = Vec::with_capacity(methods.len() * taus.len());
    for m in methods {
        let ratios: Vec<f64> = records
            .iter()
            .filter(|r| r.method == m && r.ok())
            .map(|r| {
                let b = best[r.matrix.as_str()];
                if b > 0.0 {
                    r.seconds / b
                } else {
                    1.0
                }
            })
            .collect();
        for &tau in taus {
            let within = ratios.iter().filter(|&&q| q <= tau * (1.0 + 1e-12)).count();
            out.push(ProfilePoint {
                method: m.to_string(),
                tau,
                fraction: within as f64 / nmat,
            });
        }
    }
    out
}

pub fn write_profile(points: &[ProfilePoint], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}
