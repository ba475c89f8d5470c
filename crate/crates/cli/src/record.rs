use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

/// One row of benchmark output.
///
/// CSV columns, in order: `matrix, n, method, backend, ordering, pr,
/// merge_cap, repeats, aggregation, seconds, flops, factor_nnz,
/// panel_storage, workspace_peak, total_storage, assembly_ops,
/// kernel_calls, status`. `merge_cap` is empty when merging is off;
/// `status` is `ok` or the error that stopped the run, in which case the
/// numeric columns are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub matrix: String,
    pub n: usize,
    pub method: String,
    pub backend: String,
    pub ordering: String,
    pub pr: bool,
    pub merge_cap: Option<f64>,
    pub repeats: usize,
    pub aggregation: String,
    /// Median wall time of the numerical factorization.
    pub seconds: f64,
    pub flops: u64,
    pub factor_nnz: usize,
    pub panel_storage: usize,
    pub workspace_peak: usize,
    pub total_storage: usize,
    pub assembly_ops: u64,
    pub kernel_calls: usize,
    pub status: String,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

pub fn write_records(records: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows to a CSV file, writing the header only if the file is new or
/// empty.
pub fn append_records(records: &[BenchRecord], path: &Path) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(input: impl Read) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Median of an odd-length sample.
pub fn median(mut xs: Vec<f64>) -> f64 {
    assert!(xs.len() % 2 == 1, "median needs an odd sample");
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(method: &str, seconds: f64) -> BenchRecord {
        BenchRecord {
            matrix: "m, with comma".into(),
            n: 9,
            method: method.into(),
            backend: "reference".into(),
            ordering: "mindeg".into(),
            pr: true,
            merge_cap: Some(12.5),
            repeats: 7,
            aggregation: "median".into(),
            seconds,
            flops: 100,
            factor_nnz: 33,
            panel_storage: 36,
            workspace_peak: 0,
            total_storage: 36,
            assembly_ops: 0,
            kernel_calls: 8,
            status: "ok".into(),
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut rows = vec![sample("rlb", 0.25), sample("mf", 1e-7)];
        rows[1].merge_cap = None;
        rows[1].status = "error: matrix is not positive definite".into();
        let mut buf = Vec::new();
        write_records(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("matrix,n,method,backend,ordering,pr,merge_cap,repeats,aggregation,seconds,"));
        assert_eq!(read_records(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn appending_writes_one_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        append_records(&[sample("rl", 1.0)], &path).unwrap();
        append_records(&[sample("ll", 2.0)], &path).unwrap();
        let back = read_records(std::fs::File::open(&path).unwrap()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].method, "ll");
    }

    #[test]
    fn median_of_odd_samples() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![5.0]), 5.0);
    }
}
