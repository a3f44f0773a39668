//! Serializable metric reports: one JSON document per mesh/point-set pair
//! and flat CSV rows for batch tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Mesh, PointSet};
use crate::metrics::{
    chamfer, dpvi_histogram, emd_subsampled, it_metrics, mapping_stats, vc_metrics_multi, DEFAULT_EMD_CAP,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdEntry {
    pub total: f64,
    pub part1: f64,
    pub part2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcEntry {
    pub n_vc: usize,
    pub n_vc_prime: usize,
    pub sigma_vc: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItEntry {
    pub f_it: usize,
    pub v_it: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpviEntry {
    pub bins: Vec<String>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub cd: CdEntry,
    pub emd: f64,
    pub vc: Vec<VcEntry>,
    pub it: ItEntry,
    pub dpvi: DpviEntry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub rhos: Vec<f64>,
    /// EMD subsample size; `None` uses the smaller set size, bounded by
    /// [`DEFAULT_EMD_SUBSAMPLE`].
    pub emd_points: Option<usize>,
    pub seed: u64,
}

pub const DEFAULT_EMD_SUBSAMPLE: usize = 1024;

impl Default for EvalOptions {
    fn default() -> Self {
        Self { rhos: vec![0.25, 0.5], emd_points: None, seed: 0 }
    }
}

/// Full metric suite for a mesh against a ground-truth point set.
pub fn evaluate<T: Scalar>(mesh: &Mesh<T>, points: &PointSet<T>, opts: &EvalOptions) -> Result<MetricReport> {
    let s2 = mesh.vertices();
    let cd = chamfer(points, s2)?;
    let smaller = points.len().min(s2.len());
    let emd_n = opts.emd_points.unwrap_or(smaller.min(DEFAULT_EMD_SUBSAMPLE));
    if emd_n > DEFAULT_EMD_CAP {
        return Err(Error::EmdCapExceeded { n: emd_n, cap: DEFAULT_EMD_CAP });
    }
    let emd = emd_subsampled(points, s2, emd_n, opts.seed)?;
    let vc = vc_metrics_multi(s2, points, &opts.rhos)?;
    let it = it_metrics(mesh)?;
    let stats = mapping_stats(&cd.tables, points.len(), s2.len())?;
    let dpvi = dpvi_histogram(&stats);
    Ok(MetricReport {
        cd: CdEntry {
            total: cd.total.to_f64_lossy(),
            part1: cd.part1.to_f64_lossy(),
            part2: cd.part2.to_f64_lossy(),
        },
        emd: emd.to_f64_lossy(),
        vc: vc
            .into_iter()
            .map(|r| VcEntry { n_vc: r.n_vc, n_vc_prime: r.n_vc_prime, sigma_vc: r.sigma_vc, rho: r.rho })
            .collect(),
        it: ItEntry { f_it: it.f_it, v_it: it.v_it },
        dpvi: DpviEntry { bins: dpvi.bins, counts: dpvi.counts },
    })
}

/// Header of [`report_csv_rows`]: CD and EMD, then VC and IT counts, then
/// the DPVI bins.
pub const REPORT_CSV_HEADER: &str =
    "name,cd,emd,rho,n_vc,n_vc_prime,f_it,v_it,dpvi_0,dpvi_1,dpvi_2,dpvi_3_10,dpvi_11_20,dpvi_21_30,dpvi_31_40,dpvi_41_50,dpvi_51_max";

/// One CSV row per ρ value.
pub fn report_csv_rows(name: &str, report: &MetricReport) -> Vec<String> {
    let dpvi: Vec<String> = report.dpvi.counts.iter().map(|c| c.to_string()).collect();
    report
        .vc
        .iter()
        .map(|vc| {
            format!(
                "{name},{},{},{},{},{},{},{},{}",
                report.cd.total,
                report.emd,
                vc.rho,
                vc.n_vc,
                vc.n_vc_prime,
                report.it.f_it,
                report.it.v_it,
                dpvi.join(",")
            )
        })
        .collect()
}

/// Parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub name: String,
    pub cd: f64,
    pub emd: f64,
    pub rho: f64,
    pub n_vc: usize,
    pub n_vc_prime: usize,
    pub f_it: usize,
    pub v_it: usize,
    pub dpvi: Vec<usize>,
}

pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>> {
    let path = std::path::PathBuf::from("<report csv>");
    let err = |line: usize, message: String| Error::Parse { path: path.clone(), line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == REPORT_CSV_HEADER => {}
        _ => return Err(err(1, "missing or unexpected header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 17 {
            return Err(err(i + 1, format!("expected 17 fields, found {}", f.len())));
        }
        let num = |k: usize| f[k].parse::<f64>().map_err(|_| err(i + 1, format!("bad number '{}'", f[k])));
        let int = |k: usize| f[k].parse::<usize>().map_err(|_| err(i + 1, format!("bad count '{}'", f[k])));
        rows.push(ReportRow {
            name: f[0].to_string(),
            cd: num(1)?,
            emd: num(2)?,
            rho: num(3)?,
            n_vc: int(4)?,
            n_vc_prime: int(5)?,
            f_it: int(6)?,
            v_it: int(7)?,
            dpvi: (8..17).map(int).collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}
