//! Wall-clock timing of the distance computations.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{seeded_rng, PointSet};
use crate::losses::{loss_eval, LossConfig, LossVariant};
use crate::metrics::{chamfer, emd_exact, DEFAULT_EMD_CAP};
use crate::scalar::Scalar;
use rand::Rng;

/// A timed computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMetric {
    Cd,
    Cd2Distance,
    Cd2Threshold,
    Cd2Percent,
    Emd,
}

impl BenchMetric {
    pub const ALL: [BenchMetric; 5] =
        [BenchMetric::Cd, BenchMetric::Cd2Distance, BenchMetric::Cd2Threshold, BenchMetric::Cd2Percent, BenchMetric::Emd];

    pub fn name(self) -> &'static str {
        match self {
            BenchMetric::Cd => "cd",
            BenchMetric::Cd2Distance => "cd2_distance",
            BenchMetric::Cd2Threshold => "cd2_threshold",
            BenchMetric::Cd2Percent => "cd2_percent",
            BenchMetric::Emd => "emd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        BenchMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bench metric '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub metric: String,
    pub n: usize,
    pub reps: usize,
    pub total_s: f64,
    pub per_call_s: f64,
}

pub const BENCH_CSV_HEADER: &str = "metric,n,reps,total_s,per_call_s";

fn random_cloud<T: Scalar>(n: usize, rng: &mut impl Rng) -> PointSet<T> {
    PointSet::from_flat(3, (0..3 * n).map(|_| T::of(rng.gen_range(-1.0..1.0))).collect())
        .expect("finite random coordinates")
}

fn run_once<T: Scalar>(metric: BenchMetric, s1: &PointSet<T>, s2: &PointSet<T>) -> Result<T> {
    let cfg = |v| LossConfig::for_variant(v);
    Ok(match metric {
        BenchMetric::Cd => chamfer(s1, s2)?.total,
        BenchMetric::Cd2Distance => loss_eval(s1, s2, &cfg(LossVariant::Cd2Distance))?.value,
        BenchMetric::Cd2Threshold => loss_eval(s1, s2, &cfg(LossVariant::Cd2Threshold))?.value,
        BenchMetric::Cd2Percent => loss_eval(s1, s2, &cfg(LossVariant::Cd2Percent))?.value,
        BenchMetric::Emd => emd_exact(s1, s2)?,
    })
}

/// Times `reps` calls of `metric` on a random same-size pair of `n` 3D
/// points. A warm-up of 10% of `reps` (at least one call) runs first and is
/// not counted.
pub fn bench_metric(metric: BenchMetric, n: usize, reps: usize, seed: u64) -> Result<BenchRecord> {
    if n == 0 || reps == 0 {
        return Err(Error::InvalidParameter("bench size and repetitions must be positive".into()));
    }
    if metric == BenchMetric::Emd && n > DEFAULT_EMD_CAP {
        return Err(Error::EmdCapExceeded { n, cap: DEFAULT_EMD_CAP });
    }
    let mut rng = seeded_rng(seed ^ (n as u64).rotate_left(32));
    let s1 = random_cloud::<f64>(n, &mut rng);
    let s2 = random_cloud::<f64>(n, &mut rng);
    let warmup = (reps / 10).max(1);
    let mut sink = 0.0;
    for _ in 0..warmup {
        sink += run_once(metric, &s1, &s2)?;
    }
    let start = Instant::now();
    for _ in 0..reps {
        sink += run_once(metric, &s1, &s2)?;
    }
    let total_s = start.elapsed().as_secs_f64();
    std::hint::black_box(sink);
    Ok(BenchRecord { metric: metric.name().to_string(), n, reps, total_s, per_call_s: total_s / reps as f64 })
}

/// Runs every metric over every size. Sizes must be ascending.
pub fn bench_sweep(metrics: &[BenchMetric], sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("bench sizes must be strictly ascending".into()));
    }
    if metrics.contains(&BenchMetric::Emd) {
        if let Some(&n) = sizes.iter().find(|&&n| n > DEFAULT_EMD_CAP) {
            return Err(Error::EmdCapExceeded { n, cap: DEFAULT_EMD_CAP });
        }
    }
    let mut out = Vec::new();
    for &m in metrics {
        for &n in sizes {
            out.push(bench_metric(m, n, reps, seed)?);
        }
    }
    Ok(out)
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("{BENCH_CSV_HEADER}\n");
    for r in records {
        out.push_str(&format!("{},{},{},{},{}\n", r.metric, r.n, r.reps, r.total_s, r.per_call_s));
    }
    out
}

pub fn parse_bench_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let path = std::path::PathBuf::from("<bench csv>");
    let err = |line: usize, message: String| Error::Parse { path: path.clone(), line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == BENCH_CSV_HEADER => {}
        _ => return Err(err(1, format!("expected header '{BENCH_CSV_HEADER}'"))),
    }
    let mut out = Vec::new();
    for (i, l) in lines {
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(err(i + 1, format!("expected 5 fields, found {}", f.len())));
        }
        let bad = |k: usize| err(i + 1, format!("invalid value '{}'", f[k]));
        let n: usize = f[1].parse().map_err(|_| bad(1))?;
        let reps: usize = f[2].parse().map_err(|_| bad(2))?;
        if n == 0 || reps == 0 {
            return Err(err(i + 1, "n and reps must be positive".into()));
        }
        out.push(BenchRecord {
            metric: f[0].to_string(),
            n,
            reps,
            total_s: f[3].parse().map_err(|_| bad(3))?,
            per_call_s: f[4].parse().map_err(|_| bad(4))?,
        });
    }
    if out.is_empty() {
        return Err(err(1, "no data rows".into()));
    }
    Ok(out)
}

/// Coefficient of determination of the one-parameter fit `t ≈ c·n·ln n`.
pub fn nlogn_r2(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n as f64 * (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t).collect();
    let c = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    1.0 - ss_res / ss_tot
}
