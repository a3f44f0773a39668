use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nn_tables, sample_indices, seeded_rng, PointSet};
use crate::metrics::{chamfer, dpvi_histogram, emd_subsampled, mapping_stats, DpviHistogram, DPVI_BINS};
use crate::scalar::Scalar;

/// Settings for the subsampled-ground-truth baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptaConfig {
    /// Points drawn from the ground truth to stand in for mesh vertices.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Size of the held-out evaluation set used for the DPVI histogram.
    pub eval_points: usize,
    /// Upper bound on the EMD subsample size.
    pub emd_points: usize,
}

impl OptaConfig {
    pub fn new(k: usize, seed: u64, trials: usize) -> Self {
        Self { k, trials, seed, eval_points: 2500, emd_points: 512 }
    }
}

/// Trial means of the baseline metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptaBaseline {
    pub cd: f64,
    pub emd: f64,
    pub dpvi_bins: Vec<String>,
    pub dpvi_mean_counts: Vec<f64>,
    pub trials: Vec<DpviHistogram>,
}

impl OptaBaseline {
    pub fn dpvi_fraction(&self, bin: usize) -> f64 {
        let total: f64 = self.dpvi_mean_counts.iter().sum();
        self.dpvi_mean_counts[bin] / total
    }
}

/// Baseline with default evaluation and EMD sizes.
pub fn opta_baseline<T: Scalar>(s1: &PointSet<T>, k: usize, seed: u64, trials: usize) -> Result<OptaBaseline> {
    opta_baseline_with(s1, &OptaConfig::new(k, seed, trials))
}

/// Metrics of a perfect reconstruction stand-in.
///
/// Each trial draws `k` ground-truth points as pseudo-vertices. CD is taken
/// against the full ground truth and EMD on a subsample of both. The DPVI
/// histogram maps a held-out evaluation set, disjoint from the
/// pseudo-vertices, onto them; when no points are left over the full ground
/// truth is used.
pub fn opta_baseline_with<T: Scalar>(s1: &PointSet<T>, cfg: &OptaConfig) -> Result<OptaBaseline> {
    s1.require_non_empty()?;
    if cfg.k == 0 || cfg.k > s1.len() {
        return Err(Error::InvalidParameter(format!("k must be in 1..={}, got {}", s1.len(), cfg.k)));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = seeded_rng(cfg.seed);
    let mut cd = 0.0;
    let mut emd = 0.0;
    let mut hists = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let chosen = sample_indices(&mut rng, s1.len(), cfg.k);
        let pseudo = s1.select(&chosen);
        cd += chamfer(s1, &pseudo)?.total.to_f64_lossy();

        let emd_n = cfg.emd_points.min(cfg.k).max(1);
        let emd_seed = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64);
        emd += emd_subsampled(s1, &pseudo, emd_n, emd_seed)?.to_f64_lossy();

        let mut taken = vec![false; s1.len()];
        chosen.iter().for_each(|&i| taken[i] = true);
        let rest: Vec<usize> = (0..s1.len()).filter(|&i| !taken[i]).collect();
        let eval = if rest.is_empty() {
            s1.clone()
        } else {
            let m = cfg.eval_points.min(rest.len());
            let pick = sample_indices(&mut rng, rest.len(), m);
            s1.select(&pick.iter().map(|&p| rest[p]).collect::<Vec<_>>())
        };
        let tables = nn_tables(&eval, &pseudo)?;
        hists.push(dpvi_histogram(&mapping_stats(&tables, eval.len(), pseudo.len())?));
    }
    let t = cfg.trials as f64;
    let mut mean_counts = vec![0.0; DPVI_BINS.len()];
    for h in &hists {
        for (m, &c) in mean_counts.iter_mut().zip(&h.counts) {
            *m += c as f64 / t;
        }
    }
    Ok(OptaBaseline {
        cd: cd / t,
        emd: emd / t,
        dpvi_bins: DPVI_BINS.iter().map(|s| s.to_string()).collect(),
        dpvi_mean_counts: mean_counts,
        trials: hists,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_unit_sphere;

    #[test]
    fn whole_set_gives_zero_cd() {
        let s: PointSet<f64> = sample_unit_sphere(200, 1).unwrap();
        let r = opta_baseline(&s, 200, 5, 1).unwrap();
        assert_eq!(r.cd, 0.0);
        assert_eq!(r.emd, 0.0);
    }

    #[test]
    fn deterministic() {
        let s: PointSet<f64> = sample_unit_sphere(2000, 2).unwrap();
        let a = opta_baseline(&s, 150, 9, 2).unwrap();
        let b = opta_baseline(&s, 150, 9, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials.len(), 2);
        for h in &a.trials {
            assert_eq!(h.counts.iter().sum::<usize>(), 150);
        }
    }

    #[test]
    fn rejects_bad_k() {
        let s: PointSet<f64> = sample_unit_sphere(20, 2).unwrap();
        assert!(opta_baseline(&s, 0, 0, 1).is_err());
        assert!(opta_baseline(&s, 21, 0, 1).is_err());
        assert!(opta_baseline(&s, 5, 0, 0).is_err());
    }
}
