//! Chamfer loss and its two-pass exclusion variants, with analytic
//! gradients with respect to the vertex positions.
//!
//! Every variant runs a first nearest-neighbour pass to pick excluded
//! vertices (and the ground-truth points tied to them), then evaluates plain
//! Chamfer distance on what remains. Only that second pass is
//! differentiated; excluded vertices get a zero gradient row.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nn_tables, NnTables, PointSet};
use crate::metrics::{mapping_stats, mean};
use crate::scalar::{ceil_fraction, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossVariant {
    /// Plain Chamfer distance.
    Cd,
    /// Exclude the vertices closest to the ground truth.
    Cd2Distance,
    /// Exclude vertices (and points) mapped by more than `pvi_t` partners.
    Cd2Threshold,
    /// Exclude the top fraction of vertices (and points) by mapped partners.
    Cd2Percent,
}

impl LossVariant {
    pub const ALL: [LossVariant; 4] =
        [LossVariant::Cd, LossVariant::Cd2Distance, LossVariant::Cd2Threshold, LossVariant::Cd2Percent];

    pub fn name(self) -> &'static str {
        match self {
            LossVariant::Cd => "cd",
            LossVariant::Cd2Distance => "cd2_distance",
            LossVariant::Cd2Threshold => "cd2_threshold",
            LossVariant::Cd2Percent => "cd2_percent",
        }
    }
}

impl fmt::Display for LossVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LossVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown loss variant '{s}'")))
    }
}

/// Loss selection and exclusion parameters. Fields not used by the chosen
/// variant are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossConfig {
    pub variant: LossVariant,
    /// Fraction of vertices excluded by the distance variant.
    pub p_d: f64,
    /// Squared-distance threshold of the distance variant.
    #[serde(rename = "d_T", alias = "d_t")]
    pub d_t: f64,
    /// Partner-count threshold of the threshold variant.
    pub pvi_t: usize,
    /// Fraction of vertices excluded by the percent variant.
    pub pvi_p: f64,
    /// Fraction of ground-truth points excluded by the percent variant.
    pub s1_exclusion_fraction: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            variant: LossVariant::Cd,
            p_d: 0.3,
            d_t: 1e-7,
            pvi_t: 4,
            pvi_p: 0.08,
            s1_exclusion_fraction: 0.01,
        }
    }
}

impl LossConfig {
    pub fn cd() -> Self {
        Self::default()
    }

    pub fn cd2_distance(p_d: f64, d_t: f64) -> Self {
        Self { variant: LossVariant::Cd2Distance, p_d, d_t, ..Self::default() }
    }

    pub fn cd2_threshold(pvi_t: usize) -> Self {
        Self { variant: LossVariant::Cd2Threshold, pvi_t, ..Self::default() }
    }

    pub fn cd2_percent(pvi_p: f64, s1_exclusion_fraction: f64) -> Self {
        Self { variant: LossVariant::Cd2Percent, pvi_p, s1_exclusion_fraction, ..Self::default() }
    }

    /// Defaults for a variant.
    pub fn for_variant(variant: LossVariant) -> Self {
        Self { variant, ..Self::default() }
    }

    /// Every violated constraint of the fields the variant reads.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let fraction = |name: &str, v: f64, errs: &mut Vec<String>| {
            if !(0.0..1.0).contains(&v) {
                errs.push(format!("{name} must be in [0, 1), got {v}"));
            }
        };
        match self.variant {
            LossVariant::Cd => {}
            LossVariant::Cd2Distance => {
                fraction("p_d", self.p_d, &mut errs);
                if !(self.d_t >= 0.0 && self.d_t.is_finite()) {
                    errs.push(format!("d_T must be a finite value >= 0, got {}", self.d_t));
                }
            }
            LossVariant::Cd2Threshold => {
                if self.pvi_t == 0 {
                    errs.push("pvi_t must be a positive integer".into());
                }
            }
            LossVariant::Cd2Percent => {
                fraction("pvi_p", self.pvi_p, &mut errs);
                fraction("s1_exclusion_fraction", self.s1_exclusion_fraction, &mut errs);
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }
}

/// Loss value, gradient and the exclusion bookkeeping behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct LossResult<T> {
    pub value: T,
    /// Flat per-vertex gradient, laid out like [`PointSet::as_flat`].
    pub grad: Vec<T>,
    pub dim: usize,
    pub excluded_vertices: Vec<usize>,
    pub excluded_points: Vec<usize>,
    /// Original indices of the vertices kept for the second pass.
    pub residual_vertices: Vec<usize>,
    /// Original indices of the points kept for the second pass.
    pub residual_points: Vec<usize>,
    /// Nearest-neighbour tables of the second pass, in residual-local indices.
    pub residual_tables: NnTables<T>,
}

impl<T: Scalar> LossResult<T> {
    pub fn grad_row(&self, i: usize) -> &[T] {
        &self.grad[i * self.dim..(i + 1) * self.dim]
    }
}

fn complement(n: usize, excluded: &[usize]) -> Vec<usize> {
    let mut keep = vec![true; n];
    excluded.iter().for_each(|&i| keep[i] = false);
    (0..n).filter(|&i| keep[i]).collect()
}

/// Chamfer value and gradient on the sets left after removing
/// `excluded_points` from `s1` and `excluded_vertices` from `s2`.
fn residual_loss<T: Scalar>(
    s1: &PointSet<T>,
    s2: &PointSet<T>,
    excluded_points: Vec<usize>,
    excluded_vertices: Vec<usize>,
) -> Result<LossResult<T>> {
    let residual_points = complement(s1.len(), &excluded_points);
    let residual_vertices = complement(s2.len(), &excluded_vertices);
    if residual_points.is_empty() || residual_vertices.is_empty() {
        return Err(Error::OverExclusion(format!(
            "{} of {} points and {} of {} vertices excluded",
            excluded_points.len(),
            s1.len(),
            excluded_vertices.len(),
            s2.len()
        )));
    }
    let r1 = s1.select(&residual_points);
    let r2 = s2.select(&residual_vertices);
    let tables = nn_tables(&r1, &r2)?;
    let value = mean(&tables.dist1) + mean(&tables.dist2);

    let dim = s2.dim();
    let mut grad = vec![T::zero(); s2.len() * dim];
    let two = T::of(2.0);
    let w2 = two / T::of(r2.len() as f64);
    for (li, &pj) in tables.index2.iter().enumerate() {
        let row = residual_vertices[li] * dim;
        let (v, p) = (r2.point(li), r1.point(pj));
        for d in 0..dim {
            grad[row + d] += w2 * (v[d] - p[d]);
        }
    }
    let w1 = two / T::of(r1.len() as f64);
    for (lj, &vi) in tables.index1.iter().enumerate() {
        let row = residual_vertices[vi] * dim;
        let (v, p) = (r2.point(vi), r1.point(lj));
        for d in 0..dim {
            grad[row + d] += w1 * (v[d] - p[d]);
        }
    }
    Ok(LossResult {
        value,
        grad,
        dim,
        excluded_vertices,
        excluded_points,
        residual_vertices,
        residual_points,
        residual_tables: tables,
    })
}

fn check_inputs<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>) -> Result<()> {
    s1.require_non_empty()?;
    s2.require_non_empty()?;
    s1.require_same_dim(s2)
}

fn require_variant(cfg: &LossConfig, allowed: &[LossVariant]) -> Result<()> {
    if !allowed.contains(&cfg.variant) {
        return Err(Error::InvalidParameter(format!("variant {} not handled here", cfg.variant)));
    }
    cfg.validate().map_err(|e| Error::InvalidParameter(e.join("; ")))
}

/// Plain Chamfer loss. The gradient holds nearest-neighbour assignments
/// fixed: `2/|S2|·(V_i − φ(V_i)) + 2/|S1|·Σ_{ψ(P_j)=V_i}(V_i − P_j)`.
pub fn cd_loss<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>) -> Result<LossResult<T>> {
    check_inputs(s1, s2)?;
    residual_loss(s1, s2, Vec::new(), Vec::new())
}

/// Picks the `k` indices with the smallest key, ties broken by lower index.
fn smallest_k<T: Scalar>(keys: &[T], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).expect("finite").then(a.cmp(&b)));
    order.truncate(k);
    order.sort_unstable();
    order
}

/// Picks the `k` indices with the largest count, ties broken by lower index.
fn largest_k(counts: &[usize], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order.truncate(k);
    order.sort_unstable();
    order
}

fn guard(what: &str, excluded: usize, total: usize) -> Result<()> {
    if excluded >= total {
        Err(Error::OverExclusion(format!("all {total} {what} would be excluded")))
    } else {
        Ok(())
    }
}

/// Excludes the `max(⌈p_d·|S2|⌉, #{dist2 < d_T})` vertices nearest to the
/// ground truth together with their nearest points, then re-evaluates.
pub fn cd2_distance_loss<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>, cfg: &LossConfig) -> Result<LossResult<T>> {
    require_variant(cfg, &[LossVariant::Cd2Distance])?;
    check_inputs(s1, s2)?;
    let tables = nn_tables(s1, s2)?;
    let n2 = s2.len();
    let d_t = T::of(cfg.d_t);
    let below = tables.dist2.iter().filter(|&&d| d < d_t).count();
    let count = ceil_fraction(cfg.p_d, n2).max(below);
    guard("vertices", count, n2)?;
    let excluded_vertices = smallest_k(&tables.dist2, count);
    let mut excluded_points: Vec<usize> = excluded_vertices.iter().map(|&i| tables.index2[i]).collect();
    excluded_points.sort_unstable();
    excluded_points.dedup();
    guard("points", excluded_points.len(), s1.len())?;
    residual_loss(s1, s2, excluded_points, excluded_vertices)
}

/// Excludes vertices and points by how many partners map onto them:
/// above `pvi_t` for the threshold variant, or the top `pvi_p` /
/// `s1_exclusion_fraction` share for the percent variant.
pub fn cd2_mapping_loss<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>, cfg: &LossConfig) -> Result<LossResult<T>> {
    require_variant(cfg, &[LossVariant::Cd2Threshold, LossVariant::Cd2Percent])?;
    check_inputs(s1, s2)?;
    let tables = nn_tables(s1, s2)?;
    let stats = mapping_stats(&tables, s1.len(), s2.len())?;
    let per_vertex = stats.point_counts();
    let per_point = stats.vertex_counts();
    let (excluded_vertices, excluded_points) = match cfg.variant {
        LossVariant::Cd2Threshold => {
            let over = |c: &[usize]| (0..c.len()).filter(|&i| c[i] > cfg.pvi_t).collect::<Vec<_>>();
            (over(&per_vertex), over(&per_point))
        }
        _ => (
            largest_k(&per_vertex, ceil_fraction(cfg.pvi_p, s2.len())),
            largest_k(&per_point, ceil_fraction(cfg.s1_exclusion_fraction, s1.len())),
        ),
    };
    guard("vertices", excluded_vertices.len(), s2.len())?;
    guard("points", excluded_points.len(), s1.len())?;
    residual_loss(s1, s2, excluded_points, excluded_vertices)
}

/// Dispatches to the loss selected by `cfg.variant`.
pub fn loss_eval<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>, cfg: &LossConfig) -> Result<LossResult<T>> {
    match cfg.variant {
        LossVariant::Cd => cd_loss(s1, s2),
        LossVariant::Cd2Distance => cd2_distance_loss(s1, s2, cfg),
        LossVariant::Cd2Threshold | LossVariant::Cd2Percent => cd2_mapping_loss(s1, s2, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::chamfer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_set(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointSet<f64> {
        PointSet::from_flat(dim, (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn identity_has_zero_loss_and_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_set(&mut rng, 20, 3);
        let r = cd_loss(&s, &s).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.grad.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn analytic_single_pair() {
        let s1 = PointSet::from_points(3, &[[0.0, 0.0, 0.0]]).unwrap();
        let s2 = PointSet::from_points(3, &[[1.0, 0.0, 0.0]]).unwrap();
        let r = cd_loss(&s1, &s2).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.grad, vec![4.0, 0.0, 0.0]);
    }

    #[test]
    fn distance_variant_counts() {
        // ten vertices at increasing distance above ten points
        let s1 = PointSet::from_flat(2, (0..10).flat_map(|i| [i as f64, 0.0]).collect()).unwrap();
        let heights = [0.5, 0.1, 0.9, 0.3, 0.2, 0.8, 0.7, 0.6, 0.4, 1.0];
        let s2 = PointSet::from_flat(2, (0..10).flat_map(|i| [i as f64, heights[i]]).collect()).unwrap();
        let r = cd2_distance_loss(&s1, &s2, &LossConfig::cd2_distance(0.3, 1e-7)).unwrap();
        assert_eq!(r.excluded_vertices, vec![1, 3, 4]);
        assert_eq!(r.excluded_points, vec![1, 3, 4]);
        for &i in &r.excluded_vertices {
            assert_eq!(r.grad_row(i), &[0.0, 0.0]);
        }
        let res = chamfer(&s1.select(&r.residual_points), &s2.select(&r.residual_vertices)).unwrap();
        assert_eq!(r.value, res.total);
        // a large threshold dominates the fraction
        let r = cd2_distance_loss(&s1, &s2, &LossConfig::cd2_distance(0.1, 0.5f64.powi(2) + 1e-9)).unwrap();
        assert_eq!(r.excluded_vertices.len(), 5);
    }

    #[test]
    fn degenerate_configs_reduce_to_cd() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s1 = random_set(&mut rng, 40, 3);
        let s2 = random_set(&mut rng, 25, 3);
        let base = cd_loss(&s1, &s2).unwrap();
        let d = cd2_distance_loss(&s1, &s2, &LossConfig::cd2_distance(0.0, 0.0)).unwrap();
        assert_eq!(d, base);
        let t = cd2_mapping_loss(&s1, &s2, &LossConfig::cd2_threshold(1000)).unwrap();
        assert_eq!(t, base);
        let p = cd2_mapping_loss(&s1, &s2, &LossConfig::cd2_percent(0.0, 0.0)).unwrap();
        assert_eq!(p, base);
        assert_eq!(loss_eval(&s1, &s2, &LossConfig::cd()).unwrap(), base);
    }

    #[test]
    fn threshold_excludes_crowded_vertex() {
        // nine points huddle around vertex 0, every other vertex owns one point
        let mut pts: Vec<[f64; 2]> = (0..9).map(|k| [0.01 * k as f64, 0.0]).collect();
        let mut verts: Vec<[f64; 2]> = vec![[0.04, 0.05]];
        for k in 1..6 {
            pts.push([k as f64, 1.0]);
            verts.push([k as f64, 1.05]);
        }
        let s1 = PointSet::from_points(2, &pts).unwrap();
        let s2 = PointSet::from_points(2, &verts).unwrap();
        let r = cd2_mapping_loss(&s1, &s2, &LossConfig::cd2_threshold(4)).unwrap();
        assert_eq!(r.excluded_vertices, vec![0]);
        assert!(r.excluded_points.is_empty());
        assert_eq!(r.grad_row(0), &[0.0, 0.0]);
    }

    #[test]
    fn percent_exclusion_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s1 = random_set(&mut rng, 200, 3);
        let s2 = random_set(&mut rng, 50, 3);
        let mut prev: Vec<usize> = Vec::new();
        for k in 0..10 {
            let r = cd2_mapping_loss(&s1, &s2, &LossConfig::cd2_percent(0.05 * k as f64, 0.01)).unwrap();
            assert!(prev.iter().all(|i| r.excluded_vertices.contains(i)));
            prev = r.excluded_vertices;
        }
    }

    #[test]
    fn over_exclusion_and_config_errors() {
        let s1 = PointSet::from_points(2, &[[0.0, 0.0]]).unwrap();
        let s2 = PointSet::from_points(2, &[[0.0, 0.1], [0.0, 0.2]]).unwrap();
        let err = cd2_distance_loss(&s1, &s2, &LossConfig::cd2_distance(0.3, 0.0)).unwrap_err();
        assert!(err.to_string().starts_with("over-exclusion"), "{err}");
        assert!(cd2_distance_loss(&s1, &s2, &LossConfig::cd2_distance(1.5, 0.0)).is_err());
        assert!(cd2_mapping_loss(&s1, &s2, &LossConfig::cd2_threshold(0)).is_err());
        assert!(cd2_mapping_loss(&s1, &s2, &LossConfig::cd()).is_err());
        assert!("cd3".parse::<LossVariant>().is_err());
        assert_eq!("cd2_percent".parse::<LossVariant>().unwrap(), LossVariant::Cd2Percent);
        let bad = LossConfig { p_d: -0.1, d_t: f64::NAN, ..LossConfig::cd2_distance(0.3, 0.0) };
        assert_eq!(bad.validate().unwrap_err().len(), 2);
    }
}
