use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{mean_nn_distance, self_nearest, NnIndex, PointSet};
use crate::scalar::Scalar;

/// Vertex clustering counts for one value of ρ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    pub n_vc: usize,
    pub n_vc_prime: usize,
    pub vc_vertices: Vec<usize>,
    pub vc_prime_vertices: Vec<usize>,
    pub sigma_vc: f64,
    pub rho: f64,
}

/// Counts clustered vertices of `s2` relative to the spacing of `s1`.
///
/// With `σ = ρ · mean_nn_distance(s1)`, vertex `i` is clustered when its
/// nearest other vertex lies closer than `σ`. It is additionally in the
/// stricter set when it shares its nearest ground-truth point with that
/// neighbour.
pub fn vc_metrics<T: Scalar>(s2: &PointSet<T>, s1: &PointSet<T>, rho: f64) -> Result<VcReport> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    s1.require_same_dim(s2)?;
    let sigma = mean_nn_distance(s1)?.to_f64_lossy() * rho;
    let neighbours = self_nearest(s2)?;
    let gt_index = NnIndex::build(s1)?;
    let phi: Vec<usize> = s2.iter().map(|v| gt_index.nearest(v).index).collect();
    Ok(vc_from_parts(&neighbours, &phi, sigma, rho))
}

/// Evaluates several ρ values sharing the neighbour searches.
pub fn vc_metrics_multi<T: Scalar>(s2: &PointSet<T>, s1: &PointSet<T>, rhos: &[f64]) -> Result<Vec<VcReport>> {
    if let Some(bad) = rhos.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {bad}")));
    }
    s1.require_same_dim(s2)?;
    let dbar = mean_nn_distance(s1)?.to_f64_lossy();
    let neighbours = self_nearest(s2)?;
    let gt_index = NnIndex::build(s1)?;
    let phi: Vec<usize> = s2.iter().map(|v| gt_index.nearest(v).index).collect();
    Ok(rhos.iter().map(|&rho| vc_from_parts(&neighbours, &phi, dbar * rho, rho)).collect())
}

fn vc_from_parts<T: Scalar>(neighbours: &[(usize, T)], phi: &[usize], sigma: f64, rho: f64) -> VcReport {
    let mut vc_vertices = Vec::new();
    let mut vc_prime_vertices = Vec::new();
    for (i, &(j, d2)) in neighbours.iter().enumerate() {
        if d2.to_f64_lossy().sqrt() < sigma {
            vc_vertices.push(i);
            if phi[i] == phi[j] {
                vc_prime_vertices.push(i);
            }
        }
    }
    VcReport {
        n_vc: vc_vertices.len(),
        n_vc_prime: vc_prime_vertices.len(),
        vc_vertices,
        vc_prime_vertices,
        sigma_vc: sigma,
        rho,
    }
}
