use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    make_chair_2d, make_circle_loop, make_icosphere, sample_surface, seeded_rng, Mesh, PointSet,
    CHAIR_TEMPLATE_RADIUS, CHAIR_TEMPLATE_VERTICES,
};
use crate::losses::LossConfig;
use crate::scalar::Scalar;

use super::{attach_metrics, deform, DeformTrace, OptConfig};

/// VC thresholds tracked for the 2D chair.
pub const TOY_CHAIR_RHOS: [f64; 2] = [0.25, 0.5];

/// Radial jitter applied to the chair template, as a fraction of its radius.
const CHAIR_RADIAL_JITTER: f64 = 0.02;

/// The circle template for the chair scene, perturbed by `seed`: a random
/// rotation within one vertex spacing plus ±2% radial jitter per vertex.
pub fn chair_template<T: Scalar>(target: &PointSet<T>, seed: u64) -> Result<Mesh<T>> {
    let mut rng = seeded_rng(seed);
    let spacing = std::f64::consts::TAU / CHAIR_TEMPLATE_VERTICES as f64;
    let phase = T::of(rng.gen_range(0.0..spacing));
    let mut mesh = make_circle_loop(CHAIR_TEMPLATE_VERTICES, &target.centroid(), T::of(CHAIR_TEMPLATE_RADIUS), phase)?;
    let center = target.centroid();
    mesh.vertices_mut().map_in_place(|p| {
        let s = T::of(1.0 + rng.gen_range(-CHAIR_RADIAL_JITTER..=CHAIR_RADIAL_JITTER));
        for d in 0..2 {
            p[d] = center[d] + (p[d] - center[d]) * s;
        }
    });
    Ok(mesh)
}

/// Deforms the seeded circle template onto the 81-point chair profile and
/// records VC (ρ = 0.25, 0.5) and edge-crossing counts at every snapshot.
pub fn run_toy_chair<T: Scalar>(loss_cfg: &LossConfig, opt_cfg: &OptConfig) -> Result<DeformTrace<T>> {
    let (target, _) = make_chair_2d::<T>()?;
    let template = chair_template(&target, opt_cfg.seed)?;
    let mut trace = deform(&template, &target, loss_cfg, opt_cfg)?;
    attach_metrics(&mut trace, &target, &TOY_CHAIR_RHOS, false)?;
    Ok(trace)
}

/// Icosphere scaled to 1.1× the bounding radius of `target` about its
/// centroid.
pub fn sphere_template<T: Scalar>(target: &PointSet<T>, subdivisions: u32) -> Result<Mesh<T>> {
    let center = target.centroid();
    let radius = target
        .iter()
        .map(|p| crate::scalar::dist2(p, &center).sqrt())
        .fold(T::zero(), T::max);
    if !(radius > T::zero()) {
        return Err(Error::DegenerateMesh("target points have zero extent".into()));
    }
    let scale = radius * T::of(1.1);
    let mut mesh = make_icosphere::<T>(subdivisions)?;
    mesh.vertices_mut().map_in_place(|p| {
        for d in 0..3 {
            p[d] = center[d] + p[d] * scale;
        }
    });
    Ok(mesh)
}

/// Samples `n_points` from `target_mesh`, fits a scaled icosphere to them
/// and records VC, IT and DPVI at every snapshot.
pub fn run_sphere_fit<T: Scalar>(
    target_mesh: &Mesh<T>,
    n_points: usize,
    loss_cfg: &LossConfig,
    opt_cfg: &OptConfig,
    subdivisions: u32,
) -> Result<(PointSet<T>, DeformTrace<T>)> {
    if target_mesh.dim() != 3 {
        return Err(Error::InvalidDimension(target_mesh.dim()));
    }
    if n_points < 100 {
        return Err(Error::InvalidParameter(format!("n_points must be at least 100, got {n_points}")));
    }
    let target = sample_surface(target_mesh, n_points, opt_cfg.seed)?;
    let template = sphere_template(&target, subdivisions)?;
    let mut trace = deform(&template, &target, loss_cfg, opt_cfg)?;
    attach_metrics(&mut trace, &target, &TOY_CHAIR_RHOS, true)?;
    Ok((target, trace))
}
