//! Gradient-descent template deformation.
//!
//! Vertices move against the loss gradient, `V ← V − lr·∇V`, with the loss
//! (and therefore any exclusion sets) re-evaluated every iteration.
//! Connectivity never changes.

mod export;
mod scenarios;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nn_tables, Mesh, PointSet};
use crate::losses::{loss_eval, LossConfig};
use crate::metrics::{
    dpvi_histogram, it_metrics, mapping_stats, vc_metrics_multi, DpviHistogram, ItReport, VcReport,
};
use crate::scalar::Scalar;

pub use export::{parse_timeline_csv, svg_frame, timeline_csv, write_trace, TimelineRow, TIMELINE_HEADER};
pub use scenarios::{chair_template, run_sphere_fit, run_toy_chair, sphere_template, TOY_CHAIR_RHOS};

/// Number of iterations spanned by the loss-improvement stopping test.
pub const STOP_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptConfig {
    pub learning_rate: f64,
    pub max_iters: usize,
    /// Stop once the loss improves by less than this over
    /// [`STOP_WINDOW`] iterations; `0` disables the test.
    pub loss_tol: f64,
    pub snapshot_every: usize,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-2, max_iters: 2000, loss_tol: 0.0, snapshot_every: 100, seed: 0 }
    }
}

impl OptConfig {
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            errs.push(format!("learning_rate must be finite and >= 0, got {}", self.learning_rate));
        }
        if self.max_iters == 0 {
            errs.push("max_iters must be at least 1".into());
        }
        if !(self.loss_tol >= 0.0 && self.loss_tol.is_finite()) {
            errs.push(format!("loss_tol must be finite and >= 0, got {}", self.loss_tol));
        }
        if self.snapshot_every == 0 {
            errs.push("snapshot_every must be at least 1".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    ZeroLoss,
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    /// Number of updates applied before this snapshot.
    pub iteration: usize,
    pub mesh: Mesh<T>,
}

/// Metrics of one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub iteration: usize,
    pub loss: f64,
    pub vc: Vec<VcReport>,
    pub it: ItReport,
    pub dpvi: Option<DpviHistogram>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformTrace<T> {
    pub snapshots: Vec<Snapshot<T>>,
    /// Loss evaluated at the start of every executed iteration.
    pub losses: Vec<T>,
    pub final_mesh: Mesh<T>,
    pub stop_reason: StopReason,
    pub metrics_timeline: Vec<TimelineEntry>,
    pub loss_config: LossConfig,
}

impl<T: Scalar> DeformTrace<T> {
    pub fn final_metrics(&self) -> Option<&TimelineEntry> {
        self.metrics_timeline.last()
    }
}

fn invalid(errs: Vec<String>) -> Error {
    Error::InvalidParameter(errs.join("; "))
}

/// Deforms `template` toward `target` by plain gradient descent.
pub fn deform<T: Scalar>(
    template: &Mesh<T>,
    target: &PointSet<T>,
    loss_cfg: &LossConfig,
    opt_cfg: &OptConfig,
) -> Result<DeformTrace<T>> {
    target.require_same_dim(template.vertices())?;
    loss_cfg.validate().map_err(invalid)?;
    opt_cfg.validate().map_err(invalid)?;
    let lr = T::of(opt_cfg.learning_rate);
    let mut mesh = template.clone();
    let mut snapshots = vec![Snapshot { iteration: 0, mesh: mesh.clone() }];
    let mut losses: Vec<T> = Vec::new();
    let mut stop_reason = StopReason::MaxIters;
    let mut updates = 0usize;

    for iteration in 0..opt_cfg.max_iters {
        let result = loss_eval(target, mesh.vertices(), loss_cfg)?;
        if !result.value.is_finite() {
            // coordinates are finite here, so name the vertex furthest out
            let verts = mesh.vertices();
            let worst = (0..verts.len())
                .max_by(|&a, &b| {
                    let norm = |i: usize| verts.point(i).iter().fold(T::zero(), |m, c| m.max(c.abs()));
                    norm(a).partial_cmp(&norm(b)).expect("finite coordinates")
                })
                .unwrap_or(0);
            return Err(Error::NumericalFailure {
                iteration,
                detail: format!("loss is {} (largest coordinate at vertex {worst})", result.value),
            });
        }
        losses.push(result.value);
        if result.value == T::zero() {
            stop_reason = StopReason::ZeroLoss;
            break;
        }
        if opt_cfg.loss_tol > 0.0 && losses.len() > STOP_WINDOW {
            let past = losses[losses.len() - 1 - STOP_WINDOW];
            if (past - result.value).to_f64_lossy() < opt_cfg.loss_tol {
                stop_reason = StopReason::Stalled;
                break;
            }
        }
        let verts = mesh.vertices_mut();
        let dim = verts.dim();
        for (c, g) in verts.as_flat_mut().iter_mut().zip(&result.grad) {
            *c -= lr * *g;
        }
        if let Some(pos) = verts.as_flat().iter().position(|c| !c.is_finite()) {
            return Err(Error::NumericalFailure {
                iteration,
                detail: format!("vertex {} has a non-finite coordinate", pos / dim),
            });
        }
        updates += 1;
        if updates.is_multiple_of(opt_cfg.snapshot_every) {
            snapshots.push(Snapshot { iteration: updates, mesh: mesh.clone() });
        }
    }
    if snapshots.last().map(|s| s.iteration) != Some(updates) {
        snapshots.push(Snapshot { iteration: updates, mesh: mesh.clone() });
    }
    Ok(DeformTrace {
        snapshots,
        losses,
        final_mesh: mesh,
        stop_reason,
        metrics_timeline: Vec::new(),
        loss_config: loss_cfg.clone(),
    })
}

/// Fills `metrics_timeline` with VC (one report per ρ), IT and optionally
/// DPVI for every snapshot.
pub fn attach_metrics<T: Scalar>(
    trace: &mut DeformTrace<T>,
    target: &PointSet<T>,
    rhos: &[f64],
    with_dpvi: bool,
) -> Result<()> {
    let mut timeline = Vec::with_capacity(trace.snapshots.len());
    for snap in &trace.snapshots {
        let verts = snap.mesh.vertices();
        let loss = match trace.losses.get(snap.iteration) {
            Some(v) => v.to_f64_lossy(),
            None => loss_eval(target, verts, &trace.loss_config)?.value.to_f64_lossy(),
        };
        let dpvi = if with_dpvi {
            let tables = nn_tables(target, verts)?;
            Some(dpvi_histogram(&mapping_stats(&tables, target.len(), verts.len())?))
        } else {
            None
        };
        timeline.push(TimelineEntry {
            iteration: snap.iteration,
            loss,
            vc: vc_metrics_multi(verts, target, rhos)?,
            it: it_metrics(&snap.mesh)?,
            dpvi,
        });
    }
    trace.metrics_timeline = timeline;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::LossConfig;

    fn single(p: [f64; 3]) -> PointSet<f64> {
        PointSet::from_points(3, &[p]).unwrap()
    }

    fn point_mesh(p: [f64; 3]) -> Mesh<f64> {
        // a lone vertex; faces are not needed for the optimiser
        Mesh::new(single(p), Vec::new()).unwrap()
    }

    #[test]
    fn one_analytic_step() {
        let opt = OptConfig { learning_rate: 0.1, max_iters: 1, ..OptConfig::default() };
        let t = deform(&point_mesh([1.0, 0.0, 0.0]), &single([0.0; 3]), &LossConfig::cd(), &opt).unwrap();
        let p = t.final_mesh.vertices().point(0);
        assert!((p[0] - 0.6).abs() < 1e-15 && p[1] == 0.0 && p[2] == 0.0);
        assert_eq!(t.losses, vec![2.0]);
        assert_eq!(t.snapshots.len(), 2);
    }

    #[test]
    fn fixed_point_stops_immediately() {
        let pts = PointSet::from_points(3, &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let mesh = Mesh::new(pts.clone(), vec![vec![0, 1, 2]]).unwrap();
        let t = deform(&mesh, &pts, &LossConfig::cd(), &OptConfig::default()).unwrap();
        assert_eq!(t.stop_reason, StopReason::ZeroLoss);
        assert_eq!(t.losses, vec![0.0]);
        assert_eq!(t.final_mesh, mesh);
        assert_eq!(t.snapshots.len(), 1);
    }

    #[test]
    fn zero_learning_rate_keeps_template() {
        let opt = OptConfig { learning_rate: 0.0, max_iters: 1, ..OptConfig::default() };
        let m = point_mesh([0.3, 0.2, 0.1]);
        let t = deform(&m, &single([0.0; 3]), &LossConfig::cd(), &opt).unwrap();
        assert_eq!(t.final_mesh, m);
    }

    #[test]
    fn divergence_is_reported() {
        let opt = OptConfig { learning_rate: 1e300, max_iters: 50, ..OptConfig::default() };
        let err = deform(&point_mesh([1.0, 0.0, 0.0]), &single([0.0; 3]), &LossConfig::cd(), &opt).unwrap_err();
        match err {
            Error::NumericalFailure { iteration, detail } => {
                assert!(iteration < 50);
                assert!(detail.contains("vertex 0"), "{detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stalls_when_improvement_vanishes() {
        let opt = OptConfig { learning_rate: 0.1, max_iters: 10_000, loss_tol: 1e-12, ..OptConfig::default() };
        let t = deform(&point_mesh([1.0, 0.0, 0.0]), &single([0.0; 3]), &LossConfig::cd(), &opt).unwrap();
        assert!(matches!(t.stop_reason, StopReason::Stalled | StopReason::ZeroLoss));
        assert!(t.losses.len() < 10_000);
    }

    #[test]
    fn invalid_configs_list_all_fields() {
        let opt = OptConfig { learning_rate: f64::NAN, max_iters: 0, loss_tol: -1.0, snapshot_every: 0, seed: 0 };
        assert_eq!(opt.validate().unwrap_err().len(), 4);
    }
}
