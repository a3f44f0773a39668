//! Evaluation metrics: Chamfer distance, exact EMD, vertex clustering,
//! self-intersection, point-per-vertex distribution and the subsampled
//! ground-truth baseline.

mod chamfer;
mod emd;
pub mod intersect;
mod it;
mod mapping;
mod opta;
pub mod report;
mod vc;

pub use chamfer::{chamfer, ChamferResult};
pub(crate) use chamfer::mean;
pub use emd::{
    emd_exact, emd_exact_capped, emd_subsampled, emd_subsampled_capped, min_cost_assignment, subsample_pair,
    DEFAULT_EMD_CAP,
};
pub use intersect::{segments_cross_2d, tri_tri_intersect};
pub use it::{it_metrics, it_metrics_all_pairs, ItReport};
pub use mapping::{dpvi_bin, dpvi_histogram, mapping_stats, DpviHistogram, MappingStats, DPVI_BINS};
pub use opta::{opta_baseline, opta_baseline_with, OptaBaseline, OptaConfig};
pub use report::{evaluate, EvalOptions, MetricReport};
pub use vc::{vc_metrics, vc_metrics_multi, VcReport};
