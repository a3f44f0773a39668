mod common;

use cd2_core::geometry::io::{obj_string, off_string, parse_obj, parse_off};
use cd2_core::geometry::{make_icosphere, nn_tables, Mesh, NnIndex, PointSet};
use cd2_core::losses::{loss_eval, LossConfig};
use cd2_core::metrics::{chamfer, emd_exact, it_metrics, it_metrics_all_pairs};
use common::*;
use proptest::prelude::*;
use std::path::Path;

fn cloud(dim: usize, max: usize) -> impl Strategy<Value = PointSet<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim..=dim * max)
        .prop_map(move |mut v| {
            v.truncate(v.len() / dim * dim);
            PointSet::from_flat(dim, v).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kdtree_agrees_with_scan(s in cloud(3, 80), q in prop::array::uniform3(-12.0f64..12.0)) {
        let idx = NnIndex::build(&s).unwrap();
        let got = idx.nearest(&q);
        prop_assert_eq!((got.index, got.dist2), brute_nearest(&q, &s));
    }

    #[test]
    fn chamfer_is_symmetric_and_nonnegative(a in cloud(2, 40), b in cloud(2, 40)) {
        let (ab, ba) = (chamfer(&a, &b).unwrap(), chamfer(&b, &a).unwrap());
        prop_assert_eq!(ab.part1, ba.part2);
        prop_assert_eq!(ab.part2, ba.part1);
        prop_assert!(ab.total >= 0.0);
    }

    #[test]
    fn emd_bounds_nearest_neighbour_means(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = rng(seed);
        let (a, b) = (random_cloud(&mut rng, 3, n), random_cloud(&mut rng, 3, n));
        let e = emd_exact(&a, &b).unwrap();
        let t = nn_tables(&a, &b).unwrap();
        let m1 = t.dist1.iter().map(|d| d.sqrt()).sum::<f64>() / n as f64;
        let m2 = t.dist2.iter().map(|d| d.sqrt()).sum::<f64>() / n as f64;
        prop_assert!(e + 1e-12 >= m1.max(m2));
    }

    #[test]
    fn exclusion_rows_are_zero_and_residuals_partition(seed in any::<u64>(), n1 in 3usize..60, n2 in 3usize..60) {
        let mut rng = rng(seed);
        let (s1, s2) = (random_cloud(&mut rng, 3, n1), random_cloud(&mut rng, 3, n2));
        for cfg in [LossConfig::cd2_distance(0.3, 1e-7), LossConfig::cd2_threshold(2), LossConfig::cd2_percent(0.1, 0.1)] {
            let r = match loss_eval(&s1, &s2, &cfg) {
                Ok(r) => r,
                Err(cd2_core::Error::OverExclusion(_)) => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert_eq!(r.grad.len(), n2 * 3);
            for &i in &r.excluded_vertices {
                prop_assert!(r.grad_row(i).iter().all(|&g| g == 0.0));
            }
            prop_assert_eq!(r.excluded_vertices.len() + r.residual_vertices.len(), n2);
            prop_assert_eq!(r.excluded_points.len() + r.residual_points.len(), n1);
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            prop_assert_eq!(r.value, mean(&r.residual_tables.dist1) + mean(&r.residual_tables.dist2));
        }
    }

    #[test]
    fn percent_exclusion_is_monotone(seed in any::<u64>(), p in 0.0f64..0.5, q in 0.0f64..0.5) {
        let mut rng = rng(seed);
        let (s1, s2) = (random_cloud(&mut rng, 2, 50), random_cloud(&mut rng, 2, 30));
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = loss_eval(&s1, &s2, &LossConfig::cd2_percent(lo, 0.01)).unwrap();
        let b = loss_eval(&s1, &s2, &LossConfig::cd2_percent(hi, 0.01)).unwrap();
        prop_assert!(a.excluded_vertices.iter().all(|v| b.excluded_vertices.contains(v)));
    }

    #[test]
    fn pruned_it_equals_all_pairs(seed in any::<u64>(), amp in 0.0f64..0.6, level in 0u32..2) {
        let mut rng = rng(seed);
        let mut m: Mesh<f64> = make_icosphere(level).unwrap();
        m.vertices_mut().map_in_place(|p| p.iter_mut().for_each(|c| *c += rand::Rng::gen_range(&mut rng, -amp..=amp)));
        prop_assert_eq!(it_metrics(&m).unwrap(), it_metrics_all_pairs(&m).unwrap());
    }

    #[test]
    fn mesh_text_formats_round_trip(seed in any::<u64>(), level in 0u32..3) {
        let mut rng = rng(seed);
        let mut m: Mesh<f64> = make_icosphere(level).unwrap();
        m.vertices_mut().map_in_place(|p| p.iter_mut().for_each(|c| *c *= rand::Rng::gen_range(&mut rng, 0.5..2.0)));
        prop_assert_eq!(&parse_obj::<f64>(&obj_string(&m), Path::new("m.obj")).unwrap(), &m);
        prop_assert_eq!(&parse_off::<f64>(&off_string(&m), Path::new("m.off")).unwrap(), &m);
    }
}
