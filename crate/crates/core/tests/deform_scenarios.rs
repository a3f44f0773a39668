mod common;

use cd2_core::deform::{
    deform, parse_timeline_csv, run_sphere_fit, run_toy_chair, timeline_csv, write_trace, OptConfig, StopReason,
    TIMELINE_HEADER,
};
use cd2_core::geometry::io::{parse_xyz, xyz_string};
use cd2_core::geometry::{make_box, make_chair_2d, make_icosphere, Mesh};
use cd2_core::losses::{loss_eval, LossConfig};
use cd2_core::metrics::chamfer;
use common::*;
use rand::Rng;
use std::path::Path;

#[test]
fn chair_matches_golden_file() {
    let (points, template) = make_chair_2d::<f64>().unwrap();
    let golden = include_str!("fixtures/chair_points.xyz");
    assert_eq!(xyz_string(&points), golden);
    assert_eq!(parse_xyz::<f64>(golden, Path::new("chair_points.xyz")).unwrap(), points);
    assert_eq!(template.vertices().len(), 80);
    assert_eq!(template.faces().len(), 80);
}

#[test]
fn toy_chair_default_descends() {
    let t = run_toy_chair::<f64>(&LossConfig::cd(), &OptConfig::default()).unwrap();
    assert_eq!(t.losses.len(), 2000);
    assert!(t.losses.last().unwrap() < &t.losses[0]);
    let entries = &t.metrics_timeline;
    assert_eq!(entries.len(), 21);
    assert!(entries.iter().all(|e| e.vc.len() == 2 && e.dpvi.is_none()));
}

#[test]
fn sphere_to_sphere_converges() {
    let target = make_icosphere::<f64>(2).unwrap();
    // a fine template keeps the point-to-vertex discretisation floor small;
    // the loss is mean-normalised, so the step size scales with vertex count
    let opt = OptConfig { learning_rate: 400.0, max_iters: 500, snapshot_every: 100, ..OptConfig::default() };
    let (points, t) = run_sphere_fit(&target, 2000, &LossConfig::cd(), &opt, 4).unwrap();
    let first = chamfer(&points, t.snapshots[0].mesh.vertices()).unwrap().total;
    let last = chamfer(&points, t.final_mesh.vertices()).unwrap().total;
    eprintln!("sphere CD: {first} -> {last}");
    assert!(last < 0.1 * first, "{last} vs {first}");
    assert!(t.final_metrics().unwrap().dpvi.is_some());
}

#[test]
fn box_fit_threshold_variant_twists_no_more_than_cd() {
    // single runs are noisy (IT counts swing by ~20% between seeds), so the
    // comparison is made on the median of three seeds
    let target = make_box::<f64>([0.5, 0.3, 0.2]).unwrap();
    let median_f_it = |loss: &LossConfig| {
        let mut v: Vec<usize> = (0..3)
            .map(|seed| {
                let opt = OptConfig { learning_rate: 5.0, max_iters: 500, snapshot_every: 500, seed, ..OptConfig::default() };
                let (_, t) = run_sphere_fit(&target, 2000, loss, &opt, 3).unwrap();
                t.final_metrics().unwrap().it.f_it
            })
            .collect();
        v.sort_unstable();
        v[1]
    };
    let (cd, cd2) = (median_f_it(&LossConfig::cd()), median_f_it(&LossConfig::cd2_threshold(4)));
    assert!(cd2 <= cd, "cd2_threshold {cd2} vs cd {cd}");
}

#[test]
fn tiny_steps_never_increase_the_loss() {
    let mut rng = rng(40);
    for inst in 0..20 {
        let dim = 2 + inst % 2;
        let s1 = random_cloud(&mut rng, dim, 30);
        let s2 = random_cloud(&mut rng, dim, 25);
        if !tie_free(&s1, &s2, 1e-3) || !tie_free(&s2, &s1, 1e-3) {
            continue;
        }
        let faces = if dim == 2 { (0..25).map(|i| vec![i, (i + 1) % 25]).collect() } else { Vec::new() };
        let mesh = Mesh::new(s2, faces).unwrap();
        for cfg in [LossConfig::cd(), LossConfig::cd2_distance(0.3, 1e-7), LossConfig::cd2_threshold(2)] {
            let opt = OptConfig { learning_rate: 1e-6, max_iters: 2, ..OptConfig::default() };
            let t = deform(&mesh, &s1, &cfg, &opt).unwrap();
            assert!(t.losses[1] <= t.losses[0], "{}: {} > {}", cfg.variant, t.losses[1], t.losses[0]);
        }
    }
}

#[test]
fn excluded_vertices_do_not_move() {
    let mut rng = rng(41);
    let s1 = random_cloud(&mut rng, 3, 60);
    let s2 = random_cloud(&mut rng, 3, 40);
    let mesh = Mesh::new(s2.clone(), Vec::new()).unwrap();
    let cfg = LossConfig::cd2_distance(0.3, 1e-7);
    let r = loss_eval(&s1, &s2, &cfg).unwrap();
    let opt = OptConfig { learning_rate: 0.3, max_iters: 1, ..OptConfig::default() };
    let t = deform(&mesh, &s1, &cfg, &opt).unwrap();
    assert_eq!(r.excluded_vertices.len(), 12);
    for &i in &r.excluded_vertices {
        assert_eq!(t.final_mesh.vertices().point(i), s2.point(i));
    }
    let moved = (0..40).filter(|i| t.final_mesh.vertices().point(*i) != s2.point(*i)).count();
    assert_eq!(moved, 28);
}

#[test]
fn loss_tol_stops_a_converged_run() {
    let target = make_icosphere::<f64>(1).unwrap();
    let opt = OptConfig { learning_rate: 0.5, max_iters: 5000, loss_tol: 1e-9, ..OptConfig::default() };
    let (_, t) = run_sphere_fit(&target, 500, &LossConfig::cd(), &opt, 1).unwrap();
    assert_eq!(t.stop_reason, StopReason::Stalled);
    assert!(t.losses.len() < 5000);
}

#[test]
fn trace_export_round_trips() {
    let opt = OptConfig { learning_rate: 0.5, max_iters: 50, snapshot_every: 20, ..OptConfig::default() };
    let t = run_toy_chair::<f64>(&LossConfig::cd2_threshold(2), &opt).unwrap();
    let csv = timeline_csv(&t);
    assert!(csv.starts_with(TIMELINE_HEADER));
    let rows = parse_timeline_csv(&csv, Path::new("timeline.csv")).unwrap();
    assert_eq!(rows.iter().map(|r| r.iteration).collect::<Vec<_>>(), vec![0, 20, 40, 50]);
    for (row, e) in rows.iter().zip(&t.metrics_timeline) {
        assert_eq!(row.loss, e.loss);
        assert_eq!(row.n_vc, e.vc[1].n_vc);
        assert_eq!(row.f_it, e.it.f_it);
    }
    let dir = tempfile::tempdir().unwrap();
    let (target, _) = make_chair_2d::<f64>().unwrap();
    let written = write_trace(&t, &target, dir.path()).unwrap();
    let names: Vec<String> =
        written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert!(names.contains(&"frame_000000.svg".to_string()));
    assert!(names.contains(&"frame_000050.svg".to_string()));
    assert!(names.contains(&"timeline.csv".to_string()));
    let err = parse_timeline_csv(&format!("{TIMELINE_HEADER}\n"), Path::new("t.csv")).unwrap_err();
    assert!(err.to_string().contains("no data rows"));
}

#[test]
fn deform_is_deterministic_and_generic() {
    let opt = OptConfig { learning_rate: 0.5, max_iters: 100, snapshot_every: 50, seed: 3, ..OptConfig::default() };
    let cfg = LossConfig::cd2_percent(0.08, 0.01);
    let a = run_toy_chair::<f64>(&cfg, &opt).unwrap();
    let b = run_toy_chair::<f64>(&cfg, &opt).unwrap();
    assert_eq!(a, b);
    let c = run_toy_chair::<f32>(&cfg, &opt).unwrap();
    assert_eq!(c.losses.len(), a.losses.len());
    assert!((c.losses[0] as f64 - a.losses[0]).abs() < 1e-5);
    let mut rng = rng(5);
    let _: f64 = rng.gen();
}

// The two paired comparisons below state the expected direction of the
// toy-chair experiment. Under plain gradient descent they do not hold; see
// the README section on the toy chair. Run with `--ignored` to reproduce.

#[test]
#[ignore = "documented failure, see README"]
fn toy_chair_distance_variant_beats_cd() {
    let opt = OptConfig { learning_rate: 0.5, ..OptConfig::default() };
    let m = |cfg: &LossConfig| {
        let t = run_toy_chair::<f64>(cfg, &opt).unwrap();
        let last = t.final_metrics().unwrap().clone();
        (last.vc[1].n_vc, last.it.f_it)
    };
    let (cd, cd2) = (m(&LossConfig::cd()), m(&LossConfig::cd2_distance(0.3, 1e-7)));
    assert!(cd2.0 < cd.0 && cd2.1 < cd.1, "cd2 {cd2:?} vs cd {cd:?}");
}

#[test]
#[ignore = "documented failure, see README"]
fn toy_chair_threshold_variant_lowers_clustering() {
    let opt = OptConfig { learning_rate: 0.5, ..OptConfig::default() };
    let vc = |cfg: &LossConfig| run_toy_chair::<f64>(cfg, &opt).unwrap().final_metrics().unwrap().vc[1].n_vc;
    let (cd, cd2) = (vc(&LossConfig::cd()), vc(&LossConfig::cd2_threshold(2)));
    assert!(cd2 < cd, "cd2 {cd2} vs cd {cd}");
}
