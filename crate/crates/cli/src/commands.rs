use std::path::{Path, PathBuf};

use cd2_core::bench::{bench_csv, bench_sweep, nlogn_r2, parse_bench_csv, BenchMetric};
use cd2_core::deform::{
    parse_timeline_csv, run_sphere_fit, run_toy_chair, write_trace, DeformTrace, StopReason, TimelineRow,
};
use cd2_core::geometry::io::{load_mesh, load_points, save_points};
use cd2_core::geometry::{make_box, make_chair_2d, make_icosphere};
use cd2_core::MeshF64;
use cd2_core::losses::{LossConfig, LossVariant};
use cd2_core::metrics::report::{evaluate, report_csv_rows, EvalOptions, REPORT_CSV_HEADER};
use cd2_core::metrics::{DpviHistogram, ItReport};
use serde::{Deserialize, Serialize};

use crate::config::{with_variant, BenchBlock, DeformBlock, MetricsBlock, Scenario};
use crate::fail::{create_dir, write, CliError};
use crate::plot::{line_chart, Chart, Series};

pub fn metrics(block: &MetricsBlock, seed: u64, out: &Path) -> Result<(), CliError> {
    let (Some(mesh_path), Some(points_path)) = (&block.mesh, &block.points) else {
        return Err(CliError::Config("metrics needs a mesh and a point file".into()));
    };
    let mesh: MeshF64 = load_mesh(mesh_path)?;
    let points = load_points::<f64>(points_path)?;
    let opts = EvalOptions { rhos: block.rho.clone(), emd_points: block.emd_points, seed };
    let report = evaluate(&mesh, &points, &opts)?;
    create_dir(out)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write(&out.join("report.json"), &(json + "\n"))?;
    let name = mesh_path.file_stem().map_or("mesh".into(), |s| s.to_string_lossy().into_owned());
    let mut csv = format!("{REPORT_CSV_HEADER}\n");
    for row in report_csv_rows(&name, &report) {
        csv.push_str(&row);
        csv.push('\n');
    }
    write(&out.join("report.csv"), &csv)?;
    println!(
        "cd={:.6e} emd={:.6e} f_it={} v_it={} -> {}",
        report.cd.total,
        report.emd,
        report.it.f_it,
        report.it.v_it,
        out.display()
    );
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcSummary {
    pub rho: f64,
    pub n_vc: usize,
    pub n_vc_prime: usize,
    pub sigma_vc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalMetrics {
    pub iteration: usize,
    pub vc: Vec<VcSummary>,
    pub it: ItReport,
    pub dpvi: Option<DpviHistogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub loss: LossConfig,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub initial_loss: f64,
    pub final_loss: f64,
    #[serde(rename = "final")]
    pub final_metrics: FinalMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformSummary {
    pub scenario: Scenario,
    pub seed: u64,
    pub learning_rate: f64,
    pub max_iters: usize,
    pub runs: Vec<RunSummary>,
}

fn summarize(name: &str, trace: &DeformTrace<f64>) -> RunSummary {
    let last = trace.final_metrics().expect("metrics attached");
    RunSummary {
        name: name.to_string(),
        loss: trace.loss_config.clone(),
        iterations: trace.losses.len(),
        stop_reason: trace.stop_reason,
        initial_loss: trace.losses[0],
        final_loss: last.loss,
        final_metrics: FinalMetrics {
            iteration: last.iteration,
            vc: last
                .vc
                .iter()
                .map(|r| VcSummary { rho: r.rho, n_vc: r.n_vc, n_vc_prime: r.n_vc_prime, sigma_vc: r.sigma_vc })
                .collect(),
            it: ItReport { it_faces: Vec::new(), ..last.it.clone() },
            dpvi: last.dpvi.clone().map(|d| DpviHistogram { raw: Vec::new(), ..d }),
        },
    }
}

fn sphere_target(target: &str) -> Result<MeshF64, CliError> {
    Ok(match target {
        "builtin:box" => make_box([0.5, 0.3, 0.2])?,
        "builtin:icosphere" => make_icosphere(2)?,
        path => load_mesh(Path::new(path))?,
    })
}

pub fn deform(block: &DeformBlock, variant: Option<LossVariant>, out: &Path) -> Result<DeformSummary, CliError> {
    let runs: Vec<(String, LossConfig)> = if block.runs.is_empty() {
        let loss = variant.map_or_else(|| block.loss.clone(), |v| with_variant(&block.loss, v));
        vec![(loss.variant.name().to_string(), loss)]
    } else {
        if variant.is_some() {
            return Err(CliError::Config("--variant cannot be combined with deform.runs".into()));
        }
        block.runs.iter().map(|r| (r.name.clone(), r.loss.clone())).collect()
    };
    let paired = !block.runs.is_empty();
    create_dir(out)?;
    let mut summaries = Vec::new();
    for (name, loss) in &runs {
        let dir = if paired { out.join(name) } else { out.to_path_buf() };
        let (target, trace) = match block.scenario {
            Scenario::ToyChair => (make_chair_2d::<f64>()?.0, run_toy_chair::<f64>(loss, &block.opt)?),
            Scenario::SphereFit => {
                let mesh = sphere_target(block.target.as_deref().expect("validated"))?;
                run_sphere_fit(&mesh, block.n_points, loss, &block.opt, block.subdivisions)?
            }
        };
        write_trace(&trace, &target, &dir)?;
        if block.scenario == Scenario::SphereFit {
            save_points(&target, &dir.join("target.xyz"))?;
        }
        let s = summarize(name, &trace);
        println!(
            "{name}: {} iterations, loss {:.6e} -> {:.6e}, f_it={}",
            s.iterations, s.initial_loss, s.final_loss, s.final_metrics.it.f_it
        );
        summaries.push(s);
    }
    let summary = DeformSummary {
        scenario: block.scenario,
        seed: block.opt.seed,
        learning_rate: block.opt.learning_rate,
        max_iters: block.opt.max_iters,
        runs: summaries,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write(&out.join("summary.json"), &(json + "\n"))?;
    Ok(summary)
}

pub fn bench(block: &BenchBlock, seed: u64, out: &Path) -> Result<(), CliError> {
    let metrics: Vec<BenchMetric> = block.metrics.iter().map(|m| BenchMetric::parse(m)).collect::<Result<_, _>>()?;
    let records = bench_sweep(&metrics, &block.sizes, block.reps, seed)?;
    create_dir(out)?;
    write(&out.join("bench.csv"), &bench_csv(&records))?;
    for m in &metrics {
        let pts: Vec<(usize, f64)> =
            records.iter().filter(|r| r.metric == m.name()).map(|r| (r.n, r.per_call_s)).collect();
        let last = pts.last().expect("at least one size");
        if pts.len() >= 2 {
            println!("{:14} {:.3e} s/call at n={}  R2(n log n)={:.4}", m.name(), last.1, last.0, nlogn_r2(&pts));
        } else {
            println!("{:14} {:.3e} s/call at n={}", m.name(), last.1, last.0);
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn timeline_charts(rows: &[TimelineRow], out: &Path, prefix: &str) -> Result<Vec<PathBuf>, CliError> {
    let series = |name: &str, f: &dyn Fn(&TimelineRow) -> f64| Series {
        name: name.to_string(),
        points: rows.iter().map(|r| (r.iteration as f64, f(r))).collect(),
    };
    let loss = line_chart(
        &Chart { title: "Loss", x_label: "iteration", y_label: "loss", log_x: false, log_y: true },
        &[series("loss", &|r| r.loss)],
    );
    let metrics = line_chart(
        &Chart { title: "Mesh quality", x_label: "iteration", y_label: "count", log_x: false, log_y: false },
        &[
            series("n_vc", &|r| r.n_vc as f64),
            series("n_vc_prime", &|r| r.n_vc_prime as f64),
            series("f_it", &|r| r.f_it as f64),
            series("v_it", &|r| r.v_it as f64),
        ],
    );
    let (a, b) = (out.join(format!("{prefix}loss.svg")), out.join(format!("{prefix}metrics.svg")));
    write(&a, &loss)?;
    write(&b, &metrics)?;
    Ok(vec![a, b])
}

/// Charts every `timeline.csv` (in `dir` or its immediate subdirectories)
/// and `bench.csv` found under `dir`.
pub fn report(dir: &Path, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Data(format!("{}: not a directory", dir.display())));
    }
    create_dir(out)?;
    let mut written = Vec::new();
    let mut timelines = vec![(dir.join("timeline.csv"), String::new())];
    let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    for sub in subdirs {
        let name = sub.file_name().expect("entry has a name").to_string_lossy().into_owned();
        timelines.push((sub.join("timeline.csv"), format!("{name}_")));
    }
    for (path, prefix) in timelines {
        if path.is_file() {
            let rows = parse_timeline_csv(&read(&path)?, &path)?;
            written.extend(timeline_charts(&rows, out, &prefix)?);
        }
    }
    let bench_path = dir.join("bench.csv");
    if bench_path.is_file() {
        let records = parse_bench_csv(&read(&bench_path)?).map_err(|e| match e {
            cd2_core::Error::Parse { line, message, .. } => {
                CliError::Data(format!("{}:{line}: {message}", bench_path.display()))
            }
            other => other.into(),
        })?;
        let mut names: Vec<&str> = Vec::new();
        for r in &records {
            if !names.contains(&r.metric.as_str()) {
                names.push(&r.metric);
            }
        }
        let series: Vec<Series> = names
            .iter()
            .map(|&m| Series {
                name: m.to_string(),
                points: records.iter().filter(|r| r.metric == m).map(|r| (r.n as f64, r.per_call_s)).collect(),
            })
            .collect();
        let svg = line_chart(
            &Chart { title: "Per-call time", x_label: "n (points)", y_label: "seconds", log_x: true, log_y: true },
            &series,
        );
        let path = out.join("bench.svg");
        write(&path, &svg)?;
        written.push(path);
    }
    if written.is_empty() {
        return Err(CliError::Data(format!("{}: no timeline.csv or bench.csv found", dir.display())));
    }
    Ok(written)
}
