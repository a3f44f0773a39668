use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{io::obj_string, Mesh, PointSet};
use crate::scalar::Scalar;

use super::DeformTrace;

pub const TIMELINE_HEADER: &str = "iteration,loss,n_vc,n_vc_prime,f_it,v_it";

/// ρ whose VC counts go into the timeline CSV.
const TIMELINE_RHO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct TimelineRow {
    pub iteration: usize,
    pub loss: f64,
    pub n_vc: usize,
    pub n_vc_prime: usize,
    pub f_it: usize,
    pub v_it: usize,
}

pub fn timeline_csv<T: Scalar>(trace: &DeformTrace<T>) -> String {
    let mut out = format!("{TIMELINE_HEADER}\n");
    for e in &trace.metrics_timeline {
        let vc = e.vc.iter().find(|r| r.rho == TIMELINE_RHO).or(e.vc.first());
        let (n_vc, n_vc_prime) = vc.map_or((0, 0), |r| (r.n_vc, r.n_vc_prime));
        let _ = writeln!(out, "{},{},{},{},{},{}", e.iteration, e.loss, n_vc, n_vc_prime, e.it.f_it, e.it.v_it);
    }
    out
}

pub fn parse_timeline_csv(text: &str, path: &Path) -> Result<Vec<TimelineRow>> {
    let err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == TIMELINE_HEADER => {}
        Some((i, _)) => return Err(err(i + 1, format!("expected header '{TIMELINE_HEADER}'"))),
        None => return Err(err(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (i, l) in lines {
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 6 {
            return Err(err(i + 1, format!("expected 6 fields, found {}", f.len())));
        }
        let int = |k: usize| f[k].parse::<usize>().map_err(|_| err(i + 1, format!("invalid integer '{}'", f[k])));
        let loss: f64 = f[1].parse().map_err(|_| err(i + 1, format!("invalid number '{}'", f[1])))?;
        rows.push(TimelineRow {
            iteration: int(0)?,
            loss,
            n_vc: int(2)?,
            n_vc_prime: int(3)?,
            f_it: int(4)?,
            v_it: int(5)?,
        });
    }
    if rows.is_empty() {
        return Err(err(1, "no data rows".into()));
    }
    Ok(rows)
}

/// SVG frame of a 2D mesh over its target points.
pub fn svg_frame<T: Scalar>(mesh: &Mesh<T>, target: &PointSet<T>) -> String {
    let (size, margin) = (480.0, 20.0);
    let all: Vec<[f64; 2]> = mesh
        .vertices()
        .iter()
        .chain(target.iter())
        .map(|p| [p[0].to_f64_lossy(), p[1].to_f64_lossy()])
        .collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &all {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let k = (size - 2.0 * margin) / extent;
    let map = |p: &[T]| {
        let x = margin + (p[0].to_f64_lossy() - lo[0]) * k;
        let y = size - margin - (p[1].to_f64_lossy() - lo[1]) * k;
        (x, y)
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for p in target.iter() {
        let (x, y) = map(p);
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2.5\" fill=\"#e377c2\"/>");
    }
    let v = mesh.vertices();
    for f in mesh.faces() {
        let (x1, y1) = map(v.point(f[0]));
        let (x2, y2) = map(v.point(f[1]));
        let _ = writeln!(
            out,
            "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#1f77b4\" stroke-width=\"1\"/>"
        );
    }
    for p in v.iter() {
        let (x, y) = map(p);
        let _ = writeln!(
            out,
            "<path d=\"M{:.3} {y:.3}h6M{x:.3} {:.3}v6\" stroke=\"#9467bd\" stroke-width=\"1.2\"/>",
            x - 3.0,
            y - 3.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn write_file(path: PathBuf, text: &str) -> Result<()> {
    fs::write(&path, text).map_err(|source| Error::Io { path, source })
}

/// Writes numbered snapshot frames (OBJ in 3D, SVG in 2D), `losses.csv` and
/// `timeline.csv` under `dir`. Returns the written paths.
pub fn write_trace<T: Scalar>(trace: &DeformTrace<T>, target: &PointSet<T>, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    for snap in &trace.snapshots {
        let (name, text) = if snap.mesh.dim() == 3 {
            (format!("frame_{:06}.obj", snap.iteration), obj_string(&snap.mesh))
        } else {
            (format!("frame_{:06}.svg", snap.iteration), svg_frame(&snap.mesh, target))
        };
        let path = dir.join(name);
        write_file(path.clone(), &text)?;
        written.push(path);
    }
    let mut losses = String::from("iteration,loss\n");
    for (i, l) in trace.losses.iter().enumerate() {
        let _ = writeln!(losses, "{i},{l}");
    }
    let path = dir.join("losses.csv");
    write_file(path.clone(), &losses)?;
    written.push(path);
    let path = dir.join("timeline.csv");
    write_file(path.clone(), &timeline_csv(trace))?;
    written.push(path);
    Ok(written)
}
