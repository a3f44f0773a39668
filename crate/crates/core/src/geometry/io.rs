//! Mesh and point-set file formats.
//!
//! Meshes: Wavefront OBJ (`v`/`f` records, 1-based or negative relative
//! indices, polygons fan-triangulated) and OFF. Point sets: whitespace
//! separated XYZ text and CSV with an optional header row. Every loader
//! rejects non-finite coordinates and reports the offending line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{Mesh, PointSet};
use crate::scalar::Scalar;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

struct Ctx<'a> {
    path: &'a Path,
}

impl Ctx<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_path_buf(), line, message: message.into() }
    }

    fn number<T: Scalar>(&self, line: usize, tok: &str) -> Result<T> {
        let v: f64 = tok.trim().parse().map_err(|_| self.err(line, format!("invalid number '{tok}'")))?;
        if !v.is_finite() {
            return Err(self.err(line, format!("non-finite value '{tok}'")));
        }
        Ok(T::of(v))
    }
}

fn fan(poly: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1..poly.len().saturating_sub(1)).map(move |i| vec![poly[0], poly[i], poly[i + 1]])
}

fn build_mesh<T: Scalar>(ctx: &Ctx, coords: Vec<T>, faces: Vec<(usize, Vec<usize>)>) -> Result<Mesh<T>> {
    let vertices = PointSet::from_flat(3, coords)?;
    let n = vertices.len();
    for (line, f) in &faces {
        if let Some(&bad) = f.iter().find(|&&v| v >= n) {
            return Err(ctx.err(*line, format!("vertex index {} out of range ({n} vertices)", bad + 1)));
        }
        for a in 0..f.len() {
            if f[a + 1..].contains(&f[a]) {
                return Err(ctx.err(*line, format!("face repeats vertex {}", f[a] + 1)));
            }
        }
    }
    Mesh::new(vertices, faces.into_iter().map(|(_, f)| f).collect())
}

/// Parses Wavefront OBJ text. `path` only labels error messages.
pub fn parse_obj<T: Scalar>(text: &str, path: &Path) -> Result<Mesh<T>> {
    let ctx = Ctx { path };
    let mut coords = Vec::new();
    let mut faces = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("v") => {
                let vals: Vec<&str> = toks.collect();
                if vals.len() < 3 {
                    return Err(ctx.err(line, "vertex record needs 3 coordinates"));
                }
                for t in &vals[..3] {
                    coords.push(ctx.number(line, t)?);
                }
            }
            Some("f") => {
                let nverts = coords.len() / 3;
                let mut poly = Vec::new();
                for t in toks {
                    let head = t.split('/').next().unwrap_or("");
                    let idx: i64 = head.parse().map_err(|_| ctx.err(line, format!("invalid face index '{t}'")))?;
                    let resolved = match idx {
                        0 => return Err(ctx.err(line, "face index 0 is invalid (indices are 1-based)")),
                        i if i > 0 => i - 1,
                        i => nverts as i64 + i,
                    };
                    if resolved < 0 {
                        return Err(ctx.err(line, format!("relative face index {idx} points before the first vertex")));
                    }
                    poly.push(resolved as usize);
                }
                if poly.len() < 3 {
                    return Err(ctx.err(line, "face needs at least 3 vertices"));
                }
                faces.extend(fan(&poly).map(|f| (line, f)));
            }
            _ => {}
        }
    }
    build_mesh(&ctx, coords, faces)
}

/// Parses OFF text.
pub fn parse_off<T: Scalar>(text: &str, path: &Path) -> Result<Mesh<T>> {
    let ctx = Ctx { path };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| ctx.err(1, "missing OFF header"))?;
    let counts_inline = header.strip_prefix("OFF").ok_or_else(|| ctx.err(hl, "missing OFF header"))?.trim();
    let (cl, counts) = if counts_inline.is_empty() {
        lines.next().ok_or_else(|| ctx.err(hl, "missing element counts"))?
    } else {
        (hl, counts_inline)
    };
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| ctx.err(cl, format!("invalid count '{t}'"))))
        .collect::<Result<_>>()?;
    if counts.len() < 2 {
        return Err(ctx.err(cl, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut coords = Vec::with_capacity(3 * nv);
    for _ in 0..nv {
        let (line, l) = lines.next().ok_or_else(|| ctx.err(cl, "unexpected end of file in vertex list"))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(ctx.err(line, "vertex needs 3 coordinates"));
        }
        for t in &toks[..3] {
            coords.push(ctx.number(line, t)?);
        }
    }
    let mut faces = Vec::new();
    for _ in 0..nf {
        let (line, l) = lines.next().ok_or_else(|| ctx.err(cl, "unexpected end of file in face list"))?;
        let toks: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| ctx.err(line, format!("invalid face token '{t}'"))))
            .collect::<Result<_>>()?;
        let (&k, rest) = toks.split_first().ok_or_else(|| ctx.err(line, "empty face record"))?;
        if k < 3 || rest.len() < k {
            return Err(ctx.err(line, "face needs at least 3 vertex indices"));
        }
        faces.extend(fan(&rest[..k]).map(|f| (line, f)));
    }
    build_mesh(&ctx, coords, faces)
}

/// Parses XYZ text: one point per line, whitespace separated, 2 or 3 columns.
pub fn parse_xyz<T: Scalar>(text: &str, path: &Path) -> Result<PointSet<T>> {
    parse_rows(text, path, |l| l.split_whitespace().collect(), false)
}

/// Parses CSV: comma separated, 2 or 3 columns, optional header row.
pub fn parse_csv<T: Scalar>(text: &str, path: &Path) -> Result<PointSet<T>> {
    parse_rows(text, path, |l| l.split(',').map(str::trim).collect(), true)
}

fn parse_rows<T: Scalar>(
    text: &str,
    path: &Path,
    split: impl Fn(&str) -> Vec<&str>,
    allow_header: bool,
) -> Result<PointSet<T>> {
    let ctx = Ctx { path };
    let mut dim = None;
    let mut coords = Vec::new();
    let mut first = true;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let toks = split(l);
        let is_first = std::mem::replace(&mut first, false);
        if allow_header && is_first && toks.iter().any(|t| t.parse::<f64>().is_err()) {
            continue;
        }
        let d = *dim.get_or_insert(toks.len());
        if toks.len() != d || !(d == 2 || d == 3) {
            return Err(ctx.err(line, format!("expected {} columns, found {}", if d == 2 || d == 3 { d } else { 3 }, toks.len())));
        }
        for t in toks {
            coords.push(ctx.number(line, t)?);
        }
    }
    PointSet::from_flat(dim.unwrap_or(3), coords)
}

/// Loads a mesh, choosing the format by extension (`.obj` or `.off`).
pub fn load_mesh<T: Scalar>(path: &Path) -> Result<Mesh<T>> {
    let text = read(path)?;
    match extension(path).as_str() {
        "off" => parse_off(&text, path),
        _ => parse_obj(&text, path),
    }
}

/// Loads a point set from `.xyz`/`.txt`/`.pts` or `.csv`; mesh files yield
/// their vertices.
pub fn load_points<T: Scalar>(path: &Path) -> Result<PointSet<T>> {
    let text = read(path)?;
    match extension(path).as_str() {
        "csv" => parse_csv(&text, path),
        "obj" => Ok(parse_obj(&text, path)?.vertices().clone()),
        "off" => Ok(parse_off(&text, path)?.vertices().clone()),
        _ => parse_xyz(&text, path),
    }
}

pub fn obj_string<T: Scalar>(mesh: &Mesh<T>) -> String {
    let mut out = String::new();
    for p in mesh.vertices().iter() {
        out.push('v');
        for c in p {
            let _ = write!(out, " {c}");
        }
        if p.len() == 2 {
            out.push_str(" 0");
        }
        out.push('\n');
    }
    for f in mesh.faces() {
        if f.len() == 2 {
            out.push('l');
        } else {
            out.push('f');
        }
        for v in f {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

pub fn off_string<T: Scalar>(mesh: &Mesh<T>) -> String {
    let mut out = format!("OFF\n{} {} 0\n", mesh.vertices().len(), mesh.faces().len());
    for p in mesh.vertices().iter() {
        let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for f in mesh.faces() {
        let _ = write!(out, "{}", f.len());
        for v in f {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn xyz_string<T: Scalar>(points: &PointSet<T>) -> String {
    let mut out = String::new();
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn csv_string<T: Scalar>(points: &PointSet<T>) -> String {
    let mut out = String::from(if points.dim() == 2 { "x,y\n" } else { "x,y,z\n" });
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn save_mesh<T: Scalar>(mesh: &Mesh<T>, path: &Path) -> Result<()> {
    let text = match extension(path).as_str() {
        "off" => off_string(mesh),
        _ => obj_string(mesh),
    };
    write(path, &text)
}

pub fn save_points<T: Scalar>(points: &PointSet<T>, path: &Path) -> Result<()> {
    let text = match extension(path).as_str() {
        "csv" => csv_string(points),
        _ => xyz_string(points),
    };
    write(path, &text)
}

/// Label used by parse errors for in-memory text.
pub fn memory_path() -> PathBuf {
    PathBuf::from("<memory>")
}
