//! File emission: CSV and binary solution grids, slice tables, and the
//! structured text report. All writes go through a temp file and an atomic
//! rename; all floats use one fixed format so identical runs are
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hcma_core::torus::{AxisCoord, GridField, TorusDomain};
use hcma_core::verify::ConvexityReport;

pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

/// Writes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp: PathBuf = dir.join(format!(
        ".tmp.{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn axis_label(coord: AxisCoord) -> String {
    match coord {
        AxisCoord::X(alpha) => format!("x{}", alpha + 1),
        AxisCoord::Y(alpha) => format!("y{}", alpha + 1),
    }
}

/// Solution grid as CSV: one row per grid point, indices and coordinates for
/// every axis, then the potential value.
pub fn solution_csv(dom: &TorusDomain, phi: &GridField) -> String {
    let mut out = String::new();
    out.push_str("# solution grid; all quantities dimensionless (unit periods, unit volume)\n");
    out.push_str("it,t");
    for axis in dom.axes() {
        let label = axis_label(axis.coord);
        out.push_str(&format!(",i{label},{label}"));
    }
    out.push_str(",phi\n");
    for it in 0..dom.rows() {
        for s in 0..dom.spatial_len() {
            out.push_str(&format!("{it},{}", fmt_f(dom.t_of_row(it))));
            for (k, axis) in dom.axes().iter().enumerate() {
                let idx = (dom.coord_value(s, k) * axis.len as f64).round() as usize;
                out.push_str(&format!(",{idx},{}", fmt_f(dom.coord_value(s, k))));
            }
            out.push_str(&format!(",{}\n", fmt_f(phi.at(it, s))));
        }
    }
    out
}

/// Reads a solution CSV back into a grid field, checking the grid shape.
pub fn read_solution_csv(dom: &TorusDomain, text: &str) -> Result<GridField, String> {
    let mut values = Vec::with_capacity(dom.rows() * dom.spatial_len());
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("it,") || line.trim().is_empty() {
            continue;
        }
        let last = line
            .rsplit(',')
            .next()
            .ok_or_else(|| format!("malformed row: {line}"))?;
        values.push(
            last.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad value '{last}': {e}"))?,
        );
    }
    GridField::from_values(dom, values).map_err(|e| e.to_string())
}

const BIN_MAGIC: &[u8; 4] = b"HCMA";
const BIN_VERSION: u32 = 1;

/// Compact binary layout: magic `HCMA`, u32 version, u32 axis count
/// (rows first), u64 dims, then row-major little-endian f64 values.
pub fn solution_bin(dom: &TorusDomain, phi: &GridField) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BIN_MAGIC);
    out.extend_from_slice(&BIN_VERSION.to_le_bytes());
    let dims: Vec<u64> = std::iter::once(dom.rows() as u64)
        .chain(dom.axes().iter().map(|a| a.len as u64))
        .collect();
    out.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for d in &dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
    for v in phi.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_solution_bin(dom: &TorusDomain, bytes: &[u8]) -> Result<GridField, String> {
    if bytes.len() < 12 || &bytes[0..4] != BIN_MAGIC {
        return Err("not a solution binary (bad magic)".into());
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != BIN_VERSION {
        return Err(format!("unsupported binary version {version}"));
    }
    let ndims = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let mut offset = 12;
    let mut dims = Vec::with_capacity(ndims);
    for _ in 0..ndims {
        if bytes.len() < offset + 8 {
            return Err("truncated dims".into());
        }
        dims.push(u64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap()) as usize);
        offset += 8;
    }
    let expect: Vec<usize> = std::iter::once(dom.rows())
        .chain(dom.axes().iter().map(|a| a.len))
        .collect();
    if dims != expect {
        return Err(format!("dims {dims:?} do not match config grid {expect:?}"));
    }
    let total: usize = dims.iter().product();
    if bytes.len() != offset + 8 * total {
        return Err(format!(
            "payload length {} does not match grid size {total}",
            bytes.len() - offset
        ));
    }
    let mut values = Vec::with_capacity(total);
    for k in 0..total {
        let start = offset + 8 * k;
        values.push(f64::from_le_bytes(bytes[start..start + 8].try_into().unwrap()));
    }
    GridField::from_values(dom, values).map_err(|e| e.to_string())
}

/// Per-slice plot table: `t, modulus, max_Q, min_metric_gap`.
pub fn slices_csv(report: &ConvexityReport) -> String {
    let mut out = String::new();
    out.push_str("# per-slice convexity profile; all quantities dimensionless\n");
    out.push_str("t,modulus,max_q,min_metric_gap\n");
    for slice in &report.slices {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f(slice.t),
            fmt_f(slice.modulus),
            fmt_f(slice.max_q),
            fmt_f(slice.min_metric_gap)
        ));
    }
    out
}

/// Sweep table: one row per ε.
pub fn sweep_csv(rows: &[(f64, f64, f64, f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str("# epsilon sweep; all quantities dimensionless\n");
    out.push_str("epsilon,step_distance_sup,min_modulus,energy,speed_oscillation\n");
    for (eps, dist, min_mod, energy, osc) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f(*eps),
            fmt_f(*dist),
            fmt_f(*min_mod),
            fmt_f(*energy),
            fmt_f(*osc)
        ));
    }
    out
}
