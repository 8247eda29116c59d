//! Binary export of the stored profiles: little-endian `f64` arrays plus a
//! JSON sidecar describing the layout.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::numerics::{Grid1D, TwoSidedField2D};
use crate::profiles::ProfileSet;

pub const SIDECAR_NAME: &str = "profiles.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisInfo {
    pub name: String,
    pub origin: f64,
    /// `None` for a nonuniform axis; see `nodes`.
    pub spacing: Option<f64>,
    pub len: usize,
    pub nodes: Option<Vec<f64>>,
}

impl AxisInfo {
    fn of(name: &str, g: &Grid1D) -> Self {
        Self {
            name: name.into(),
            origin: g.origin(),
            spacing: g.spacing(),
            len: g.len(),
            nodes: if g.spacing().is_some() { None } else { Some(g.nodes().to_vec()) },
        }
    }
}

/// One profile: `times.len()` consecutive records of `record_len` values.
///
/// A 1-D record is the node values. A 2-D record is the z-major `nz×nx`
/// values followed by the left trace, right trace, left x-derivative trace
/// and right x-derivative trace (`nz` each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub profile: String,
    pub file: String,
    pub times: Vec<f64>,
    pub axes: Vec<AxisInfo>,
    pub record_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSidecar {
    pub byte_order: String,
    pub dtype: String,
    pub profile_digest: String,
    pub preset: String,
    pub entries: Vec<SnapshotEntry>,
}

fn push_2d(buf: &mut Vec<u8>, f: &TwoSidedField2D) {
    for v in f
        .values
        .iter()
        .chain(&f.left_trace)
        .chain(&f.right_trace)
        .chain(&f.left_xderiv_trace)
        .chain(&f.right_xderiv_trace)
    {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(io_err(path))
}

/// Writes `up.bin`, `vp.bin`, `vkh.bin`, `vb.bin` and the sidecar into `dir`.
pub fn export_profile_snapshots(profiles: &ProfileSet, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let times = profiles.store_times.clone();
    let mut entries = Vec::new();

    let mut buf = Vec::new();
    for f in &profiles.up.snapshots {
        for v in &f.values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    write_bytes(&dir.join("up.bin"), &buf)?;
    let g = &profiles.up.snapshots[0].grid;
    entries.push(SnapshotEntry {
        profile: "up".into(),
        file: "up.bin".into(),
        times: times.clone(),
        axes: vec![AxisInfo::of("Z", g)],
        record_len: g.len(),
    });

    for (name, series, (ax, az)) in [
        ("vp", &profiles.vp, ("x", "Z")),
        ("vkh", &profiles.vkh, ("X", "z")),
        ("vb", &profiles.vb, ("X", "Z")),
    ] {
        let mut buf = Vec::new();
        for f in &series.snapshots {
            push_2d(&mut buf, f);
        }
        let file = format!("{name}.bin");
        write_bytes(&dir.join(&file), &buf)?;
        let g = &series.snapshots[0].grid;
        entries.push(SnapshotEntry {
            profile: name.into(),
            file,
            times: series.times.clone(),
            axes: vec![AxisInfo::of(ax, &g.x), AxisInfo::of(az, &g.z)],
            record_len: g.nx() * g.nz() + 4 * g.nz(),
        });
    }

    let sidecar = SnapshotSidecar {
        byte_order: "little".into(),
        dtype: "f64".into(),
        profile_digest: profiles.digest().to_string(),
        preset: profiles.data.name().to_string(),
        entries,
    };
    let path = dir.join(SIDECAR_NAME);
    let json = serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Serde(e.to_string()))?;
    write_bytes(&path, json.as_bytes())?;
    Ok(path)
}

/// Reads one record back from an export.
pub fn read_snapshot_record(dir: &Path, entry: &SnapshotEntry, k: usize) -> Result<Vec<f64>> {
    let path = dir.join(&entry.file);
    let bytes = std::fs::read(&path).map_err(io_err(&path))?;
    let n = entry.record_len;
    let start = k * n * 8;
    if k >= entry.times.len() || bytes.len() < start + n * 8 {
        return Err(Error::Config(format!("record {k} missing from {}", path.display())));
    }
    Ok(bytes[start..start + n * 8]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn read_sidecar(dir: &Path) -> Result<SnapshotSidecar> {
    let path = dir.join(SIDECAR_NAME);
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|e| Error::Serde(e.to_string()))
}
