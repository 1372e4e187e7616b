//! CSV tables, atomic file writes and the run manifest.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spinboson_core::{DipoleEstimate, ResponseSample, SystemHamiltonian, Trajectory};

use crate::config::Observable;
use crate::error::{CliError, Result};

pub const TRAJECTORY_HEADER: &str = "t_fs, re_rho_HH, re_rho_BB, re_rho_HB, im_rho_HB, abs_rho_HB";
pub const RESPONSE_HEADER: &str = "t_fs, re_C, im_C";
pub const DIPOLE_HEADER: &str = "d_h_debye2, mu_debye, intensity_w_cm2, field_v_cm, kappa0_cm1";

pub const MANIFEST_FILE: &str = "manifest.json";

/// 17 significant digits: enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let row: Vec<String> = values.into_iter().map(num).collect();
    out.push_str(&row.join(", "));
    out.push('\n');
}

pub fn trajectory_csv(traj: &Trajectory, sys: &SystemHamiltonian, extra: &[Observable]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    for o in extra {
        let _ = write!(out, ", {}", o.as_str());
    }
    out.push('\n');
    for s in &traj.samples {
        let hb = s.rho.rho_hb();
        let mut row = vec![
            s.t.0,
            s.rho.rho_hh(),
            s.rho.rho_bb(),
            hb.re,
            hb.im,
            hb.norm(),
        ];
        row.extend(extra.iter().map(|o| match o {
            Observable::Eps => sys.eps(s.t).0,
            Observable::Delta => sys.delta(s.t).0,
            Observable::TraceDefect => s.rho.trace().re - 1.0,
            Observable::MinEigenvalue => s.rho.min_eigenvalue(),
        }));
        push_row(&mut out, row);
    }
    out
}

pub fn response_csv(samples: &[ResponseSample]) -> String {
    let mut out = format!("{RESPONSE_HEADER}\n");
    for s in samples {
        push_row(&mut out, [s.t.0, s.value.re, s.value.im]);
    }
    out
}

pub fn dipole_csv(d: &DipoleEstimate) -> String {
    let mut out = format!("{DIPOLE_HEADER}\n");
    push_row(
        &mut out,
        [
            d.d_h,
            d.mu_debye,
            d.intensity,
            d.field_amplitude,
            d.kappa0.0,
        ],
    );
    out
}

/// Parsed trajectory table: one row per sample, columns as in the header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::parse(1, "empty table"))?;
    let columns: Vec<String> = header.split(", ").map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row = line
            .split(", ")
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::parse(i + 1, format!("bad number `{v}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != columns.len() {
            return Err(CliError::parse(
                i + 1,
                format!("expected {} columns, found {}", columns.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(dir: &Path, file_name: &str, bytes: &[u8]) -> Result<()> {
    let target = dir.join(file_name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(&target, e))?;
    tmp.persist(&target)
        .map_err(|e| CliError::io(&target, e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Trajectory,
    Response,
    Dipole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    /// Job that produced the file; sweep points share their sweep's name.
    pub job: String,
    pub kind: OutputKind,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub version: String,
    /// Canonical form of the configuration that was run.
    pub config: String,
    pub config_sha256: String,
    pub outputs: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
