//! On-disk formats: CSV sample tables with JSON sidecar metadata.
//!
//! CSV carries 17 significant digits per value, so a written path reads
//! back bitwise identical. All writes go through a temporary sibling
//! file and a rename, so concurrent readers never see a torn file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{ProcessSpec, SamplePath};

/// Sidecar metadata that makes a CSV sample table self-describing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathMetadata {
    pub family: String,
    /// Full process description as serialised by [`ProcessSpec`]; the
    /// `family` field above is a redundant convenience copy.
    pub parameters: serde_json::Value,
    pub n_steps: usize,
    pub delta: f64,
    pub seed: u64,
}

impl PathMetadata {
    pub fn for_path(path: &SamplePath) -> PathMetadata {
        PathMetadata {
            family: path.spec().family_name().to_string(),
            parameters: serde_json::to_value(path.spec()).expect("spec serialises"),
            n_steps: path.n_steps(),
            delta: path.delta(),
            seed: path.seed(),
        }
    }

    /// Recover the process spec, insisting that the convenience field
    /// agrees with the parameter object.
    pub fn spec(&self) -> Result<ProcessSpec> {
        let spec: ProcessSpec = serde_json::from_value(self.parameters.clone())
            .map_err(|e| Error::invalid(format!("unreadable parameters: {e}")))?;
        if spec.family_name() != self.family {
            return Err(Error::invalid(format!(
                "metadata family {:?} disagrees with parameters {:?}",
                self.family,
                spec.family_name()
            )));
        }
        Ok(spec)
    }
}

/// Render a path as CSV: header `t,x1,...,xd`, one row per sample.
pub fn path_to_csv(path: &SamplePath) -> String {
    let mut out = String::with_capacity((path.n_steps() + 2) * 24 * (path.dim() + 1));
    out.push('t');
    for c in 1..=path.dim() {
        out.push_str(&format!(",x{c}"));
    }
    out.push('\n');
    for (k, &t) in path.times().iter().enumerate() {
        out.push_str(&format!("{t:.16e}"));
        for c in 0..path.dim() {
            out.push_str(&format!(",{:.16e}", path.value(k, c)));
        }
        out.push('\n');
    }
    out
}

pub fn write_path_csv(path: &SamplePath, file: &Path) -> Result<()> {
    write_atomic(file, path_to_csv(path).as_bytes())
}

/// Load a sample table written by [`write_path_csv`], using the
/// sidecar metadata for the process spec and grid layout.
pub fn read_path_csv(file: &Path, meta: &PathMetadata) -> Result<SamplePath> {
    let spec = meta.spec()?;
    let parse_err = |detail: String| Error::Parse {
        what: "sample table",
        path: file.to_path_buf(),
        detail,
    };
    let content = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err("empty file".into()))?;
    let columns = header.split(',').count();
    if !header.starts_with('t') || columns < 2 {
        return Err(parse_err(format!("unrecognised header {header:?}")));
    }
    let dim = columns - 1;
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); dim];
    for (row, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let t: f64 = fields
            .next()
            .unwrap()
            .parse()
            .map_err(|e| parse_err(format!("row {row}: bad time: {e}")))?;
        let expected = row as f64 * meta.delta;
        if (t - expected).abs() > 1e-9 * meta.delta.max(t.abs()) {
            return Err(parse_err(format!(
                "row {row}: time {t} is off the declared grid (step {})",
                meta.delta
            )));
        }
        let mut got = 0;
        for (c, field) in fields.enumerate() {
            if c >= dim {
                return Err(parse_err(format!("row {row}: too many columns")));
            }
            let x: f64 = field
                .parse()
                .map_err(|e| parse_err(format!("row {row}: bad value: {e}")))?;
            values[c].push(x);
            got += 1;
        }
        if got != dim {
            return Err(parse_err(format!(
                "row {row}: expected {dim} value columns, found {got}"
            )));
        }
    }
    if values[0].len() != meta.n_steps + 1 {
        return Err(parse_err(format!(
            "{} rows disagree with declared n_steps = {}",
            values[0].len(),
            meta.n_steps
        )));
    }
    SamplePath::from_values(spec, meta.seed, meta.delta, values)
}

pub fn write_json<T: Serialize>(value: &T, file: &Path) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invalid(format!("unserialisable value: {e}")))?;
    body.push('\n');
    write_atomic(file, body.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(file: &Path) -> Result<T> {
    let content = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
    serde_json::from_str(&content).map_err(|e| Error::Parse {
        what: "json document",
        path: file.to_path_buf(),
        detail: e.to_string(),
    })
}

/// Write through a temporary sibling plus rename, so a reader sees
/// either the old content or the new, never a prefix.
pub fn write_atomic(file: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp: PathBuf = file.to_path_buf();
    let mut name = tmp
        .file_name()
        .ok_or_else(|| Error::invalid(format!("cannot write to {}", file.display())))?
        .to_os_string();
    name.push(format!(".tmp-{}", std::process::id()));
    tmp.set_file_name(name);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, file).map_err(|e| Error::io(file, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{gen_bm_d, gen_stable};

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("pathdim-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let path = gen_stable(64, 1.5, 99).unwrap();
        let file = scratch("stable.csv");
        write_path_csv(&path, &file).unwrap();
        let meta = PathMetadata::for_path(&path);
        let back = read_path_csv(&file, &meta).unwrap();
        assert_eq!(back.spec(), path.spec());
        assert_eq!(back.times(), path.times());
        assert_eq!(back.coordinate(0), path.coordinate(0));
        fs::remove_file(&file).unwrap();
    }

    #[test]
    fn planar_paths_round_trip_all_coordinates() {
        let path = gen_bm_d(32, 3, 5).unwrap();
        let file = scratch("bm3.csv");
        write_path_csv(&path, &file).unwrap();
        let meta = PathMetadata::for_path(&path);
        let back = read_path_csv(&file, &meta).unwrap();
        assert_eq!(back.dim(), 3);
        for c in 0..3 {
            assert_eq!(back.coordinate(c), path.coordinate(c), "coordinate {c}");
        }
        fs::remove_file(&file).unwrap();
    }

    #[test]
    fn metadata_catches_a_family_mismatch() {
        let path = gen_stable(16, 1.2, 3).unwrap();
        let mut meta = PathMetadata::for_path(&path);
        meta.family = "wiener".into();
        assert!(meta.spec().is_err());
    }

    #[test]
    fn corrupt_tables_are_rejected() {
        let path = gen_stable(16, 1.8, 3).unwrap();
        let meta = PathMetadata::for_path(&path);
        let file = scratch("corrupt.csv");

        fs::write(&file, "t,x1\nnot-a-number,0\n").unwrap();
        assert!(matches!(
            read_path_csv(&file, &meta),
            Err(Error::Parse { .. })
        ));

        // One row too few for the declared step count.
        let mut body = path_to_csv(&path);
        body.truncate(body.trim_end().rfind('\n').unwrap() + 1);
        fs::write(&file, body).unwrap();
        assert!(read_path_csv(&file, &meta).is_err());

        // A time off the declared grid.
        let body = path_to_csv(&path).replacen("1.2500000000000000e-1", "1.3e-1", 1);
        fs::write(&file, body).unwrap();
        assert!(read_path_csv(&file, &meta).is_err());

        fs::remove_file(&file).unwrap();
    }

    #[test]
    fn atomic_write_replaces_previous_content() {
        let file = scratch("atomic.json");
        write_json(&vec![1, 2, 3], &file).unwrap();
        write_json(&vec![9], &file).unwrap();
        let back: Vec<i32> = read_json(&file).unwrap();
        assert_eq!(back, vec![9]);
        assert!(write_atomic(Path::new("/"), b"x").is_err());
        fs::remove_file(&file).unwrap();
    }
}
