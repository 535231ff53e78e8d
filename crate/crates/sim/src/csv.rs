//! CSV emission of metric rows.

use std::io::{self, Write};
use std::path::Path;

use crate::runner::MetricsRow;
use crate::SimError;

pub const HEADER: &str =
    "scenario,algorithm,n_s,n_r,channels,alpha,mean_capacity,std_capacity,mean_unmatched";

/// Writes a header plus one row per metrics cell, in the order produced by
/// the runner (algorithm, then curve, then sweep value ascending). Plain
/// `Display` float formatting keeps reruns byte-identical.
pub fn write_csv<W: Write>(rows: &[MetricsRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.algorithm.name(),
            r.n_s,
            r.n_r,
            r.channels,
            r.alpha,
            r.mean_capacity,
            r.std_capacity,
            r.mean_unmatched
        )?;
    }
    Ok(())
}

pub fn write_csv_file(rows: &[MetricsRow], path: &Path) -> Result<(), SimError> {
    let mut file = std::fs::File::create(path).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(rows, &mut file).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_csv_string(rows: &[MetricsRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}
