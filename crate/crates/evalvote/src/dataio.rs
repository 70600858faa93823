//! CSV ingestion and export.
//!
//! Profile CSV: header `voter,c1,...,cd`, one row per voter, decimal values in
//! `[0, 1]`. Ballot CSV has the same shape with integer cells on a `0..=scale_max`
//! scale; cells may be blank when the missing-data policy allows it.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use evalvote_core::analysis::HistogramData;
use evalvote_core::generators::SpatialScene;
use evalvote_core::{EvaluationProfile, GradeScale};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: line {line}, column {column}: cannot parse `{value}` as a {expected}")]
    Parse { path: PathBuf, line: u64, column: usize, value: String, expected: &'static str },
    #[error("{path}: line {line}, column {column}: value {value} is outside [0, {max}]")]
    Range { path: PathBuf, line: u64, column: usize, value: String, max: String },
    #[error("{path}: missing evaluations on line(s) {lines:?}")]
    Missing { path: PathBuf, lines: Vec<u64> },
    #[error("{path}: {message}")]
    Shape { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] evalvote_core::Error),
}

/// What to do with a ballot row that has blank cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    #[default]
    RejectFile,
    DropVoter,
}

#[derive(Debug, Clone)]
pub struct BallotFileSpec {
    pub path: PathBuf,
    pub scale_max: u32,
    pub missing_policy: MissingPolicy,
}

#[derive(Debug, Clone)]
pub struct BallotRead {
    pub profile: EvaluationProfile,
    pub candidate_names: Vec<String>,
    /// Voters removed under [`MissingPolicy::DropVoter`].
    pub dropped_voters: usize,
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io { path: path.to_owned(), source })?;
    Ok(csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file))
}

fn header_names(reader: &mut csv::Reader<File>, path: &Path) -> Result<Vec<String>, DataError> {
    let headers = reader.headers().map_err(|source| DataError::Csv { path: path.to_owned(), source })?;
    if headers.len() < 2 {
        return Err(DataError::Shape {
            path: path.to_owned(),
            message: "header needs a voter column and at least one candidate column".into(),
        });
    }
    Ok(headers.iter().skip(1).map(str::to_owned).collect())
}

fn record_line(record: &csv::StringRecord, fallback: u64) -> u64 {
    record.position().map_or(fallback, |p| p.line())
}

/// Reads integer ballots and normalizes them by `scale_max` onto `[0, 1]`.
pub fn read_ballots_csv(spec: &BallotFileSpec) -> Result<BallotRead, DataError> {
    let path = spec.path.as_path();
    if spec.scale_max == 0 {
        return Err(DataError::Shape { path: path.to_owned(), message: "scale_max must be at least 1".into() });
    }
    let mut reader = open_reader(path)?;
    let names = header_names(&mut reader, path)?;
    let d = names.len();
    let mut values = Vec::new();
    let mut voters = 0;
    let mut missing_lines = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|source| DataError::Csv { path: path.to_owned(), source })?;
        let line = record_line(&record, k as u64 + 2);
        if record.len() != d + 1 {
            return Err(DataError::Shape {
                path: path.to_owned(),
                message: format!("line {line} has {} fields, expected {}", record.len(), d + 1),
            });
        }
        let mut row = Vec::with_capacity(d);
        let mut has_blank = false;
        for (c, cell) in record.iter().enumerate().skip(1) {
            if cell.is_empty() {
                has_blank = true;
                continue;
            }
            let grade: i64 = cell.parse().map_err(|_| DataError::Parse {
                path: path.to_owned(),
                line,
                column: c + 1,
                value: cell.to_owned(),
                expected: "integer grade",
            })?;
            if grade < 0 || grade > i64::from(spec.scale_max) {
                return Err(DataError::Range {
                    path: path.to_owned(),
                    line,
                    column: c + 1,
                    value: cell.to_owned(),
                    max: spec.scale_max.to_string(),
                });
            }
            row.push(grade as f64 / f64::from(spec.scale_max));
        }
        if has_blank {
            missing_lines.push(line);
            continue;
        }
        values.extend(row);
        voters += 1;
    }
    if !missing_lines.is_empty() && spec.missing_policy == MissingPolicy::RejectFile {
        return Err(DataError::Missing { path: path.to_owned(), lines: missing_lines });
    }
    if voters == 0 {
        return Err(DataError::Shape { path: path.to_owned(), message: "no complete ballots".into() });
    }
    let profile = EvaluationProfile::from_values(voters, d, values, GradeScale::Discrete(spec.scale_max + 1))?;
    Ok(BallotRead { profile, candidate_names: names, dropped_voters: missing_lines.len() })
}

/// Reads a continuous profile CSV. Every cell must be a number in `[0, 1]`.
pub fn read_profile_csv(path: &Path) -> Result<(EvaluationProfile, Vec<String>), DataError> {
    let mut reader = open_reader(path)?;
    let names = header_names(&mut reader, path)?;
    let d = names.len();
    let mut values = Vec::new();
    let mut voters = 0;
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|source| DataError::Csv { path: path.to_owned(), source })?;
        let line = record_line(&record, k as u64 + 2);
        if record.len() != d + 1 {
            return Err(DataError::Shape {
                path: path.to_owned(),
                message: format!("line {line} has {} fields, expected {}", record.len(), d + 1),
            });
        }
        for (c, cell) in record.iter().enumerate().skip(1) {
            let value: f64 = cell.parse().map_err(|_| DataError::Parse {
                path: path.to_owned(),
                line,
                column: c + 1,
                value: cell.to_owned(),
                expected: "number",
            })?;
            if !(0.0..=1.0).contains(&value) {
                return Err(DataError::Range {
                    path: path.to_owned(),
                    line,
                    column: c + 1,
                    value: cell.to_owned(),
                    max: "1".into(),
                });
            }
            values.push(value);
        }
        voters += 1;
    }
    if voters == 0 {
        return Err(DataError::Shape { path: path.to_owned(), message: "no voter rows".into() });
    }
    Ok((EvaluationProfile::from_values(voters, d, values, GradeScale::Continuous)?, names))
}

fn create(path: &Path) -> Result<BufWriter<File>, DataError> {
    File::create(path).map(BufWriter::new).map_err(|source| DataError::Io { path: path.to_owned(), source })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| DataError::Io { path: path.to_owned(), source }
}

fn write_header(out: &mut impl Write, first: &str, candidates: usize) -> std::io::Result<()> {
    write!(out, "{first}")?;
    for i in 1..=candidates {
        write!(out, ",c{i}")?;
    }
    writeln!(out)
}

/// Writes the shared profile CSV format. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn write_profile_csv(profile: &EvaluationProfile, path: &Path) -> Result<(), DataError> {
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        write_header(out, "voter", profile.candidates())?;
        for (j, row) in profile.rows().enumerate() {
            write!(out, "{}", j + 1)?;
            for v in row {
                write!(out, ",{v:?}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

/// Writes integer ballots `round(e * scale_max)`.
pub fn write_ballots_csv(profile: &EvaluationProfile, scale_max: u32, path: &Path) -> Result<(), DataError> {
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        write_header(out, "voter", profile.candidates())?;
        for (j, row) in profile.rows().enumerate() {
            write!(out, "{}", j + 1)?;
            for v in row {
                write!(out, ",{}", (v * f64::from(scale_max)).round() as i64)?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

/// `point_type,index,x1..xk` with 1-based indices, candidates first.
pub fn write_scene_csv(scene: &SpatialScene, path: &Path) -> Result<(), DataError> {
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        write!(out, "point_type,index")?;
        for k in 1..=scene.dim() {
            write!(out, ",x{k}")?;
        }
        writeln!(out)?;
        let points = (0..scene.candidate_count())
            .map(|i| ("candidate", i, scene.candidate(i)))
            .chain((0..scene.voter_count()).map(|j| ("voter", j, scene.voter(j))));
        for (kind, idx, coords) in points {
            write!(out, "{kind},{}", idx + 1)?;
            for x in coords {
                write!(out, ",{x:?}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

/// `bin_low,bin_high,count`; the exact-0 atom is the row `0,0,count` and the
/// exact-1 atom the row `1,1,count`.
pub fn write_histogram_csv(h: &HistogramData, path: &Path) -> Result<(), DataError> {
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "bin_low,bin_high,count")?;
        writeln!(out, "0,0,{}", h.zero_atom)?;
        for (k, count) in h.counts.iter().enumerate() {
            let (lo, hi) = h.bin_edges(k);
            writeln!(out, "{lo:?},{hi:?},{count}")?;
        }
        writeln!(out, "1,1,{}", h.one_atom)?;
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

pub fn write_scatter_csv(points: &[(f64, f64)], path: &Path) -> Result<(), DataError> {
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "e_i,e_j")?;
        for (a, b) in points {
            writeln!(out, "{a:?},{b:?}")?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

/// Reads a headerless `d x d` numeric CSV (a correlation matrix).
pub fn read_matrix_csv(path: &Path) -> Result<(usize, Vec<f64>), DataError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(file);
    let mut values = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|source| DataError::Csv { path: path.to_owned(), source })?;
        let line = record_line(&record, rows as u64 + 1);
        for (c, cell) in record.iter().enumerate() {
            values.push(cell.parse::<f64>().map_err(|_| DataError::Parse {
                path: path.to_owned(),
                line,
                column: c + 1,
                value: cell.to_owned(),
                expected: "number",
            })?);
        }
        rows += 1;
    }
    if rows == 0 || values.len() != rows * rows {
        return Err(DataError::Shape {
            path: path.to_owned(),
            message: format!("expected a square matrix, got {rows} rows and {} values", values.len()),
        });
    }
    Ok((rows, values))
}
