//! Chord and driving files.
//!
//! Inputs are parsed with `serde_json`; outputs are written by hand so that
//! every float carries exactly 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use loewner_core::{Chord, CurveSegment, DrivingFunction, Error, Point};
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const CLOCK: &str = "a_t=t";

/// A float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChord {
    schema_version: u32,
    start: f64,
    end: Option<f64>,
    vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDriving {
    schema_version: u32,
    clock: String,
    samples: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    schema_version: u32,
    chords: Vec<String>,
}

/// Contents of a chord file. `end: null` marks an open segment, which is what
/// `trace` produces.
#[derive(Debug, Clone, PartialEq)]
pub enum ChordFile {
    Chord(Chord),
    Segment(CurveSegment),
}

impl ChordFile {
    pub fn start(&self) -> f64 {
        match self {
            ChordFile::Chord(c) => c.start,
            ChordFile::Segment(s) => s.base,
        }
    }

    pub fn end(&self) -> Option<f64> {
        match self {
            ChordFile::Chord(c) => Some(c.end),
            ChordFile::Segment(_) => None,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        match self {
            ChordFile::Chord(c) => &c.vertices,
            ChordFile::Segment(s) => &s.vertices,
        }
    }

    pub fn into_chord(self, path: &Path) -> Result<Chord, CliError> {
        match self {
            ChordFile::Chord(c) => Ok(c),
            ChordFile::Segment(_) => {
                Err(CliError::Input(format!("{}: end is null; this command needs a closed chord", path.display())))
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

fn check_version(path: &Path, v: u32) -> Result<(), CliError> {
    if v != SCHEMA_VERSION {
        return Err(CliError::Input(format!(
            "{}: schema_version: expected {SCHEMA_VERSION}, found {v}",
            path.display()
        )));
    }
    Ok(())
}

fn field_error(path: &Path, e: Error) -> CliError {
    match e {
        Error::Geometry { index, reason } => CliError::Input(format!("{}: vertices[{index}]: {reason}", path.display())),
        other => CliError::Input(format!("{}: {other}", path.display())),
    }
}

pub fn parse_chord(path: &Path, text: &str) -> Result<ChordFile, CliError> {
    let raw: RawChord = parse(path, text)?;
    check_version(path, raw.schema_version)?;
    let vertices: Vec<Point> = raw.vertices.iter().map(|&[re, im]| Point::new(re, im)).collect();
    match raw.end {
        Some(end) => Chord::new(raw.start, end, vertices).map(ChordFile::Chord),
        None => CurveSegment::new(raw.start, vertices).map(ChordFile::Segment),
    }
    .map_err(|e| field_error(path, e))
}

pub fn read_chord(path: &Path) -> Result<ChordFile, CliError> {
    parse_chord(path, &read(path)?)
}

pub fn parse_driving(path: &Path, text: &str) -> Result<DrivingFunction, CliError> {
    let raw: RawDriving = parse(path, text)?;
    check_version(path, raw.schema_version)?;
    if raw.clock != CLOCK {
        return Err(CliError::Input(format!(
            "{}: clock: expected {CLOCK:?}, found {:?}",
            path.display(),
            raw.clock
        )));
    }
    if raw.samples.first().map(|s| s[0]) != Some(0.0) {
        return Err(CliError::Input(format!("{}: samples[0]: time must start at 0", path.display())));
    }
    if let Some(i) = raw.samples.windows(2).position(|w| !(w[1][0] > w[0][0])) {
        return Err(CliError::Input(format!(
            "{}: samples[{}]: times must be strictly increasing",
            path.display(),
            i + 1
        )));
    }
    DrivingFunction::new(raw.samples.iter().map(|&[t, l]| (t, l)).collect()).map_err(|e| field_error(path, e))
}

pub fn read_driving(path: &Path) -> Result<DrivingFunction, CliError> {
    parse_driving(path, &read(path)?)
}

/// Chord paths listed by a suite file, resolved against the file's directory.
pub fn read_suite(path: &Path) -> Result<Vec<(String, Chord)>, CliError> {
    let raw: RawSuite = parse(path, &read(path)?)?;
    check_version(path, raw.schema_version)?;
    if raw.chords.is_empty() {
        return Err(CliError::Input(format!("{}: chords: the suite is empty", path.display())));
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    raw.chords
        .iter()
        .map(|p| {
            let full = dir.join(p);
            Ok((p.clone(), read_chord(&full)?.into_chord(&full)?))
        })
        .collect()
}

fn pair(out: &mut String, a: f64, b: f64, last: bool) {
    let _ = writeln!(out, "    [{}, {}]{}", fmt_f64(a), fmt_f64(b), if last { "" } else { "," });
}

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<(), CliError> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(CliError::Numeric("refusing to write a non-finite value".into()))
    }
}

pub fn write_chord_json(start: f64, end: Option<f64>, vertices: &[Point]) -> Result<String, CliError> {
    check_finite([start, end.unwrap_or(0.0)].into_iter().chain(vertices.iter().flat_map(|z| [z.re, z.im])))?;
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"schema_version\": {SCHEMA_VERSION},");
    let _ = writeln!(out, "  \"start\": {},", fmt_f64(start));
    let _ = writeln!(out, "  \"end\": {},", end.map_or("null".into(), fmt_f64));
    out.push_str("  \"vertices\": [\n");
    for (i, z) in vertices.iter().enumerate() {
        pair(&mut out, z.re, z.im, i + 1 == vertices.len());
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

pub fn chord_json(chord: &Chord) -> Result<String, CliError> {
    write_chord_json(chord.start, Some(chord.end), &chord.vertices)
}

pub fn driving_json(driving: &DrivingFunction) -> Result<String, CliError> {
    let samples = driving.samples();
    check_finite(samples.iter().flat_map(|&(t, l)| [t, l]))?;
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"schema_version\": {SCHEMA_VERSION},\n  \"clock\": \"{CLOCK}\",");
    out.push_str("  \"samples\": [\n");
    for (i, &(t, l)) in samples.iter().enumerate() {
        pair(&mut out, t, l, i + 1 == samples.len());
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}
