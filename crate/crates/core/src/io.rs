//! File formats: angles with units, spherical codes, pipeline files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centered::SyntheticPipeline;
use crate::error::{Error, Result};
use crate::packing::SphericalCode;
use crate::rng::Seed;
use crate::sphere::{Angle, UnitVector};

/// An angle as written in a config: a bare number (radians) or a string
/// with an explicit `rad` or `deg` suffix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    pub fn angle(&self) -> Result<Angle> {
        match self {
            AngleValue::Radians(r) => Angle::new(*r),
            AngleValue::Text(s) => parse_angle(s),
        }
    }
}

impl From<f64> for AngleValue {
    fn from(r: f64) -> Self {
        AngleValue::Radians(r)
    }
}

/// Parses `0.14rad`, `8deg` or `8°`. A unit is required.
pub fn parse_angle(s: &str) -> Result<Angle> {
    let s = s.trim();
    let (num, to_rad): (&str, fn(f64) -> f64) = if let Some(n) = s.strip_suffix("rad") {
        (n, |x| x)
    } else if let Some(n) = s.strip_suffix("deg").or_else(|| s.strip_suffix('°')) {
        (n, f64::to_radians)
    } else {
        return Err(Error::param(
            "angle",
            format!("`{s}` needs a `rad` or `deg` suffix"),
        ));
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::param("angle", format!("`{s}` is not a number with a unit")))?;
    Angle::new(to_rad(v))
}

/// Metadata written next to a code's CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSidecar {
    pub dimension: usize,
    pub points: usize,
    /// Target separation, when the code was built for one.
    pub psi: Option<f64>,
    pub saturated: bool,
    pub min_angle: f64,
}

/// Points as CSV, one row per point, columns `x0..x{D-1}`.
pub fn code_to_csv(points: &[UnitVector]) -> Result<String> {
    let dim = points.first().map_or(0, UnitVector::dim);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record((0..dim).map(|k| format!("x{k}")))?;
    for p in points {
        w.write_record(p.as_slice().iter().map(|v| format!("{v:?}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads points written by [`code_to_csv`]; lines starting with `#` are
/// ignored and rows are renormalized within the usual tolerance.
pub fn code_from_csv(text: &str) -> Result<Vec<UnitVector>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(k + 2, |p| p.line() as usize);
        let coords = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line,
                reason: e.to_string(),
            })?;
        let v = UnitVector::new(coords).map_err(|e| Error::Parse {
            line,
            reason: e.to_string(),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Empty("code file"));
    }
    Ok(out)
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `path` (CSV) and `path.json` (metadata).
pub fn write_code(path: &Path, code: &SphericalCode, psi: Option<Angle>) -> Result<()> {
    fs::write(path, code_to_csv(&code.points)?)?;
    let side = CodeSidecar {
        dimension: code.dimension,
        points: code.len(),
        psi: psi.map(Angle::radians),
        saturated: code.saturated,
        min_angle: code.min_angle.radians(),
    };
    fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&side)? + "\n",
    )?;
    Ok(())
}

pub fn read_points(path: &Path) -> Result<Vec<UnitVector>> {
    code_from_csv(&fs::read_to_string(path)?)
}

/// On-disk pipeline description; centers live in a separate code CSV whose
/// path is resolved relative to the pipeline file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineFile {
    pub dimension: usize,
    pub rho: f64,
    pub eta: f64,
    pub seed: Seed,
    pub centers: String,
}

impl PipelineFile {
    pub fn load(path: &Path) -> Result<(Self, SyntheticPipeline)> {
        let pf: PipelineFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let centers = read_points(&base.join(&pf.centers))?;
        let p = SyntheticPipeline::new(centers, Angle::new(pf.rho)?, pf.eta, pf.seed)?;
        if p.dimension != pf.dimension {
            return Err(Error::DimensionMismatch {
                expected: pf.dimension,
                got: p.dimension,
            });
        }
        Ok((pf, p))
    }
}
