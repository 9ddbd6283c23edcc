//! Benchmark target curves and the point containers shared by the harness.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use knotfit_core::{Point2, Point3};

use crate::error::HarnessError;

/// Points of one dataset; every point shares the dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSet {
    Planar(Vec<Point2>),
    Spatial(Vec<Point3>),
}

impl PointSet {
    pub fn len(&self) -> usize {
        match self {
            Self::Planar(p) => p.len(),
            Self::Spatial(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Planar(_) => 2,
            Self::Spatial(_) => 3,
        }
    }

    /// Coordinates as plain rows, for writing.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Planar(p) => p.iter().map(|q| q.0.to_vec()).collect(),
            Self::Spatial(p) => p.iter().map(|q| q.0.to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleUnit {
    Degrees,
    Radians,
}

impl AngleUnit {
    fn to_radians(self, t: f64) -> f64 {
        match self {
            Self::Degrees => t.to_radians(),
            Self::Radians => t,
        }
    }
}

impl FromStr for AngleUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deg" | "degrees" => Ok(Self::Degrees),
            "rad" | "radians" => Ok(Self::Radians),
            other => Err(format!("unknown angle unit `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Epitrochoid,
    ArchimedeanSpiral,
    Vivaldi,
    Csv,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Epitrochoid => "epitrochoid",
            Self::ArchimedeanSpiral => "spiral",
            Self::Vivaldi => "vivaldi",
            Self::Csv => "csv",
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "epitrochoid" => Ok(Self::Epitrochoid),
            "spiral" | "archimedean_spiral" | "archimedean-spiral" => Ok(Self::ArchimedeanSpiral),
            "vivaldi" => Ok(Self::Vivaldi),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown curve `{other}`")),
        }
    }
}

/// What to fit: a benchmark curve with its parameters, or a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub t_range: (f64, f64),
    pub unit: AngleUnit,
    pub sample_count: usize,
    pub csv_path: Option<PathBuf>,
}

impl CurveSpec {
    /// Epitrochoid `a = 5, b = 1, h = 4` over `[-180°, 180°]`, 361 samples.
    pub fn epitrochoid() -> Self {
        Self {
            kind: CurveKind::Epitrochoid,
            a: 5.0,
            b: 1.0,
            h: 4.0,
            t_range: (-180.0, 180.0),
            unit: AngleUnit::Degrees,
            sample_count: 361,
            csv_path: None,
        }
    }

    /// Archimedean spiral `a = 2` over `[0, π]`, 100 samples.
    pub fn spiral() -> Self {
        Self {
            kind: CurveKind::ArchimedeanSpiral,
            a: 2.0,
            b: 0.0,
            h: 0.0,
            t_range: (0.0, PI),
            unit: AngleUnit::Radians,
            sample_count: 100,
            csv_path: None,
        }
    }

    /// Vivaldi curve `a = 0.5` over `[-360°, 360°]`, 241 samples.
    pub fn vivaldi() -> Self {
        Self {
            kind: CurveKind::Vivaldi,
            a: 0.5,
            b: 0.0,
            h: 0.0,
            t_range: (-360.0, 360.0),
            unit: AngleUnit::Degrees,
            sample_count: 241,
            csv_path: None,
        }
    }

    pub fn csv(path: impl Into<PathBuf>) -> Self {
        Self {
            kind: CurveKind::Csv,
            a: 0.0,
            b: 0.0,
            h: 0.0,
            t_range: (0.0, 1.0),
            unit: AngleUnit::Radians,
            sample_count: 2,
            csv_path: Some(path.into()),
        }
    }

    pub fn defaults_for(kind: CurveKind) -> Self {
        match kind {
            CurveKind::Epitrochoid => Self::epitrochoid(),
            CurveKind::ArchimedeanSpiral => Self::spiral(),
            CurveKind::Vivaldi => Self::vivaldi(),
            CurveKind::Csv => Self::csv(PathBuf::new()),
        }
    }

    pub fn points(&self) -> Result<PointSet, HarnessError> {
        if self.kind != CurveKind::Csv {
            if self.sample_count < 2 {
                return Err(HarnessError::Usage(
                    "at least 2 samples are required".into(),
                ));
            }
            if !(self.t_range.0 < self.t_range.1) {
                return Err(HarnessError::Usage("t-min must be below t-max".into()));
            }
        }
        let (lo, hi) = self.t_range;
        let n = self.sample_count;
        match self.kind {
            CurveKind::Epitrochoid => {
                epitrochoid_in(self.a, self.b, self.h, lo, hi, n, self.unit).map(PointSet::Planar)
            }
            CurveKind::ArchimedeanSpiral => {
                Ok(PointSet::Planar(spiral_in(self.a, lo, hi, n, self.unit)))
            }
            CurveKind::Vivaldi => Ok(PointSet::Spatial(vivaldi_in(self.a, lo, hi, n, self.unit))),
            CurveKind::Csv => {
                let path = self.csv_path.as_ref().ok_or_else(|| {
                    HarnessError::Usage("--csv PATH is required for the csv curve".into())
                })?;
                crate::csv_io::load_csv(path)
            }
        }
    }
}

/// `count` equally spaced values from `lo` to `hi`, both included.
pub fn sample_range(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|k| {
            if k + 1 == count {
                hi
            } else {
                lo + step * k as f64
            }
        })
        .collect()
}

/// `x = (a+b) cos t - h cos((a/b + 1) t)`, `y = (a+b) sin t - h sin((a/b + 1) t)`,
/// with `t` in degrees.
pub fn generate_epitrochoid(
    a: f64,
    b: f64,
    h: f64,
    t_min_deg: f64,
    t_max_deg: f64,
    count: usize,
) -> Result<Vec<Point2>, HarnessError> {
    epitrochoid_in(a, b, h, t_min_deg, t_max_deg, count, AngleUnit::Degrees)
}

fn epitrochoid_in(
    a: f64,
    b: f64,
    h: f64,
    lo: f64,
    hi: f64,
    count: usize,
    unit: AngleUnit,
) -> Result<Vec<Point2>, HarnessError> {
    if b == 0.0 {
        return Err(HarnessError::Usage("epitrochoid needs b != 0".into()));
    }
    if count < 2 {
        return Err(HarnessError::Usage(
            "at least 2 samples are required".into(),
        ));
    }
    let k = a / b + 1.0;
    Ok(sample_range(lo, hi, count)
        .into_iter()
        .map(|t| {
            let t = unit.to_radians(t);
            Point2::new([
                (a + b) * t.cos() - h * (k * t).cos(),
                (a + b) * t.sin() - h * (k * t).sin(),
            ])
        })
        .collect())
}

/// `r = a t`, `(x, y) = (r cos t, r sin t)` with `t` in radians.
pub fn generate_archimedean_spiral(a: f64, t_min: f64, t_max: f64, count: usize) -> Vec<Point2> {
    spiral_in(a, t_min, t_max, count.max(2), AngleUnit::Radians)
}

fn spiral_in(a: f64, lo: f64, hi: f64, count: usize, unit: AngleUnit) -> Vec<Point2> {
    sample_range(lo, hi, count)
        .into_iter()
        .map(|t| {
            let t = unit.to_radians(t);
            let r = a * t;
            Point2::new([r * t.cos(), r * t.sin()])
        })
        .collect()
}

/// `(a (1 + cos t), a sin t, 2 a sin(t / 2))` with `t` in degrees.
pub fn generate_vivaldi(a: f64, t_min_deg: f64, t_max_deg: f64, count: usize) -> Vec<Point3> {
    vivaldi_in(a, t_min_deg, t_max_deg, count.max(2), AngleUnit::Degrees)
}

fn vivaldi_in(a: f64, lo: f64, hi: f64, count: usize, unit: AngleUnit) -> Vec<Point3> {
    sample_range(lo, hi, count)
        .into_iter()
        .map(|t| {
            let t = unit.to_radians(t);
            Point3::new([a * (1.0 + t.cos()), a * t.sin(), 2.0 * a * (0.5 * t).sin()])
        })
        .collect()
}
