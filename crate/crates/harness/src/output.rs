//! Results tables (CSV and JSON), fitted-curve dumps and SVG plots.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use knotfit_core::{BSplineCurve, KnotVector, Point};

use crate::curves::PointSet;
use crate::error::HarnessError;
use crate::experiment::{FittedCurve, ResultsTable};

pub const TABLE_HEADER: &str =
    "iterations,method,rmse,euclidean_distance,control_points,cost,fitness,seed,wall_time_ms";

/// Number of parameters at which the fitted curve is sampled for plotting.
pub const PLOT_SAMPLES: usize = 600;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    /// CSV table; a JSON copy is written next to it with a `.json` extension.
    pub table: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub curve: Option<PathBuf>,
}

pub fn emit_outputs(
    table: &ResultsTable,
    fitted: Option<&FittedCurve>,
    original: &PointSet,
    paths: &OutputPaths,
) -> Result<(), HarnessError> {
    if let Some(path) = &paths.table {
        write_table_csv(table, path)?;
        write_table_json(table, &json_sibling(path))?;
    }
    if let (Some(path), Some(curve)) = (&paths.curve, fitted) {
        save_curve_json(curve, path)?;
    }
    if let Some(path) = &paths.svg {
        fs::write(path, render_svg(original, fitted)).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}

/// `table.csv` -> `table.json`; other names get `.json` appended.
pub fn json_sibling(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e == "csv") {
        path.with_extension("json")
    } else {
        let mut s = path.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }
}

pub fn write_table_csv(table: &ResultsTable, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    if table.rows.is_empty() {
        wtr.write_record(TABLE_HEADER.split(','))
            .map_err(|e| HarnessError::Serialization(e.to_string()))?;
    }
    for row in &table.rows {
        wtr.serialize(row)
            .map_err(|e| HarnessError::Serialization(e.to_string()))?;
    }
    wtr.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn write_table_json(table: &ResultsTable, path: &Path) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(table)
        .map_err(|e| HarnessError::Serialization(e.to_string()))?;
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDump {
    pub degree: usize,
    pub knots: Vec<f64>,
    pub control_points: Vec<Vec<f64>>,
}

impl From<&FittedCurve> for CurveDump {
    fn from(curve: &FittedCurve) -> Self {
        Self {
            degree: curve.degree(),
            knots: curve.knots().to_vec(),
            control_points: curve.control_rows(),
        }
    }
}

impl CurveDump {
    pub fn into_curve(self) -> Result<FittedCurve, HarnessError> {
        let kv = KnotVector::new(self.knots, self.degree)?;
        match self.control_points.first().map(Vec::len) {
            Some(2) => Ok(FittedCurve::Planar(BSplineCurve::new(
                kv,
                to_points(&self.control_points)?,
            )?)),
            Some(3) => Ok(FittedCurve::Spatial(BSplineCurve::new(
                kv,
                to_points(&self.control_points)?,
            )?)),
            _ => Err(HarnessError::Serialization(
                "control points must have 2 or 3 coordinates".into(),
            )),
        }
    }
}

fn to_points<const D: usize>(rows: &[Vec<f64>]) -> Result<Vec<Point<f64, D>>, HarnessError> {
    rows.iter()
        .map(|r| {
            <[f64; D]>::try_from(r.as_slice())
                .map(Point)
                .map_err(|_| HarnessError::Serialization("mixed control point dimensions".into()))
        })
        .collect()
}

pub fn save_curve_json(curve: &FittedCurve, path: &Path) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(&CurveDump::from(curve))
        .map_err(|e| HarnessError::Serialization(e.to_string()))?;
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn load_curve_json(path: &Path) -> Result<FittedCurve, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let dump: CurveDump =
        serde_json::from_str(&text).map_err(|e| HarnessError::Serialization(e.to_string()))?;
    dump.into_curve()
}

const PANEL: f64 = 480.0;
const MARGIN: f64 = 20.0;

/// Original points as circles and the fitted curve as a polyline. 3-D data is
/// drawn as three side-by-side projections (xy, xz, yz).
pub fn render_svg(original: &PointSet, fitted: Option<&FittedCurve>) -> String {
    let data = original.rows();
    let curve = fitted
        .map(|c| c.sample_rows(PLOT_SAMPLES))
        .unwrap_or_default();
    let planes: &[(usize, usize, &str)] = if original.dimension() == 2 {
        &[(0, 1, "xy")]
    } else {
        &[(0, 1, "xy"), (0, 2, "xz"), (1, 2, "yz")]
    };
    let width = PANEL * planes.len() as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {PANEL}" width="{width}" height="{PANEL}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{PANEL}" fill="white"/>"#
    );
    for (panel, &(ix, iy, label)) in planes.iter().enumerate() {
        let project = Projection::fit(data.iter().chain(&curve), ix, iy, panel as f64 * PANEL);
        let _ = writeln!(svg, r#"<g id="panel-{label}">"#);
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="14" font-family="sans-serif" font-size="12" fill="#555">{label}</text>"##,
            panel as f64 * PANEL + 4.0
        );
        if !curve.is_empty() {
            let pts: Vec<String> = curve
                .iter()
                .map(|r| {
                    let (x, y) = project.apply(r);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r##"<polyline fill="none" stroke="#c0392b" stroke-width="1.5" points="{}"/>"##,
                pts.join(" ")
            );
        }
        for r in &data {
            let (x, y) = project.apply(r);
            let _ = writeln!(
                svg,
                r##"<circle cx="{x:.3}" cy="{y:.3}" r="2" fill="#2c3e50"/>"##
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}

struct Projection {
    ix: usize,
    iy: usize,
    min_x: f64,
    max_y: f64,
    scale: f64,
    offset: (f64, f64),
}

impl Projection {
    fn fit<'a>(rows: impl Iterator<Item = &'a Vec<f64>>, ix: usize, iy: usize, left: f64) -> Self {
        let (mut lo, mut hi) = (
            (f64::INFINITY, f64::INFINITY),
            (f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for r in rows {
            lo = (lo.0.min(r[ix]), lo.1.min(r[iy]));
            hi = (hi.0.max(r[ix]), hi.1.max(r[iy]));
        }
        if !lo.0.is_finite() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::EPSILON);
        let scale = (PANEL - 2.0 * MARGIN) / span;
        // centre the shorter extent
        let offset = (
            left + MARGIN + 0.5 * (span - (hi.0 - lo.0)) * scale,
            MARGIN + 0.5 * (span - (hi.1 - lo.1)) * scale,
        );
        Self {
            ix,
            iy,
            min_x: lo.0,
            max_y: hi.1,
            scale,
            offset,
        }
    }

    fn apply(&self, r: &[f64]) -> (f64, f64) {
        (
            self.offset.0 + (r[self.ix] - self.min_x) * self.scale,
            self.offset.1 + (self.max_y - r[self.iy]) * self.scale,
        )
    }
}
