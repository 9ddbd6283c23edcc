//! Point CSV files: 2 or 3 numeric columns, one point per row, optional header.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use knotfit_core::{Point2, Point3};

use crate::curves::PointSet;
use crate::error::HarnessError;

pub fn load_csv(path: impl AsRef<Path>) -> Result<PointSet, HarnessError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_points(file, path)
}

/// Parses point rows from any reader; `origin` only labels errors.
pub fn read_points<R: std::io::Read>(reader: R, origin: &Path) -> Result<PointSet, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let format_error = |line: u64, message: String| HarnessError::Format {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            format_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let is_header = first;
        first = false;
        let parsed: Result<Vec<f64>, usize> = record
            .iter()
            .enumerate()
            .map(|(col, cell)| cell.parse::<f64>().map_err(|_| col))
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if is_header => continue,
            Err(col) => {
                return Err(format_error(
                    line,
                    format!("cannot parse `{}` as a number", &record[col]),
                ))
            }
        };
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(format_error(
                line,
                format!("non-finite value in column {}", col + 1),
            ));
        }
        if !(2..=3).contains(&values.len()) {
            return Err(format_error(
                line,
                format!("expected 2 or 3 columns, found {}", values.len()),
            ));
        }
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(format_error(
                    line,
                    format!("row has {} columns but earlier rows have {d}", values.len()),
                ))
            }
            _ => {}
        }
        rows.push(values);
    }
    if rows.len() < 2 {
        return Err(HarnessError::Input {
            path: origin.to_path_buf(),
            message: format!("need at least 2 data rows, found {}", rows.len()),
        });
    }
    Ok(match dim {
        Some(2) => PointSet::Planar(rows.iter().map(|r| Point2::new([r[0], r[1]])).collect()),
        _ => PointSet::Spatial(
            rows.iter()
                .map(|r| Point3::new([r[0], r[1], r[2]]))
                .collect(),
        ),
    })
}

/// Writes points with a `x,y[,z]` header. Values use the shortest decimal
/// form that parses back to the same `f64`.
pub fn write_points<W: Write>(points: &PointSet, out: W) -> Result<(), HarnessError> {
    let mut wtr = csv::Writer::from_writer(out);
    let header: &[&str] = if points.dimension() == 2 {
        &["x", "y"]
    } else {
        &["x", "y", "z"]
    };
    let to_err = |e: csv::Error| HarnessError::Serialization(e.to_string());
    wtr.write_record(header).map_err(to_err)?;
    for row in points.rows() {
        wtr.write_record(row.iter().map(|v| v.to_string()))
            .map_err(to_err)?;
    }
    wtr.flush()
        .map_err(|e| HarnessError::Serialization(e.to_string()))
}

pub fn save_csv(points: &PointSet, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_points(points, file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PointSet, HarnessError> {
        read_points(text.as_bytes(), Path::new("mem.csv"))
    }

    #[test]
    fn plain_rows() {
        let set = parse("0,0\n1,0\n2,0").unwrap();
        assert_eq!(set.dimension(), 2);
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn header_is_skipped() {
        let set = parse("x,y,z\n1,2,3\n4,5,6").unwrap();
        assert_eq!(
            set,
            PointSet::Spatial(vec![Point3::new([1., 2., 3.]), Point3::new([4., 5., 6.])])
        );
    }

    #[test]
    fn mixed_dimensions_report_the_line() {
        match parse("1,2\n3,4,5") {
            Err(HarnessError::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_cells_and_short_files() {
        match parse("x,y\n1,2\n3,oops\n") {
            Err(HarnessError::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("x,y\n1,2\n"),
            Err(HarnessError::Input { .. })
        ));
        assert!(parse("1\n2\n").is_err());
        assert!(parse("1,2,3,4\n5,6,7,8\n").is_err());
    }

    #[test]
    fn written_values_parse_back_exactly() {
        let set = PointSet::Planar(vec![
            Point2::new([0.1 + 0.2, -1e-300]),
            Point2::new([std::f64::consts::PI, 123456.789e10]),
        ]);
        let mut buf = Vec::new();
        write_points(&set, &mut buf).unwrap();
        assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), set);
    }
}
