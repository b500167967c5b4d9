//! CSV interfaces: point sets (`x1,...,xn`), value columns (`value`),
//! evaluation output (`x1,...,xn,s`), and convergence level tables.
//!
//! Floats are written in Rust's shortest round-trip form, so a write/read
//! cycle reproduces point sets bit for bit.

use crate::geometry::PointSet;
use crate::harness::LevelRecord;
use crate::{Error, Result};
use std::path::Path;

fn coordinate_headers(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

pub fn write_points_csv<P: AsRef<Path>>(path: P, points: &PointSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(coordinate_headers(points.dim()))?;
    for p in points.iter() {
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv<P: AsRef<Path>>(path: P) -> Result<PointSet> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let dim = headers.len();
    let expected = coordinate_headers(dim);
    for (got, want) in headers.iter().zip(&expected) {
        if got != want {
            return Err(Error::InvalidArgument(format!(
                "point CSV header must be x1,...,x{dim}; found column {got:?}"
            )));
        }
    }
    let mut coords = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "row {} has {} fields, expected {dim}",
                line + 2,
                rec.len()
            )));
        }
        for field in rec.iter() {
            coords.push(field.trim().parse::<f64>().map_err(|e| {
                Error::InvalidArgument(format!("row {}: bad float {field:?}: {e}", line + 2))
            })?);
        }
    }
    PointSet::new(dim, coords)
}

pub fn write_values_csv<P: AsRef<Path>>(path: P, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["value"])?;
    for v in values {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_values_csv<P: AsRef<Path>>(path: P) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.len() != 1 || headers.get(0) != Some("value") {
        return Err(Error::InvalidArgument(
            "values CSV must have the single column `value`".into(),
        ));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = rec.get(0).unwrap_or("");
        out.push(field.trim().parse::<f64>().map_err(|e| {
            Error::InvalidArgument(format!("row {}: bad float {field:?}: {e}", line + 2))
        })?);
    }
    Ok(out)
}

/// Evaluation output: the evaluation coordinates plus the interpolant column `s`.
pub fn write_eval_csv<P: AsRef<Path>>(path: P, points: &PointSet, s: &[f64]) -> Result<()> {
    if points.len() != s.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} values",
            points.len(),
            s.len()
        )));
    }
    let mut w = csv::Writer::from_path(path)?;
    let mut header = coordinate_headers(points.dim());
    header.push("s".into());
    w.write_record(&header)?;
    for (p, v) in points.iter().zip(s) {
        let mut rec: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        rec.push(v.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Plot-ready level table: `delta,N,fill_upper,max_error,condition`.
pub fn write_levels_csv<P: AsRef<Path>>(path: P, levels: &[LevelRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["delta", "N", "fill_upper", "max_error", "condition"])?;
    for l in levels {
        w.write_record([
            l.delta.to_string(),
            l.n_points.to_string(),
            l.fill_upper.to_string(),
            l.max_error.to_string(),
            l.condition.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{jittered_points, CubeDomain};

    #[test]
    fn points_roundtrip_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        let pts = jittered_points(&CubeDomain::unit(2), 0.25, 3).unwrap();
        write_points_csv(&path, &pts).unwrap();
        let back = read_points_csv(&path).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.len(), pts.len());
        for (a, b) in pts.iter().zip(back.iter()) {
            assert_eq!(a, b, "roundtrip must be bit-exact");
        }
    }

    #[test]
    fn header_is_validated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n0.0,0.0\n").unwrap();
        assert!(read_points_csv(&path).is_err());
        let vpath = dir.path().join("vals.csv");
        std::fs::write(&vpath, "val\n1.0\n").unwrap();
        assert!(read_values_csv(&vpath).is_err());
    }

    #[test]
    fn values_and_eval_output() {
        let dir = tempfile::tempdir().unwrap();
        let vpath = dir.path().join("v.csv");
        write_values_csv(&vpath, &[1.5, -2.25, 3e-17]).unwrap();
        assert_eq!(read_values_csv(&vpath).unwrap(), vec![1.5, -2.25, 3e-17]);

        let epath = dir.path().join("e.csv");
        let pts = PointSet::new(2, vec![0.0, 0.5, 1.0, 0.25]).unwrap();
        write_eval_csv(&epath, &pts, &[7.0, 8.0]).unwrap();
        let text = std::fs::read_to_string(&epath).unwrap();
        assert!(text.starts_with("x1,x2,s\n"));
        assert!(text.contains("1,0.25,8"));
        assert!(write_eval_csv(&epath, &pts, &[1.0]).is_err());
    }
}
