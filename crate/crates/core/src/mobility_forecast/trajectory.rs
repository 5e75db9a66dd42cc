//! Trajectories and the native text format.
//!
//! ```text
//! t_s,x_m,y_m
//! 0,1.5,2
//! 1,1.7,2.2
//!
//! 0,10,10
//! ```
//!
//! One header line, one record per line, blank lines between trajectories.
//! Times must increase strictly within a trajectory.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::{Error, Result};

pub const HEADER: &str = "t_s,x_m,y_m";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl TrajPoint {
    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajPoint>,
}

impl Trajectory {
    pub fn new(points: Vec<TrajPoint>) -> Result<Self> {
        if let Some(k) = points.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Validation {
                line: k + 2,
                message: format!("time does not increase at point {}", k + 1),
            });
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.points.iter().map(TrajPoint::position).collect()
    }
}

fn parse_field(field: Option<&str>, name: &str, line: usize) -> Result<f64> {
    let raw = field.ok_or_else(|| Error::Parse { line, message: format!("missing field {name}") })?;
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("invalid number '{}' for {name}", raw.trim()) })?;
    if !value.is_finite() {
        return Err(Error::Parse { line, message: format!("non-finite {name}") });
    }
    Ok(value)
}

/// Reads the native format. Line numbers in errors are 1-based.
pub fn parse_trajectory_file(reader: impl BufRead) -> Result<Vec<Trajectory>> {
    let mut trajectories = Vec::new();
    let mut current: Vec<TrajPoint> = Vec::new();
    let mut seen_header = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if !seen_header {
            if text.is_empty() {
                continue;
            }
            if text != HEADER {
                return Err(Error::Parse { line: line_no, message: format!("expected header '{HEADER}'") });
            }
            seen_header = true;
            continue;
        }
        if text.is_empty() {
            if !current.is_empty() {
                trajectories.push(Trajectory { points: std::mem::take(&mut current) });
            }
            continue;
        }
        let mut fields = text.split(',');
        let t = parse_field(fields.next(), "t_s", line_no)?;
        let x = parse_field(fields.next(), "x_m", line_no)?;
        let y = parse_field(fields.next(), "y_m", line_no)?;
        if fields.next().is_some() {
            return Err(Error::Parse { line: line_no, message: "expected 3 fields".into() });
        }
        if let Some(prev) = current.last() {
            if !(t > prev.t) {
                return Err(Error::Validation {
                    line: line_no,
                    message: format!("time {t} does not increase (previous {})", prev.t),
                });
            }
        }
        current.push(TrajPoint { t, x, y });
    }
    if !seen_header {
        return Err(Error::Parse { line: 1, message: format!("missing header '{HEADER}'") });
    }
    if !current.is_empty() {
        trajectories.push(Trajectory { points: current });
    }
    Ok(trajectories)
}

pub fn write_trajectory_file(mut writer: impl Write, trajectories: &[Trajectory]) -> Result<()> {
    writeln!(writer, "{HEADER}")?;
    for (k, traj) in trajectories.iter().enumerate() {
        if k > 0 {
            writeln!(writer)?;
        }
        for p in &traj.points {
            writeln!(writer, "{},{},{}", p.t, p.x, p.y)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Vec<Trajectory>> {
        parse_trajectory_file(text.as_bytes())
    }

    #[test]
    fn single_record() {
        let t = parse("t_s,x_m,y_m\n0,1,2\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].points, vec![TrajPoint { t: 0.0, x: 1.0, y: 2.0 }]);
    }

    #[test]
    fn blank_lines_split() {
        let t = parse("t_s,x_m,y_m\n0,0,0\n1,1,1\n2,2,2\n\n0,5,5\n1,6,6\n").unwrap();
        assert_eq!(t.iter().map(Trajectory::len).collect::<Vec<_>>(), vec![3, 2]);
    }

    #[test]
    fn bad_number_names_line() {
        match parse("t_s,x_m,y_m\n0,1,notanumber\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_increasing_time_names_line() {
        match parse("t_s,x_m,y_m\n0,1,1\n1,1,1\n1,2,2\n") {
            Err(Error::Validation { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_header() {
        assert!(matches!(parse("0,1,2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn crlf_tolerated() {
        let t = parse("t_s,x_m,y_m\r\n0,1,2\r\n1,2,3\r\n").unwrap();
        assert_eq!(t[0].len(), 2);
    }

    proptest! {
        #[test]
        fn write_then_parse_roundtrips(
            blocks in prop::collection::vec(
                prop::collection::vec((0.001f64..10.0, -1e4f64..1e4, -1e4f64..1e4), 1..20), 1..5)
        ) {
            let trajectories: Vec<Trajectory> = blocks.iter().map(|b| {
                let mut t = 0.0;
                Trajectory { points: b.iter().map(|&(dt, x, y)| { t += dt; TrajPoint { t, x, y } }).collect() }
            }).collect();
            let mut buf = Vec::new();
            write_trajectory_file(&mut buf, &trajectories).unwrap();
            prop_assert_eq!(parse_trajectory_file(&buf[..]).unwrap(), trajectories);
        }
    }
}
