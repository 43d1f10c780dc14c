//! CSV logs: per-frame tracking records and synthetic ground truth.
//!
//! Floats are written in Rust's shortest round-trip form so that a log
//! re-read by `eval` reproduces the in-memory values exactly.

use std::io::{Read, Write};

use crate::error::{Result, TrackError};
use crate::evaluation::record_cc;
use crate::imaging::Window;
use crate::trackers::FrameRecord;

pub const RECORDS_VERSION_LINE: &str = "# dmst-records v1";
pub const RECORDS_HEADER: [&str; 11] = [
    "frame",
    "cx",
    "cy",
    "W",
    "H",
    "iterations",
    "CC",
    "rho",
    "S",
    "replaced",
    "lost",
];
pub const GROUND_TRUTH_HEADER: [&str; 5] = ["frame", "cx", "cy", "W", "H"];

/// One parsed row of a tracking log.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub frame: usize,
    pub cx: f64,
    pub cy: f64,
    pub width: f64,
    pub height: f64,
    pub iterations: usize,
    pub cc: f64,
    pub rho: f64,
    pub s: f64,
    pub replaced: bool,
    pub lost: bool,
}

impl RecordRow {
    pub fn from_record(r: &FrameRecord, min_dist: f64) -> Self {
        Self {
            frame: r.frame_index,
            cx: r.window.cx,
            cy: r.window.cy,
            width: r.window.width(),
            height: r.window.height(),
            iterations: r.iterations,
            cc: record_cc(r, min_dist),
            rho: r.rho,
            s: r.s,
            replaced: r.template_replaced,
            lost: r.lost,
        }
    }

    fn fields(&self) -> [String; 11] {
        [
            self.frame.to_string(),
            self.cx.to_string(),
            self.cy.to_string(),
            self.width.to_string(),
            self.height.to_string(),
            self.iterations.to_string(),
            self.cc.to_string(),
            self.rho.to_string(),
            self.s.to_string(),
            (self.replaced as u8).to_string(),
            (self.lost as u8).to_string(),
        ]
    }
}

fn csv_err(e: csv::Error) -> TrackError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => TrackError::Io(io),
        other => TrackError::Record(format!("{other:?}")),
    }
}

pub fn write_records<W: Write>(mut out: W, records: &[FrameRecord], min_dist: f64) -> Result<()> {
    writeln!(out, "{RECORDS_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORDS_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record(RecordRow::from_record(r, min_dist).fields())
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T> {
    let raw = rec.get(i).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        TrackError::Record(format!(
            "line {line}: bad value '{raw}' in column {}",
            RECORDS_HEADER.get(i).unwrap_or(&"?")
        ))
    })
}

fn parse_flag(rec: &csv::StringRecord, i: usize, line: u64) -> Result<bool> {
    match rec.get(i).map(str::trim) {
        Some("1") | Some("true") => Ok(true),
        Some("0") | Some("false") => Ok(false),
        other => Err(TrackError::Record(format!(
            "line {line}: bad flag {other:?} in column {}",
            RECORDS_HEADER[i]
        ))),
    }
}

fn finite(v: f64, what: &str, line: u64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(TrackError::Record(format!(
            "line {line}: {what} is not finite"
        )))
    }
}

/// Parses a tracking log written by [`write_records`]. Lines starting with
/// `#` are ignored; the header row must match [`RECORDS_HEADER`].
pub fn read_records<R: Read>(input: R) -> Result<Vec<RecordRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != RECORDS_HEADER {
        return Err(TrackError::Record(format!(
            "unexpected header {names:?}, expected {RECORDS_HEADER:?}"
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != RECORDS_HEADER.len() {
            return Err(TrackError::Record(format!(
                "line {line}: expected {} fields, found {}",
                RECORDS_HEADER.len(),
                rec.len()
            )));
        }
        rows.push(RecordRow {
            frame: parse_field(&rec, 0, line)?,
            cx: finite(parse_field(&rec, 1, line)?, "cx", line)?,
            cy: finite(parse_field(&rec, 2, line)?, "cy", line)?,
            width: finite(parse_field(&rec, 3, line)?, "W", line)?,
            height: finite(parse_field(&rec, 4, line)?, "H", line)?,
            iterations: parse_field(&rec, 5, line)?,
            cc: finite(parse_field(&rec, 6, line)?, "CC", line)?,
            rho: finite(parse_field(&rec, 7, line)?, "rho", line)?,
            s: finite(parse_field(&rec, 8, line)?, "S", line)?,
            replaced: parse_flag(&rec, 9, line)?,
            lost: parse_flag(&rec, 10, line)?,
        });
    }
    Ok(rows)
}

pub fn write_ground_truth<W: Write>(out: W, windows: &[Window]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GROUND_TRUTH_HEADER).map_err(csv_err)?;
    for (i, win) in windows.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            win.cx.to_string(),
            win.cy.to_string(),
            win.width().to_string(),
            win.height().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a ground-truth CSV (`frame,cx,cy,W,H`) into windows, in file order.
pub fn read_ground_truth<R: Read>(input: R) -> Result<Vec<Window>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != GROUND_TRUTH_HEADER {
        return Err(TrackError::Record(format!(
            "unexpected ground-truth header {names:?}"
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != GROUND_TRUTH_HEADER.len() {
            return Err(TrackError::Record(format!(
                "line {line}: wrong field count"
            )));
        }
        let _: usize = parse_field(&rec, 0, line)?;
        let v: Vec<f64> = (1..5)
            .map(|i| parse_field::<f64>(&rec, i, line))
            .collect::<Result<_>>()?;
        out.push(Window::from_size(v[0], v[1], v[2], v[3])?);
    }
    Ok(out)
}
