//! Confidence-coefficient statistics over tracking logs.
//!
//! `CC_n` is the mean excess of frame `n`'s mean-shift step lengths over the
//! exit threshold; `MCC` is its mean over the sequence and `NV` its
//! population variance about `MCC`.

use std::fmt::Write as _;

use crate::error::{Result, TrackError};
use crate::trackers::{FrameRecord, Variant};

/// `sum_i (MS(i) - min_dist) / x` over the `x` recorded step lengths;
/// zero when the frame recorded no steps.
pub fn confidence_coefficient(displacements: &[f64], min_dist: f64) -> f64 {
    if displacements.is_empty() {
        return 0.0;
    }
    displacements.iter().map(|d| d - min_dist).sum::<f64>() / displacements.len() as f64
}

pub fn record_cc(record: &FrameRecord, min_dist: f64) -> f64 {
    confidence_coefficient(&record.displacements, min_dist)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceMetrics {
    pub mcc: f64,
    pub nv: f64,
    pub mean_iterations: f64,
    pub frames: usize,
    pub per_frame_cc: Vec<f64>,
    /// Fraction of frames on which the target was lost.
    pub loss_rate: f64,
}

impl SequenceMetrics {
    /// Aggregates per-frame confidence coefficients, iteration counts and
    /// loss flags.
    pub fn from_parts(cc: Vec<f64>, iterations: &[usize], lost: &[bool]) -> Result<Self> {
        if cc.is_empty() {
            return Err(TrackError::EmptySequence);
        }
        if cc.len() != iterations.len() || cc.len() != lost.len() {
            return Err(TrackError::Record(format!(
                "per-frame columns differ in length: {} / {} / {}",
                cc.len(),
                iterations.len(),
                lost.len()
            )));
        }
        let n = cc.len() as f64;
        let mcc = cc.iter().sum::<f64>() / n;
        let nv = cc.iter().map(|c| (c - mcc) * (c - mcc)).sum::<f64>() / n;
        let mean_iterations = iterations.iter().sum::<usize>() as f64 / n;
        let loss_rate = lost.iter().filter(|&&l| l).count() as f64 / n;
        Ok(Self {
            mcc,
            nv,
            mean_iterations,
            frames: cc.len(),
            per_frame_cc: cc,
            loss_rate,
        })
    }
}

pub fn sequence_metrics(records: &[FrameRecord], min_dist: f64) -> Result<SequenceMetrics> {
    let cc = records.iter().map(|r| record_cc(r, min_dist)).collect();
    let iterations: Vec<usize> = records.iter().map(|r| r.iterations).collect();
    let lost: Vec<bool> = records.iter().map(|r| r.lost).collect();
    SequenceMetrics::from_parts(cc, &iterations, &lost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub sequence: String,
    pub variant: Variant,
    pub mcc: f64,
    pub nv: f64,
    pub iterations: f64,
    pub loss_rate: f64,
}

pub const COMPARISON_HEADER: [&str; 6] = [
    "SEQUENCES",
    "ALGORITHMS",
    "MCC",
    "NV",
    "ITERATION",
    "LOSS_RATE",
];

/// Rows ordered by sequence (first appearance) then by variant order.
pub fn comparison_table(entries: &[(String, Variant, SequenceMetrics)]) -> Vec<ComparisonRow> {
    let mut order: Vec<&str> = Vec::new();
    for (seq, _, _) in entries {
        if !order.contains(&seq.as_str()) {
            order.push(seq);
        }
    }
    let mut rows: Vec<(usize, ComparisonRow)> = entries
        .iter()
        .map(|(seq, v, m)| {
            let rank = order.iter().position(|s| s == seq).unwrap_or(0);
            (
                rank,
                ComparisonRow {
                    sequence: seq.clone(),
                    variant: *v,
                    mcc: m.mcc,
                    nv: m.nv,
                    iterations: m.mean_iterations,
                    loss_rate: m.loss_rate,
                },
            )
        })
        .collect();
    rows.sort_by_key(|(rank, r)| (*rank, r.variant));
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Fixed-width text rendering of a comparison table.
pub fn format_table(rows: &[ComparisonRow]) -> String {
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.sequence.clone(),
                r.variant.label().to_string(),
                format!("{:.6}", r.mcc),
                format!("{:.4e}", r.nv),
                format!("{:.4}", r.iterations),
                format!("{:.4}", r.loss_rate),
            ]
        })
        .collect();
    let mut widths = COMPARISON_HEADER.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let parts: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &COMPARISON_HEADER);
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&mut out, &refs);
    }
    out
}
