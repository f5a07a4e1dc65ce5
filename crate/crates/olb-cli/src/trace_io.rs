//! Trace file formats.
//!
//! The CSV schema is fixed: header
//! `t,regret,bound,blackwell_gap,makespan,cstar_cum,olo_regret_1,olo_regret_2`,
//! floats with 12 significant digits, newline-terminated rows. Identical
//! configs must produce byte-identical files, so formatting is fully
//! deterministic. Baseline players have no reduction diagnostics; their
//! diagnostic columns are written as zeros.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use olb_core::engine::RegretTrace;

pub const CSV_HEADER: &str = "t,regret,bound,blackwell_gap,makespan,cstar_cum,olo_regret_1,olo_regret_2";

/// 12 significant digits, `-0` normalized so reruns stay byte-identical.
fn sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Renders the fixed-schema CSV document for a trace.
pub fn trace_to_csv(trace: &RegretTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rounds.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in &trace.rounds {
        let (gap, olo1, olo2) = match &rec.detail {
            Some(d) => (d.blackwell_gap, d.olo_regret_1, d.olo_regret_2),
            None => (0.0, 0.0, 0.0),
        };
        out.push_str(&rec.t.to_string());
        for v in [rec.regret, rec.bound, gap, rec.makespan, rec.cstar_cum, olo1, olo2] {
            out.push(',');
            out.push_str(&sig12(v));
        }
        out.push('\n');
    }
    out
}

pub fn write_trace_csv(trace: &RegretTrace, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    w.write_all(trace_to_csv(trace).as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Full per-round records as JSON (large; opt-in).
pub fn write_trace_json(trace: &RegretTrace, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, trace)?;
    w.flush()?;
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    pub regret: f64,
    pub bound: f64,
    pub blackwell_gap: f64,
    pub makespan: f64,
    pub cstar_cum: f64,
    pub olo_regret_1: f64,
    pub olo_regret_2: f64,
}

/// Parses a trace CSV produced by [`trace_to_csv`].
pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_trace_csv(&text)
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => bail!("unexpected CSV header: {h}"),
        None => bail!("empty trace file"),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            bail!("row {} has {} fields, expected 8", idx + 2, fields.len());
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .with_context(|| format!("bad number {s:?} on row {}", idx + 2))
        };
        rows.push(TraceRow {
            t: fields[0]
                .parse()
                .with_context(|| format!("bad round index on row {}", idx + 2))?,
            regret: num(fields[1])?,
            bound: num(fields[2])?,
            blackwell_gap: num(fields[3])?,
            makespan: num(fields[4])?,
            cstar_cum: num(fields[5])?,
            olo_regret_1: num(fields[6])?,
            olo_regret_2: num(fields[7])?,
        });
    }
    Ok(rows)
}
