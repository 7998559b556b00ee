//! Grid evaluation and row emitters.

use std::io::Write;

use cvtele::{att_optimal, lossy_state, qt_gain_limit, BalancedCovariance};
use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::columns::{evaluate, Cell, Column, Point};
use crate::config::{Format, Marker, SweepConfig};
use crate::error::Result;

pub const NA: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn marker_gain(marker: Marker, s: &BalancedCovariance) -> Option<f64> {
    match marker {
        Marker::QtLimit => qt_gain_limit(s),
        Marker::AttOptimum => Some(att_optimal(s).gain).filter(|g| *g > 0.0),
    }
}

/// Gains for one state: the axis plus the marked gain when it falls inside
/// the axis span.
fn gains_for(cfg: &SweepConfig, s: Option<&BalancedCovariance>) -> Vec<(f64, bool)> {
    let Some(axis) = &cfg.gain else {
        return Vec::new();
    };
    let mut gains: Vec<(f64, bool)> = axis.values().into_iter().map(|g| (g, false)).collect();
    let (lo, hi) = gains
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (g, _)| (a.min(*g), b.max(*g)));
    if let (Some(marker), Some(s)) = (cfg.marker, s) {
        if let Some(g) = marker_gain(marker, s).filter(|g| *g >= lo && *g <= hi) {
            match gains.iter_mut().find(|(x, _)| *x == g) {
                Some(hit) => hit.1 = true,
                None => {
                    gains.push((g, true));
                    gains.sort_by(|a, b| a.0.total_cmp(&b.0));
                }
            }
        }
    }
    gains
}

fn rows_for_point(cfg: &SweepConfig, r: f64, ea: f64, eb: f64) -> Vec<Vec<Cell>> {
    let state = lossy_state(r, ea, eb).ok();
    let lead = [Cell::Num(r), Cell::Num(ea), Cell::Num(eb)];
    let cells = |gbar: Option<f64>, marked: bool| -> Vec<Cell> {
        let mut row: Vec<Cell> = lead.to_vec();
        if cfg.gain.is_some() {
            row.push(gbar.map_or(Cell::Na, Cell::Num));
        }
        match &state {
            Some(s) => {
                let p = Point { s, gbar, marked };
                row.extend(cfg.columns.iter().map(|c| evaluate(*c, &p)));
            }
            None => row.extend(cfg.columns.iter().map(|_| Cell::Na)),
        }
        row
    };
    if cfg.gain.is_none() {
        return vec![cells(None, false)];
    }
    gains_for(cfg, state.as_ref())
        .into_iter()
        .map(|(g, marked)| cells(Some(g), marked))
        .collect()
}

pub fn header(cfg: &SweepConfig) -> Vec<String> {
    let mut h: Vec<String> = ["r", "eta_A", "eta_B"].iter().map(|s| s.to_string()).collect();
    if cfg.gain.is_some() {
        h.push("gbar".into());
    }
    h.extend(cfg.columns.iter().map(|c| Column::name(*c).to_string()));
    h
}

/// Evaluates the grid in parallel; rows come back in grid order with `r`
/// outermost and the gain innermost. States outside the model's domain
/// yield `NA` rows rather than being dropped.
pub fn run(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let mut points = Vec::new();
    for r in cfg.r.values() {
        for ea in cfg.eta_a.values() {
            for eb in cfg.eta_b.values() {
                points.push((r, ea, eb));
            }
        }
    }
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(r, ea, eb)| rows_for_point(cfg, r, ea, eb))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(Table {
        header: header(cfg),
        rows,
    })
}

/// Shortest representation that parses back to the same double.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn csv_field(c: &Cell) -> String {
    match *c {
        Cell::Num(v) => format_number(v),
        Cell::Flag(b) => if b { "1" } else { "0" }.to_string(),
        Cell::Label(s) => s.to_string(),
        Cell::Na => NA.to_string(),
    }
}

fn json_value(c: &Cell) -> Value {
    match *c {
        Cell::Num(v) => Number::from_f64(v).map_or(Value::Null, Value::Number),
        Cell::Flag(b) => Value::Bool(b),
        Cell::Label(s) => Value::String(s.to_string()),
        Cell::Na => Value::Null,
    }
}

pub fn row_object(header: &[String], row: &[Cell]) -> Map<String, Value> {
    header
        .iter()
        .zip(row)
        .map(|(k, c)| (k.clone(), json_value(c)))
        .collect()
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(csv_field))?;
    }
    w.flush().map_err(|e| crate::error::CliError::io("writing csv", e))?;
    Ok(())
}

pub fn write_ndjson<W: Write>(table: &Table, mut out: W) -> Result<()> {
    for row in &table.rows {
        serde_json::to_writer(&mut out, &row_object(&table.header, row))?;
        out.write_all(b"\n")
            .map_err(|e| crate::error::CliError::io("writing json", e))?;
    }
    out.flush().map_err(|e| crate::error::CliError::io("writing json", e))?;
    Ok(())
}

pub fn write_table<W: Write>(table: &Table, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_ndjson(table, out),
    }
}
