//! Single-state report.

use cvtele::{
    amp_optimal, att_optimal, best_of_three, bk_fidelity, certifies_below, classify,
    classify_region, duan_parameter, esa_optimal, is_physical, lossy_state, lsatt_optimal,
    min_steering, mv_bounds, nu, verify_closed_forms, BalancedCovariance, Direction,
};
use serde_json::{json, Value};

use crate::columns::{evaluate, Cell, Column, Point};
use crate::error::Result;
use crate::sweep::{row_object, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Lossy { r: f64, eta_a: f64, eta_b: f64 },
    Raw { n: f64, m: f64, c: f64 },
}

impl StateSpec {
    pub fn build(self) -> Result<BalancedCovariance> {
        let s = match self {
            StateSpec::Lossy { r, eta_a, eta_b } => lossy_state(r, eta_a, eta_b)?,
            StateSpec::Raw { n, m, c } => BalancedCovariance::new(n, m, c)?,
        };
        debug_assert!(is_physical(&s));
        Ok(s)
    }

    fn input(self) -> Value {
        match self {
            StateSpec::Lossy { r, eta_a, eta_b } => json!({"r": r, "eta_A": eta_a, "eta_B": eta_b}),
            StateSpec::Raw { n, m, c } => json!({"n": n, "m": m, "c": c}),
        }
    }

    fn lead(self) -> [Cell; 3] {
        match self {
            StateSpec::Lossy { r, eta_a, eta_b } => [Cell::Num(r), Cell::Num(eta_a), Cell::Num(eta_b)],
            StateSpec::Raw { .. } => [Cell::Na; 3],
        }
    }
}

fn or_null<T: serde::Serialize>(r: cvtele::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        Err(_) => Value::Null,
    }
}

pub fn report(spec: StateSpec) -> Result<Value> {
    let s = spec.build()?;
    let (g_ba, e_ba) = min_steering(&s, Direction::BgivenA);
    let (g_ab, e_ab) = min_steering(&s, Direction::AgivenB);
    let v = nu(&s);
    let bounds = mv_bounds(v)?;
    let verification = verify_closed_forms(&s);
    Ok(json!({
        "input": spec.input(),
        "state": {"n": s.n(), "m": s.m(), "c": s.c()},
        "witnesses": {
            "delta_ent": duan_parameter(&s),
            "nu": v,
            "E_BA": e_ba,
            "E_BA_gain": g_ba,
            "E_AB": e_ab,
            "E_AB_gain": g_ab,
            "entangled": certifies_below(v, 1.0),
            "steer_BA": certifies_below(e_ba, 1.0),
            "steer_AB": certifies_below(e_ab, 1.0),
        },
        "classification": or_null(classify(&s)),
        "protocols": {
            "F_bk": bk_fidelity(&s),
            "lsatt": or_null(lsatt_optimal(&s)),
            "esa": or_null(esa_optimal(&s)),
            "best": best_of_three(&s),
            "amp_optimum": amp_optimal(&s),
            "att_optimum": att_optimal(&s),
            "region": classify_region(&s),
        },
        "mv_bounds": {"lower": bounds.0, "upper": bounds.1},
        "verification": {
            "all_pass": verification.all_pass(),
            "checked": verification.checked(),
            "entries": verification,
        },
    }))
}

/// The same state as a one-row table over every gain-free column.
pub fn row(spec: StateSpec) -> Result<Table> {
    let s = spec.build()?;
    let columns: Vec<Column> = Column::ALL.iter().copied().filter(|c| !c.needs_gain()).collect();
    let p = Point {
        s: &s,
        gbar: None,
        marked: false,
    };
    let mut cells = spec.lead().to_vec();
    cells.extend(columns.iter().map(|c| evaluate(*c, &p)));
    let mut header: Vec<String> = ["r", "eta_A", "eta_B"].iter().map(|s| s.to_string()).collect();
    header.extend(columns.iter().map(|c| c.name().to_string()));
    Ok(Table {
        header,
        rows: vec![cells],
    })
}

pub fn row_json(spec: StateSpec) -> Result<Value> {
    let t = row(spec)?;
    Ok(Value::Object(row_object(&t.header, &t.rows[0])))
}
