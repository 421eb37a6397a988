//! CSV writers for snapshots and probe series.

use std::fmt::Write as _;

use super::field::{Field, FieldState};
use super::grid::ScaffoldGrid;
use super::run::ProbeSeries;
use crate::csvnum::Num;
use crate::ode::ODE_UNITS_LINE;

pub const SNAPSHOT_HEADER: &str = "x_index,y_index,x_μm,y_μm,value";

/// One field at one time: a `#` line naming field, time and unit, then
/// `x_index,y_index,x_μm,y_μm,value` rows in cell order.
pub fn snapshot_csv(grid: &ScaffoldGrid, state: &FieldState, field: Field) -> String {
    let values = state.get(field);
    let mut out = String::with_capacity(values.len() * 48);
    writeln!(
        out,
        "# field={} t={} h unit={}",
        field.name(),
        state.t,
        field.unit()
    )
    .unwrap();
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (k, v) in values.iter().enumerate() {
        let (i, j) = grid.cell(k);
        let (x, y) = grid.center(k);
        writeln!(out, "{i},{j},{},{},{}", Num(x), Num(y), Num(*v)).unwrap();
    }
    out
}

/// File name for a snapshot, e.g. `c2_t2h.csv`.
pub fn snapshot_file_name(field: Field, t: f64) -> String {
    format!("{}_t{}h.csv", field.name(), t)
}

/// Probe series with the same columns as the ODE trajectory.
pub fn probe_csv(probe: &ProbeSeries) -> String {
    let mut out = String::with_capacity(probe.samples.len() * 96);
    out.push_str(ODE_UNITS_LINE);
    out.push('\n');
    out.push_str("t,c1,c2,chi,h,tau\n");
    for (t, y) in &probe.samples {
        write!(out, "{}", Num(*t)).unwrap();
        for v in y.to_array() {
            write!(out, ",{}", Num(v)).unwrap();
        }
        out.push('\n');
    }
    out
}
