//! CSV and JSON renderings of experiment results.
//!
//! Numbers are printed with 12 significant digits in `%g` style, independent
//! of locale, so that output files are byte-stable.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

use crate::causal::ResourceCount;
use crate::experiment::{DiscriminationReport, DistanceRow, Measure, ResourceRow};

pub const SWEEP_HEADER: &str = "theta,p_err_eq5,delta_trace,delta_bures,delta_hs,\
p_err_eq6_trace,p_err_eq6_bures,p_err_eq6_hs,p_err_simulated,theta_class";
pub const DISTANCE_HEADER: &str = "theta,delta_trace,delta_bures,delta_hs";
pub const RESOURCE_HEADER: &str =
    "k,d,r,subsystem_qubits,controlled_bell_count,primitive_gate_count";

/// Formats `x` with 12 significant digits, trimming trailing zeros.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(format_sig12).unwrap_or_default()
}

/// JSON number carrying exactly the value printed in CSV.
fn json_number(value: Option<f64>) -> Value {
    match value {
        Some(v) => {
            let rounded: f64 = format_sig12(v).parse().unwrap_or(v);
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        None => Value::Null,
    }
}

fn sweep_fields(rep: &DiscriminationReport) -> Vec<(String, Option<f64>)> {
    let mut fields = vec![
        ("theta".to_string(), Some(rep.theta)),
        ("p_err_eq5".to_string(), Some(rep.p_err_eq5)),
    ];
    for m in Measure::ALL {
        fields.push((format!("delta_{m}"), rep.delta_by_measure.get(&m).copied()));
    }
    for m in Measure::ALL {
        fields.push((format!("p_err_eq6_{m}"), rep.p_err_eq6_by_measure.get(&m).copied()));
    }
    fields.push(("p_err_simulated".to_string(), Some(rep.p_err_simulated)));
    fields
}

pub fn write_sweep_csv<W: Write>(out: &mut W, reports: &[DiscriminationReport]) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for rep in reports {
        let mut cells: Vec<String> = sweep_fields(rep).into_iter().map(|(_, v)| cell(v)).collect();
        cells.push(rep.theta_class.to_string());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_sweep_json<W: Write>(out: &mut W, reports: &[DiscriminationReport]) -> io::Result<()> {
    let rows: Vec<Value> = reports
        .iter()
        .map(|rep| {
            let mut obj: Map<String, Value> = sweep_fields(rep)
                .into_iter()
                .map(|(k, v)| (k, json_number(v)))
                .collect();
            obj.insert("theta_class".into(), Value::String(rep.theta_class.to_string()));
            Value::Object(obj)
        })
        .collect();
    write_json(out, &Value::Array(rows))
}

fn distance_fields(row: &DistanceRow) -> Vec<(String, Option<f64>)> {
    let mut fields = vec![("theta".to_string(), Some(row.theta))];
    for m in Measure::ALL {
        fields.push((format!("delta_{m}"), row.delta_by_measure.get(&m).copied()));
    }
    fields
}

pub fn write_distances_csv<W: Write>(out: &mut W, rows: &[DistanceRow]) -> io::Result<()> {
    writeln!(out, "{DISTANCE_HEADER}")?;
    for row in rows {
        let cells: Vec<String> = distance_fields(row).into_iter().map(|(_, v)| cell(v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_distances_json<W: Write>(out: &mut W, rows: &[DistanceRow]) -> io::Result<()> {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            Value::Object(
                distance_fields(row)
                    .into_iter()
                    .map(|(k, v)| (k, json_number(v)))
                    .collect(),
            )
        })
        .collect();
    write_json(out, &Value::Array(rows))
}

fn counts(rows: &[ResourceRow]) -> impl Iterator<Item = &ResourceCount> {
    rows.iter().filter_map(|row| match row {
        ResourceRow::Count(c) => Some(c),
        ResourceRow::Skipped { .. } => None,
    })
}

/// Writes counted rows only; skipped grid points are reported separately.
pub fn write_resources_csv<W: Write>(out: &mut W, rows: &[ResourceRow]) -> io::Result<()> {
    writeln!(out, "{RESOURCE_HEADER}")?;
    for c in counts(rows) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.k, c.d, c.r, c.subsystem_qubits, c.controlled_bell_count, c.total_primitive_gates
        )?;
    }
    Ok(())
}

pub fn write_resources_json<W: Write>(out: &mut W, rows: &[ResourceRow]) -> io::Result<()> {
    let rows: Vec<Value> = counts(rows)
        .map(|c| {
            json!({
                "k": c.k,
                "d": c.d,
                "r": c.r,
                "subsystem_qubits": c.subsystem_qubits,
                "controlled_bell_count": c.controlled_bell_count,
                "primitive_gate_count": c.total_primitive_gates,
            })
        })
        .collect();
    write_json(out, &Value::Array(rows))
}

fn write_json<W: Write>(out: &mut W, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}
