//! CSV and JSON writers. Columns and keys are emitted in a fixed order and
//! floats in shortest round-trip form, so identical runs give identical files.

use std::io::Write;

use serde::Serialize;

use crate::config::{Format, Quantity, RunConfig};
use crate::error::{CliError, CliResult};
use crate::run::{IntegrandTable, Record};

/// Column order of sweep and energy output. The third column is named after
/// the computed quantity.
pub const CSV_COLUMNS: [&str; 7] = ["sweep_param", "value", "energy", "quad_err", "trunc_err", "lmax_used", "nodes_used"];

fn float(v: f64) -> String {
    format!("{v:e}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn out_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

#[derive(Serialize)]
struct Document<'a> {
    length_unit: &'static str,
    geometry: &'static str,
    quantity: &'static str,
    beta: Option<f64>,
    records: &'a [Record],
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Energy => "energy",
        Quantity::Force => "force",
    }
}

/// Writes records. Unconverged or failed rows leave the value and error
/// columns empty in CSV and `null` in JSON.
pub fn write_records<W: Write>(w: W, format: Format, config: &RunConfig, records: &[Record]) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            let mut header = CSV_COLUMNS;
            header[2] = quantity_name(config.quantity);
            out.write_record(header).map_err(out_err)?;
            for r in records {
                out.write_record([
                    r.sweep_param.to_string(),
                    float(r.value),
                    opt(r.energy.map(float)),
                    opt(r.quad_err.map(float)),
                    opt(r.trunc_err.map(float)),
                    opt(r.lmax_used),
                    opt(r.nodes_used),
                ])
                .map_err(out_err)?;
            }
            out.flush().map_err(out_err)
        }
        Format::Json => {
            let doc = Document {
                length_unit: config.length_unit.symbol(),
                geometry: config.geometry.name(),
                quantity: quantity_name(config.quantity),
                beta: config.beta,
                records,
            };
            write_json(w, &doc)
        }
    }
}

fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(out_err)?;
    writeln!(w).map_err(out_err)
}

pub fn write_integrand<W: Write>(w: W, format: Format, table: &IntegrandTable) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record([table.variable, "log_det", "residue", "order"]).map_err(out_err)?;
            for r in &table.rows {
                out.write_record([float(r.s), float(r.log_det), float(r.residue), opt(table.order)]).map_err(out_err)?;
            }
            out.flush().map_err(out_err)
        }
        Format::Json => write_json(w, table),
    }
}
