//! `fga-lab report`: constants and computed multipliers, one row per (root system, law, degree).

use fga_core::lattice::{annihilator_check, eta_bound_check, zeta_bound_check};
use fga_core::report::int_value;
use fga_core::{FgaContext, FormalGroupLaw, RootSystem, VerificationReport};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output;

#[derive(Debug, Serialize)]
pub struct Row {
    root_system: String,
    rank: usize,
    degree: usize,
    fgl: String,
    trunc: usize,
    r_d: Option<String>,
    zeta: String,
    eta: String,
    multiplier_invariants: String,
    multiplier_ideal: String,
    kernel_exponent: String,
    multiplier_composite: String,
    status: &'static str,
}

fn field(r: &VerificationReport, key: &str) -> String {
    match r.computed.get(key) {
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => String::new(),
    }
}

fn text(v: Value) -> String {
    match v {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn row(rs: RootSystem, fgl: &str, d: usize, trunc: usize) -> Result<Row, CliError> {
    let ctx = FgaContext::new(rs, FormalGroupLaw::parse_spec(fgl, trunc)?);
    let c = rs.constants(d)?;
    let zeta = zeta_bound_check(&ctx, d)?;
    let eta = eta_bound_check(&ctx, d)?;
    let ann = annihilator_check(&ctx, d)?;
    let ok = [&zeta, &eta, &ann].iter().all(|r| r.status.is_ok());
    Ok(Row {
        root_system: rs.to_string(),
        rank: rs.rank(),
        degree: d,
        fgl: ctx.fgl().label().to_string(),
        trunc,
        r_d: c.r.as_ref().map(|r| text(int_value(r))),
        zeta: text(int_value(&c.zeta)),
        eta: text(int_value(&c.eta)),
        multiplier_invariants: field(&zeta, "multiplier_invariants"),
        multiplier_ideal: field(&zeta, "multiplier_ideal"),
        kernel_exponent: field(&eta, "e"),
        multiplier_composite: field(&ann, "multiplier_composite"),
        status: if ok { "pass" } else { "fail" },
    })
}

pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    let systems: Vec<RootSystem> = cfg.require_rs()?.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let fgls: Vec<String> = if cfg.fgls.is_empty() { vec!["additive".to_string()] } else { cfg.fgls.clone() };
    let mut cells = Vec::new();
    for &rs in &systems {
        for fgl in &fgls {
            for spec in &cfg.degrees {
                cells.push((rs, fgl.clone(), spec.resolve(rs.rank())));
            }
        }
    }
    let max_degree = cells.iter().map(|c| c.2).max().unwrap_or(0);
    let trunc = cfg.trunc_for(max_degree)?;
    let rows: Vec<Result<Row, CliError>> =
        cfg.with_pool(|| cells.par_iter().map(|(rs, f, d)| row(*rs, f, *d, trunc)).collect())?;
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    let out = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => output::json(&rows)?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record([
                "root_system",
                "rank",
                "degree",
                "fgl",
                "trunc",
                "r_d",
                "zeta",
                "eta",
                "multiplier_invariants",
                "multiplier_ideal",
                "kernel_exponent",
                "multiplier_composite",
                "status",
            ])
            .map_err(output::csv_err)?;
            for r in &rows {
                w.serialize(r).map_err(output::csv_err)?;
            }
            output::csv_finish(w)?
        }
    };
    output::emit(cfg, &out)?;
    Ok(0)
}
