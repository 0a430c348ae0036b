//! `fga-lab verify`: run suites over every (root system, law, degree) cell.

use std::collections::BTreeMap;

use fga_core::lattice::{annihilator_check, cor63_check, eta_bound_check, tau_check, zeta_bound_check};
use fga_core::{FgaContext, FormalGroupLaw, RootSystem, Status, VerificationReport};
use rayon::prelude::*;

use crate::config::{Format, RunConfig, Suite};
use crate::error::CliError;
use crate::output;

#[derive(Clone, Debug)]
struct Cell {
    rs: Option<RootSystem>,
    fgl: String,
    degree: Option<usize>,
    suite: Suite,
}

type ContextKey = (RootSystem, String, usize);

/// Contexts shared by every cell, at the working truncation and two above it.
struct Contexts(BTreeMap<ContextKey, FgaContext>);

impl Contexts {
    fn get(&self, rs: RootSystem, fgl: &str, trunc: usize) -> &FgaContext {
        &self.0[&(rs, fgl.to_string(), trunc)]
    }
}

fn needed_degree(cell: &Cell) -> usize {
    match (cell.suite, cell.rs, cell.degree) {
        (Suite::Lemma45, Some(rs), Some(d)) if d >= 1 && d <= rs.rank() => rs.theta_degree(d),
        (_, _, Some(d)) => d,
        _ => 0,
    }
}

fn plan(cfg: &RunConfig) -> Result<Vec<Cell>, CliError> {
    if cfg.fgls.is_empty() {
        return Err(CliError::Usage("missing --fgl".into()));
    }
    let mut suites = if cfg.suites.is_empty() {
        let mut s = Suite::DEFAULT.to_vec();
        if cfg.fgl2.is_some() {
            s.push(Suite::Tau);
        }
        s
    } else {
        cfg.suites.clone()
    };
    suites.sort();
    suites.dedup();
    if suites.contains(&Suite::Tau) && cfg.fgl2.is_none() {
        return Err(CliError::Usage("suite tau needs --fgl2".into()));
    }
    let per_degree = suites.iter().any(|s| *s != Suite::Lemma43);
    let systems: Vec<RootSystem> =
        if per_degree { cfg.require_rs()?.iter().map(|s| s.parse()).collect::<Result<_, _>>()? } else { Vec::new() };
    if per_degree && cfg.degrees.is_empty() {
        return Err(CliError::Usage("missing --d or --degrees".into()));
    }

    let mut cells = Vec::new();
    for fgl in &cfg.fgls {
        if suites.contains(&Suite::Lemma43) {
            cells.push(Cell { rs: None, fgl: fgl.clone(), degree: None, suite: Suite::Lemma43 });
        }
        for &rs in &systems {
            for spec in &cfg.degrees {
                let d = spec.resolve(rs.rank());
                for &suite in suites.iter().filter(|s| **s != Suite::Lemma43) {
                    if suite == Suite::Lemma45 && !(1..=rs.rank()).contains(&d) {
                        continue;
                    }
                    cells.push(Cell { rs: Some(rs), fgl: fgl.clone(), degree: Some(d), suite });
                }
            }
        }
    }
    Ok(cells)
}

fn build_contexts(cfg: &RunConfig, cells: &[Cell], trunc: usize) -> Result<Contexts, CliError> {
    let mut map = BTreeMap::new();
    let mut laws: Vec<&str> = cfg.fgls.iter().map(String::as_str).collect();
    laws.extend(cfg.fgl2.as_deref());
    for cell in cells {
        let Some(rs) = cell.rs else { continue };
        for law in &laws {
            for t in [trunc, trunc + 2] {
                let key = (rs, law.to_string(), t);
                if !map.contains_key(&key) {
                    map.insert(key, FgaContext::new(rs, FormalGroupLaw::parse_spec(law, t)?));
                }
            }
        }
    }
    Ok(Contexts(map))
}

fn lattice_report(
    suite: Suite,
    ctx: &FgaContext,
    other: Option<&FgaContext>,
    d: usize,
) -> fga_core::Result<VerificationReport> {
    match suite {
        Suite::Lemma48 => zeta_bound_check(ctx, d),
        Suite::Lemma52 => eta_bound_check(ctx, d),
        Suite::Thm11 => annihilator_check(ctx, d),
        Suite::Cor63 => cor63_check(ctx, d),
        Suite::Tau => tau_check(ctx, other.expect("tau needs a target law"), d),
        Suite::Lemma43 | Suite::Lemma45 => unreachable!("not a lattice suite"),
    }
}

fn run_cell(cell: &Cell, cfg: &RunConfig, contexts: &Contexts, trunc: usize) -> Result<VerificationReport, CliError> {
    if cell.suite == Suite::Lemma43 {
        return Ok(FormalGroupLaw::parse_spec(&cell.fgl, trunc)?.inverse_mod2_check()?);
    }
    let rs = cell.rs.expect("planned with a root system");
    let d = cell.degree.expect("planned with a degree");
    let ctx = contexts.get(rs, &cell.fgl, trunc);
    if cell.suite == Suite::Lemma45 {
        return Ok(ctx.divisibility_check(d)?);
    }
    let fgl2 = cfg.fgl2.as_deref();
    let other = fgl2.map(|f| contexts.get(rs, f, trunc));
    let mut report = lattice_report(cell.suite, ctx, other, d)?;
    let exact = ctx.is_exact() && other.map_or(true, FgaContext::is_exact);
    if !exact {
        let ctx2 = contexts.get(rs, &cell.fgl, trunc + 2);
        let other2 = fgl2.map(|f| contexts.get(rs, f, trunc + 2));
        let rerun = lattice_report(cell.suite, ctx2, other2, d)?;
        report.stabilization(&rerun);
    }
    Ok(report)
}

/// Runs the configured suites; returns the exit code.
pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    let cells = plan(cfg)?;
    let max_degree = cells.iter().map(needed_degree).max().unwrap_or(0);
    let trunc = cfg.trunc_for(max_degree)?;
    let contexts = build_contexts(cfg, &cells, trunc)?;
    let results: Vec<Result<VerificationReport, CliError>> =
        cfg.with_pool(|| cells.par_iter().map(|c| run_cell(c, cfg, &contexts, trunc)).collect())?;
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&reports)?,
        Format::Csv => reports_csv(&reports)?,
    };
    output::emit(cfg, &text)?;
    Ok(if reports.iter().all(|r| r.status.is_ok()) { 0 } else { 1 })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::NotApplicable => "not-applicable",
    }
}

fn reports_csv(reports: &[VerificationReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["suite", "root_system", "degree", "fgls", "trunc", "status", "failed_checks"];
    w.write_record(header).map_err(output::csv_err)?;
    for r in reports {
        let failed: Vec<String> = r
            .failed_checks()
            .map(|c| if c.detail.is_empty() { c.name.clone() } else { format!("{} ({})", c.name, c.detail) })
            .collect();
        w.write_record([
            r.suite.clone(),
            r.instance.root_system.clone().unwrap_or_default(),
            r.instance.degree.map(|d| d.to_string()).unwrap_or_default(),
            r.instance.fgls.join(" -> "),
            r.instance.trunc.map(|t| t.to_string()).unwrap_or_default(),
            status_name(r.status).to_string(),
            failed.join("; "),
        ])
        .map_err(output::csv_err)?;
    }
    output::csv_finish(w)
}
