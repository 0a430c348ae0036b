//! `fga-lab compute <query>`: print one object as JSON.

use clap::ValueEnum;
use fga_core::lattice::{deformation_bound, kernel_model, tau};
use fga_core::report::int_value;
use fga_core::{FgaContext, FormalGroupLaw, RootSystem};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output;

const DEFAULT_TRUNC: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Query {
    Theta,
    Inverse,
    Nseries,
    Invariants,
    Ideal,
    Kernel,
    Tau,
}

fn single_rs(cfg: &RunConfig) -> Result<RootSystem, CliError> {
    match cfg.require_rs()? {
        [rs] => Ok(rs.parse()?),
        _ => Err(CliError::Usage("compute takes a single --rs".into())),
    }
}

fn single_fgl(cfg: &RunConfig) -> Result<&str, CliError> {
    match cfg.fgls.as_slice() {
        [f] => Ok(f),
        [] => Err(CliError::Usage("missing --fgl".into())),
        _ => Err(CliError::Usage("compute takes a single --fgl".into())),
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run(query: Query, cfg: &RunConfig) -> Result<u8, CliError> {
    let value = match query {
        Query::Inverse | Query::Nseries => {
            let trunc = cfg.trunc.unwrap_or(DEFAULT_TRUNC);
            let f = FormalGroupLaw::parse_spec(single_fgl(cfg)?, trunc)?;
            let (series, extra) = match query {
                Query::Inverse => (f.formal_inverse(), json!({ "fgl": f.label(), "query": "inverse" })),
                _ => (f.n_series(cfg.m), json!({ "fgl": f.label(), "query": "nseries", "m": cfg.m })),
            };
            merge(to_value(&series)?, extra)
        }
        Query::Theta => {
            let rs = single_rs(cfg)?;
            let d = cfg.require_degree()?.resolve(rs.rank());
            if !(1..=rs.rank()).contains(&d) {
                return Err(CliError::Usage(format!("Θ_{d} is not defined for {rs}: need 1 <= d <= {}", rs.rank())));
            }
            let trunc = cfg.trunc_for(rs.theta_degree(d))?;
            let ctx = FgaContext::new(rs, FormalGroupLaw::parse_spec(single_fgl(cfg)?, trunc)?);
            let theta = ctx.theta(d)?;
            let content = theta.series().content_gcd()?;
            merge(
                to_value(&theta)?,
                json!({ "query": "theta", "index": d, "content": int_value(&content), "r": int_value(&ctx.r(d)) }),
            )
        }
        Query::Invariants | Query::Ideal | Query::Kernel => {
            let rs = single_rs(cfg)?;
            let d = cfg.require_degree()?.resolve(rs.rank());
            let trunc = cfg.trunc_for(d)?;
            let ctx = FgaContext::new(rs, FormalGroupLaw::parse_spec(single_fgl(cfg)?, trunc)?);
            let (name, lattice) = match query {
                Query::Invariants => ("invariants", ctx.invariant_graded_lattice(d)?),
                Query::Ideal => ("ideal", ctx.ideal_graded_lattice(d)?),
                _ => ("kernel", kernel_model(&ctx, d)?),
            };
            let mut extra = Map::new();
            extra.insert("query".into(), name.into());
            extra.insert("root_system".into(), rs.to_string().into());
            extra.insert("fgl".into(), ctx.fgl().label().into());
            extra.insert("degree".into(), d.into());
            extra.insert("trunc".into(), trunc.into());
            extra.insert("rank".into(), lattice.rank().into());
            extra.insert("certification".into(), ctx.certification().into());
            merge(to_value(&lattice)?, Value::Object(extra))
        }
        Query::Tau => {
            let rs = single_rs(cfg)?;
            let d = cfg.require_degree()?.resolve(rs.rank());
            let (from, to) = match (&cfg.from, &cfg.to) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(CliError::Usage("tau needs --from and --to".into())),
            };
            let trunc = cfg.trunc_for(d)?;
            let from = FgaContext::new(rs, FormalGroupLaw::parse_spec(from, trunc)?);
            let to = FgaContext::new(rs, FormalGroupLaw::parse_spec(to, trunc)?);
            let rep = tau(&from, &to, d)?;
            let bound = deformation_bound(&from, &to, d);
            let divides = bound.as_ref().map(|b| rep.tau.divides(b));
            merge(
                to_value(&rep)?,
                json!({
                    "paper_bound": bound.as_ref().map(int_value),
                    "divides_bound": divides,
                    "root_system": rs.to_string(),
                    "degree": d,
                    "from": from.fgl().label(),
                    "to": to.fgl().label(),
                }),
            )
        }
    };
    output::emit(cfg, &output::json(&value)?)?;
    Ok(0)
}
