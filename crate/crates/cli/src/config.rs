use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rwb_core::catalog::{get_class, structure_alias};
use rwb_core::fraisse::ClassSpec;
use rwb_core::{SearchLimits, Structure};
use serde::Serialize;

pub const MIN_BUDGET: u64 = 1_000;
pub const BUDGET_ENV: &str = "RWB_BUDGET";

/// Everything that determines a run's output. Worker count is deliberately
/// absent: it must not change any report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub node_budget: u64,
    pub seed: u64,
    #[serde(skip)]
    pub workers: usize,
}

impl RunConfig {
    pub fn limits(&self) -> SearchLimits {
        SearchLimits::default().with_budget(self.node_budget).with_workers(self.workers)
    }
}

pub fn load_spec(class: Option<&str>, spec_file: Option<&Path>) -> Result<Option<ClassSpec>> {
    match (class, spec_file) {
        (Some(_), Some(_)) => bail!("give either --class or --spec, not both"),
        (Some(name), None) => Ok(Some(get_class(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Some(ClassSpec::from_json(&text)?))
        }
        (None, None) => Ok(None),
    }
}

/// The node budget: `RWB_BUDGET` overrides the flag.
pub fn node_budget(flag: u64) -> Result<u64> {
    let budget = match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| anyhow!("{BUDGET_ENV}={v:?} is not a number"))?,
        Err(_) => flag,
    };
    if budget < MIN_BUDGET {
        bail!("node budget must be at least {MIN_BUDGET}");
    }
    Ok(budget)
}

pub fn positive(name: &str, value: usize) -> Result<usize> {
    if value == 0 {
        bail!("--{name} must be positive");
    }
    Ok(value)
}

/// A structure from an alias (`chainN`, `KN`, `emptyN`), inline JSON, or a
/// JSON file. Aliases are built in the class's signature and must be
/// members of the class.
pub fn structure_arg(arg: &str, spec: &ClassSpec) -> Result<Structure> {
    if let Some(s) = structure_alias(arg, spec)? {
        return Ok(s);
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("`{arg}` is neither an alias, JSON, nor a readable file"))?
    };
    let s = Structure::from_json(&text).with_context(|| format!("parsing structure `{arg}`"))?;
    if **s.signature() != **spec.signature() {
        bail!("structure `{arg}` is not over the signature of class `{}`", spec.name());
    }
    Ok(s)
}
