use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::classes::get_class;
use crate::error::Result;
use crate::fraisse::{check_ap, check_hp, check_jep, default_ap_mode, enumerate_models, ClassSpec, Verdict};
use crate::limits::SearchLimits;
use crate::order::find_order_types;
use crate::ramsey::check_rigidity;

/// Bound for the heredity, joint-embedding, amalgamation and order checks.
pub const DEFAULT_BOUND: usize = 5;
pub const RIGIDITY_BOUND: usize = 6;

/// Either a verdict or a count, serialized bare (`"PASS"` or `4`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Verdict(Verdict),
    Count(usize),
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Verdict(v) => v.serialize(serializer),
            Outcome::Count(n) => n.serialize(serializer),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Verdict(v) => write!(f, "{v}"),
            Outcome::Count(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub spec: ClassSpec,
    /// Check name (`hp`, `jep`, `ap`, `rigidity`, `order-types`) to outcome
    /// at the default bounds.
    pub expected: BTreeMap<&'static str, Outcome>,
    pub provenance: &'static str,
}

const PASS: Outcome = Outcome::Verdict(Verdict::Pass);
const FAIL: Outcome = Outcome::Verdict(Verdict::Fail);

fn table(name: &str) -> ([Outcome; 4], usize, &'static str) {
    match name {
        "linear-orders" => ([PASS, PASS, PASS, PASS], 2, "the basic ordered example; rigid and Ramsey"),
        "graphs" => ([PASS, PASS, PASS, FAIL], 0, "free amalgamation class without order; not rigid"),
        "ordered-graphs" => ([PASS, PASS, PASS, PASS], 2, "ordered expansion of graphs; a Ramsey class"),
        "equivalence-relations" => ([PASS, PASS, PASS, FAIL], 0, "unordered equivalence relations; not rigid"),
        "convex-er" => ([PASS, PASS, PASS, PASS], 4, "first worked example: convex equivalence relations on a linear order"),
        "maxdeg2-graphs" => ([PASS, PASS, FAIL, FAIL], 0, "hereditary class with joint embedding but no amalgamation"),
        "ordered-trees" => (
            [PASS, PASS, PASS, PASS],
            4,
            "second worked example: convexly ordered meet-trees with the arrangement relation",
        ),
        _ => unreachable!("every catalog name has a table"),
    }
}

/// The built-in classes with their expected outcomes.
pub fn list_classes() -> Result<Vec<CatalogEntry>> {
    super::CLASS_NAMES.iter().map(|name| get_entry(name)).collect()
}

pub fn get_entry(name: &str) -> Result<CatalogEntry> {
    let spec = get_class(name)?;
    let ([hp, jep, ap, rigidity], orders, provenance) = table(name);
    let expected = BTreeMap::from([
        ("hp", hp),
        ("jep", jep),
        ("ap", ap),
        ("rigidity", rigidity),
        ("order-types", Outcome::Count(orders)),
    ]);
    Ok(CatalogEntry { spec, expected, provenance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayLine {
    pub check: &'static str,
    pub expected: Outcome,
    pub observed: Outcome,
}

impl ReplayLine {
    pub fn matches(&self) -> bool {
        self.expected == self.observed
    }
}

/// Runs every check of the entry at the default bounds.
pub fn replay(entry: &CatalogEntry, limits: SearchLimits) -> Result<Vec<ReplayLine>> {
    let n = DEFAULT_BOUND;
    let catalog = enumerate_models(&entry.spec, RIGIDITY_BOUND.max(n), limits)?;
    let mut observed = BTreeMap::new();
    observed.insert("hp", Outcome::Verdict(check_hp(&catalog, n)?.verdict));
    observed.insert("jep", Outcome::Verdict(check_jep(&catalog, n, 2 * n, limits)?.verdict));
    let mode = default_ap_mode(&entry.spec);
    observed.insert("ap", Outcome::Verdict(check_ap(&catalog, n, mode, limits)?.verdict));
    observed.insert("rigidity", Outcome::Verdict(check_rigidity(&catalog, RIGIDITY_BOUND)?.verdict));
    observed.insert("order-types", Outcome::Count(find_order_types(&catalog, n, limits)?.candidates.len()));
    Ok(entry
        .expected
        .iter()
        .map(|(&check, &expected)| ReplayLine { check, expected, observed: observed[check] })
        .collect())
}
