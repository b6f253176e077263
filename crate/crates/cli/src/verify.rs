use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rwb_core::fraisse::{enumerate_models, hp_witness, ApCertificate, ClassSpec, HpReport};
use rwb_core::order::find_order_types;
use rwb_core::ramsey::{copy_hypergraph, decide_arrow, Coloring, Palette, WitnessSearch};
use rwb_core::structure::for_each_tuple;
use rwb_core::{is_embedding, qf_type, Embedding, QfType, Structure};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Report, Status};

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    let inner = v.get(key).with_context(|| format!("report has no `{key}`"))?;
    serde_json::from_value(inner.clone()).with_context(|| format!("malformed `{key}`"))
}

/// One replayed certificate: what it claims and whether it held up.
struct Replay {
    claim: String,
    ok: bool,
}

/// Re-checks every certificate carried by a report written with
/// `--format json`.
pub fn verify(config: &RunConfig, path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report: Value = serde_json::from_str(&text).context("report is not JSON")?;
    let command: String = field(&report, "command")?;
    let result = report.get("result").context("report has no `result`")?;
    let status: String = field(&report, "status")?;
    let replays = match command.as_str() {
        "arrow" if result.get("search").is_some() => witness(config, result)?,
        "arrow" => arrow(config, result)?,
        "witness" => witness(config, result)?,
        "check" => check(config, result)?,
        "order" => order(config, result)?,
        "indiscernible" => indiscernible(result)?,
        "enumerate" | "generic" | "catalog" => Vec::new(),
        other => bail!("cannot verify `{other}` reports"),
    };
    if status == "resource-limit" {
        bail!("report ended at a resource limit; nothing to replay");
    }
    let ok = replays.iter().all(|r| r.ok);
    let mut out = Report::new("verify", config, json!({ "report": path.display().to_string() }))
        .line(format!("{command} report: {} certificates", replays.len()));
    for r in &replays {
        out = out.line(format!("{} {}", if r.ok { "ok  " } else { "FAIL" }, r.claim));
    }
    let list: Vec<Value> = replays.iter().map(|r| json!({ "claim": r.claim, "replayed": r.ok })).collect();
    Ok(out.result(Status::from_bool(ok), json!({ "source": command, "certificates": list, "all_replayed": ok })))
}

fn arrow(config: &RunConfig, result: &Value) -> Result<Vec<Replay>> {
    let (a, b, c): (Structure, Structure, Structure) = (field(result, "A")?, field(result, "B")?, field(result, "C")?);
    let holds: bool = field(result, "holds")?;
    if holds {
        let k: usize = field(result, "k")?;
        let again = decide_arrow(&c, &b, &a, k, config.limits())?;
        return Ok(vec![Replay { claim: "arrow holds (re-decided)".into(), ok: again.holds }]);
    }
    let coloring: Coloring = field(result, "coloring")?;
    let hg = copy_hypergraph(&a, &b, &c)?;
    let ok = coloring.vertex_colors(&hg).is_ok() && coloring.is_bad_for(&hg)?;
    Ok(vec![Replay { claim: "coloring has no monochromatic copy of B".into(), ok }])
}

fn witness(config: &RunConfig, result: &Value) -> Result<Vec<Replay>> {
    let (a, b): (Structure, Structure) = (field(result, "A")?, field(result, "B")?);
    let k: usize = field(result, "k")?;
    let search: WitnessSearch = field(result, "search")?;
    match search {
        WitnessSearch::Found { witness, .. } => {
            let v = decide_arrow(&witness, &b, &a, k, config.limits())?;
            Ok(vec![Replay { claim: format!("witness of size {} arrows", witness.size()), ok: v.holds }])
        }
        WitnessSearch::NotFoundUpTo { max_size, .. } => {
            let spec: ClassSpec = field(result, "spec")?;
            let catalog = enumerate_models(&spec, max_size, config.limits())?;
            let again = rwb_core::ramsey::find_witness(&catalog, &a, &b, k, max_size, config.limits())?;
            let ok = matches!(again, WitnessSearch::NotFoundUpTo { .. });
            Ok(vec![Replay { claim: format!("no witness up to size {max_size} (re-searched)"), ok }])
        }
    }
}

fn check(config: &RunConfig, result: &Value) -> Result<Vec<Replay>> {
    let spec: ClassSpec = field(result, "spec")?;
    let checks = result.get("checks").context("report has no `checks`")?;
    let mut out = Vec::new();
    if let Some(ap) = checks.get("ap") {
        let cert: ApCertificate = serde_json::from_value(ap.clone()).context("malformed ap report")?;
        if let Some(w) = cert.failure {
            out.push(Replay { claim: "amalgamation failure witness".into(), ok: w.replay(&spec, config.node_budget)? });
        }
    }
    if let Some(hp) = checks.get("hp") {
        let report: HpReport = serde_json::from_value(hp.clone()).context("malformed hp report")?;
        if let Some(f) = report.failure {
            let ok = spec.is_member(&f.model)? && hp_witness(&spec, &f.model, &f.subset).is_none();
            out.push(Replay { claim: "heredity failure witness".into(), ok });
        }
    }
    if let Some(cx) = checks.get("rigidity").and_then(|r| r.get("counterexample")).filter(|c| !c.is_null()) {
        let s: Structure = field(cx, "structure")?;
        let sigma: Embedding = field(cx, "sigma")?;
        let ok = spec.is_member(&s)? && !sigma.is_identity() && is_embedding(&s, &s, sigma.images());
        out.push(Replay { claim: "nontrivial automorphism".into(), ok });
    }
    Ok(out)
}

fn order(config: &RunConfig, result: &Value) -> Result<Vec<Replay>> {
    let spec: ClassSpec = field(result, "spec")?;
    let claimed = result.get("report").context("report has no `report`")?;
    let bound: usize = field(claimed, "bound")?;
    let catalog = enumerate_models(&spec, bound, config.limits())?;
    let again = serde_json::to_value(find_order_types(&catalog, bound, config.limits())?)?;
    Ok(vec![Replay {
        claim: format!("order candidates up to size {bound} (recomputed)"),
        ok: again.get("candidates") == claimed.get("candidates"),
    }])
}

fn indiscernible(result: &Value) -> Result<Vec<Replay>> {
    let (a, c): (Structure, Structure) = (field(result, "A")?, field(result, "C")?);
    let palette: Palette = field(result, "palette")?;
    let Some(g) = field::<Option<Embedding>>(result, "embedding")? else {
        return Ok(Vec::new());
    };
    let mut ok = is_embedding(&a, &c, g.images());
    let mut seen: BTreeMap<QfType, usize> = BTreeMap::new();
    for len in 1..=palette.arity() {
        for_each_tuple(a.size(), len, |t| {
            let p = qf_type(&a, t).expect("tuple in range");
            let image: Vec<usize> = t.iter().map(|&x| g.images()[x]).collect();
            let color = palette.color(&image);
            ok &= *seen.entry(p).or_insert(color) == color;
        });
    }
    Ok(vec![Replay { claim: "embedding respects the palette on every atomic type".into(), ok }])
}
