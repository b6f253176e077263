use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwb_core::catalog::{get_entry, list_classes, replay};
use rwb_core::fraisse::{
    check_ap, check_extension_property, check_hp, check_jep, default_ap_mode, enumerate_models, grow_generic, type_census,
    ClassSpec, GrowthOptions, ModelCatalog, Verdict,
};
use rwb_core::order::find_order_types;
use rwb_core::ramsey::{
    check_rigidity, decide_arrow, extract_indiscernible, extract_indiscernible_iterated, find_witness, Palette,
    WitnessSearch,
};
use rwb_core::structure::for_each_tuple;
use rwb_core::Structure;
use serde_json::{json, Map, Value};

use crate::config::{positive, structure_arg, RunConfig};
use crate::report::{Report, Status};
use crate::{verify, Command, Prop};

pub fn run(command: Command, config: &RunConfig, spec: Option<ClassSpec>) -> Result<Report> {
    let need = |spec: Option<ClassSpec>| spec.context("this command needs --class or --spec");
    match command {
        Command::Enumerate { max_size, counts_only, .. } => enumerate(config, &need(spec)?, max_size, counts_only),
        Command::Check { props, max_size, amalgam_bound, ap_mode, arity, host, m, .. } => {
            let opts = CheckOpts { max_size, amalgam_bound, ap_mode: ap_mode.map(Into::into), arity, host, m };
            check(config, &need(spec)?, &props, opts)
        }
        Command::Arrow { a, b, c, k, search, max_size, .. } => {
            let spec = need(spec)?;
            match (c, search, max_size) {
                (Some(c), false, _) => arrow(config, &spec, &a, &b, &c, k),
                (None, true, Some(n)) => witness(config, &spec, &a, &b, k, n, "arrow"),
                (None, true, None) => bail!("--search needs --max-size"),
                _ => bail!("give exactly one of --C or --search"),
            }
        }
        Command::Witness { a, b, k, max_size, .. } => witness(config, &need(spec)?, &a, &b, k, max_size, "witness"),
        Command::Order { max_size, .. } => order(config, &need(spec)?, max_size),
        Command::Indiscernible { c, a, palette, random_palette, colors, iterated, .. } => {
            let spec = need(spec)?;
            indiscernible(config, &spec, &c, &a, palette.as_deref(), random_palette, colors, iterated)
        }
        Command::Generic { size, demand_cap, check_m, .. } => generic(config, &need(spec)?, size, demand_cap, check_m),
        Command::Catalog { name, replay, .. } => catalog(config, name.as_deref(), replay),
        Command::Verify { report, .. } => verify::verify(config, &report),
    }
}

fn models(spec: &ClassSpec, n: usize, config: &RunConfig) -> Result<ModelCatalog> {
    Ok(enumerate_models(spec, n, config.limits())?)
}

fn enumerate(config: &RunConfig, spec: &ClassSpec, max_size: usize, counts_only: bool) -> Result<Report> {
    let catalog = models(spec, max_size, config)?;
    let counts = catalog.counts();
    let mut result = json!({ "max_size": max_size, "counts": counts });
    if !counts_only {
        let list: Vec<Value> = catalog
            .iter()
            .map(|m| json!({ "size": m.structure.size(), "code": m.code.to_hex(), "structure": m.structure }))
            .collect();
        result["models"] = Value::Array(list);
    }
    Ok(Report::new("enumerate", config, json!({ "max_size": max_size }))
        .result(Status::Ok, result)
        .line(format!("models per size 0..={max_size}: {counts:?}")))
}

pub struct CheckOpts {
    max_size: usize,
    amalgam_bound: Option<usize>,
    ap_mode: Option<rwb_core::fraisse::ApMode>,
    arity: usize,
    host: Option<String>,
    m: usize,
}

fn check(config: &RunConfig, spec: &ClassSpec, props: &[Prop], o: CheckOpts) -> Result<Report> {
    let n = o.max_size;
    let wants_extension = props.contains(&Prop::Extension);
    let host = match (&o.host, wants_extension) {
        (Some(h), true) => Some(structure_arg(h, spec)?),
        (None, true) => bail!("the extension check needs --host"),
        _ => None,
    };
    let size = if wants_extension { n.max(o.m + 1) } else { n };
    let catalog = models(spec, size, config)?;
    let limits = config.limits();
    let amalgam_bound = o.amalgam_bound.unwrap_or(2 * n);
    let ap_mode = o.ap_mode.unwrap_or_else(|| default_ap_mode(spec));
    let mut checks = Map::new();
    let mut all_pass = true;
    let mut report = Report::new(
        "check",
        config,
        json!({ "max_size": n, "props": props.iter().map(|p| prop_name(*p)).collect::<Vec<_>>() }),
    );
    for &prop in props {
        let (verdict, value) = match prop {
            Prop::Hp => {
                let r = check_hp(&catalog, n)?;
                (r.verdict, serde_json::to_value(r)?)
            }
            Prop::Jep => {
                let r = check_jep(&catalog, n, amalgam_bound, limits)?;
                (r.verdict, serde_json::to_value(r)?)
            }
            Prop::Ap => {
                let r = check_ap(&catalog, n, ap_mode, limits)?;
                (r.verdict, serde_json::to_value(r)?)
            }
            Prop::Rigidity => {
                let r = check_rigidity(&catalog, n)?;
                (r.verdict, serde_json::to_value(r)?)
            }
            Prop::Types => {
                let r = type_census(&catalog, o.arity, n);
                (Verdict::Pass, serde_json::to_value(r)?)
            }
            Prop::Extension => {
                let host = host.as_ref().expect("host parsed above");
                let r = check_extension_property(&catalog, host, o.m)?;
                (r.verdict, serde_json::to_value(r)?)
            }
        };
        all_pass &= verdict.is_pass();
        report = report.line(format!("{}: {verdict} (within bound {n})", prop_name(prop)));
        if verdict == Verdict::Fail {
            if let Some(cert) = value.get("failure").filter(|f| !f.is_null()) {
                report = report.line(format!("  certificate: {cert}"));
            }
            if let Some(cert) = value.get("counterexample").filter(|f| !f.is_null()) {
                report = report.line(format!("  counterexample: {cert}"));
            }
        }
        checks.insert(prop_name(prop).to_string(), value);
    }
    Ok(report.result(Status::from_bool(all_pass), json!({ "spec": spec, "checks": checks })))
}

pub fn prop_name(p: Prop) -> &'static str {
    match p {
        Prop::Hp => "hp",
        Prop::Jep => "jep",
        Prop::Ap => "ap",
        Prop::Rigidity => "rigidity",
        Prop::Types => "types",
        Prop::Extension => "extension",
    }
}

fn arrow(config: &RunConfig, spec: &ClassSpec, a: &str, b: &str, c: &str, k: usize) -> Result<Report> {
    positive("k", k)?;
    let (sa, sb, sc) = (structure_arg(a, spec)?, structure_arg(b, spec)?, structure_arg(c, spec)?);
    let verdict = decide_arrow(&sc, &sb, &sa, k, config.limits())?;
    let status = Status::from_bool(verdict.holds);
    let mut report = Report::new("arrow", config, json!({ "A": a, "B": b, "C": c, "k": k }))
        .line(format!("C -> (B)^A_{k}: {}", if verdict.holds { "holds" } else { "fails" }))
        .line(format!(
            "{} embeddings of A, {} copies of B, {} nodes",
            verdict.stats.vertices, verdict.stats.edges, verdict.stats.nodes
        ));
    if let Some(col) = &verdict.coloring {
        report = report.line(format!("bad coloring: {}", col.to_json()));
    }
    let result = json!({
        "A": sa, "B": sb, "C": sc, "k": k,
        "holds": verdict.holds,
        "coloring": verdict.coloring,
        "stats": verdict.stats,
    });
    Ok(report.result(status, result))
}

fn witness(config: &RunConfig, spec: &ClassSpec, a: &str, b: &str, k: usize, max_size: usize, command: &'static str) -> Result<Report> {
    positive("k", k)?;
    let (sa, sb) = (structure_arg(a, spec)?, structure_arg(b, spec)?);
    let catalog = models(spec, max_size, config)?;
    let search = find_witness(&catalog, &sa, &sb, k, max_size, config.limits())?;
    let report = Report::new(command, config, json!({ "A": a, "B": b, "k": k, "max_size": max_size, "search": true }));
    let (status, line) = match &search {
        WitnessSearch::Found { witness, candidates_tried, .. } => (
            Status::Ok,
            format!("witness of size {} after {candidates_tried} candidates: {}", witness.size(), witness.to_json()),
        ),
        WitnessSearch::NotFoundUpTo { max_size, candidates_tried } => {
            (Status::Refuted, format!("no witness up to size {max_size} ({candidates_tried} candidates)"))
        }
    };
    let result = json!({ "spec": spec, "A": sa, "B": sb, "k": k, "max_size": max_size, "search": search });
    Ok(report.line(line).result(status, result))
}

fn order(config: &RunConfig, spec: &ClassSpec, max_size: usize) -> Result<Report> {
    let catalog = models(spec, max_size, config)?;
    let r = find_order_types(&catalog, max_size, config.limits())?;
    let mut report = Report::new("order", config, json!({ "max_size": max_size }))
        .line(format!("{} irreflexive 2-types, {} order candidates (verified up to size {max_size})", r.irreflexive_types.len(), r.candidates.len()));
    for c in &r.candidates {
        let types: Vec<String> = c.types.iter().map(ToString::to_string).collect();
        report = report.line(format!("W = {}", types.join(" | ")));
    }
    let status = Status::from_bool(!r.candidates.is_empty());
    Ok(report.result(status, json!({ "spec": spec, "report": r })))
}

/// One color per underlying set, so the palette colors sets rather than
/// ordered tuples.
fn random_palette(host: &Structure, arity: usize, colors: usize, seed: u64) -> Result<Palette> {
    positive("colors", colors)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_set: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut palette = Palette::new(arity, 0);
    let mut entries = Vec::new();
    for len in 1..=arity {
        for_each_tuple(host.size(), len, |t| {
            let mut set = t.to_vec();
            set.sort_unstable();
            set.dedup();
            let color = *by_set.entry(set).or_insert_with(|| rng.gen_range(0..colors));
            entries.push((t.to_vec(), color));
        });
    }
    for (t, color) in entries {
        palette.set(t, color)?;
    }
    Ok(palette)
}

#[allow(clippy::too_many_arguments)]
fn indiscernible(
    config: &RunConfig,
    spec: &ClassSpec,
    c: &str,
    a: &str,
    palette: Option<&Path>,
    random: Option<usize>,
    colors: usize,
    iterated: bool,
) -> Result<Report> {
    let (sc, sa) = (structure_arg(c, spec)?, structure_arg(a, spec)?);
    let palette = match (palette, random) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Palette::from_json(&text)?
        }
        (None, Some(arity)) => random_palette(&sc, positive("random-palette", arity)?, colors, config.seed)?,
        _ => bail!("give exactly one of --palette or --random-palette"),
    };
    if palette.entries().any(|(t, _)| t.iter().any(|&x| x >= sc.size())) {
        bail!("palette mentions elements outside the host");
    }
    let found = if iterated {
        extract_indiscernible_iterated(&sc, &sa, &palette)?
    } else {
        extract_indiscernible(&sc, &sa, &palette)?
    };
    let line = match &found {
        Some(g) => format!("indiscernible copy of A at {:?}", g.images()),
        None => "no embedding of A respects the palette".to_string(),
    };
    let report = Report::new(
        "indiscernible",
        config,
        json!({ "A": a, "C": c, "iterated": iterated, "random_palette": random, "colors": colors }),
    );
    let result = json!({ "A": sa, "C": sc, "palette": palette, "embedding": found });
    Ok(report.line(line).result(Status::from_bool(found.is_some()), result))
}

fn generic(config: &RunConfig, spec: &ClassSpec, size: usize, demand_cap: usize, check_m: Option<usize>) -> Result<Report> {
    positive("size", size)?;
    let catalog = models(spec, demand_cap.max(check_m.unwrap_or(0)) + 1, config)?;
    let opts = GrowthOptions { demand_cap, limits: config.limits(), ..GrowthOptions::default() };
    let grown = grow_generic(spec, &catalog, size, config.seed, opts)?;
    let mut report = Report::new("generic", config, json!({ "size": size, "demand_cap": demand_cap, "check_m": check_m }))
        .line(format!("grew {} elements: {}", grown.structure.size(), grown.structure.to_json()));
    let mut status = Status::Ok;
    let extension = match check_m {
        Some(m) => {
            let r = check_extension_property(&catalog, &grown.structure, m)?;
            status = Status::from_bool(r.verdict.is_pass());
            report = report.line(format!("extension property up to {m}: {}", r.verdict));
            Some(r)
        }
        None => None,
    };
    Ok(report.result(status, json!({ "growth": grown, "extension": extension })))
}

fn catalog(config: &RunConfig, name: Option<&str>, run_replay: bool) -> Result<Report> {
    let entries = match name {
        Some(n) => vec![get_entry(n)?],
        None => list_classes()?,
    };
    let mut report = Report::new("catalog", config, json!({ "name": name, "replay": run_replay }));
    let mut all_match = true;
    let mut list = Vec::new();
    for entry in &entries {
        let mut value = serde_json::to_value(entry)?;
        let expected: Vec<String> = entry.expected.iter().map(|(k, v)| format!("{k}={v}")).collect();
        report = report.line(format!("{}: {}", entry.spec.name(), expected.join(" ")));
        if run_replay {
            let lines = replay(entry, config.limits())?;
            for l in lines.iter().filter(|l| !l.matches()) {
                all_match = false;
                report = report.line(format!("  MISMATCH {}: expected {} observed {}", l.check, l.expected, l.observed));
            }
            value["replay"] = serde_json::to_value(&lines)?;
        }
        list.push(value);
    }
    Ok(report.result(Status::from_bool(all_match), json!({ "entries": list })))
}
