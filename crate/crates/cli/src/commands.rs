use std::path::Path;

use anyhow::{anyhow, bail, Context as _, Result};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use tdforge::certificates::{bag_lower_bound, reflected_matching, verify_certificate, CertificateError, WidthCertificate};
use tdforge::constructions::{
    attach_gadgets, gadget_schedule, gadget_to_dot, reflected_tree, toy_schedule, ConstructionError, GadgetInstance,
    GadgetSchedule, ReflectedTree,
};
use tdforge::decomposition::{is_anchored, validate, TreeDecomposition};
use tdforge::graph::to_dot;
use tdforge::search::{
    count_spanning_trees, count_spanning_trees_with, enumerate_spanning_trees, exact_treewidth, map_spanning_trees,
    min_anchored_spanning_width, min_width_on_tree, plan_spanning_trees, Coverage,
};
use tdforge::transforms::{minor_to_spanning, reduce_to_anchored, MinorModelJson, TransformError};
use tdforge::{Graph, VertexId};

use crate::cli::{CertifyArgs, Construct, Export, GadgetArgs, Search, ToyArgs, Transform, Verify};
use crate::config::Config;
use crate::manifest::Recorder;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TOY_DISCLAIMER: &str = "toy schedule: heights and widths are demonstration values; \
the growth conditions the width argument needs are NOT met";

/// An error that carries its own exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    Exit { code: EXIT_USAGE, message: message.into() }.into()
}

/// What a command produced: the primary document, an exit code, and optional sidecars.
pub struct Outcome {
    pub body: String,
    pub code: i32,
    /// (suffix appended to the output path, contents)
    pub sidecars: Vec<(&'static str, String)>,
}

impl Outcome {
    pub fn json<T: Serialize>(value: &T, code: i32) -> Result<Self> {
        Ok(Outcome { body: to_json(value)?, code, sidecars: Vec::new() })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub struct Ctx {
    pub config: Config,
    pub seed: u64,
    pub rec: Recorder,
}

impl Ctx {
    pub fn load<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.rec.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn level(r: i64) -> Result<ReflectedTree> {
    reflected_tree(r).map_err(|e| usage(e.to_string()))
}

pub fn construct(ctx: &mut Ctx, cmd: &Construct) -> Result<Outcome> {
    match cmd {
        Construct::ReflectedTree { r } => {
            let rt = level(*r)?;
            let mut out = Outcome::json(&rt.labelled_graph(), EXIT_OK)?;
            out.sidecars.push((".meta.json", to_json(&rt.metadata())?));
            Ok(out)
        }
        Construct::Gadget(args) => gadget(ctx, args),
    }
}

/// Expands `--toy-heights/--toy-widths` to `n` values; a single value is broadcast.
pub fn toy_values(values: &Option<Vec<i64>>, n: usize, what: &str) -> Result<Vec<u64>> {
    let v = match values {
        None => return Ok(vec![1; n]),
        Some(v) => v,
    };
    if let Some(bad) = v.iter().find(|&&x| x < 1) {
        return Err(usage(format!("toy {what} must be positive integers, got {bad}")));
    }
    let v: Vec<u64> = v.iter().map(|&x| x as u64).collect();
    match v.len() {
        1 => Ok(vec![v[0]; n]),
        len if len == n => Ok(v),
        len => Err(usage(format!("expected 1 or {n} toy {what}, got {len}"))),
    }
}

fn schedule_for(k: u64, n: usize, toy: &ToyArgs) -> Result<GadgetSchedule> {
    let schedule = if toy.toy_heights.is_none() && toy.toy_widths.is_none() {
        gadget_schedule(k, n)
    } else {
        let h = toy_values(&toy.toy_heights, n, "heights")?;
        let w = toy_values(&toy.toy_widths, n, "widths")?;
        toy_schedule(k, n, &h, &w)
    };
    schedule.map_err(|e| usage(e.to_string()))
}

fn gadget(ctx: &mut Ctx, args: &GadgetArgs) -> Result<Outcome> {
    let g: Graph = ctx.load(&args.graph)?;
    let ordering: Vec<VertexId> = match &args.ordering {
        Some(o) => o.iter().map(|s| VertexId::from(s.as_str())).collect(),
        None => g.ids().to_vec(),
    };
    let schedule = schedule_for(args.k, g.vertex_count(), &args.toy)?;
    let cap = args.cap.unwrap_or(ctx.config.materialization_cap);
    let inst = match attach_gadgets(&g, &ordering, &schedule, cap) {
        Ok(inst) => inst,
        Err(ConstructionError::SizeExceeded { total, cap }) => {
            let report = json!({
                "error": "size-exceeded",
                "total_vertices": total,
                "cap": cap,
                "schedule": schedule,
            });
            eprintln!("construction needs {total} vertices, above the cap of {cap}");
            return Outcome::json(&report, EXIT_CHECK_FAILED);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    if schedule.toy {
        eprintln!("warning: {TOY_DISCLAIMER}");
    }
    let mut out = Outcome::json(&inst, EXIT_OK)?;
    let meta = json!({
        "k": inst.k(),
        "base_vertices": inst.base.vertex_count(),
        "total_vertices": inst.graph.vertex_count(),
        "toy": schedule.toy,
        "disclaimer": schedule.toy.then_some(TOY_DISCLAIMER),
        "schedule": schedule,
    });
    out.sidecars.push((".meta.json", to_json(&meta)?));
    Ok(out)
}

pub fn schedule(k: u64, n: usize) -> Result<Outcome> {
    let s = gadget_schedule(k, n).map_err(|e| usage(e.to_string()))?;
    let v = json!({ "schedule": s, "total_vertices": s.total_vertices() });
    Outcome::json(&v, EXIT_OK)
}

pub fn transform(ctx: &mut Ctx, cmd: &Transform) -> Result<Outcome> {
    match cmd {
        Transform::MinorToSpanning { graph, td, model } => {
            let g: Graph = ctx.load(graph)?;
            let td: TreeDecomposition = ctx.load(td)?;
            let model: MinorModelJson = ctx.load(model)?;
            let model = model.into_model(&g).map_err(|e| usage(e.to_string()))?;
            match minor_to_spanning(&g, &td, &model) {
                Ok(out) => Outcome::json(&out, EXIT_OK),
                Err(TransformError::InvalidModel(report)) => {
                    eprintln!("invalid minor model");
                    Outcome::json(&report, EXIT_USAGE)
                }
                Err(TransformError::InvalidDecomposition(report)) => {
                    eprintln!("input decomposition is invalid");
                    Outcome::json(&report, EXIT_USAGE)
                }
                Err(e) => Err(usage(e.to_string())),
            }
        }
        Transform::Reduce { instance, td } => {
            let inst: GadgetInstance = ctx.load(instance)?;
            let td: TreeDecomposition = ctx.load(td)?;
            match reduce_to_anchored(&inst, &td) {
                Ok(r) => {
                    for w in &r.warnings {
                        eprintln!("warning: {w}");
                    }
                    Outcome::json(&r, EXIT_OK)
                }
                Err(TransformError::ReductionInvalid(r)) => {
                    eprintln!("reduction produced an invalid decomposition: {}", r.report);
                    Outcome::json(&r, EXIT_CHECK_FAILED)
                }
                Err(TransformError::InvalidDecomposition(report)) => {
                    eprintln!("input decomposition is invalid");
                    Outcome::json(&report, EXIT_USAGE)
                }
                Err(TransformError::Internal(msg)) => bail!("internal error: {msg}"),
                Err(e) => Err(usage(e.to_string())),
            }
        }
    }
}

/// Certificate plus its independent re-verification for every tree in `coverage`.
pub fn certify_coverage(rt: &ReflectedTree, coverage: &Coverage) -> Result<Value> {
    let results = map_spanning_trees(rt.graph(), coverage, |t| match reflected_matching(rt, t) {
        Ok(cert) => {
            let check = verify_certificate(rt, &cert);
            (cert.matching.len(), check.valid.then_some(()).ok_or_else(|| check.reasons.join("; ")))
        }
        Err(e) => (0, Err(e.to_string())),
    })?;
    let failures: Vec<&String> = results.iter().filter_map(|(_, r)| r.as_ref().err()).collect();
    let sizes: std::collections::BTreeMap<usize, usize> = results.iter().fold(Default::default(), |mut m, (s, _)| {
        *m.entry(*s).or_insert(0) += 1;
        m
    });
    Ok(json!({
        "level": rt.level(),
        "coverage": coverage,
        "label": coverage.label(),
        "trees": results.len(),
        "verified": results.len() - failures.len(),
        "matching_sizes": sizes,
        "failures": failures.iter().take(10).collect::<Vec<_>>(),
    }))
}

pub fn certify(ctx: &mut Ctx, args: &CertifyArgs) -> Result<Outcome> {
    let rt = level(args.r)?;
    if rt.level() < 2 {
        return Err(usage("certificates need r ≥ 2"));
    }
    let coverage = if let Some(path) = &args.spanning_tree {
        let t: Graph = ctx.load(path)?;
        return match reflected_matching(&rt, &t) {
            Ok(cert) => {
                let check = verify_certificate(&rt, &cert);
                if !check.valid {
                    eprintln!("certificate fails verification: {}", check.reasons.join("; "));
                }
                Outcome::json(&cert, if check.valid { EXIT_OK } else { EXIT_CHECK_FAILED })
            }
            Err(CertificateError::NotSpanning) => Err(usage("tree is not a spanning tree of the reflected-tree")),
            Err(e) => bail!("{e}"),
        };
    } else if args.all {
        let count = count_spanning_trees(rt.graph())?;
        if count > ctx.config.enumeration_cap.into() {
            return Err(usage(format!(
                "{count} spanning trees exceed the enumeration cap {}; use --sample",
                ctx.config.enumeration_cap
            )));
        }
        Coverage::Exhaustive { count }
    } else {
        let n = args.sample.expect("clap requires one of the modes");
        Coverage::Sampled { n, seed: ctx.seed, total: count_spanning_trees(rt.graph())? }
    };
    let summary = certify_coverage(&rt, &coverage)?;
    let ok = summary["verified"] == summary["trees"];
    Outcome::json(&summary, if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn audit(ctx: &mut Ctx, certificate: &Path, td: &Path) -> Result<Outcome> {
    let cert: WidthCertificate = ctx.load(certificate)?;
    let td: TreeDecomposition = ctx.load(td)?;
    let rt = reflected_tree(i64::from(cert.level)).map_err(|e| usage(e.to_string()))?;
    match bag_lower_bound(&rt, &cert, &td) {
        Ok(bound) => Outcome::json(&bound, EXIT_OK),
        Err(CertificateError::CounterexampleToLemma(edge)) => {
            eprintln!("counterexample: neither {} nor {} is in the hub bag", edge[0], edge[1]);
            Outcome::json(&json!({ "counterexample": edge, "hub": cert.hub }), EXIT_CHECK_FAILED)
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

pub fn search(ctx: &mut Ctx, cmd: &Search) -> Result<Outcome> {
    match cmd {
        Search::Decide { graph, host, budget, anchored } => {
            let g: Graph = ctx.load(graph)?;
            let host: Graph = ctx.load(host)?;
            let r = min_width_on_tree(&g, &host, *budget, *anchored).map_err(|e| usage(e.to_string()))?;
            let v = json!({
                "budget": budget,
                "anchored": anchored,
                "status": r.status,
                "witness": r.witness,
                "stats": r.stats,
            });
            Outcome::json(&v, EXIT_OK)
        }
        Search::MinAnchored { graph, cap } => {
            let g: Graph = ctx.load(graph)?;
            let cap = cap.unwrap_or(ctx.config.min_anchored_cap);
            let r = min_anchored_spanning_width(&g, cap).map_err(|e| usage(e.to_string()))?;
            Outcome::json(&r, EXIT_OK)
        }
        Search::Tw { graph, cap } => {
            let g: Graph = ctx.load(graph)?;
            let cap = cap.unwrap_or(ctx.config.treewidth_cap);
            let tw = exact_treewidth(&g, cap).map_err(|e| usage(e.to_string()))?;
            Outcome::json(&tw, EXIT_OK)
        }
        Search::Spanning { graph, count_only } => {
            let g: Graph = ctx.load(graph)?;
            let count = count_spanning_trees(&g)?;
            // a second elimination order guards the determinant
            let check = count_spanning_trees_with(&g, g.vertex_count().saturating_sub(1), true)?;
            if check != count {
                bail!("determinant evaluations disagree: {count} vs {check}");
            }
            if *count_only {
                return Outcome::json(&json!({ "count": count.to_string() }), EXIT_OK);
            }
            if count > ctx.config.enumeration_cap.into() {
                return Err(usage(format!(
                    "{count} spanning trees exceed the enumeration cap {}; use --count-only",
                    ctx.config.enumeration_cap
                )));
            }
            let trees: Vec<Graph> = enumerate_spanning_trees(&g)?.collect();
            Outcome::json(&json!({ "count": count.to_string(), "trees": trees }), EXIT_OK)
        }
    }
}

pub fn verify(ctx: &mut Ctx, cmd: &Verify) -> Result<Outcome> {
    match cmd {
        Verify::Td { graph, td } => {
            let g: Graph = ctx.load(graph)?;
            let td: TreeDecomposition = ctx.load(td)?;
            let report = validate(&g, &td).map_err(|e| usage(e.to_string()))?;
            let anchored = report.valid && is_anchored(&g, &td).unwrap_or(false);
            let v = json!({
                "valid": report.valid,
                "violations": report.violations,
                "width": td.width(),
                "anchored": anchored,
            });
            Outcome::json(&v, if report.valid { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Verify::Certificate { certificate } => {
            let cert: WidthCertificate = ctx.load(certificate)?;
            let rt = reflected_tree(i64::from(cert.level)).map_err(|e| usage(e.to_string()))?;
            let check = verify_certificate(&rt, &cert);
            let code = if check.valid { EXIT_OK } else { EXIT_CHECK_FAILED };
            Outcome::json(&check, code)
        }
    }
}

pub fn export(ctx: &mut Ctx, cmd: &Export) -> Result<Outcome> {
    let Export::Dot { input } = cmd;
    let value: Value = ctx.load(input)?;
    let name = input.file_stem().and_then(|s| s.to_str()).unwrap_or("G");
    let name: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let body = if value.get("attachments").is_some() {
        let inst: GadgetInstance = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
        gadget_to_dot(&inst)
    } else if value.get("host_vertices").is_some() {
        let td: TreeDecomposition = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
        td.to_dot(&name)
    } else if value.get("vertices").is_some() {
        let g: Graph = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
        to_dot(&g, &name)
    } else {
        return Err(usage(format!("{}: neither a graph, a decomposition nor a gadget instance", input.display())));
    };
    Ok(Outcome { body, code: EXIT_OK, sidecars: Vec::new() })
}

/// Runs `f` over every tree of the plan, in parallel, keeping the first failure.
pub fn first_failure<F>(g: &Graph, coverage: &Coverage, f: F) -> Result<Option<String>>
where
    F: Fn(&Graph) -> Option<String> + Sync,
{
    let failures = map_spanning_trees(g, coverage, f)?;
    Ok(failures.into_par_iter().flatten().find_first(|_| true))
}

pub fn plan(g: &Graph, ctx: &Ctx) -> Result<Coverage> {
    plan_spanning_trees(g, ctx.config.enumeration_cap, ctx.config.sample_size, ctx.seed)
        .map_err(|e| anyhow!(e))
        .context("planning spanning-tree coverage")
}
