use anyhow::Result;
use serde::Serialize;

use tdforge::certificates::{reflected_matching, verify_certificate};
use tdforge::constructions::{attach_gadgets, reflected_tree, toy_schedule};
use tdforge::search::{exact_treewidth, min_width_on_tree, MAX_HOST_NODES};

use crate::cli::PipelineArgs;
use crate::commands::{first_failure, plan, toy_values, usage, Ctx, Outcome, EXIT_CHECK_FAILED, EXIT_OK, TOY_DISCLAIMER};

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    coverage: Option<String>,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct PipelineReport {
    k: u64,
    level: u32,
    disclaimer: &'static str,
    graph_vertices: usize,
    gadget_vertices: usize,
    checks: Vec<Check>,
    passed: bool,
    /// First failing check, if any.
    first_failure: Option<String>,
}

/// Builds `G_{k+3}` with toy gadgets and runs the width argument's checks on
/// its core `G_{k+2}`: certificates with `k+1` matching edges on every tested
/// spanning tree, and no anchored decomposition of width `k-1` on any of them.
pub fn run(ctx: &mut Ctx, args: &PipelineArgs) -> Result<Outcome> {
    let k = args.k;
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let level = i64::try_from(k + 3).map_err(|_| usage("k is too large"))?;
    let outer = reflected_tree(level).map_err(|e| usage(e.to_string()))?;
    let g = outer.graph();
    let n = g.vertex_count();
    let heights = toy_values(&args.toy.toy_heights, n, "heights")?;
    let widths = toy_values(&args.toy.toy_widths, n, "widths")?;
    let schedule = toy_schedule(k, n, &heights, &widths).map_err(|e| usage(e.to_string()))?;
    eprintln!("warning: {TOY_DISCLAIMER}");
    let inst = match attach_gadgets(g, g.ids(), &schedule, ctx.config.materialization_cap) {
        Ok(inst) => inst,
        Err(e) => return Err(usage(e.to_string())),
    };

    let mut checks = Vec::new();
    let structure = inst.check_structure();
    checks.push(Check {
        name: "gadget structure".into(),
        coverage: None,
        passed: structure.is_empty(),
        detail: if structure.is_empty() { format!("{} vertices", inst.graph.vertex_count()) } else { structure.join("; ") },
    });

    let tw = exact_treewidth(g, ctx.config.treewidth_cap)?;
    checks.push(Check {
        name: format!("tw(G_{level}) = 2"),
        coverage: None,
        passed: tw.value == 2,
        detail: format!("{} ({})", tw.value, serde_json::to_value(tw.method)?.as_str().unwrap_or("?")),
    });

    // G_{k+3} is two copies of G_{k+2} joined at the roots
    let core = reflected_tree(level - 1).expect("level ≥ 3");
    let cg = core.graph();
    if cg.vertex_count() > MAX_HOST_NODES {
        return Err(usage(format!(
            "G_{} has {} vertices; the decider supports at most {MAX_HOST_NODES}",
            core.level(),
            cg.vertex_count()
        )));
    }
    let coverage = plan(cg, ctx)?;

    let want = (k + 1) as usize;
    let failure = first_failure(cg, &coverage, |t| match reflected_matching(&core, t) {
        Ok(cert) => {
            let check = verify_certificate(&core, &cert);
            if !check.valid {
                Some(format!("certificate fails: {}", check.reasons.join("; ")))
            } else if cert.matching.len() != want {
                Some(format!("matching of size {} instead of {want}", cert.matching.len()))
            } else {
                None
            }
        }
        Err(e) => Some(e.to_string()),
    })?;
    checks.push(Check {
        name: format!("certificates on G_{} with |M| = {want}", core.level()),
        coverage: Some(coverage.label()),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "all verified".into()),
    });

    let budget = (k - 1) as usize;
    let failure = first_failure(cg, &coverage, |t| match min_width_on_tree(cg, t, budget, true) {
        Ok(r) if r.is_sat() => Some(format!("anchored width {budget} found on {t:?}")),
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    })?;
    checks.push(Check {
        name: format!("anchored width > {budget} on every spanning tree of G_{}", core.level()),
        coverage: Some(coverage.label()),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("UNSAT at budget {budget}")),
    });

    let first_failure = checks.iter().find(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail));
    let passed = first_failure.is_none();
    if let Some(f) = &first_failure {
        eprintln!("check failed: {f}");
    }
    let report = PipelineReport {
        k,
        level: outer.level(),
        disclaimer: TOY_DISCLAIMER,
        graph_vertices: n,
        gadget_vertices: inst.graph.vertex_count(),
        checks,
        passed,
        first_failure,
    };
    Outcome::json(&report, if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}
