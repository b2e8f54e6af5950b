//! Reports behind the `kgring` command.

pub mod file;

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use kgring_core::divisible::{full_decompose, hensel_root, reconstruct};
use kgring_core::exactness::NodeCheck;
use kgring_core::intlinalg::{is_prime, ExactnessDefect, GroupPart};
use kgring_core::module::{ext1, hom};
use kgring_core::ring::{rewrite_system, verify_derived_relations};
use kgring_core::splitting::split_extension;
use kgring_core::{is_exact, Extension, GradedGroup, KGModule, ModuleMap};
use serde_json::{json, Value};

pub use file::{read_extension, read_module, ExtensionFile, ModuleFile, DEFAULT_MAX_RANK};

/// Outcome of one command: pass or fail, with text and JSON renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

fn part_json(p: &GroupPart) -> Value {
    json!({ "rank": p.rank, "torsion": p.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>() })
}

fn group_json(g: &GradedGroup) -> Value {
    json!({ "even": part_json(g.even()), "odd": part_json(g.odd()), "text": g.to_string() })
}

pub fn check_ring(p: u64) -> Result<Report> {
    if !is_prime(p) {
        bail!("{p} is not a prime");
    }
    let checks = verify_derived_relations(p).map_err(|e| anyhow!("{e}"))?;
    let sys = rewrite_system(p).map_err(|e| anyhow!("{e}"))?;
    let confluence = sys.verify_confluence();
    let mut text = format!("ring for p = {p}: {} rewrite rules\n", sys.rules().len());
    let mut rows = Vec::new();
    for c in &checks {
        let status = if c.holds { "ok  " } else { "FAIL" };
        if c.family == c.instance {
            let _ = writeln!(text, "  {status} {}", c.family);
        } else {
            let _ = writeln!(text, "  {status} {}: {}", c.family, c.instance);
        }
        rows.push(json!({ "family": c.family, "instance": c.instance, "holds": c.holds }));
    }
    let pairs = match &confluence {
        Ok(n) => {
            let _ = writeln!(text, "  ok   {n} critical pairs resolve");
            json!({ "ok": true, "pairs": n })
        }
        Err(e) => {
            let _ = writeln!(text, "  FAIL confluence: {e}");
            json!({ "ok": false, "error": e.to_string() })
        }
    };
    let ok = checks.iter().all(|c| c.holds) && confluence.is_ok();
    let _ = writeln!(text, "{}", if ok { "PASS" } else { "FAIL" });
    Ok(Report {
        ok,
        text,
        json: json!({ "command": "check-ring", "prime": p, "ok": ok, "derived": rows, "confluence": pairs }),
    })
}

pub fn validate(m: &KGModule) -> Report {
    let r = m.validate();
    let mut text = format!("{} relation blocks checked\n", r.checked);
    for f in &r.failures {
        let _ = writeln!(text, "  FAIL {f}");
    }
    let _ = writeln!(text, "{}", if r.is_valid() { "valid" } else { "invalid" });
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| json!({ "relation": f.relation, "prime": f.prime, "vertex": file::vertex_key(&f.vertex) }))
        .collect();
    Report {
        ok: r.is_valid(),
        text,
        json: json!({ "command": "validate", "ok": r.is_valid(), "checked": r.checked, "failures": failures }),
    }
}

fn node_json(c: &NodeCheck) -> Value {
    let defect = match &c.defect {
        None => Value::Null,
        Some(ExactnessDefect::CompositionNonzero(x)) => {
            json!({ "kind": "composition nonzero", "witness": x.iter().map(|v| v.to_string()).collect::<Vec<_>>() })
        }
        Some(ExactnessDefect::KernelNotImage(x)) => {
            json!({ "kind": "kernel not image", "witness": x.iter().map(|v| v.to_string()).collect::<Vec<_>>() })
        }
    };
    json!({ "prime": c.prime, "orientation": format!("{:?}", c.orientation).to_lowercase(), "node": c.node, "defect": defect })
}

pub fn exact(m: &KGModule) -> Result<Report> {
    let v = validate(m);
    if !v.ok {
        let mut text = v.text;
        text.push_str("not exact: module is invalid\n");
        return Ok(Report {
            ok: false,
            text,
            json: json!({ "command": "exact", "ok": false, "validation": v.json, "nodes": [] }),
        });
    }
    let r = is_exact(m).map_err(|e| anyhow!("{e}"))?;
    let mut text = String::new();
    for c in &r.checks {
        let status = match &c.defect {
            None => "ok  ".to_string(),
            Some(ExactnessDefect::CompositionNonzero(_)) => "FAIL composition nonzero".into(),
            Some(ExactnessDefect::KernelNotImage(_)) => "FAIL kernel larger than image".into(),
        };
        let _ = writeln!(text, "  p={} {:?} node {}: {status}", c.prime, c.orientation, c.node);
    }
    let _ = writeln!(text, "{}", if r.is_exact() { "exact" } else { "not exact" });
    Ok(Report {
        ok: r.is_exact(),
        text,
        json: json!({ "command": "exact", "ok": r.is_exact(), "nodes": r.checks.iter().map(node_json).collect::<Vec<_>>() }),
    })
}

pub fn split(sigma: &Extension) -> Result<Report> {
    let sp = split_extension(sigma).map_err(|e| anyhow!("{e}"))?;
    let gamma: &ModuleMap = &sp.section;
    let beta_gamma = sigma.beta().compose(gamma).map_err(|e| anyhow!("{e}"))?;
    let ok = beta_gamma.agrees_with(&ModuleMap::identity(sigma.quotient())) && gamma.is_linear();
    let primes = sigma.sub().primes();
    let (a, b) = sp.primes;
    let mut text = String::new();
    for (i, t) in [a, b].iter().zip(&sp.traces) {
        let trace: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "defect trace for p = {}: {}", primes[*i], trace.join(" -> "));
    }
    let _ = writeln!(text, "coefficients: ({}, {})", sp.coefficients.0, sp.coefficients.1);
    let _ = writeln!(text, "section:\n{}", gamma.matrix());
    let _ = writeln!(
        text,
        "{}",
        if ok {
            "verified: beta gamma = 1, linear"
        } else {
            "FAIL: section does not verify"
        }
    );
    Ok(Report {
        ok,
        text,
        json: json!({
            "command": "split",
            "ok": ok,
            "primes": [primes[a], primes[b]],
            "traces": sp.traces.iter().map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "coefficients": [sp.coefficients.0.to_string(), sp.coefficients.1.to_string()],
            "section": file::matrix_rows(gamma.matrix()),
        }),
    })
}

pub fn decompose(m: &KGModule, primes: &[u64]) -> Result<Report> {
    let selected: Vec<usize> = primes
        .iter()
        .map(|p| {
            m.primes()
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| anyhow!("{p} is not one of the module's primes {:?}", m.primes()))
        })
        .collect::<Result<_>>()?;
    let d = full_decompose(m, &selected).map_err(|e| anyhow!("{e}"))?;
    let rec = reconstruct(&d).map_err(|e| anyhow!("{e}"))?;
    let mut text = String::new();
    let mut pieces = Vec::new();
    for piece in d.nonzero() {
        let ring = d.ring_label(piece);
        let groups: Vec<String> = piece.module.components().iter().map(|g| g.to_string()).collect();
        let _ = writeln!(text, "A_{} over {ring}: {}", piece.label(), groups.join(", "));
        pieces.push(json!({
            "index": piece.label(),
            "ring": ring,
            "components": piece.module.components().iter().map(group_json).collect::<Vec<_>>(),
        }));
    }
    let _ = writeln!(
        text,
        "{} nonzero pieces, isomorphism to the original verified",
        pieces.len()
    );
    Ok(Report {
        ok: true,
        text,
        json: json!({ "command": "decompose", "ok": true, "primes": primes, "pieces": pieces, "order": rec.labels }),
    })
}

pub fn hom_report(a: &KGModule, b: &KGModule) -> Result<Report> {
    let g = hom(a, b).map_err(|e| anyhow!("{e}"))?;
    Ok(Report {
        ok: true,
        text: format!("Hom = {g}\n  even: {}\n  odd: {}\n", g.even(), g.odd()),
        json: json!({ "command": "hom", "ok": true, "group": group_json(&g) }),
    })
}

pub fn ext1_report(a: &KGModule, b: &KGModule) -> Result<Report> {
    let g = ext1(a, b).map_err(|e| anyhow!("{e}"))?;
    Ok(Report {
        ok: true,
        text: format!("Ext^1 = {g}\n  even: {}\n  odd: {}\n", g.even(), g.odd()),
        json: json!({ "command": "ext1", "ok": true, "group": group_json(&g) }),
    })
}

pub fn hensel(p: u64, q: u64, k: u32) -> Result<Report> {
    let u = hensel_root(p, q, k).map_err(|e| anyhow!("{e}"))?;
    Ok(Report {
        ok: true,
        text: format!("{u}\n"),
        json: json!({ "command": "hensel", "ok": true, "p": p, "q": q, "k": k, "root": u.to_string() }),
    })
}
