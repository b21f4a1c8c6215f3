//! The batch commands behind the command-line tool: each returns a deterministic JSON
//! report, a human summary and an exit code.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::audit::Check;
use crate::beckmod::AbGroup;
use crate::cohomology::complex::chain_guard;
use crate::cohomology::{
    column_cohomology, h0_oracle, les, normalization_audit, replacement_iso, Column, Fault, TowerData,
};
use crate::comonad::{comonad_law_audit, freeness_audit, simplicial_identity_audit, AuditReport, Tower};
use crate::error::{Error, Result};
use crate::fincat::{free_category, freeness_audit as category_freeness, FinGroupoid};
use crate::io::{self, Claim, Document};
use crate::multifold::{all_corners, is_homotopically_discrete, is_weakly_globular, nerve_of, segal_check, NFoldCat};
use crate::trackcat::TrackCatN;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Alg,
    Aq,
}

impl Kind {
    fn column(self) -> Column {
        match self {
            Kind::Alg => Column::Alg,
            Kind::Aq => Column::Aq,
        }
    }
}

/// `const:Z/k`, `const:Z`, or a path to a `module` document.
pub fn parse_coeffs(arg: &str) -> Result<AbGroup> {
    if let Some(rest) = arg.strip_prefix("const:") {
        return match rest {
            "Z" => Ok(AbGroup::integers()),
            "0" => Ok(AbGroup::trivial()),
            _ => {
                let k = rest
                    .strip_prefix("Z/")
                    .and_then(|k| k.parse::<u64>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient arg `{arg}`")))?;
                Ok(AbGroup::cyclic(k))
            }
        };
    }
    match io::read(Path::new(arg))? {
        Document::Module(m) => Ok(m.group()),
        _ => Err(Error::Parse(format!("{arg} is not a module document"))),
    }
}

fn load_track(path: &Path) -> Result<TrackCatN> {
    match io::read(path)? {
        Document::Track(t) => t.to_track(),
        _ => Err(Error::Parse(format!("{} is not a track document", path.display()))),
    }
}

fn audit_check(name: &str, r: &AuditReport) -> Check {
    if r.ok() {
        Check { name: format!("{name} ({} checked)", r.checked), ok: true, witness: None }
    } else {
        Check::fail(
            name,
            format!("{} of {} failed; first: {}", r.failures, r.checked, r.witness.clone().unwrap_or_default()),
        )
    }
}

fn finish(command: &str, params: Value, results: Value, checks: Vec<Check>, truncation: Value) -> Outcome {
    let ok = checks.iter().all(|c| c.ok);
    let report = json!({
        "command": command,
        "params": params,
        "results": results,
        "audit": checks,
        "truncation": truncation,
        "status": if ok { "ok" } else { "validation failure" },
    });
    let mut summary = format!("{command}: {}\n", if ok { "ok" } else { "FAILED" });
    for c in &checks {
        summary.push_str(&format!("  [{}] {}", if c.ok { "pass" } else { "FAIL" }, c.name));
        if let Some(w) = &c.witness {
            summary.push_str(&format!(": {w}"));
        }
        summary.push('\n');
    }
    Outcome { report, summary, exit_code: if ok { 0 } else { 1 } }
}

/// Report for a command that stopped with an error.
pub fn failure(command: &str, params: Value, e: &Error) -> Outcome {
    let kind = match e {
        Error::Validation(_) | Error::Precondition(_) => "validation failure",
        Error::Parse(_) => "parse error",
        Error::Truncation { .. } => "truncation overflow",
        Error::DegreeGuard { .. } => "degree guard",
    };
    let mut report = json!({ "command": command, "params": params, "status": kind, "error": e.to_string() });
    if let Error::Truncation { bound, path } = e {
        report["truncation"] = json!({ "bound": bound, "overflow": path });
    }
    Outcome { report, summary: format!("{command}: {kind}: {e}\n"), exit_code: e.exit_code() }
}

fn wrap(command: &str, params: Value, f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| failure(command, params, &e))
}

fn nfold_checks(x: &NFoldCat, claims: &[Claim]) -> (Vec<Check>, Value) {
    let mut checks = Vec::new();
    let mut cert = Value::Null;
    let mut claims = claims.to_vec();
    claims.sort();
    claims.dedup();
    for claim in claims {
        checks.push(match claim {
            Claim::WeaklyGlobular => {
                let ev = is_weakly_globular(x);
                match ev.witness {
                    None => Check::pass("weakly globular"),
                    Some(w) => Check::fail("weakly globular", w.to_string()),
                }
            }
            Claim::HomotopicallyDiscrete => match is_homotopically_discrete(x) {
                Ok(c) => {
                    cert = json!({
                        "schema": "cert",
                        "version": io::VERSION,
                        "truncation_sizes": c.truncations.iter().map(|t| all_corners(t.dim()).map(|k| t.size(&k)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "quotients": c.quotients,
                    });
                    Check::pass("homotopically discrete")
                }
                Err(w) => Check::fail("homotopically discrete", w.to_string()),
            },
            Claim::Groupoid => match x.is_nfold_groupoid() {
                Ok(()) => Check::pass("n-fold groupoid"),
                Err(w) => Check::fail("n-fold groupoid", w.to_string()),
            },
            Claim::Segal => match segal_check(x) {
                Ok(true) => Check::pass("induced Segal maps are equivalences"),
                Ok(false) => Check::fail("induced Segal maps are equivalences", "some Segal map is not an equivalence".into()),
                Err(e) => Check::fail("induced Segal maps are equivalences", e.to_string()),
            },
        });
    }
    (checks, cert)
}

fn sizes(x: &NFoldCat) -> Value {
    json!(all_corners(x.dim()).map(|k| x.size(&k)).collect::<Vec<_>>())
}

pub fn validate(path: &Path) -> Outcome {
    let params = json!({ "input": path.display().to_string() });
    wrap("validate", params.clone(), || {
        let doc = io::read(path)?;
        let no_truncation = json!({ "truncated": false });
        Ok(match doc {
            Document::Graph(g) => {
                let graph = g.to_graph()?;
                let free = free_category(&graph, g.bound)?;
                let checks = vec![
                    Check::pass("graph well-formed"),
                    Check::from_result("unique generator decomposition", free.unique_decomposition_audit()),
                ];
                let results = json!({ "schema": "graph", "objects": graph.objects.len(), "edges": graph.edges.len(), "morphisms": free.len() });
                finish("validate", params, results, checks, json!({ "bound": g.bound, "truncated": free.truncated }))
            }
            Document::Category(c) => {
                let cat = c.to_fincat()?;
                let free = category_freeness(&cat).is_ok();
                let results = json!({ "schema": "category", "objects": cat.objects.len(), "morphisms": cat.morphisms.len(), "free": free });
                finish("validate", params, results, vec![Check::pass("category axioms")], no_truncation)
            }
            Document::Groupoid(c) => {
                let cat = c.to_fincat()?;
                let mut checks = vec![Check::pass("category axioms")];
                checks.push(Check::from_result(
                    "every morphism invertible",
                    FinGroupoid::from_cat(cat.clone()).map(|_| ()),
                ));
                let nerve = nerve_of(&cat);
                let (more, _) = nfold_checks(&nerve, &[Claim::WeaklyGlobular]);
                checks.extend(more);
                let hd = is_homotopically_discrete(&nerve).is_ok();
                let results = json!({ "schema": "groupoid", "objects": cat.objects.len(), "morphisms": cat.morphisms.len(), "homotopically_discrete": hd });
                finish("validate", params, results, checks, no_truncation)
            }
            Document::Nfold(f) => {
                let x = f.nfold.to_nfold()?;
                let mut checks = vec![Check::pass("n-fold category axioms")];
                let (more, cert) = nfold_checks(&x, &f.claims);
                checks.extend(more);
                let results = json!({ "schema": "nfold", "dim": x.dim(), "sizes": sizes(&x), "cert": cert });
                finish("validate", params, results, checks, no_truncation)
            }
            Document::Track(t) => {
                let x = t.to_track()?;
                let mut checks = vec![Check::pass("hom-objects are weakly globular n-fold groupoids")];
                checks.push(match segal_check(x.nfold()) {
                    Ok(true) => Check::pass("induced Segal maps are equivalences"),
                    Ok(false) => Check::fail(
                        "induced Segal maps are equivalences",
                        "some Segal map is not an equivalence".into(),
                    ),
                    Err(e) => Check::fail("induced Segal maps are equivalences", e.to_string()),
                });
                let results =
                    json!({ "schema": "track", "n": x.dim(), "objects": x.objects(), "sizes": sizes(x.nfold()) });
                finish("validate", params, results, checks, no_truncation)
            }
            Document::Module(m) => {
                let g = m.group();
                let results = json!({ "schema": "module", "group": g.to_string() });
                finish("validate", params, results, vec![Check::pass("canonical invariant factors")], no_truncation)
            }
        })
    })
}

#[derive(Serialize)]
struct TowerCell {
    word: Vec<(u32, u16)>,
    faces: Vec<Vec<(u32, u16)>>,
    degeneracies: Vec<u32>,
    degenerate: bool,
}

/// Largest tower `resolve` will audit and serialize.
pub const MAX_RESOLVE_CELLS: usize = 200_000;

pub fn resolve(path: &Path, depth: usize, bound: usize) -> Outcome {
    let params = json!({ "input": path.display().to_string(), "depth": depth, "bound": bound });
    wrap("resolve", params.clone(), || {
        let x = load_track(path)?;
        chain_guard(&x, bound)?;
        let mut t = Tower::new(&x, bound)?;
        for j in 1..=depth {
            t.enumerate(j)?;
            let cells: usize = (0..=j).map(|i| t.level_size(i)).sum();
            if cells > MAX_RESOLVE_CELLS {
                return Err(Error::Precondition(format!(
                    "tower has {cells} cells up to level {j}, over the limit of {MAX_RESOLVE_CELLS}; lower --bound or --depth"
                )));
            }
        }
        let mut checks = vec![audit_check("comonad laws", &comonad_law_audit(&mut t)?)];
        let corners: Vec<Vec<u8>> = all_corners(x.dim()).collect();
        checks.push(audit_check("simplicial identities", &simplicial_identity_audit(&mut t, depth, &corners)?));
        for j in 1..=depth {
            checks.push(audit_check(&format!("level {j} is free"), &freeness_audit(&mut t, j)?));
        }
        let data = TowerData::from_tower(&mut t, depth)?;
        for col in Column::ALL {
            checks.push(data.simplicial_identities(col));
        }
        let top_labels = {
            let mut k = vec![1u8];
            k.extend(t.top());
            x.nfold().labels(&k).to_vec()
        };
        let levels: Vec<Value> = (0..=depth)
            .map(|s| {
                let cells: Vec<TowerCell> = (0..data.sizes[s])
                    .map(|m| TowerCell {
                        word: if s == 0 { vec![] } else { t.word(s, m as u32).letters.clone() },
                        faces: if s == 0 {
                            vec![]
                        } else {
                            (0..=s).map(|i| data.face_letters(s, m, i).to_vec()).collect()
                        },
                        degeneracies: if s < depth {
                            (0..=s).map(|i| data.degen_index(s, m, i)).collect()
                        } else {
                            vec![]
                        },
                        degenerate: data.is_degenerate(Column::Alg, s, m),
                    })
                    .collect();
                json!({ "level": s, "size": data.sizes[s], "cells": cells })
            })
            .collect();
        let tower = json!({
            "schema": "tower",
            "version": io::VERSION,
            "n": x.dim(),
            "bound": bound,
            "depth": depth,
            "base_cells": top_labels,
            "levels": levels,
        });
        let results = json!({ "sizes": data.sizes, "tower": tower });
        Ok(finish("resolve", params, results, checks, json!({ "bound": bound, "truncated": false })))
    })
}

pub fn cohomology(path: &Path, coeffs: &str, kind: Kind, degree: usize, depth: usize, bound: usize) -> Outcome {
    let params = json!({
        "input": path.display().to_string(), "coeffs": coeffs, "kind": format!("{kind:?}").to_lowercase(),
        "degree": degree, "depth": depth, "bound": bound,
    });
    wrap("cohomology", params.clone(), || {
        let x = load_track(path)?;
        let a = parse_coeffs(coeffs)?;
        if degree >= depth {
            return Err(Error::DegreeGuard { degree, depth, needed: degree + 1 });
        }
        let data = TowerData::new(&x, bound, depth)?;
        let col = kind.column();
        let (groups, mut checks) = column_cohomology(&data, col, &a, degree)?;
        for c in [Column::Alg, Column::Aq] {
            checks.push(data.simplicial_identities(c));
        }
        checks.push(normalization_audit(&data, col, &a)?);
        let oracle = h0_oracle(&x, col, bound, &a)?;
        checks.push(if oracle == groups[0] {
            Check::pass("degree 0 equals the equalizer oracle")
        } else {
            Check::fail("degree 0 equals the equalizer oracle", format!("{} vs oracle {oracle}", groups[0]))
        });
        let mut results = json!({
            "coefficients": a.to_string(),
            "groups": groups.iter().enumerate().map(|(s, g)| json!({ "degree": s, "group": g.to_string(), "presentation": g })).collect::<Vec<_>>(),
            "trusted_through": degree,
            "assumption": "degrees >= 2 rest on the normalization theorem; degrees 0 and 1 are cross-checked",
        });
        if degree >= 2 && depth >= degree + 2 {
            let c = replacement_iso(&x, &a, degree, bound)?;
            results["replacement"] = json!({ "degree": degree, "aq_shifted": c.aq.to_string(), "alg_of_sx": c.alg.to_string(), "equal": c.aq == c.alg });
            checks.extend(c.checks);
        } else if degree >= 2 {
            results["replacement"] = json!({ "skipped": format!("needs depth >= {}", degree + 2) });
        }
        Ok(finish("cohomology", params, results, checks, json!({ "bound": bound, "truncated": false })))
    })
}

pub fn les_report(path: &Path, coeffs: &str, depth: usize, bound: usize, fault: Fault) -> Outcome {
    let params = json!({
        "input": path.display().to_string(), "coeffs": coeffs, "depth": depth, "bound": bound,
        "fault": format!("{fault:?}").to_lowercase(),
    });
    wrap("les", params.clone(), || {
        let x = load_track(path)?;
        let a = parse_coeffs(coeffs)?;
        if depth == 0 {
            return Err(Error::DegreeGuard { degree: 0, depth, needed: 1 });
        }
        let data = TowerData::new(&x, bound, depth)?;
        let r = les(&data, &a, depth - 1, fault)?;
        let mut checks = r.checks.clone();
        for slot in &r.slots {
            let name = format!("exact at H^{}({})", slot.degree, slot.column);
            checks.push(if slot.exact {
                Check::pass(&name)
            } else {
                Check::fail(&name, format!("image differs from kernel at {}", slot.group))
            });
        }
        let results = json!({
            "coefficients": a.to_string(),
            "exact": r.exact(),
            "groups": r.groups.iter().enumerate().map(|(s, g)| json!({
                "degree": s, "aq": g[0].to_string(), "aq0": g[1].to_string(), "alg": g[2].to_string(),
            })).collect::<Vec<_>>(),
            "connecting_iso": r.connecting_iso,
        });
        Ok(finish("les", params, results, checks, json!({ "bound": bound, "truncated": false })))
    })
}

/// The report as pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_specs() {
        assert_eq!(parse_coeffs("const:Z").unwrap(), AbGroup::integers());
        assert_eq!(parse_coeffs("const:Z/6").unwrap(), AbGroup::cyclic(6));
        assert_eq!(parse_coeffs("const:Z/0").unwrap_err().exit_code(), 2);
        assert_eq!(parse_coeffs("const:Q").unwrap_err().exit_code(), 2);
        assert_eq!(parse_coeffs("/nonexistent/module.json").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn failure_reports_carry_the_overflow_path() {
        let o = failure("resolve", json!({}), &Error::Truncation { bound: 1, path: "g∘f".into() });
        assert_eq!(o.exit_code, 3);
        assert_eq!(o.report["truncation"]["overflow"], "g∘f");
    }
}
