//! One function per subcommand; each returns the rendered standard output.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context};
use serde_json::json;
use sl2coh::cache_file;
use sl2coh::enumerate::{par_scan_cohomological, CheckReport};
use sl2coh::families::symbolic_branches;
use sl2coh::{
    cross_check_wq, expand, ext_dim, gamma_lower_bound, scan_cohomological, verify_theorem_a,
    wq_families, DimCache, Prime, ScanResult, Weight,
};

use crate::render::{csv, joined, json, table};
use crate::session::{self, Session};
use crate::{CacheAction, Cli, Command, Failure, Format, Outcome};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.global.format;
    let mut session = Session::open(&cli.global)?;
    let outcome = match &cli.command {
        Command::Ext { p, q, r, lambda } => ext(format, *p, *q, r, lambda, &mut session.cache),
        Command::Scan {
            p,
            q,
            bound,
            untwisted_only,
            parallel,
        } => {
            let mut result = if *parallel {
                par_scan_cohomological(*q, *p, bound, &mut session.cache)
            } else {
                scan_cohomological(*q, *p, bound, &mut session.cache)
            };
            if *untwisted_only {
                result.rows.retain(|row| row.untwisted);
            }
            scan(format, &result)
        }
        Command::Wq { q, p, bound } => wq(format, *q, p.zip(bound.clone())),
        Command::Verify { p, bound } => verify(format, *p, bound, &mut session.cache),
        Command::Gamma { p, q, bound } => gamma(format, *p, *q, bound, &mut session.cache),
        Command::Cache { action } => cache(format, action, &mut session),
    }?;
    session.close()?;
    Ok(outcome)
}

fn done(output: String) -> Result<Outcome, Failure> {
    Ok(Outcome {
        output,
        passed: true,
    })
}

fn ext(
    format: Format,
    p: Prime,
    q: u32,
    r: &Weight,
    lambda: &Weight,
    cache: &mut DimCache,
) -> Result<Outcome, Failure> {
    let dim = ext_dim(q, r, lambda, p, cache);
    done(match format {
        Format::Text => format!("{dim}\n"),
        Format::Json => json(&json!({ "p": p, "q": q, "r": r, "lambda": lambda, "dim": dim }))?,
        Format::Csv => csv(
            &["p", "q", "r", "lambda", "dim"],
            &[vec![
                p.to_string(),
                q.to_string(),
                r.to_string(),
                lambda.to_string(),
                dim.to_string(),
            ]],
        )?,
    })
}

fn scan(format: Format, result: &ScanResult) -> Result<Outcome, Failure> {
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|row| {
            vec![
                row.lambda.to_string(),
                row.dim.to_string(),
                row.untwisted.to_string(),
            ]
        })
        .collect();
    done(match format {
        Format::Text => {
            let title = format!(
                "p = {}, q = {}, bound = {}",
                result.p, result.q, result.bound
            );
            table(Some(&title), &["lambda", "dim", "untwisted"], &rows)
        }
        Format::Json => json(result)?,
        Format::Csv => {
            let prefix = [
                result.p.to_string(),
                result.q.to_string(),
                result.bound.to_string(),
            ];
            let rows: Vec<Vec<String>> = rows
                .into_iter()
                .map(|row| prefix.iter().cloned().chain(row).collect())
                .collect();
            csv(&["p", "q", "bound", "lambda", "dim", "untwisted"], &rows)?
        }
    })
}

fn wq(format: Format, q: u32, concrete: Option<(Prime, Weight)>) -> Result<Outcome, Failure> {
    let families = wq_families(q);
    let expansion = match &concrete {
        Some((p, bound)) => {
            if q > 0 && p.value() <= u64::from(q) {
                return Err(Failure::Usage(anyhow!(
                    "the W_q families need p > q, got p = {p}, q = {q}"
                )));
            }
            Some(expand(&families, *p, bound).map_err(|err| Failure::Usage(err.into()))?)
        }
        None => None,
    };
    let symbolic: Vec<_> = families
        .iter()
        .map(|family| (family, symbolic_branches(family)))
        .collect();

    done(match format {
        Format::Text => {
            let mut out = format!("W_{q}: {} families\n", families.len());
            for (family, branches) in &symbolic {
                out.push_str(&format!("{family}\n"));
                for branch in branches {
                    out.push_str(&format!("    {branch}\n"));
                }
            }
            if let (Some((p, bound)), Some(expansion)) = (&concrete, &expansion) {
                let title = format!(
                    "p = {p}, q = {q}, bound = {bound}: {} weights",
                    expansion.concrete.len()
                );
                let rows: Vec<Vec<String>> = expansion
                    .concrete
                    .iter()
                    .map(|w| vec![w.to_string()])
                    .collect();
                out.push_str(&table(Some(&title), &["lambda"], &rows));
            }
            out
        }
        Format::Json => {
            let families: Vec<_> = symbolic
                .iter()
                .map(|(family, branches)| json!({ "family": family, "branches": branches }))
                .collect();
            let mut value = json!({ "q": q, "families": families });
            if let (Some((p, _)), Some(expansion)) = (&concrete, &expansion) {
                value["p"] = json!(p);
                value["expansion"] = serde_json::to_value(expansion)
                    .context("encoding JSON")
                    .map_err(Failure::Io)?;
            }
            json(&value)?
        }
        Format::Csv => match (&concrete, &expansion) {
            (Some((p, bound)), Some(expansion)) => {
                let rows: Vec<Vec<String>> = expansion
                    .concrete
                    .iter()
                    .map(|w| {
                        vec![
                            p.to_string(),
                            q.to_string(),
                            bound.to_string(),
                            w.to_string(),
                        ]
                    })
                    .collect();
                csv(&["p", "q", "bound", "lambda"], &rows)?
            }
            _ => {
                let rows: Vec<Vec<String>> = symbolic
                    .iter()
                    .flat_map(|(family, branches)| {
                        branches.iter().map(move |b| {
                            vec![
                                q.to_string(),
                                family.to_string(),
                                b.conditions().join(", "),
                                b.weight.to_string(),
                            ]
                        })
                    })
                    .collect();
                csv(&["q", "family", "conditions", "weight"], &rows)?
            }
        },
    })
}

fn verify(
    format: Format,
    p: Prime,
    bound: &Weight,
    cache: &mut DimCache,
) -> Result<Outcome, Failure> {
    let mut reports = verify_theorem_a(p, bound, cache);
    if p.value() > 3 {
        for q in 1..=3 {
            reports.push(
                cross_check_wq(q, p, bound, cache).map_err(|err| Failure::Usage(err.into()))?,
            );
        }
    }
    let passed = reports.iter().all(CheckReport::passed);
    let status = if passed { "pass" } else { "fail" };
    let output = match format {
        Format::Text => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.q.to_string(),
                        if r.passed() { "pass" } else { "fail" }.to_string(),
                        r.expected.len().to_string(),
                        r.actual.len().to_string(),
                        r.missing().len().to_string(),
                        r.unexpected().len().to_string(),
                        r.dim_mismatches.len().to_string(),
                    ]
                })
                .collect();
            let title = format!("p = {p}, q = 1..3, bound = {bound}: {status}");
            let header = [
                "check",
                "q",
                "status",
                "expected",
                "actual",
                "missing",
                "unexpected",
                "dim_mismatches",
            ];
            let mut out = table(Some(&title), &header, &rows);
            for r in reports.iter().filter(|r| !r.passed()) {
                if !r.missing().is_empty() {
                    out.push_str(&format!(
                        "{} missing: {}\n",
                        r.name,
                        joined(r.missing(), " ")
                    ));
                }
                if !r.unexpected().is_empty() {
                    out.push_str(&format!(
                        "{} unexpected: {}\n",
                        r.name,
                        joined(r.unexpected(), " ")
                    ));
                }
                for m in &r.dim_mismatches {
                    out.push_str(&format!(
                        "{} dim at {}: expected {}, found {}\n",
                        r.name, m.lambda, m.expected_dim, m.actual_dim
                    ));
                }
            }
            out
        }
        Format::Json => {
            json(&json!({ "p": p, "bound": bound, "status": status, "reports": reports }))?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.p.to_string(),
                        r.q.to_string(),
                        r.bound.to_string(),
                        if r.passed() { "pass" } else { "fail" }.to_string(),
                        joined(&r.expected, " "),
                        joined(&r.actual, " "),
                        r.dim_mismatches.len().to_string(),
                    ]
                })
                .collect();
            let header = [
                "name",
                "p",
                "q",
                "bound",
                "status",
                "expected",
                "actual",
                "dim_mismatches",
            ];
            csv(&header, &rows)?
        }
    };
    Ok(Outcome { output, passed })
}

fn gamma(
    format: Format,
    p: Prime,
    q: u32,
    bound: &Weight,
    cache: &mut DimCache,
) -> Result<Outcome, Failure> {
    let g = gamma_lower_bound(q, p, bound, cache);
    done(match format {
        Format::Text => {
            let title = format!("p = {p}, q = {q}, bound = {bound}");
            table(
                Some(&title),
                &["max_dim", "argmax"],
                &[vec![g.max_dim.to_string(), joined(&g.argmax, " ")]],
            )
        }
        Format::Json => json(&g)?,
        Format::Csv => csv(
            &["p", "q", "bound", "max_dim", "argmax"],
            &[vec![
                p.to_string(),
                q.to_string(),
                bound.to_string(),
                g.max_dim.to_string(),
                joined(&g.argmax, " "),
            ]],
        )?,
    })
}

fn cache(format: Format, action: &CacheAction, session: &mut Session) -> Result<Outcome, Failure> {
    match action {
        CacheAction::Info => {
            let path = session.require_path()?.display().to_string();
            let mut counts: BTreeMap<(u64, u32), usize> = BTreeMap::new();
            for (key, _) in session.cache.iter() {
                *counts.entry((key.p.value(), key.q)).or_default() += 1;
            }
            let rows: Vec<Vec<String>> = counts
                .iter()
                .map(|((p, q), n)| vec![p.to_string(), q.to_string(), n.to_string()])
                .collect();
            done(match format {
                Format::Text => {
                    let title = format!("{path}: {} entries", session.cache.len());
                    table(Some(&title), &["p", "q", "entries"], &rows)
                }
                Format::Json => {
                    let by_degree: Vec<_> = counts
                        .iter()
                        .map(|((p, q), n)| json!({ "p": p, "q": q, "entries": n }))
                        .collect();
                    json(
                        &json!({ "path": path, "entries": session.cache.len(), "by_degree": by_degree }),
                    )?
                }
                Format::Csv => csv(&["p", "q", "entries"], &rows)?,
            })
        }
        CacheAction::Export { output } => match output {
            Some(path) => {
                let n = cache_file::save_to_path(&session.cache, path)
                    .with_context(|| format!("exporting to {}", path.display()))
                    .map_err(Failure::Io)?;
                eprintln!("exported {n} entries to {}", path.display());
                done(String::new())
            }
            None => {
                let mut bytes = Vec::new();
                cache_file::save(&session.cache, &mut bytes)
                    .context("exporting cache")
                    .map_err(Failure::Io)?;
                done(
                    String::from_utf8(bytes)
                        .context("exporting cache")
                        .map_err(Failure::Io)?,
                )
            }
        },
        CacheAction::Import { input } => {
            session.require_path()?;
            let imported = session::read(input)?;
            if let Some((key, theirs)) = imported
                .iter()
                .find(|(key, dim)| session.cache.get(key).is_some_and(|ours| ours != *dim))
            {
                let ours = session.cache.get(key).unwrap_or_default();
                return Err(Failure::Io(anyhow!(
                    "{} disagrees at {key}: {theirs} vs {ours}",
                    input.display()
                )));
            }
            let n = imported.len();
            session.cache.merge(imported);
            eprintln!("imported {n} entries from {}", input.display());
            done(String::new())
        }
    }
}
