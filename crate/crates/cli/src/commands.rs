use std::path::Path;

use serde_json::json;

use recon_core::audit::verify_propositions;
use recon_core::channels::CoverageOptions;
use recon_core::constructions::{best_residue_with, Code, Construction, Family};
use recon_core::tables::{bounds_table, redundancy_table, BoundsOptions, BoundsRow, RedundancyRow};
use recon_core::verifier::{certify_with, exact_max_code_with, greedy_code_with, DecodeError, Decoder};
use recon_core::{type_a_confusable, type_b_confusable, Exec, Word};

use crate::{
    BoundsArgs, CliError, Command, ConstructArgs, DecodeArgs, FamilyArg, Format, MaxcodeArgs,
    Outcome, PropsArgs, Residue, Table, VerifyArgs,
};

pub fn dispatch(command: &Command, budget: u128) -> Result<Outcome, CliError> {
    match command {
        Command::Construct(a) => construct(a, budget),
        Command::Verify(a) => verify(a),
        Command::Decode(a) => decode(a),
        Command::Maxcode(a) => maxcode(a, budget),
        Command::Bounds(a) => bounds(a, budget),
        Command::Props(a) => props(a, budget),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_code(path: &Path) -> Result<Code, CliError> {
    Code::parse(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn require<T>(v: Option<T>, flag: &str, family: FamilyArg) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for family {family:?}")))
}

fn construct(a: &ConstructArgs, budget: u128) -> Result<Outcome, CliError> {
    let exec = Exec::default();
    let residue_family = match a.family {
        FamilyArg::Bvt => Some((Family::Bvt, "a")),
        FamilyArg::Blt => Some((Family::Blt, "a")),
        FamilyArg::Parity => Some((Family::Parity, "a")),
        FamilyArg::C2 => Some((Family::C2, "t")),
        FamilyArg::D2 => Some((Family::D2, "t")),
        FamilyArg::E2 => Some((Family::E2, "t")),
        FamilyArg::Balanced | FamilyArg::R2b => None,
    };
    let code = match residue_family {
        Some((family, flag)) => {
            let residue = require(if flag == "a" { a.a } else { a.t }, flag, a.family)?;
            let p = a.p.unwrap_or_else(|| family.default_period_bound(a.n));
            match residue {
                Residue::Best => best_residue_with(family, a.n, Some(p), budget, exec)?.1,
                Residue::Value(r) => family.construction(a.n, r, p).build_with(budget, exec)?,
            }
        }
        None if a.family == FamilyArg::Balanced => {
            Construction::Balanced { n: a.n }.build_with(budget, exec)?
        }
        None => Construction::R2b {
            n: a.n,
            l: require(a.l, "l", a.family)?,
            m: require(a.m, "m", a.family)?,
        }
        .build_with(budget, exec)?,
    };
    Ok(Outcome {
        text: code.to_text(),
        success: true,
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    let opts = CoverageOptions {
        exec: Exec::default(),
        filter: !a.no_filter,
    };
    let cert = certify_with(&code, a.channel, a.reads, opts)?;
    let mut witnesses = Vec::new();
    if let Some((x, y)) = cert.report.witness {
        witnesses.extend(type_a_confusable(&x, &y)?);
        witnesses.extend(type_b_confusable(&x, &y)?);
    }
    let out = json!({
        "certified": cert.certified,
        "N": cert.reads,
        "report": cert.report,
        "confusability": witnesses,
    });
    Ok(Outcome {
        text: pretty(&out),
        success: cert.certified,
    })
}

fn parse_reads(text: &str) -> Result<Vec<Word>, CliError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<Word>()
                .map_err(|e| CliError::Usage(format!("reads line {i}: {e}")))
        })
        .collect()
}

fn decode(a: &DecodeArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    let reads = parse_reads(&read_file(&a.reads)?)?;
    let needed = a.reads_needed.unwrap_or(reads.len());
    let decoder = Decoder::new(&code, a.channel);
    let (out, success) = match decoder.decode(&reads, needed) {
        Ok(x) => (json!({"decoded": x, "candidates": [x]}), true),
        Err(DecodeError::Ambiguous {
            candidates,
            enough_reads,
        }) => (
            json!({
                "decoded": null,
                "error": "ambiguous",
                "candidates": candidates,
                "enough_reads": enough_reads,
            }),
            false,
        ),
        Err(DecodeError::Inconsistent) => (
            json!({"decoded": null, "error": "inconsistent", "candidates": []}),
            false,
        ),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    Ok(Outcome {
        text: pretty(&out),
        success,
    })
}

fn maxcode(a: &MaxcodeArgs, budget: u128) -> Result<Outcome, CliError> {
    let exec = Exec::default();
    let (code, exact, vertices, edges) = if a.greedy {
        let code = greedy_code_with(a.n, a.channel, a.reads, budget, exec)?;
        (code, false, None, None)
    } else {
        let r = exact_max_code_with(a.n, a.channel, a.reads, None, a.max_vertices, budget, exec)?;
        (r.code, true, Some(r.vertices), Some(r.conflict_edges))
    };
    if let Some(path) = &a.code_out {
        std::fs::write(path, code.to_text())?;
    }
    let out = json!({
        "n": a.n,
        "channel": a.channel,
        "N": a.reads,
        "method": if exact { "exact" } else { "greedy" },
        "size": code.len(),
        "exact": exact,
        "vertices": vertices,
        "conflict_edges": edges,
        "code": code.words(),
    });
    Ok(Outcome {
        text: pretty(&out),
        success: true,
    })
}

fn csv_text<'a>(header: &[&str], records: impl Iterator<Item = Vec<String>> + 'a) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in records {
        w.write_record(&r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

fn bounds(a: &BoundsArgs, budget: u128) -> Result<Outcome, CliError> {
    let exec = Exec::default();
    match a.table {
        Table::Bounds => {
            let opts = BoundsOptions {
                target: Some((a.channel, a.reads)),
                exact_vertex_limit: a.exact_limit,
                budget,
                exec,
            };
            let rows = bounds_table(&a.n.0, &opts)?;
            let text = match a.format {
                Format::Csv => csv_text(&BoundsRow::CSV_HEADER, rows.iter().map(BoundsRow::csv_record))?,
                Format::Json => pretty(&rows),
            };
            Ok(Outcome {
                text,
                success: true,
            })
        }
        Table::Redundancy => {
            let rows = redundancy_table(a.channel, &a.n.0, a.reads, budget, exec)?;
            let text = match a.format {
                Format::Csv => csv_text(
                    &RedundancyRow::CSV_HEADER,
                    rows.iter().map(RedundancyRow::csv_record),
                )?,
                Format::Json => pretty(&rows),
            };
            Ok(Outcome {
                text,
                success: rows.iter().all(|r| r.certified),
            })
        }
    }
}

fn props(a: &PropsArgs, budget: u128) -> Result<Outcome, CliError> {
    let report = verify_propositions(a.n, budget, Exec::default())?;
    let text = match a.format {
        Format::Json => {
            let clauses: Vec<_> = report
                .clauses
                .iter()
                .map(|c| {
                    json!({
                        "clause": c.clause,
                        "description": c.description,
                        "checked": c.checked,
                        "violations": c.violations,
                        "first_violation": c.first_violation,
                        "passed": c.passed(),
                    })
                })
                .collect();
            pretty(&json!({
                "n": report.n,
                "pairs": report.pairs,
                "passed": report.passed(),
                "residual_deletion_one": report.residual_deletion_one,
                "loose_type_b_conflicts": report.loose_type_b_conflicts,
                "clauses": clauses,
            }))
        }
        Format::Csv => csv_text(
            &["clause", "description", "checked", "violations", "status"],
            report.clauses.iter().map(|c| {
                vec![
                    serde_json::to_value(c.clause)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                    c.description.to_string(),
                    c.checked.to_string(),
                    c.violations.to_string(),
                    if c.passed() { "pass" } else { "fail" }.to_string(),
                ]
            }),
        )?,
    };
    Ok(Outcome {
        text,
        success: report.passed(),
    })
}
