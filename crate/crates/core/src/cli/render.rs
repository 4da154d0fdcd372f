use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::analysis::CheckRecord;
use crate::error::Result;
use crate::gim::{self, GimTable};
use crate::tree::RootedTree;

use super::config::OutputFormat;

/// Indented ASCII drawing of `t`, each node labelled with the Matula number
/// of its subtree.
pub fn ascii_tree(t: &RootedTree, numbers: &[BigUint]) -> String {
    let arena = t.arena();
    let mut out = String::new();
    // (node, prefix for its children, connector for itself)
    let mut stack: Vec<(usize, String, String)> = vec![(0, String::new(), String::new())];
    while let Some((node, prefix, connector)) = stack.pop() {
        let _ = writeln!(out, "{connector}o {}", numbers[node]);
        let kids = &arena[node];
        for (i, &child) in kids.iter().enumerate().rev() {
            let last = i + 1 == kids.len();
            let (branch, extend) = if last {
                ("`-- ", "    ")
            } else {
                ("|-- ", "|   ")
            };
            stack.push((
                child,
                format!("{prefix}{extend}"),
                format!("{prefix}{branch}"),
            ));
        }
    }
    out
}

fn float_cell(v: f64) -> String {
    format!("{v:?}")
}

pub struct TableRow {
    pub n: u64,
    pub g: u64,
    pub big_g: u64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub floor: f64,
}

pub fn table_rows(table: &GimTable) -> Vec<TableRow> {
    let mut big_g = 0;
    (1..=table.limit())
        .map(|n| {
            let g = table.get(n).expect("within table");
            big_g += g;
            TableRow {
                n,
                g,
                big_g,
                lower: gim::lower_bound(n).ok(),
                upper: gim::upper_bound(n).ok(),
                floor: gim::shannon_floor(n),
            }
        })
        .collect()
}

pub fn render_table(rows: &[TableRow], format: OutputFormat) -> Result<String> {
    let mut out = String::new();
    match format {
        OutputFormat::Plain | OutputFormat::Csv => {
            out.push_str("n,g,G,lower,upper,floor\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n,
                    r.g,
                    r.big_g,
                    r.lower.map(float_cell).unwrap_or_default(),
                    r.upper.map(float_cell).unwrap_or_default(),
                    float_cell(r.floor)
                );
            }
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n, "g": r.g, "G": r.big_g,
                        "lower": r.lower, "upper": r.upper, "floor": r.floor,
                    })
                })
                .collect();
            out = serde_json::to_string_pretty(&rows).expect("plain values serialize");
            out.push('\n');
        }
    }
    Ok(out)
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn render_records(records: &[CheckRecord], format: OutputFormat) -> String {
    let all_pass = records.iter().all(|r| r.pass);
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            for r in records {
                let _ = write!(
                    out,
                    "{} {} limit={} value={}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.check,
                    r.limit,
                    r.value
                );
                if let Some(d) = &r.decimal {
                    let _ = write!(out, " (~{d})");
                }
                let _ = write!(out, " bound: {}", r.bound);
                if let Some(a) = &r.argmin_slack {
                    let _ = write!(out, " argmin_slack: n={} slack={}", a.n, a.slack);
                }
                out.push('\n');
                if let Some(d) = &r.detail {
                    let _ = writeln!(out, "    {d}");
                }
            }
            let _ = writeln!(out, "{}", if all_pass { "ALL PASS" } else { "FAILED" });
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({ "pass": all_pass, "records": records });
            out = serde_json::to_string_pretty(&doc).expect("records serialize");
            out.push('\n');
        }
        OutputFormat::Csv => {
            out.push_str("check,limit,value,bound,pass,argmin_n,argmin_slack\n");
            for r in records {
                let (n, slack) = r
                    .argmin_slack
                    .as_ref()
                    .map(|a| (a.n.to_string(), a.slack.to_string()))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    csv_escape(&r.check),
                    r.limit,
                    csv_escape(&r.value),
                    csv_escape(&r.bound),
                    r.pass,
                    n,
                    slack
                );
            }
        }
    }
    out
}
