//! Text and JSON renderings of a report.

use acaf::report::Report;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Renders `rep` with checks sorted by name. Timings are zeroed unless requested so that the
/// JSON for a fixed problem and seed is byte-identical across runs.
pub fn render(rep: &Report, format: Format, timings: bool) -> String {
    let mut rep = rep.sorted();
    if !timings {
        rep.checks.iter_mut().for_each(|c| c.timing_ms = 0);
    }
    match format {
        Format::Json => json(&rep),
        Format::Text => text(&rep, timings),
    }
}

fn json(rep: &Report) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, serde_json::ser::PrettyFormatter::with_indent(b"  "));
    rep.serialize(&mut ser).expect("reports serialize");
    let mut s = String::from_utf8(buf).expect("utf-8");
    s.push('\n');
    s
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols).map(|i| rows.iter().filter_map(|r| r.get(i)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn text(rep: &Report, timings: bool) -> String {
    let mut out = format!("{}\n\n", rep.title);
    if !rep.checks.is_empty() {
        let mut rows = vec![vec!["status".to_string(), "check".into(), "residual".into(), "reference".into()]];
        if timings {
            rows[0].push("ms".into());
        }
        for c in &rep.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let mut row = vec![status.to_string(), c.name.clone(), c.residual.clone(), c.anchor.clone()];
            if timings {
                row.push(c.timing_ms.to_string());
            }
            rows.push(row);
        }
        out.push_str(&table(&rows));
        out.push('\n');
    }
    if !rep.data.is_empty() {
        let rows: Vec<Vec<String>> = rep.data.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
        out.push_str(&table(&rows));
        out.push('\n');
    }
    let failed = rep.failures().count();
    out.push_str(&format!("{} checks, {} failed\n", rep.checks.len(), failed));
    out
}
