use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::experiments::record::{read_records, ResultRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: String,
    /// (file name, two-column contents) per (experiment, family, operation) with plot points.
    pub data: Vec<(String, String)>,
    pub passed: usize,
    pub failed: usize,
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Groups records by (experiment, family). Output depends only on the
/// records, never on wall times or file timestamps.
pub fn build_report(records: &[ResultRecord]) -> Report {
    let mut groups: BTreeMap<(String, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.experiment.clone(), r.family.clone())).or_default().push(r);
    }
    let mut summary = String::new();
    let mut data = Vec::new();
    let (mut passed, mut failed) = (0, 0);
    if records.is_empty() {
        summary.push_str("no records\n");
    }
    for ((exp, fam), recs) in &groups {
        let _ = writeln!(summary, "== {exp} / {fam} ({} records)", recs.len());
        let _ = writeln!(summary, "{:<26} {:>12} {:>12} {:>8}  inputs", "operation", "value", "ci", "verdict");
        let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
        for r in recs {
            let verdict = match r.verdict {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "-",
            };
            let _ = writeln!(
                summary,
                "{:<26} {:>12} {:>12} {:>8}  {}",
                r.operation,
                fmt_opt(r.value),
                fmt_opt(r.ci_halfwidth),
                verdict,
                r.inputs
            );
            if let (Some(x), Some(y)) = (r.x, r.value) {
                series.entry(&r.operation).or_default().push((x, y));
            }
        }
        summary.push('\n');
        for (op, pts) in series {
            let mut body = format!("# {exp} {fam} {op}\n");
            for (x, y) in pts {
                let _ = writeln!(body, "{x} {y}");
            }
            data.push((format!("{}_{}_{}.dat", slug(exp), slug(fam), slug(op)), body));
        }
    }
    summary.push_str("== checks\n");
    for r in records {
        if let Some(v) = r.verdict {
            if v {
                passed += 1;
            } else {
                failed += 1;
            }
            let _ = writeln!(
                summary,
                "{} {} {} {} {}",
                if v { "PASS" } else { "FAIL" },
                r.experiment,
                r.family,
                r.operation,
                r.inputs
            );
        }
    }
    let _ = writeln!(summary, "{passed} passed, {failed} failed");
    Report { summary, data, passed, failed }
}

/// Reads every record under `dir` and writes `summary.txt` plus the data
/// files into `dir/report`.
pub fn report(dir: &Path) -> Result<Report> {
    let records = read_records(dir)?;
    let rep = build_report(&records);
    let out = dir.join("report");
    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("summary.txt"), &rep.summary)?;
    for (name, body) in &rep.data {
        std::fs::write(out.join(name), body)?;
    }
    Ok(rep)
}
