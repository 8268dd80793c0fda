use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output line. Everything except `wall_ms` is a function of the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config_hash: String,
    pub experiment: String,
    pub family: String,
    pub operation: String,
    pub seed: u64,
    pub inputs: serde_json::Value,
    /// Abscissa for plot data, when the record is one point of a sweep.
    pub x: Option<f64>,
    pub value: Option<f64>,
    pub ci_halfwidth: Option<f64>,
    pub verdict: Option<bool>,
    pub detail: serde_json::Value,
    pub wall_ms: f64,
    pub version: String,
}

impl ResultRecord {
    /// The record with its wall time cleared, for replay comparisons.
    pub fn timeless(&self) -> ResultRecord {
        ResultRecord { wall_ms: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    config_hash: &'a str,
    experiment: &'a str,
    family: &'a str,
    operation: &'a str,
    seed: u64,
    inputs: String,
    x: Option<f64>,
    value: Option<f64>,
    ci_halfwidth: Option<f64>,
    verdict: Option<bool>,
    wall_ms: f64,
    version: &'a str,
}

/// Appends records to `<dir>/<experiment>.jsonl` and its CSV mirror.
pub struct Appender {
    jsonl: File,
    csv: csv::Writer<File>,
}

impl Appender {
    pub fn open(dir: &Path, experiment: &str) -> Result<Appender> {
        std::fs::create_dir_all(dir)?;
        let jsonl = OpenOptions::new().create(true).append(true).open(dir.join(format!("{experiment}.jsonl")))?;
        let csv_path = dir.join(format!("{experiment}.csv"));
        let fresh = std::fs::metadata(&csv_path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(&csv_path)?;
        let csv = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        Ok(Appender { jsonl, csv })
    }

    pub fn write(&mut self, rec: &ResultRecord) -> Result<()> {
        let line = serde_json::to_string(rec).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(self.jsonl, "{line}")?;
        self.csv
            .serialize(CsvRow {
                config_hash: &rec.config_hash,
                experiment: &rec.experiment,
                family: &rec.family,
                operation: &rec.operation,
                seed: rec.seed,
                inputs: rec.inputs.to_string(),
                x: rec.x,
                value: rec.value,
                ci_halfwidth: rec.ci_halfwidth,
                verdict: rec.verdict,
                wall_ms: rec.wall_ms,
                version: &rec.version,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        self.csv.flush()?;
        Ok(())
    }
}

/// Every record in the `.jsonl` files of `dir`, files taken in name order.
pub fn read_records(dir: &Path) -> Result<Vec<ResultRecord>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for path in files {
        for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?;
            out.push(rec);
        }
    }
    Ok(out)
}
