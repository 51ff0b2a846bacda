//! Output emission: every run produces either CSV prefixed with a single
//! `#`-commented JSON metadata line, or (with `--json`) one JSON document
//! with the same metadata under a `meta` key.
//!
//! The metadata records tool version, command, seed, `(d, α)`, a hash of
//! the canonical domain serialization, and the walk budget — everything
//! needed to reproduce the numbers bit-exactly. Worker counts and
//! timestamps are deliberately absent: outputs are byte-identical across
//! both. Numbers are formatted with Rust's shortest round-trip `Display`,
//! so parsing the CSV back recovers the exact doubles.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};
use stablepot::geometry::DomainSpec;
use stablepot::{MCEstimate, StableParams};

use crate::CliError;

/// Reproducibility metadata; the first record of every output.
#[derive(Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub d: usize,
    pub alpha: f64,
    pub domain_sha256: String,
    /// Walk budget per estimate; 0 for deterministic commands.
    pub walks: u64,
    /// Command-specific arguments that shaped the run.
    pub args: serde_json::Value,
}

impl Meta {
    pub fn new(
        command: &str,
        params: &StableParams,
        domain: &DomainSpec,
        seed: u64,
        walks: u64,
        args: serde_json::Value,
    ) -> Meta {
        Meta {
            tool: "stablepot",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            d: params.d(),
            alpha: params.alpha(),
            domain_sha256: domain_hash(domain),
            walks,
            args,
        }
    }
}

/// First 16 hex digits of the SHA-256 of the canonical (serde) domain
/// serialization.
pub fn domain_hash(domain: &DomainSpec) -> String {
    let canonical = serde_json::to_string(domain).expect("domain trees serialize");
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// One CSV row: `Display`-formatted cells, joined by commas.
pub fn csv_row(cells: &[String]) -> String {
    cells.join(",")
}

/// Formats an estimate's cells in the canonical column order
/// `mean,stderr,n,censored_fraction`.
pub fn estimate_cells(est: &MCEstimate) -> Vec<String> {
    vec![
        est.mean.to_string(),
        est.stderr.to_string(),
        est.n.to_string(),
        est.censored_fraction.to_string(),
    ]
}

/// Complete output document ready for emission.
pub struct Rendered {
    pub meta: Meta,
    /// CSV header (without the metadata line).
    pub header: String,
    pub rows: Vec<String>,
    /// Trailing `#`-commented JSON records (summaries), if any.
    pub trailers: Vec<serde_json::Value>,
    /// JSON body used under `--json` instead of the rows.
    pub body: serde_json::Value,
}

impl Rendered {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# {}\n{}\n",
            serde_json::to_string(&self.meta).expect("metadata serializes"),
            self.header
        );
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        for trailer in &self.trailers {
            out.push_str(&format!(
                "# {}\n",
                serde_json::to_string(trailer).expect("trailer serializes")
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = serde_json::json!({
            "meta": serde_json::to_value(&self.meta).expect("metadata serializes"),
            "results": self.body,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
        text.push('\n');
        text
    }

    /// Writes to `--out`/config `out`, or standard output.
    pub fn emit(&self, out: Option<&PathBuf>, json: bool) -> Result<(), CliError> {
        let text = if json { self.to_json() } else { self.to_csv() };
        match out {
            Some(path) => fs::write(path, text).map_err(|e| {
                CliError::config(format!("cannot write {}: {e}", path.display()))
            }),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::config(format!("cannot write to stdout: {e}")))
            }
        }
    }
}
