use std::fs::File;
use std::io::{self, BufWriter, Write};

use ginlab::config::{library_version, RunConfig};
use ginlab::ensembles::{write_spectra_csv, Spectrum};
use ginlab::mc_verify::VerificationReport;
use serde_json::{json, Value};

use crate::exact::Table;
use crate::{Failure, Outcome};

/// Provenance written at the top of every output.
pub struct Header {
    pub seed: u64,
    pub config_hash: String,
}

impl Header {
    pub fn new(cfg: &RunConfig) -> Self {
        Header { seed: cfg.seed(), config_hash: cfg.hash() }
    }

    fn comment(&self) -> String {
        format!("# ginlab {} seed={} config={}\n", library_version(), self.seed, self.config_hash)
    }
}

fn io_fail(e: io::Error) -> Failure {
    Failure::Io(format!("write failed: {e}"))
}

pub struct Sink {
    inner: BufWriter<Box<dyn Write>>,
}

impl Sink {
    pub fn open(path: Option<&str>) -> Outcome<Sink> {
        let w: Box<dyn Write> = match path {
            None | Some("-") => Box::new(io::stdout().lock()),
            Some(p) => Box::new(File::create(p).map_err(|e| Failure::Io(format!("cannot create {p}: {e}")))?),
        };
        Ok(Sink { inner: BufWriter::new(w) })
    }

    pub fn finish(mut self) -> Outcome<()> {
        self.inner.flush().map_err(io_fail)
    }

    pub fn write_spectra_csv(&mut self, header: &Header, spectra: &[Spectrum]) -> Outcome<()> {
        self.inner.write_all(header.comment().as_bytes()).map_err(io_fail)?;
        write_spectra_csv(&mut self.inner, spectra.iter().enumerate().map(|(i, s)| (i as u64, s)))?;
        Ok(())
    }

    pub fn write_table_csv(&mut self, header: &Header, table: &Table) -> Outcome<()> {
        let mut text = header.comment();
        text.push_str(&table.columns.join(","));
        text.push('\n');
        for row in &table.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.inner.write_all(text.as_bytes()).map_err(io_fail)
    }

    pub fn write_reports_csv(&mut self, header: &Header, reports: &[VerificationReport]) -> Outcome<()> {
        let mut text = header.comment();
        text.push_str("statistic,grid,exact,estimate,stderr,z,pass\n");
        for r in reports {
            for i in 0..r.grid.len() {
                text.push_str(&format!(
                    "{},{:?},{:?},{:?},{:?},{:?},{}\n",
                    r.statistic, r.grid[i], r.exact[i], r.estimate[i], r.stderr[i], r.z[i], r.pass
                ));
            }
        }
        self.inner.write_all(text.as_bytes()).map_err(io_fail)
    }

    /// JSON has no comments, so the header becomes fields of a wrapper object.
    pub fn write_json(&mut self, header: &Header, key: &str, body: &Value) -> Outcome<()> {
        let doc = json!({
            "ginlab": library_version(),
            "seed": header.seed,
            "config_hash": header.config_hash,
            key: body,
        });
        serde_json::to_writer_pretty(&mut self.inner, &doc).map_err(|e| Failure::Io(e.to_string()))?;
        self.inner.write_all(b"\n").map_err(io_fail)
    }
}

pub fn spectra_rows_json(spectra: &[Spectrum]) -> Value {
    let mut rows = Vec::new();
    for (i, s) in spectra.iter().enumerate() {
        for x in &s.real_eigs {
            rows.push(json!({"sample_index": i, "kind": "real", "re": x, "im": 0.0}));
        }
        for z in &s.pair_reps {
            rows.push(json!({"sample_index": i, "kind": "pair", "re": z.re, "im": z.im}));
        }
        for z in &s.complex_eigs {
            rows.push(json!({"sample_index": i, "kind": "complex", "re": z.re, "im": z.im}));
        }
    }
    Value::Array(rows)
}
