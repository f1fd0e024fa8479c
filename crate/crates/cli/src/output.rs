//! Output directory: CSV tables, SVG figures and the run manifest.

use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn create(dir: PathBuf) -> Result<Self, CliError> {
        fs::create_dir_all(&dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Output { dir, files: Vec::new() })
    }

    /// Writes a table with an explicit header, so empty tables still carry one.
    pub fn csv<S: Serialize>(&mut self, name: &str, header: &[&str], rows: &[S]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let io = |e: csv::Error| CliError::Runtime(format!("writing {name}: {e}"));
        let mut w = csv::WriterBuilder::new().has_headers(false).from_path(&path).map_err(io)?;
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.serialize(r).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Runtime(format!("writing {name}: {e}")))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), contents).map_err(|e| CliError::Runtime(format!("writing {name}: {e}")))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// `manifest.json`: command, seed, resolved parameters, outputs and the
    /// verdict. Carries no timestamps or absolute paths.
    pub fn finish(mut self, command: &str, params: &Map<String, Value>, verdict: &str) -> Result<(), CliError> {
        self.files.sort();
        let manifest = json!({
            "tool": "hypglue",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "parameters": params,
            "outputs": self.files,
            "verdict": verdict,
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        fs::write(self.dir.join("manifest.json"), text).map_err(|e| CliError::Runtime(format!("writing manifest: {e}")))
    }
}
