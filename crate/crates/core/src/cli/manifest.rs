use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::io::write_json;
use crate::cqed::RATE_CONVENTION;
use crate::decoherence::FLUX_NOISE_CONVENTION;
use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    /// Hash of the config file bytes, absent when defaults were used.
    config_sha256: Option<String>,
    data_sha256: Option<String>,
    /// Effective configuration with the output location removed.
    resolved_config: serde_json::Value,
    conventions: BTreeMap<&'static str, &'static str>,
    outputs: Vec<OutputEntry>,
}

/// Writes `manifest.json` describing `outputs` (already written to `dir`).
pub fn write_manifest(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    config_bytes: Option<&[u8]>,
    data_bytes: Option<&[u8]>,
    outputs: &[String],
) -> Result<()> {
    let mut resolved = serde_json::to_value(config).map_err(|e| Error::Io(e.to_string()))?;
    if let Some(obj) = resolved.as_object_mut() {
        if let Some(out) = obj.get_mut("output").and_then(|o| o.as_object_mut()) {
            out.remove("dir");
        }
    }
    let mut files: Vec<String> = outputs.to_vec();
    files.sort();
    let outputs = files
        .into_iter()
        .map(|file| {
            let bytes = fs::read(dir.join(&file))?;
            Ok(OutputEntry {
                sha256: sha256_hex(&bytes),
                file,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config_sha256: config_bytes.map(sha256_hex),
        data_sha256: data_bytes.map(sha256_hex),
        resolved_config: resolved,
        conventions: BTreeMap::from([
            ("energies", "cyclic frequencies E/h in GHz"),
            ("cavity_rates", RATE_CONVENTION),
            ("flux_noise", FLUX_NOISE_CONVENTION),
            ("csv", "comma delimiter, '.' decimal separator, LF line endings, header row with units"),
        ]),
        outputs,
    };
    write_json(dir, MANIFEST_NAME, &manifest)?;
    Ok(())
}
