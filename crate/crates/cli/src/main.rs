//! `onf` — nanofiber workbench command line.
//!
//! Reads a flat JSON run configuration (the `command` field selects the
//! operation), computes everything in memory, then writes the artifact
//! files plus a `manifest.json` carrying a SHA-256 digest of every emitted
//! file. Identical configurations reproduce byte-identical artifacts.
//!
//! Exit codes: 0 success, 2 configuration error, 3 physics-domain error
//! (e.g. no bound trap minimum, unguided mode), 4 internal failure.

mod commands;
mod config;
mod units;

use clap::Parser;
use commands::{Artifact, Format};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Domain(String),
    Internal(String),
}

impl CliError {
    fn from_core(e: onf_core::Error) -> Self {
        match &e {
            onf_core::Error::InvalidInput(_) => CliError::Config(e.to_string()),
            onf_core::Error::Solver(_) => CliError::Internal(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Domain(m) | CliError::Internal(m) => m,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "configuration error",
            CliError::Domain(_) => "domain error",
            CliError::Internal(_) => "internal error",
        }
    }
}

/// Nanofiber workbench: guided modes, fields, atom-photon coupling,
/// two-color traps, pull planning, and beat spectroscopy.
#[derive(Parser, Debug)]
#[command(name = "onf", version, about)]
struct Args {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table artifact format.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Chatty progress information on stderr.
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("onf: {}: {}", e.kind(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    let format = match args.format.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            return Err(CliError::Config(format!(
                "format must be csv or json, got {other:?}"
            )))
        }
    };
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", args.config.display()))
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    let cfg = config::Cfg::from_value(value).map_err(CliError::Config)?;

    let command = cfg.string("command").map_err(CliError::Config)?;
    let out_dir = match (&args.out, cfg.string_or("output_dir", "")) {
        (Some(dir), _) => dir.clone(),
        (None, Ok(s)) if !s.is_empty() => PathBuf::from(s),
        _ => {
            return Err(CliError::Config(
                "no output directory: set \"output_dir\" in the config or pass --out".into(),
            ))
        }
    };

    // compute first; nothing is written if any step fails
    let artifacts = commands::run(&command, &cfg, format, args.verbose)?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    let mut manifest_entries = Vec::new();
    for Artifact { name, content } in &artifacts {
        let path = out_dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
        manifest_entries.push(format!(
            "    {{\"name\": \"{name}\", \"sha256\": \"{}\", \"bytes\": {}}}",
            hex_digest(content.as_bytes()),
            content.len()
        ));
        written.push(path);
    }
    let manifest = format!(
        "{{\n  \"command\": \"{command}\",\n  \"config_sha256\": \"{}\",\n  \"files\": [\n{}\n  ]\n}}\n",
        hex_digest(text.as_bytes()),
        manifest_entries.join(",\n")
    );
    let manifest_path = out_dir.join("manifest.json");
    std::fs::write(&manifest_path, manifest)
        .map_err(|e| CliError::Internal(format!("cannot write manifest: {e}")))?;
    written.push(manifest_path);
    Ok(written)
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
