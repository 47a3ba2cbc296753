use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "scidforge", version, about = "Sunflower bounds and small-case search for SCIDs in PG(n,q)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Omit the timestamp from the configuration header.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Every bound for one (q, k).
    Bounds {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        k: u32,
        /// Intersection dimension for the classical bound.
        #[arg(long, default_value_t = 0)]
        t: u32,
    },
    /// F_q and the asymptotic bound for q = 2^4, ..., 2^20.
    Table1,
    /// Best (c, d) for one (q, k).
    Optimize {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exact certificates for the polynomial inequalities.
    Certify {
        /// One of lemmaB1, lemmaB2, onderwortel, boundonG, maintheorem_final.
        #[arg(long)]
        name: Option<String>,
        /// Write the certificates as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a SCID file and optionally report its rich/poor structure.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, requires = "d")]
        c: Option<f64>,
        #[arg(long, requires = "c")]
        d: Option<f64>,
    },
    /// Largest non-sunflower SCID in PG(n, q) by branch-and-bound.
    Search {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Worker threads (default: all cores).
        #[arg(long, env = "SCIDFORGE_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        size_cap: Option<usize>,
        /// Write the best SCID here, with a `.sidecar.json` next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count k-spaces of PG(n, q) and compare with the Gaussian coefficient.
    Enum {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

fn parse_q(s: &str) -> Result<u64, String> {
    let (p, e) = scidforge::gf::parse_prime_power(s).map_err(|e| e.to_string())?;
    Ok((p as u64).pow(e))
}

/// What a command produced: JSON for `--format json`, key/value rows for
/// text and csv, or a preformatted body where a command has its own layout.
pub struct Report {
    pub json: Value,
    pub rows: Vec<(String, String)>,
    pub text: Option<String>,
    pub csv: Option<String>,
    pub success: bool,
}

impl Report {
    pub fn new(json: Value, rows: Vec<(String, String)>, success: bool) -> Self {
        Self {
            json,
            rows,
            text: None,
            csv: None,
            success,
        }
    }
}

fn config(cli: &Cli) -> Value {
    let mut cfg = Map::new();
    cfg.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    cfg.insert("format".into(), json!(cli.format));
    if let Value::Object(m) = serde_json::to_value(&cli.command).expect("config serializes") {
        cfg.extend(m);
    }
    if let Command::Search { jobs, .. } = &cli.command {
        cfg.insert(
            "jobs".into(),
            json!(jobs.unwrap_or_else(rayon::current_num_threads)),
        );
    }
    if !cli.deterministic {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        cfg.insert("timestamp".into(), json!(now));
    }
    Value::Object(cfg)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(format: Format, cfg: &Value, report: &Report) -> String {
    match format {
        Format::Json => {
            let doc = json!({ "config": cfg, "result": report.json });
            serde_json::to_string_pretty(&doc).expect("json serializes") + "\n"
        }
        Format::Text => {
            let mut out = format!("# {cfg}\n");
            match &report.text {
                Some(t) => out.push_str(t),
                None => {
                    let width = report.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in &report.rows {
                        out.push_str(&format!("{k:<width$}  {v}\n"));
                    }
                }
            }
            out
        }
        Format::Csv => {
            let mut out = format!("# {cfg}\n");
            match &report.csv {
                Some(c) => out.push_str(c),
                None => {
                    out.push_str("key,value\n");
                    for (k, v) in &report.rows {
                        out.push_str(&format!("{},{}\n", csv_field(k), csv_field(v)));
                    }
                }
            }
            out
        }
    }
}

fn error_kind(e: &scidforge::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config(&cli);
    match commands::run(&cli.command) {
        Ok(report) => {
            print!("{}", render(cli.format, &cfg, &report));
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => eprintln!(
                    "{}",
                    json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } })
                ),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(1)
        }
    }
}
