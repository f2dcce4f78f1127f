//! `parametra SCRIPT [--format text|json] [--order ORD] [--constraints ...] [--seed N] [-o OUT]`
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 engine error.

mod config;
mod interp;
mod report;
mod script;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Format, RawSettings};

#[derive(Parser, Debug)]
#[command(name = "parametra", version, about = "Parametric module computations over Q(params)[d]")]
struct Cli {
    /// Session script (`-` reads standard input).
    script: PathBuf,
    /// Output format: text or json.
    #[arg(long)]
    format: Option<String>,
    /// Module ordering for every ring, e.g. `(c,dp)`, `(C,lp)`, `(a(1,0),dp)`.
    #[arg(long)]
    order: Option<String>,
    /// Highest Ext index examined by control/autonom (default: number of variables).
    #[arg(long)]
    max_ext: Option<String>,
    /// Sign constraints on parameters: `pos=g,m1;nonneg=d1;nonzero=z`.
    #[arg(long)]
    constraints: Option<String>,
    /// Seed for `verify`.
    #[arg(long)]
    seed: Option<String>,
    /// Random points per `verify`.
    #[arg(long)]
    samples: Option<String>,
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: standard output, or OUT_DIR/<script>.<ext> when configured).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Append per-command wall time; makes output nondeterministic.
    #[arg(long)]
    timing: bool,
    /// Only parse and name-check the script.
    #[arg(long)]
    check: bool,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("parametra: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };

    let mut raw = RawSettings::default();
    raw.set("format", cli.format.clone());
    raw.set("order", cli.order.clone());
    raw.set("max_ext", cli.max_ext.clone());
    raw.set("constraints", cli.constraints.clone());
    raw.set("seed", cli.seed.clone());
    raw.set("samples", cli.samples.clone());
    raw.fallback(&config::from_env(std::env::vars()));
    let config_path = cli.config.clone().or_else(|| std::env::var_os(format!("{}CONFIG", config::ENV_PREFIX)).map(PathBuf::from));
    if let Some(path) = &config_path {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage_error(format!("cannot read config {}: {e}", path.display())),
        };
        match config::parse_config(&text, path) {
            Ok(file) => raw.fallback(&file),
            Err(e) => return usage_error(e),
        }
    }
    let settings = match config::resolve(&raw) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };

    let src = if cli.script.as_os_str() == "-" {
        let mut s = String::new();
        match std::io::Read::read_to_string(&mut std::io::stdin(), &mut s) {
            Ok(_) => s,
            Err(e) => return usage_error(format!("cannot read standard input: {e}")),
        }
    } else {
        match std::fs::read_to_string(&cli.script) {
            Ok(s) => s,
            Err(e) => return usage_error(format!("cannot read {}: {e}", cli.script.display())),
        }
    };

    let script = match interp::parse_script(&src, &settings.options) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("{}:{d}", cli.script.display());
            if settings.format == Format::Json {
                print!("{}", pretty(&report::render_json_error(&[], "parse", &d.to_string())));
            }
            return ExitCode::from(1);
        }
    };
    if cli.check {
        return ExitCode::SUCCESS;
    }

    let (reports, err) = interp::run(&src, &script, &settings.options);

    let (body, code) = match (&err, settings.format) {
        (None, Format::Text) => (report::render_text(&reports, cli.timing), ExitCode::SUCCESS),
        (None, Format::Json) => (pretty(&report::render_json(&reports, cli.timing)), ExitCode::SUCCESS),
        (Some(e), fmt) => {
            eprintln!("{}:{e}", cli.script.display());
            let (kind, code) = match e {
                interp::RunError::Parse(_) => ("parse", 1),
                interp::RunError::Engine { .. } => ("engine", 2),
            };
            let body = match fmt {
                Format::Text => report::render_text(&reports, false),
                Format::Json => pretty(&report::render_json_error(&reports, kind, &e.to_string())),
            };
            (body, ExitCode::from(code))
        }
    };

    let target = cli.output.clone().or_else(|| {
        settings.out_dir.as_ref().map(|d| {
            let stem = cli.script.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "stdin".into());
            d.join(format!("{stem}.{}", if settings.format == Format::Json { "json" } else { "txt" }))
        })
    });
    let written = match target {
        Some(path) => std::fs::write(&path, body.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(e) = written {
        return usage_error(e);
    }
    code
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
