use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use plasmon_opa::{render, run, CliError, Command, Config, Format, Provenance};

/// Parametric decay of a laser pump into THz surface plasmons on 2D Dirac materials.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    command: Command,
    /// Sectioned key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Key overrides as `--key value`, `--section.key value` or `--key=value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
    overrides: Vec<String>,
}

/// Splits the trailing arguments into key overrides; `--config`, `--out` and
/// `--format` may also appear there, after the first override.
fn parse_overrides(cli: &mut Cli) -> Result<Vec<(String, String)>, CliError> {
    let raw = std::mem::take(&mut cli.overrides);
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(flag) = it.next() {
        let Some(name) = flag.strip_prefix("--") else {
            return Err(CliError::Config(format!("unexpected argument `{flag}`")));
        };
        let (key, value) = match name.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| CliError::Config(format!("`--{name}` needs a value")))?;
                (name.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "config" => cli.config = Some(value.into()),
            "out" => cli.out = Some(value.into()),
            "format" => {
                cli.format = Some(Format::from_str(&value, false).map_err(|e| CliError::Config(format!("--format: {e}")))?)
            }
            _ => out.push((key, value)),
        }
    }
    Ok(out)
}

fn execute(mut cli: Cli) -> Result<(), CliError> {
    let overrides = parse_overrides(&mut cli)?;
    let config = cli.config.ok_or_else(|| CliError::Config("--config is required".into()))?;
    let out = cli.out.ok_or_else(|| CliError::Config("--out is required".into()))?;
    let cfg = Config::from_file(&config, &overrides)?;
    let table = run(cli.command, &cfg)?;
    let text = render(&table, &Provenance::new(cli.command.name(), &cfg), cli.format.unwrap_or(Format::Csv));
    std::fs::write(&out, text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plasmon-opa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
