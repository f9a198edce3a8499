//! `qregress`: parameter sweeps and validation runs.
//!
//! ```text
//! qregress fig1|fig2|sweep|check [--param value ...] [--config path] [--out path] [--format csv|json]
//! ```
//!
//! Exit status: 0 success, 1 usage error, 2 numeric failure, 3 validation failure.

mod commands;
mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches};

use commands::CliError;
use config::{Command, Format, RunConfig, KEYS};

const USAGE: u8 = 1;
const NUMERIC: u8 = 2;
const VALIDATION: u8 = 3;

fn subcommand(name: &'static str, about: &'static str) -> clap::Command {
    let mut cmd = clap::Command::new(name)
        .about(about)
        .arg(Arg::new("config").long("config").value_name("PATH").value_parser(clap::value_parser!(PathBuf)).help("key = value file; flags take precedence"))
        .arg(Arg::new("out").long("out").value_name("PATH").value_parser(clap::value_parser!(PathBuf)).help("output file (default stdout)"))
        .arg(Arg::new("format").long("format").value_name("FORMAT").value_parser(["csv", "json"]).default_value("csv"));
    for (key, help) in KEYS {
        let flag = key.replace('_', "-");
        cmd = cmd.arg(Arg::new(*key).long(flag).value_name("VALUE").action(ArgAction::Set).allow_hyphen_values(true).help(*help));
    }
    cmd
}

fn cli() -> clap::Command {
    clap::Command::new("qregress")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Markovianity tests for open qubit dynamics")
        .subcommand_required(true)
        .subcommand(subcommand("fig1", "relative change ε of ⟨σ⁺(t+τ)σ⁻(t)⟩ over (γ₀, τ) for the decay model"))
        .subcommand(subcommand("fig2", "BLP and RHP measures over γ₀ for the engineered dephasing model"))
        .subcommand(subcommand("sweep", "ε over (γ₀, t, τ) for any model"))
        .subcommand(subcommand("check", "validation suite; exits with status 3 if a row fails"))
}

fn config_from(command: Command, m: &ArgMatches) -> Result<RunConfig, config::ConfigError> {
    let mut cfg = RunConfig::new(command);
    if let Some(path) = m.get_one::<PathBuf>("config") {
        cfg.load_file(path)?;
    }
    for (key, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn write_output(table: &table::SweepTable, format: Format, out: Option<&PathBuf>) -> io::Result<()> {
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w)?,
    }
    w.flush()
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = match name {
        "fig1" => Command::Fig1,
        "fig2" => Command::Fig2,
        "sweep" => Command::Sweep,
        _ => Command::Check,
    };
    let format = match sub.get_one::<String>("format").map(String::as_str) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    };
    let cfg = match config_from(command, sub) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
        Err(e @ CliError::Numeric(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(NUMERIC);
        }
    };
    if let Err(e) = write_output(&outcome.table, format, sub.get_one::<PathBuf>("out")) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(USAGE);
    }
    if outcome.failed {
        eprintln!("validation failed");
        return ExitCode::from(VALIDATION);
    }
    ExitCode::SUCCESS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        cli().debug_assert();
    }

    #[test]
    fn flags_reach_the_config() {
        let m = cli().try_get_matches_from(["qregress", "fig1", "--gamma0-count", "3", "--tau-max", "2"]).unwrap();
        let cfg = config_from(Command::Fig1, m.subcommand().unwrap().1).unwrap();
        assert_eq!(cfg.usize("gamma0_count").unwrap(), 3);
        assert_eq!(cfg.f64("tau_max").unwrap(), 2.0);
    }
}
