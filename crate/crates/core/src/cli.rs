//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or out-of-domain arguments, 3 unreadable
//! or invalid config, 1 anything else. Output is rendered in full before
//! anything is written.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{
    check_disjoint, cz, extract_operator, ghz_prepare, ideal_cascaded_unitary,
    independent_gates_check, process_fidelity, truth_table, TruthBasis,
};
use crate::encoding::{cz_on_paths, EncodingKind};
use crate::error::Error;
use crate::metasurface::{build_parallel_bs, perturb_ratio, MetasurfaceConfig};
use crate::report;
use crate::sweep::{run_sweep, Scenario, SweepParameter, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "metacz", version, about = "Post-selected CZ gates on a parallel beam-splitting metasurface")]
pub struct Cli {
    /// Metasurface config JSON; defaults to the ideal device sized to the command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write a run manifest (command, resolved config, version, checksum).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Relative splitting-ratio error applied on top of the config.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ratio_delta: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Post-selected truth table of one encoding.
    TruthTable {
        /// polarization, cascaded or path
        #[arg(long, default_value = "polarization", value_parser = parse_encoding)]
        encoding: EncodingKind,
        /// standard or hadamard_st (cascaded only)
        #[arg(long, default_value = "standard", value_parser = parse_basis)]
        basis: TruthBasis,
    },
    /// GHZ preparation through the cascaded gate.
    Ghz,
    /// Fidelity and success probability over an imperfection grid.
    Sweep {
        /// ratio_delta, efficiency or conversion_efficiency
        #[arg(long, value_parser = parse_param)]
        param: SweepParameter,
        #[arg(long, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// single_cz, cascaded, ghz or path_cz
        #[arg(long, default_value = "single_cz", value_parser = parse_scenario)]
        scenario: Scenario,
    },
    /// Tensor-product check for two CZ gates on separate path pairs.
    Independent {
        /// Two adjacent path pairs, e.g. "0,1;-2,-3"
        #[arg(long, default_value = "0,1;-2,-3", allow_hyphen_values = true)]
        gates: String,
    },
    /// Dump the post-selected logical operator and its process fidelity.
    Operator {
        #[arg(long, default_value = "polarization", value_parser = parse_encoding)]
        encoding: EncodingKind,
    },
}

fn parse_encoding(s: &str) -> Result<EncodingKind, Error> {
    s.parse()
}

fn parse_basis(s: &str) -> Result<TruthBasis, Error> {
    s.parse()
}

fn parse_param(s: &str) -> Result<SweepParameter, Error> {
    s.parse()
}

fn parse_scenario(s: &str) -> Result<Scenario, Error> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Config(_) => 3,
            Self::Io(_) | Self::Run(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::MissingMode(_) => Self::Config(e.to_string()),
            Error::Domain(_) | Error::OverlappingEncodings(_) | Error::SweepPoint { .. } => {
                Self::Usage(e.to_string())
            }
            other => Self::Run(other),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: MetasurfaceConfig,
    pub version: String,
    /// SHA-256 of the rendered output, hex.
    pub checksum: String,
}

#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub manifest: RunManifest,
}

fn load_config(cli: &Cli, default: MetasurfaceConfig) -> Result<MetasurfaceConfig, CliError> {
    let base = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            MetasurfaceConfig::from_json(&text)?
        }
        None => default,
    };
    Ok(match cli.ratio_delta {
        Some(delta) => perturb_ratio(&base, delta)?,
        None => base,
    })
}

/// Parses `"a,b;c,d"` into adjacent path pairs.
pub fn parse_gate_pairs(spec: &str) -> Result<Vec<[i32; 2]>, CliError> {
    spec.split(';')
        .map(|pair| {
            let orders = pair
                .split(',')
                .map(|x| x.trim().parse::<i32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad gate pair {pair:?}: {e}")))?;
            match orders[..] {
                [a, b] if (a - b).abs() == 1 => Ok([a, b]),
                [_, _] => Err(CliError::Usage(format!(
                    "gate pair {pair:?} must name two adjacent paths"
                ))),
                _ => Err(CliError::Usage(format!("gate pair {pair:?} needs two paths"))),
            }
        })
        .collect()
}

fn ideal_for(kind: EncodingKind) -> crate::fock::ComplexMatrix {
    match kind {
        EncodingKind::Cascaded => ideal_cascaded_unitary(),
        EncodingKind::Polarization | EncodingKind::Path => cz(2, 0, 1),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::TruthTable { .. } => "truth-table",
        Command::Ghz => "ghz",
        Command::Sweep { .. } => "sweep",
        Command::Independent { .. } => "independent",
        Command::Operator { .. } => "operator",
    }
}

/// Runs a parsed command and renders its output without writing anything.
pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let csv = cli.format == Format::Csv;
    let (config, text) = match &cli.command {
        Command::TruthTable { encoding, basis } => {
            if *basis == TruthBasis::HadamardSt && *encoding != EncodingKind::Cascaded {
                return Err(CliError::Usage(
                    "hadamard_st basis applies to the cascaded encoding only".into(),
                ));
            }
            let config = load_config(cli, encoding.default_config())?;
            let u = build_parallel_bs(&config)?;
            let table = truth_table(&u, &encoding.encoding(), *basis)?;
            let text = if csv {
                report::truth_table_csv(&table)
            } else {
                report::truth_table_json(&table, encoding.name())
            };
            (config, text)
        }
        Command::Operator { encoding } => {
            let config = load_config(cli, encoding.default_config())?;
            let u = build_parallel_bs(&config)?;
            let op = extract_operator(&u, &encoding.encoding())?;
            let text = if csv {
                report::operator_csv(&op)
            } else {
                let fid = process_fidelity(&op, &ideal_for(*encoding))?;
                report::operator_json(&op, &fid, encoding.name())
            };
            (config, text)
        }
        Command::Ghz => {
            let kind = EncodingKind::Cascaded;
            let config = load_config(cli, kind.default_config())?;
            let r = ghz_prepare(&build_parallel_bs(&config)?, &kind.encoding())?;
            let text = if csv {
                report::ghz_csv(&r)
            } else {
                report::ghz_json(&r)
            };
            (config, text)
        }
        Command::Sweep {
            param,
            min,
            max,
            steps,
            scenario,
        } => {
            let spec = SweepSpec {
                parameter: *param,
                min: *min,
                max: *max,
                steps: *steps,
                scenario: *scenario,
            };
            spec.validate()?;
            let config = load_config(cli, scenario.default_config())?;
            let rows = run_sweep(&spec, &config)?;
            let text = if csv {
                report::sweep_csv(&spec, &rows)
            } else {
                report::sweep_json(&spec, &rows)
            };
            (config, text)
        }
        Command::Independent { gates } => {
            let pairs = parse_gate_pairs(gates)?;
            if pairs.len() != 2 {
                return Err(CliError::Usage(format!(
                    "expected two gate pairs, got {}",
                    pairs.len()
                )));
            }
            let controls: Vec<i32> = pairs.iter().map(|p| p[0].min(p[1])).collect();
            let enc_a = cz_on_paths(controls[0], ("C1", "T1"))?;
            let enc_b = cz_on_paths(controls[1], ("C2", "T2"))?;
            check_disjoint(&enc_a, &enc_b)?;
            let lo = controls.iter().min().expect("two gates") - 1;
            let hi = controls.iter().max().expect("two gates") + 2;
            let config = load_config(cli, MetasurfaceConfig::ideal(lo, hi))?;
            let r = independent_gates_check(&build_parallel_bs(&config)?, &enc_a, &enc_b)?;
            let text = if csv {
                report::independence_csv(&r)
            } else {
                report::independence_json(&r, &pairs)
            };
            (config, text)
        }
    };
    let checksum = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Rendered {
        manifest: RunManifest {
            command: command_name(&cli.command).into(),
            config,
            version: env!("CARGO_PKG_VERSION").into(),
            checksum,
        },
        text,
    })
}

/// Executes and writes the output (and manifest, if requested).
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let rendered = execute(cli)?;
    match &cli.output {
        Some(path) => fs::write(path, &rendered.text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(rendered.text.as_bytes())?;
        }
    }
    if let Some(path) = &cli.manifest {
        let mut doc = serde_json::to_string_pretty(&rendered.manifest).expect("manifest serializes");
        doc.push('\n');
        fs::write(path, doc)?;
    }
    Ok(())
}
