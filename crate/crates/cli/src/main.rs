use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fabricmul::designs::{
    build_array_mult, build_proposed_mult4, reconcile_inits, verify_exhaustive, DesignTable, InitSource,
};
use fabricmul::emit::{emit_testbench, emit_verilog, primitive_models};
use fabricmul::netlist::{load, save, Netlist};
use fabricmul::reference::published_tables;
use fabricmul::timing::{critical_path, DelayModel};

const EXIT_ERROR: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

/// Build, verify, analyse and emit LUT-mapped multiplier netlists.
#[derive(Parser)]
#[command(name = "fabricmul", version)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Design {
    Proposed,
    Array,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inits {
    Published,
    Derived,
}

#[derive(Subcommand)]
enum Command {
    /// Build a multiplier netlist and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        design: Design,
        #[arg(long, default_value_t = 4)]
        width: usize,
        /// INIT constants for the proposed design.
        #[arg(long, value_enum)]
        inits: Option<Inits>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a netlist against integer multiplication on every input pair.
    Verify {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long, default_value_t = 4)]
        width: usize,
    },
    /// Compare published and derived INIT constants of the 11-LUT design.
    Reconcile,
    /// Resource counts alongside the published reference figures.
    Report {
        #[arg(long)]
        netlist: PathBuf,
    },
    /// Logic depth and weighted critical path.
    Timing {
        #[arg(long)]
        netlist: PathBuf,
        /// `unit`, `carry-cheap`, `zero`, or a JSON delay-model file.
        #[arg(long, default_value = "unit")]
        model: String,
    },
    /// Write structural Verilog, optionally with a self-checking testbench.
    Emit {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        testbench: bool,
        /// Operand width for the testbench; defaults to half the input count.
        #[arg(long)]
        width: Option<usize>,
        /// Also write behavioral LUT6/LUT6_2/CARRY4 models.
        #[arg(long)]
        models: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn read_netlist(path: &Path) -> Result<Netlist> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    load(&text).with_context(|| format!("{}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialise"));
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build { design, width, inits, out } => {
            let netlist = match design {
                Design::Proposed => {
                    if width != 4 {
                        bail!("the proposed design is 4 bits wide; got --width {width}");
                    }
                    let source = match inits.unwrap_or(Inits::Derived) {
                        Inits::Published => InitSource::Published,
                        Inits::Derived => InitSource::Derived,
                    };
                    build_proposed_mult4(source)?
                }
                Design::Array => {
                    if inits.is_some() {
                        bail!("--inits applies only to --design proposed");
                    }
                    build_array_mult(width)?
                }
            };
            write(&out, &save(&netlist))?;
            if cli.json {
                print_json(&json!({ "written": [out], "resources": netlist.resources() }));
            } else {
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
        Command::Verify { netlist, width } => {
            let report = verify_exhaustive(&read_netlist(&netlist)?, width)?;
            if cli.json {
                print_json(&json!({ "all_pass": report.all_pass(), "report": report }));
            } else {
                println!("{report}");
            }
            Ok(if report.all_pass() { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::Reconcile => {
            let report = reconcile_inits(DesignTable::proposed_mult4());
            if cli.json {
                print_json(&serde_json::to_value(&report)?);
            } else {
                println!("{report}");
            }
            Ok(0)
        }
        Command::Report { netlist } => {
            let resources = read_netlist(&netlist)?.resources();
            let reference = published_tables();
            if cli.json {
                print_json(&json!({ "resources": resources, "reference": reference }));
            } else {
                println!("{resources}");
                println!();
                println!("{reference}");
            }
            Ok(0)
        }
        Command::Timing { netlist, model } => {
            let model = match DelayModel::preset(&model) {
                Some(m) => m,
                None => {
                    let text = fs::read_to_string(&model)
                        .with_context(|| format!("`{model}` is neither a preset nor a readable model file"))?;
                    DelayModel::from_json(&text).with_context(|| model.clone())?
                }
            };
            let report = critical_path(&read_netlist(&netlist)?, &model)?;
            let reference = published_tables();
            if cli.json {
                print_json(&json!({
                    "timing": report,
                    "reference_cpd_ns": { "label": reference.label, "rows": reference.cpd_ns },
                }));
            } else {
                println!("{report}");
                println!();
                println!("abstract weights only; published post-route CPD [ns] for comparison, not reproduced:");
                for row in &reference.cpd_ns {
                    println!("  {:<28} {:>7.3}", row.design, row.total);
                }
            }
            Ok(0)
        }
        Command::Emit { netlist, name, testbench, width, models, out_dir } => {
            let n = read_netlist(&netlist)?;
            let mut files = vec![(out_dir.join(format!("{name}.v")), emit_verilog(&n, &name)?)];
            if testbench {
                let width = width.unwrap_or(n.inputs().len() / 2);
                files.push((out_dir.join(format!("{name}_tb.v")), emit_testbench(&n, width, &name)?));
            }
            if models {
                files.push((out_dir.join("fabricmul_primitives.v"), primitive_models().to_string()));
            }
            for (path, text) in &files {
                write(path, text)?;
            }
            let paths: Vec<&PathBuf> = files.iter().map(|(p, _)| p).collect();
            if cli.json {
                print_json(&json!({ "written": paths }));
            } else {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Ok(0)
        }
    }
}

fn one_line(text: &str) -> String {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("error: {}", first.trim_start_matches("error:").trim());
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", one_line(&format!("{e:#}")));
            ExitCode::from(EXIT_ERROR)
        }
    }
}
