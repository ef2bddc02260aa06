use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qftr::bench;
use qftr::io::{export_json, export_qasm, import_json};
use qftr::verifier::{oracle_nmax, verify};
use qftr::{compile, graph_for, metrics, Arch, ConstraintError, CouplingGraph, LatencyModel, Mode};

#[derive(Parser)]
#[command(name = "qftr", version, about = "Compile and verify QFT circuits for constrained qubit layouts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile the QFT for one architecture and size.
    Compile {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; the circuit goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// nisq, lattice, or a JSON file with fields h, cphase, swap, slow_swap, cnot.
        #[arg(long, default_value = "nisq")]
        latency: String,
    },
    /// Check a circuit file: coverage, dependence order, compliance and (small n) the unitary.
    Verify {
        circuit: PathBuf,
        /// Coupling graph JSON; compliance is skipped without it.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value = "relaxed")]
        mode: Mode,
    },
    /// Compile a sweep of sizes and fit depth against N.
    Bench {
        #[arg(long)]
        arch: Arch,
        /// Sizes as a comma list (`4,6,8`) or range (`4..=14:2`); same units as compile.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value = "relaxed")]
        order: Mode,
        #[arg(long, default_value = "lattice")]
        latency: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write a gnuplot script plotting the CSV.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
    },
    /// Write the coupling graph of an architecture as JSON.
    Graph {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    arch: Arch,
    /// Qubit count (lnn, heavyhex).
    #[arg(long)]
    n: Option<usize>,
    /// Grid side (sycamore, lattice).
    #[arg(long)]
    m: Option<usize>,
    /// Five-qubit group count (heavyhex).
    #[arg(long)]
    groups: Option<usize>,
    #[arg(long, default_value = "relaxed")]
    order: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Qasm,
}

enum Failure {
    Io(String),
    Constraint(ConstraintError),
    Usage(String),
    Verify(String),
}

impl From<ConstraintError> for Failure {
    fn from(e: ConstraintError) -> Self {
        Failure::Constraint(e)
    }
}

impl Target {
    /// Size in the units `compile` expects.
    fn size(&self) -> Result<usize, Failure> {
        let missing = |flag: &str| Failure::Usage(format!("--arch {} needs {flag}", self.arch.name()));
        match self.arch {
            Arch::Lnn => self.n.ok_or_else(|| missing("--n")),
            Arch::HeavyHex => match (self.groups, self.n) {
                (Some(g), _) => Ok(g),
                (None, Some(n)) if n % 5 == 0 => Ok(n / 5),
                (None, Some(_)) => Err(ConstraintError::NotMultipleOfFive.into()),
                (None, None) => Err(missing("--n or --groups")),
            },
            Arch::Sycamore | Arch::Lattice => self.m.ok_or_else(|| missing("--m")),
        }
    }
}

fn latency_model(arg: &str) -> Result<LatencyModel, Failure> {
    let lm = match arg {
        "nisq" => LatencyModel::nisq(),
        "lattice" => LatencyModel::lattice(),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{path}: {e}")))?
        }
    };
    lm.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(lm)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse sizes `{s}`"));
    if let Some((range, step)) = s.split_once("..=").map(|(a, rest)| {
        let (b, step) = rest.split_once(':').unwrap_or((rest, "1"));
        ((a.to_string(), b.to_string()), step.to_string())
    }) {
        let lo: usize = range.0.trim().parse().map_err(|_| bad())?;
        let hi: usize = range.1.trim().parse().map_err(|_| bad())?;
        let step: usize = step.trim().parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(bad());
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Compile { target, format, out, latency } => {
            let lm = latency_model(&latency)?;
            let c = compile(target.arch, target.size()?, target.order)?;
            let text = match format {
                Format::Json => export_json(&c.circuit),
                Format::Qasm => export_qasm(&c.circuit),
            };
            write_out(&out, &text)?;
            let m = metrics(&c.circuit, &lm);
            let line = format!(
                "{},{},{},{},{},{}",
                c.arch.name(),
                c.circuit.n_logical,
                m.depth,
                m.swap_count,
                m.cnot_count,
                m.cphase_count
            );
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(())
        }
        Cmd::Verify { circuit, graph, mode } => {
            let read = |p: &PathBuf| fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())));
            let c = import_json(&read(&circuit)?).map_err(|e| Failure::Io(format!("{}: {e}", circuit.display())))?;
            let g = match &graph {
                Some(p) => Some(CouplingGraph::from_json(&read(p)?).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?),
                None => None,
            };
            let v = verify(&c, g.as_ref(), mode, oracle_nmax());
            println!("coverage: {}", if v.coverage.ok() { "ok".to_string() } else { format!("{} issues", v.coverage.issues.len()) });
            for issue in v.coverage.issues.iter().take(20) {
                println!("  {issue}");
            }
            match &v.dependence {
                Ok(()) => println!("dependence ({mode}): ok"),
                Err(e) => println!("dependence ({mode}): {e}"),
            }
            match &v.compliance {
                Some(Ok(())) => println!("compliance: ok"),
                Some(Err(e)) => println!("compliance: {e}"),
                None => println!("compliance: skipped (no graph)"),
            }
            match v.oracle {
                Some(d) => println!("unitary: max deviation {d:.3e}"),
                None => println!("unitary: skipped (n > {})", oracle_nmax()),
            }
            match v.first_failure() {
                Some(f) => Err(Failure::Verify(f)),
                None => Ok(()),
            }
        }
        Cmd::Bench { arch, sizes, order, latency, csv, gnuplot } => {
            let lm = latency_model(&latency)?;
            let rows = bench::run(arch, &parse_sizes(&sizes)?, order, &lm)?;
            write_out(&csv, &bench::to_csv(&rows))?;
            if let Some(fit) = bench::fit_report(&rows) {
                eprintln!("{fit}");
            }
            if let Some(p) = &gnuplot {
                let data = csv.as_ref().map_or("bench.csv".to_string(), |c| c.display().to_string());
                fs::write(p, bench::gnuplot_script(&data, arch)).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            }
            Ok(())
        }
        Cmd::Graph { target, out } => {
            let g = graph_for(target.arch, target.size()?)?;
            write_out(&out, &g.to_json())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Constraint(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(e)) => {
            eprintln!("verification failed: {e}");
            ExitCode::from(3)
        }
    }
}
