use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minfes::cells::Shape;
use minfes::construct::Complement;
use minfes_cli::{cmd_build, cmd_table1, cmd_verify, emit, CliError, Format, RunConfig, Span, Suite, Target};

#[derive(Parser)]
#[command(name = "minfes", version, about = "Exact computations with finite element systems of polynomial forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Trace-free dimensions on I^3 for r = 4..10, by closed form and by ranks.
    Table1,
    /// Run a verification suite over the configured ranges.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Build a system and print it with its certificate.
    Build {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Args)]
struct Common {
    /// Cell dimensions, `a..b` or `a`.
    #[arg(long, global = true)]
    n: Option<Span>,
    /// Polynomial degrees, `a..b` or `a`.
    #[arg(long, global = true)]
    r: Option<Span>,
    /// Form degrees, `a..b` or `a`.
    #[arg(long, global = true)]
    k: Option<Span>,
    /// Reference cell: cube or simplex.
    #[arg(long, global = true, value_parser = parse_shape)]
    cell: Option<Shape>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// End the trace-free sequences at the top degree instead of integrating.
    #[arg(long, global = true)]
    unaugmented: bool,
    /// Allow n > 4 and r > 10.
    #[arg(long, global = true)]
    max_cost: bool,
    /// How the construction picks added spaces: pivot, monomial or l2.
    #[arg(long, global = true, default_value = "pivot")]
    complement: Complement,
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    match s {
        "cube" => Ok(Shape::Cube),
        "simplex" => Ok(Shape::Simplex),
        _ => Err(format!("expected cube or simplex, got {s:?}")),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let c = cli.common;
    let cfg = RunConfig {
        n: c.n,
        r: c.r,
        k: c.k,
        cell: c.cell,
        format: c.format,
        out: c.out,
        unaugmented: c.unaugmented,
        max_cost: c.max_cost,
        complement: c.complement,
    };
    match cli.command {
        Command::Table1 => emit(&cmd_table1(&cfg)?, &cfg),
        Command::Verify { suite } => emit(&cmd_verify(suite, &cfg)?, &cfg),
        Command::Build { target } => emit(&cmd_build(target, &cfg)?, &cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
