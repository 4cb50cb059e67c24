use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use snbound_cli::{load, run, CliError, Command, Options};

#[derive(Parser)]
#[command(
    name = "snbound",
    version,
    about = "Bounds on the stabilizing number and 4-genus of knots and links"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alexander polynomial, Arf invariant and Levine-Tristram signatures of a knot.
    Invariants(Common),
    /// Multivariable signature and nullity of a colored link with the resulting sn bound.
    Multisig(Common),
    /// Arf invariant and a symplectic basis with q(e_i) = 0.
    Arf(Common),
    /// Linking form on the first homology of the 2-fold branched cover.
    Linkingform(Common),
    /// All metabolizers of the linking form.
    Metabolizers(Common),
    /// Casson-Gordon signature and nullity of a satellite knot.
    CgSatellite(Common),
    /// Certified interval for sn, and for g4 of knots.
    SnBounds(Common),
    /// Casson-Gordon obstruction to bounding a surface of a given genus.
    G4Check(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file (TOML, `format = 1`).
    file: PathBuf,
    /// Targets to process; defaults to the file's requests for this command.
    targets: Vec<String>,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    json: bool,
    /// Accept evaluation points whose coordinate orders are not powers of one prime.
    #[arg(long)]
    assume_admissible: bool,
    /// Largest group order to enumerate.
    #[arg(long, value_name = "N")]
    enum_bound: Option<u64>,
    /// Starting precision of certified sign evaluation.
    #[arg(long, value_name = "BITS")]
    precision_start: Option<u32>,
    /// Print per-target wall time to stderr.
    #[arg(long)]
    timing: bool,
}

fn execute(command: Command, args: &Common) -> Result<String, CliError> {
    let text =
        std::fs::read_to_string(&args.file).map_err(|e| CliError::Parse(format!("{}: {e}", args.file.display())))?;
    let problem = load(&text)?;
    let mut opts = Options {
        assume_admissible: args.assume_admissible,
        ..Options::default()
    };
    if let Some(n) = args.enum_bound {
        opts.enum_bound = n;
    }
    if let Some(b) = args.precision_start {
        opts.precision_start = b;
    }
    let report = run(&problem, command, &args.targets, &opts, |target, elapsed| {
        if args.timing {
            eprintln!("{target}: {:.3}s", elapsed.as_secs_f64());
        }
    })?;
    Ok(if args.json { report.to_json() } else { report.to_text() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Invariants(a) => (Command::Invariants, a),
        Cmd::Multisig(a) => (Command::Multisig, a),
        Cmd::Arf(a) => (Command::Arf, a),
        Cmd::Linkingform(a) => (Command::LinkingForm, a),
        Cmd::Metabolizers(a) => (Command::Metabolizers, a),
        Cmd::CgSatellite(a) => (Command::CgSatellite, a),
        Cmd::SnBounds(a) => (Command::SnBounds, a),
        Cmd::G4Check(a) => (Command::G4Check, a),
    };
    match execute(command, args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
