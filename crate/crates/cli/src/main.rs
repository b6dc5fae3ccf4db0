use std::path::PathBuf;
use std::process::ExitCode;

use chaingeom::pline::DEFAULT_CHAIN_CAP;
use chaingeom_cli::certificate::Certificate;
use chaingeom_cli::commands::{self, AnalyzeArgs, GeometryArgs, MorphismArgs};
use chaingeom_cli::CliError;
use clap::{Args, Parser, Subcommand};

/// Generalized chain geometries over small finite rings.
#[derive(Parser)]
#[command(name = "chaingeom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Geometry {
    /// Ring descriptor: gf(q), m2:gf(q), dual:gf(q), prod2:gf(q), ut2:gf(q)
    #[arg(long)]
    ring: String,
    /// Subfield F, e.g. gf(9)
    #[arg(long)]
    field: String,
    /// scalar or regular
    #[arg(long, default_value = "scalar")]
    embed: String,
}

#[derive(Args)]
struct Output {
    /// Write the JSON certificate here
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Chains, transversals, regulus verdict and spreads of one geometry
    Analyze {
        #[command(flatten)]
        geometry: Geometry,
        /// natural, regular, basis:frob^i[:dim] or diag:frob^i,...
        #[arg(long, default_value = "natural")]
        rep: String,
        /// Maximum number of chains to enumerate
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall-clock timings in the certificate
        #[arg(long)]
        timings: bool,
        /// Write the distant graph in DOT format
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the verification suite
    VerifySuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only these checks (repeatable)
        #[arg(long)]
        only: Vec<String>,
        /// List check ids and exit
        #[arg(long)]
        list: bool,
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Build and verify a map between chain geometries over 2×2 matrix rings
    Morphism {
        #[command(flatten)]
        geometry: Geometry,
        /// Target ring, defaults to the source ring
        #[arg(long)]
        target_ring: Option<String>,
        #[arg(long)]
        target_field: Option<String>,
        #[arg(long)]
        target_embed: Option<String>,
        /// Field automorphism κ, e.g. id or frob^1
        #[arg(long, default_value = "id")]
        kappa: String,
        /// H1 as id or four element indices a,b,c,d (row-major)
        #[arg(long, default_value = "id")]
        h1: String,
        /// Precede by the correlation with this automorphism ω
        #[arg(long)]
        omega: Option<String>,
        /// Require the inclusion condition with equality
        #[arg(long)]
        strict: bool,
        /// Skip the inclusion condition
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate chains
    Chains {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long)]
        cap: Option<usize>,
        /// Print at most this many chains
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate the points of a projective line
    Points {
        #[arg(long)]
        ring: String,
        /// Print at most this many points
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

impl Geometry {
    fn args(&self) -> GeometryArgs {
        GeometryArgs { ring: self.ring.clone(), field: self.field.clone(), embed: self.embed.clone() }
    }
}

fn finish(cert: &Certificate, out: &Output, extra: &str) -> Result<(), CliError> {
    print!("{}{extra}", commands::render(cert));
    if let Some(path) = &out.emit {
        commands::write_output(path, &cert.to_json())?;
    }
    commands::verdict(cert)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { geometry, rep, cap, seed, timings, emit_dot, out } => {
            let args = AnalyzeArgs { geometry: geometry.args(), rep, cap, timings, seed };
            let cert = commands::analyze(&args)?;
            if let Some(path) = emit_dot {
                let (_, line) = commands::points(&geometry.ring)?;
                commands::write_output(&path, &line.distant_graph_dot())?;
            }
            finish(&cert, &out, "")
        }
        Command::VerifySuite { seed, only, list, timings, out } => {
            if list {
                for c in chaingeom_cli::suite::checks() {
                    println!("{:<24} {}", c.id, c.summary);
                }
                return Ok(());
            }
            let cert = commands::verify_suite(seed, only, timings)?;
            finish(&cert, &out, "")
        }
        Command::Morphism { geometry, target_ring, target_field, target_embed, kappa, h1, omega, strict, force, out } => {
            let source = geometry.args();
            let target = GeometryArgs {
                ring: target_ring.unwrap_or_else(|| source.ring.clone()),
                field: target_field.unwrap_or_else(|| source.field.clone()),
                embed: target_embed.unwrap_or_else(|| source.embed.clone()),
            };
            let args = MorphismArgs { source, target, kappa, h1, omega, strict, force };
            finish(&commands::morphism(&args)?, &out, "")
        }
        Command::Chains { geometry, cap, limit, out } => {
            let (cert, geom) = commands::chains(&geometry.args(), Some(cap.unwrap_or(DEFAULT_CHAIN_CAP)))?;
            let mut extra = String::new();
            for c in geom.chains().iter().take(limit) {
                let ids: Vec<usize> = c.points().iter().map(|p| p.index()).collect();
                extra.push_str(&format!("  {ids:?}\n"));
            }
            finish(&cert, &out, &extra)
        }
        Command::Points { ring, limit, emit_dot, out } => {
            let (cert, line) = commands::points(&ring)?;
            let r = line.ring();
            let mut extra = String::new();
            for p in line.ids().take(limit) {
                let (a, b) = line.rep(p);
                let m = |x| chaingeom_cli::certificate::mat_rows(r.matrix(x));
                extra.push_str(&format!("  {:>4}  {:?} {:?}\n", p.index(), m(a), m(b)));
            }
            if let Some(path) = emit_dot {
                commands::write_output(&path, &line.distant_graph_dot())?;
            }
            finish(&cert, &out, &extra)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
