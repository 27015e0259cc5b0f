//! Command-line front end: witness synthesis, index certification, qubit
//! channel tooling and brute-force oracles, all emitting JSON on stdout
//! (diagnostics on stderr) with a stable exit-code contract:
//!
//! - 0 success (for `index`: verdict primitive)
//! - 1 I/O, parse or internal numeric failure
//! - 2 construction failure (witness violation, equal angles, degenerate
//!   overlap)
//! - 3 map not positive, 4 map not primitive, 5 ambiguous margin
//! - 64 usage errors

use ballprim::certify::{CertifyOptions, Verdict};
use ballprim::cone::{Subsphere, Tolerances};
use ballprim::error::Error;
use ballprim::jsonio::{
    certificate_to_json, channel_from_json, channel_to_json, map_input_from_json, witness_to_json,
    MapInput,
};
use ballprim::oracle::{brute_contact_dim, brute_sphere_max};
use ballprim::qubit::{bloch_to_qubit_map, channel_index, channel_to_bloch, choi_cp_check};
use ballprim::{primitivity_index_with, synthesize, PrimitivityCertificate};
use clap::{Parser, Subcommand};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ballprim",
    version,
    about = "Certify primitivity indices of affine self-maps of the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an extremal map of index n + 1 in dimension n, with its orbit
    /// witness.
    Synthesize {
        /// Ball dimension (n >= 1).
        #[arg(long)]
        dim: usize,
        /// Contraction parameter in (0, 1); chosen automatically if omitted.
        #[arg(long)]
        c: Option<f64>,
        /// Also write the witness JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the primitivity index of an affine ball map (bare map JSON
    /// or witness JSON; a witness registers its orbit as contact
    /// witnesses).
    Index {
        /// Input file ("-" for stdin).
        #[arg(long)]
        map: PathBuf,
        /// Iteration cap (defaults to n + 1, which always decides).
        #[arg(long)]
        max_iter: Option<usize>,
        /// Additionally emit per-iterate chain data as CSV.
        #[arg(long)]
        chain: bool,
    },
    /// Qubit channel commands.
    Qubit {
        #[command(subcommand)]
        cmd: QubitCmd,
    },
    /// Brute-force oracles (seeded, deterministic).
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum QubitCmd {
    /// Emit the two-Kraus channel of primitivity index 3 as JSON.
    Build {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Certify a channel's index through its Bloch-ball action.
    Index {
        /// Channel JSON file (stdin if omitted).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Report the minimal Choi eigenvalue and complete positivity of a
    /// channel (or of a Bloch-ball map lifted to qubit space).
    Choi {
        /// Channel or ball-map JSON file (stdin if omitted).
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Multistart gradient-ascent estimate of the sphere maximum.
    SphereMax {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical-rank estimate of a contact set's affine dimension.
    ContactDim {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EX_USAGE: u8 = 64;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::WitnessViolation(_)
        | Error::SearchExhausted { .. }
        | Error::EqualAngles
        | Error::DegenerateOverlap { .. } => 2,
        Error::NotPositive { .. } => 3,
        Error::NotPrimitive => 4,
        Error::AmbiguousMargin { .. } => 5,
        Error::BadAngles { .. } => EX_USAGE,
        _ => 1,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(e))
}

fn read_input(path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_stdin_or(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => read_input(p),
        None => read_input(Path::new("-")),
    }
}

/// Latitude of a contact set: arcsine of the distance from the ball's
/// center to the contact subsphere's plane. Empty for an empty contact.
fn contact_latitude(contact: &Subsphere) -> String {
    match contact {
        Subsphere::Empty => String::new(),
        Subsphere::NonEmpty { center, .. } => {
            format!("{}", center.norm().min(1.0).asin())
        }
    }
}

fn emit_certificate(cert: &PrimitivityCertificate, chain: bool) -> ExitCode {
    println!("{}", certificate_to_json(cert));
    if chain {
        println!("k,aff_dim,max_norm,contact_latitude");
        for step in &cert.chain {
            println!(
                "{},{},{},{}",
                step.k,
                step.aff_dim(),
                step.max_norm,
                contact_latitude(&step.contact)
            );
        }
    }
    match cert.verdict {
        Verdict::Primitive => ExitCode::SUCCESS,
        Verdict::NotPositive => ExitCode::from(3),
        Verdict::NotPrimitive => ExitCode::from(4),
    }
}

fn cmd_synthesize(dim: usize, c: Option<f64>, out: Option<PathBuf>) -> ExitCode {
    if dim == 0 {
        eprintln!("error: --dim must be at least 1");
        return ExitCode::from(EX_USAGE);
    }
    let witness = match synthesize(dim, c) {
        Ok(w) => w,
        Err(e) => return fail(&e),
    };
    let json = witness_to_json(&witness);
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, format!("{json}\n")) {
            return fail(&Error::Io(e));
        }
    }
    println!("{json}");
    eprintln!("index = {}", witness.index);
    ExitCode::SUCCESS
}

fn cmd_index(map: PathBuf, max_iter: Option<usize>, chain: bool) -> ExitCode {
    let text = match read_input(&map) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let (phi, witnesses) = match map_input_from_json(&text) {
        Ok(MapInput::Bare(m)) => (m, Vec::new()),
        Ok(MapInput::Witness(w)) => {
            let pts = w
                .points
                .iter()
                .filter(|p| (p.norm() - 1.0).abs() <= 1e-6)
                .cloned()
                .collect();
            (w.map, pts)
        }
        Err(e) => return fail(&e),
    };
    let opts = CertifyOptions {
        tolerances: Tolerances::default(),
        max_iterations: max_iter,
        contact_witnesses: witnesses,
    };
    match primitivity_index_with(&phi, &opts) {
        Ok(cert) => emit_certificate(&cert, chain),
        Err(e) => fail(&e),
    }
}

fn cmd_qubit(cmd: QubitCmd) -> ExitCode {
    match cmd {
        QubitCmd::Build { alpha, beta } => match ballprim::wielandt_channel(alpha, beta) {
            Ok(ch) => {
                println!("{}", channel_to_json(&ch));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        QubitCmd::Index { map } => {
            let text = match read_stdin_or(&map) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let ch = match channel_from_json(&text) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match channel_index(&ch) {
                Ok(cert) => emit_certificate(&cert, false),
                Err(e) => fail(&e),
            }
        }
        QubitCmd::Choi { map } => {
            let text = match read_stdin_or(&map) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            // A channel serializes under "kraus"; anything else is read as
            // a Bloch-ball map (bare or witness) and lifted.
            let qmap = if text.contains("\"kraus\"") {
                channel_from_json(&text)
                    .and_then(|ch| channel_to_bloch(&ch))
                    .and_then(|bloch| bloch_to_qubit_map(&bloch))
            } else {
                map_input_from_json(&text).and_then(|input| match input {
                    MapInput::Bare(m) => bloch_to_qubit_map(&m),
                    MapInput::Witness(w) => bloch_to_qubit_map(&w.map),
                })
            };
            match qmap {
                Ok(q) => {
                    let (is_cp, min_eig) = choi_cp_check(&q);
                    println!(
                        "{}",
                        serde_json::json!({
                            "is_cp": is_cp,
                            "min_choi_eigenvalue": min_eig,
                        })
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}

fn cmd_oracle(cmd: OracleCmd) -> ExitCode {
    let load = |path: &PathBuf| -> Result<ballprim::AffineBallMap, Error> {
        let text = read_input(path)?;
        match map_input_from_json(&text)? {
            MapInput::Bare(m) => Ok(m),
            MapInput::Witness(w) => Ok(w.map),
        }
    };
    match cmd {
        OracleCmd::SphereMax { map, samples, seed } => match load(&map) {
            Ok(phi) => {
                let value = brute_sphere_max(&phi, samples, seed);
                println!("{}", serde_json::json!({ "value": value }));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        OracleCmd::ContactDim {
            map,
            k,
            samples,
            seed,
        } => match load(&map).and_then(|phi| brute_contact_dim(&phi, k, samples, seed)) {
            Ok(dim) => {
                println!("{}", serde_json::json!({ "aff_dim": dim }));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Synthesize { dim, c, out } => cmd_synthesize(dim, c, out),
        Cmd::Index {
            map,
            max_iter,
            chain,
        } => cmd_index(map, max_iter, chain),
        Cmd::Qubit { cmd } => cmd_qubit(cmd),
        Cmd::Oracle { cmd } => cmd_oracle(cmd),
    }
}
