//! isoq: decide, construct, and audit isometries of rational quadratic
//! spaces with a prescribed torsion module for the induced k[X] action.
//!
//! Every subcommand reads JSON and writes one JSON value to stdout.
//! Exit codes: 0 for a completed run, 2 for input errors; `decide
//! --exit-verdict` maps YES/NO/UNDECIDED to 0/1/3.

mod dto;
mod oracle;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;

use isoq_core::arith::{Place, SquareClass};
use isoq_core::globdec::{self, DEFAULT_PRIME_BOUND};
use isoq_core::locdec::{self, LocalVerdict};
use isoq_core::transfer::{self, TransferError};

#[derive(Parser)]
#[command(
    name = "isoq",
    version,
    about = "isometries of rational quadratic spaces with a prescribed module"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the form admits an isometry with the given module,
    /// globally or at a single place.
    Decide {
        /// Request JSON file with "gram" and "module"; "-" reads stdin.
        request: String,
        /// Restrict the question to one completion: a prime or "inf".
        #[arg(long)]
        place: Option<String>,
        /// Cutoff for the auxiliary prime search in the global decision.
        #[arg(long = "prime-bound")]
        prime_bound: Option<u64>,
        /// Map YES/NO/UNDECIDED to exit codes 0/1/3.
        #[arg(long = "exit-verdict")]
        exit_verdict: bool,
    },
    /// Build a certified (gram, isometry) pair carrying the given module.
    Construct {
        /// Module JSON file ({"components": [...]}, or a request wrapping
        /// it); "-" reads stdin.
        module: String,
        /// Target determinant, as a rational string.
        #[arg(long, allow_hyphen_values = true)]
        det: Option<String>,
    },
    /// Check a certificate: symmetry, nondegeneracy, the isometry law, and
    /// the module claim.
    Verify {
        /// Certificate JSON file; "-" reads stdin.
        certificate: String,
    },
    /// Print the classifying invariants of a form.
    Invariants {
        /// Request JSON file with "gram", or a bare matrix; "-" reads stdin.
        gram: String,
    },
    /// Exhaustive finite-field check of the decision procedure.
    #[command(name = "oracle-ff")]
    OracleFf {
        /// Field size, one of 3, 5, 7.
        #[arg(long)]
        q: u64,
        /// Form dimension, at most 3 (4 with --slow).
        #[arg(long)]
        dim: usize,
        /// Allow dimension 4.
        #[arg(long)]
        slow: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Decide { request, place, prime_bound, exit_verdict } => {
            run_decide(&request, place, prime_bound, exit_verdict)
        }
        Cmd::Construct { module, det } => run_construct(&module, det),
        Cmd::Verify { certificate } => run_verify(&certificate),
        Cmd::Invariants { gram } => run_invariants(&gram),
        Cmd::OracleFf { q, dim, slow } => run_oracle(q, dim, slow),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {}", e))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, String> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {}", path, e))
}

fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("output serializes"));
}

fn local_verdict_dto(v: &LocalVerdict) -> dto::VerdictDto {
    dto::VerdictDto {
        answer: v.answer.to_string(),
        reason: v.reason.map(|r| r.to_string()),
        certificate: None,
        search_bound: None,
    }
}

fn run_decide(
    request: &str,
    place: Option<String>,
    prime_bound: Option<u64>,
    exit_verdict: bool,
) -> Result<ExitCode, String> {
    let req: dto::Request = read_json(request)?;
    let gram = req.gram.as_ref().ok_or("request is missing \"gram\"")?;
    let module = req.module.as_ref().ok_or("request is missing \"module\"")?;
    let space = dto::parse_gram(gram)?;
    let spec = dto::parse_module(module)?;
    let place = match place.or(req.place) {
        Some(s) => Some(dto::parse_place(&s)?),
        None => None,
    };
    let bound = prime_bound.or(req.prime_bound).unwrap_or(DEFAULT_PRIME_BOUND);

    let out = match place {
        None => {
            let v = globdec::decide_global_bounded(&space, &spec, bound)
                .map_err(|e| e.to_string())?;
            dto::VerdictDto {
                answer: v.answer.to_string(),
                reason: v.reason.map(|r| r.to_string()),
                certificate: v.certificate.as_ref().map(dto::certificate_dto),
                search_bound: v.search_bound,
            }
        }
        Some(Place::Real) => {
            let sig = space.diagonal_form().signature();
            let v = locdec::decide_real(sig, &spec).map_err(|e| e.to_string())?;
            local_verdict_dto(&v)
        }
        Some(Place::Prime(p)) => {
            let v = locdec::decide_padic(&space, &spec, p).map_err(|e| e.to_string())?;
            local_verdict_dto(&v)
        }
    };
    emit(&out);
    if !exit_verdict {
        return Ok(ExitCode::SUCCESS);
    }
    Ok(match out.answer.as_str() {
        "YES" => ExitCode::SUCCESS,
        "NO" => ExitCode::from(1),
        _ => ExitCode::from(3),
    })
}

fn run_construct(module: &str, det: Option<String>) -> Result<ExitCode, String> {
    let text = read_input(module)?;
    let req: dto::Request =
        serde_json::from_str(&text).map_err(|e| format!("{}: {}", module, e))?;
    let (module_dto, req_det) = match req.module {
        Some(m) => (m, req.det),
        None => {
            let m: dto::ModuleDto = serde_json::from_str(&text)
                .map_err(|_| format!("{}: no \"module\" in the input", module))?;
            (m, None)
        }
    };
    let spec = dto::parse_module(&module_dto)?;

    let cert = match det.or(req_det) {
        Some(ds) => {
            let d = dto::parse_rational(&ds)?;
            match transfer::construct_with_det(&spec, &d) {
                Ok(c) => c,
                Err(TransferError::DetObstruction { forced, .. }) => {
                    return Err(format!(
                        "determinant forced to {}",
                        SquareClass::of(&forced)
                    ));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        None => {
            // no target given: try 1, then whatever class the module forces
            let one = BigRational::one();
            match transfer::construct_with_det(&spec, &one) {
                Ok(c) => c,
                Err(TransferError::DetObstruction { forced, .. }) => {
                    transfer::construct_with_det(&spec, &forced)
                        .map_err(|e| e.to_string())?
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    };
    debug_assert!(transfer::verify(&cert).is_ok());
    emit(&dto::certificate_dto(&cert));
    Ok(ExitCode::SUCCESS)
}

fn run_verify(certificate: &str) -> Result<ExitCode, String> {
    let cdto: dto::CertificateDto = read_json(certificate)?;
    let out = match dto::parse_certificate(&cdto).and_then(|c| {
        transfer::verify(&c)
    }) {
        Ok(()) => dto::VerifyDto { valid: true, error: None },
        Err(e) => dto::VerifyDto { valid: false, error: Some(e) },
    };
    emit(&out);
    Ok(ExitCode::SUCCESS)
}

fn run_invariants(gram: &str) -> Result<ExitCode, String> {
    let text = read_input(gram)?;
    let req: Result<dto::Request, _> = serde_json::from_str(&text);
    let rows = match req {
        Ok(r) if r.gram.is_some() => r.gram.unwrap(),
        _ => serde_json::from_str::<Vec<Vec<String>>>(&text)
            .map_err(|e| format!("{}: {}", gram, e))?,
    };
    let space = dto::parse_gram(&rows)?;
    let inv = space.invariants();

    let mut support = inv.finite_support();
    support.push(Place::Real);
    support.sort();
    let hasse = support
        .iter()
        .map(|&v| dto::PlaceSymbol { place: v.to_string(), hasse: inv.hasse(v) })
        .collect();

    let witt = inv.global_witt_index();
    let out = dto::InvariantsDto {
        dim: inv.dim(),
        det: space.det().to_string(),
        det_class: inv.det().to_string(),
        signature: [inv.signature().0, inv.signature().1],
        support: support.iter().map(|v| v.to_string()).collect(),
        hasse,
        global_witt_index: witt,
        hyperbolic: inv.dim() % 2 == 0 && witt == inv.dim() / 2,
    };
    emit(&out);
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(q: u64, dim: usize, slow: bool) -> Result<ExitCode, String> {
    let cap = if slow { 4 } else { 3 };
    if dim == 0 || dim > cap {
        return Err(format!(
            "dimension {} out of range (max {}{})",
            dim,
            cap,
            if slow { "" } else { "; pass --slow for 4" }
        ));
    }
    let report = oracle::run(q, dim)?;
    emit(&report);
    Ok(ExitCode::SUCCESS)
}
