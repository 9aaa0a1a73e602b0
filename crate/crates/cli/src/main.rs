use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use hallforge::backend::Backend;
use hallforge::parse::parse_expr;
use hallforge::presented::{Algebra, Workbench};
use hallforge::quiver::{KClass, Quiver};
use hallforge::verify::{run_suite, SuiteConfig, DEFAULT_SEED, SUITES};
use hallforge::Error;

#[derive(Parser)]
#[command(name = "hallforge", version, about = "Exact Hall algebra workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Field {
    /// Quiver preset (a1, a2, a3, kronecker) or a quiver JSON file.
    #[arg(long, default_value = "a2")]
    quiver: String,
    /// Size of the prime field.
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Enumeration budget; defaults to HALLFORGE_MAX_ENUM or 10^7.
    #[arg(long)]
    max_enum: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and report pass/fail counts.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Normal form of an expression in a presented algebra.
    Mult {
        /// hd, hhd, d, dhm:<m>, dh, dhtw or dhce.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        field: Field,
    },
    /// The Hall number g^L_{MN} (N a subobject of L with quotient M).
    Hallnum {
        #[arg(long = "L")]
        l: String,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        #[command(flatten)]
        field: Field,
    },
    /// Isomorphism classes of a dimension vector.
    Classes {
        /// Comma-separated dimension vector, e.g. 1,1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dimvec: Vec<i64>,
        #[command(flatten)]
        field: Field,
    },
}

fn backend(f: &Field) -> hallforge::Result<Backend> {
    let quiver = if Path::new(&f.quiver).is_file() {
        let name = Path::new(&f.quiver).file_stem().and_then(|s| s.to_str()).unwrap_or("quiver");
        Quiver::from_json(name, &std::fs::read_to_string(&f.quiver)?)?
    } else {
        Quiver::preset(&f.quiver)?
    };
    match f.max_enum {
        Some(n) => Backend::with_budget(quiver, f.q, n),
        None => Backend::new(quiver, f.q),
    }
}

fn error_code(e: &Error) -> u8 {
    if e.is_resource() {
        3
    } else {
        2
    }
}

fn run(cmd: Cmd) -> hallforge::Result<u8> {
    match cmd {
        Cmd::Verify { suite, field, m, max_dim, out, json, threads, seed, samples } => {
            if !SUITES.contains(&suite.as_str()) && suite != "phi" {
                return Err(Error::Param(format!("unknown suite {suite}; known: {}", SUITES.join(", "))));
            }
            let b = Arc::new(backend(&field)?);
            let cfg = SuiteConfig { suite, m, max_dim, classes: None, seed, samples, threads };
            let report = run_suite(b, &cfg)?;
            if let Some(path) = out {
                std::fs::write(path, report.to_json())?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{}", report.summary());
                for f in &report.failures {
                    println!("FAIL {} [{}]\n  lhs: {}\n  rhs: {}", f.relation, f.params, f.lhs, f.rhs);
                }
            }
            Ok(report.exit_code() as u8)
        }
        Cmd::Mult { algebra, expr, field } => {
            let alg: Algebra = algebra.parse()?;
            let wb = Workbench::new(Arc::new(backend(&field)?));
            let x = parse_expr(&expr, alg, wb.backend())?;
            let nf = wb.normal_form(alg, &x)?;
            if nf.is_noncanonical() {
                eprintln!("warning: word outside two adjacent residues; normal form may not be canonical");
            }
            println!("{}", nf.render());
            Ok(0)
        }
        Cmd::Hallnum { l, m, n, field } => {
            let b = backend(&field)?;
            let (l, m, n) = (b.parse_object(&l)?, b.parse_object(&m)?, b.parse_object(&n)?);
            println!("{}", b.hall_number(&l, &m, &n)?);
            Ok(0)
        }
        Cmd::Classes { dimvec, field } => {
            let b = backend(&field)?;
            let d = KClass::from_slice(&dimvec);
            if d.len() != b.rank() || !d.is_dimvec() {
                return Err(Error::Param(format!("dimension vector {d} does not fit quiver {}", b.quiver().name())));
            }
            let reps = b.class_reps(&d)?;
            println!("{} isoclasses of dimension {d}", reps.len());
            for (id, rep) in b.iso_classes(&d)?.iter().zip(reps.iter()) {
                let maps: Vec<String> = rep.maps().iter().map(|f| format!("{:?}", f.to_rows())).collect();
                println!("{id}\t|Aut| = {}\tmaps = [{}]", b.aut_count(id)?, maps.join(", "));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
