use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use coideal_schur::cli::{parse_field, parse_order, run, JobConfig};
use coideal_schur::reptype::Kind;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Rational,
    Gaussian,
    Symbolic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    A,
    B,
}

/// Exact verification jobs for type B Hecke and coideal q-Schur algebras.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// dim, centralizer, verify-iso, verify-dj, qcoord-check, cell-check, reptype or conditions
    #[arg(long)]
    task: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Rational ("2", "-1/3"), Gaussian ("1+i") or "symbolic".
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long = "Q", default_value = "3")]
    big_q: String,
    /// Inferred from --q/--Q when omitted.
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads for verify-dj.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Run even when n^d exceeds 4096.
    #[arg(long)]
    force: bool,
    /// Characteristic (reptype).
    #[arg(long, default_value_t = 0)]
    p: u32,
    /// Order of q^2, or "generic" (reptype); read off --q when omitted.
    #[arg(long)]
    l: Option<String>,
    #[arg(long, value_enum, default_value = "b")]
    kind: KindArg,
}

fn config(args: &Args) -> coideal_schur::error::Result<JobConfig> {
    let field = args.field.map(|f| match f {
        FieldArg::Rational => "rational",
        FieldArg::Gaussian => "gaussian",
        FieldArg::Symbolic => "symbolic",
    });
    let mut cfg = JobConfig::new(
        args.task.parse()?,
        args.n,
        args.d,
        parse_field(field, &args.q, &args.big_q)?,
    );
    cfg.p = args.p;
    cfg.l = args.l.as_deref().map(parse_order).transpose()?;
    cfg.kind = match args.kind {
        KindArg::A => Kind::A,
        KindArg::B => Kind::B,
    };
    cfg.parallel = args.parallel;
    cfg.force = args.force;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match config(&args).and_then(|c| run(&c)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.render();
    match &args.json {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
