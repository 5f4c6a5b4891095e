use clap::{Parser, Subcommand, ValueEnum};
use het5::dsl::AlgebraSource;
use het5::error::Error;
use het5::heterotic::classify_probe;
use het5::report::{
    algebra_with_instanton_params, anomaly_report, build_connection, check_report, conn_name,
    curvature_report, full_report, motion_report, pontrjagin_report, probe_report, ConnSelector,
    Report,
};
use het5::su2::HeteroticBackground;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact symbolic checks for SU(2)-structures and heterotic identities on
/// 5-dimensional Lie algebras given by invariant structure equations.
#[derive(Parser)]
#[command(name = "het5", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run structural checks on an algebra file.
    Check {
        input: PathBuf,
        /// Which checks to run.
        #[arg(long, default_value = "all", value_parser = ["jacobi", "structure", "susy", "all"])]
        what: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the curvature 2-form table of a connection.
    Curvature {
        input: PathBuf,
        /// Connection selector: lc | plus | minus | inst:L,M,T.
        #[arg(long, default_value = "plus")]
        conn: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the normalised Pontrjagin 4-form P = 8 pi^2 p_1.
    Pontrjagin {
        input: PathBuf,
        #[arg(long, default_value = "plus")]
        conn: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the anomaly cancellation for alpha'.
    Anomaly {
        input: PathBuf,
        #[arg(long, default_value = "plus")]
        conn: String,
        /// Instanton parameters L,M,T (rationals or fresh symbols).
        #[arg(long, default_value = "lambda,mu,tau")]
        inst: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the equations of motion at the solved alpha'.
    Motion {
        input: PathBuf,
        #[arg(long, default_value = "plus")]
        conn: String,
        #[arg(long, default_value = "lambda,mu,tau")]
        inst: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification report.
    Report {
        input: PathBuf,
        #[arg(long, default_value = "plus")]
        conn: String,
        #[arg(long, default_value = "lambda,mu,tau")]
        inst: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the general structure-equation ansatz for counterexamples.
    Probe {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_conn(s: &str) -> Result<ConnSelector, Error> {
    match s {
        "lc" => Ok(ConnSelector::LeviCivita),
        "plus" => Ok(ConnSelector::Plus),
        "minus" => Ok(ConnSelector::Minus),
        _ => {
            if let Some(rest) = s.strip_prefix("inst:") {
                let (l, m, t) = parse_triple(rest)?;
                Ok(ConnSelector::Instanton(l, m, t))
            } else {
                Err(Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("bad connection selector `{s}`; use lc|plus|minus|inst:L,M,T"),
                })
            }
        }
    }
}

fn parse_triple(s: &str) -> Result<(String, String, String), Error> {
    let parts: Vec<&str> = s.split(',').map(|p| p.trim()).collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse {
            line: 0,
            col: 0,
            msg: format!("expected three comma-separated values, got `{s}`"),
        });
    }
    Ok((parts[0].into(), parts[1].into(), parts[2].into()))
}

fn load(path: &PathBuf) -> Result<AlgebraSource, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        col: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    AlgebraSource::parse(&text)
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> Result<(), Error> {
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, &rendered).map_err(|e| Error::Parse {
            line: 0,
            col: 0,
            msg: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Check { input, what, format, out } => {
            let src = load(&input)?;
            let report = check_report(&src, &what)?;
            emit(&report, format, out.as_ref())?;
            Ok(report.pass())
        }
        Command::Curvature { input, conn, format, out } => {
            let src = load(&input)?;
            let sel = parse_conn(&conn)?;
            let (alg, bg) = algebra_and_background(&src, &sel)?;
            let c = build_connection(&alg, &sel, bg.as_ref())?;
            let report = curvature_report(&alg, &c, &conn_name(&sel));
            emit(&report, format, out.as_ref())?;
            Ok(true)
        }
        Command::Pontrjagin { input, conn, format, out } => {
            let src = load(&input)?;
            let sel = parse_conn(&conn)?;
            let (alg, bg) = algebra_and_background(&src, &sel)?;
            let c = build_connection(&alg, &sel, bg.as_ref())?;
            let report = pontrjagin_report(&alg, &c, &conn_name(&sel));
            emit(&report, format, out.as_ref())?;
            Ok(true)
        }
        Command::Anomaly { input, conn, inst, format, out } => {
            let src = load(&input)?;
            let sel = parse_conn(&conn)?;
            let inst = parse_triple(&inst)?;
            let report = anomaly_report(&src, &sel, &inst)?;
            emit(&report, format, out.as_ref())?;
            Ok(report.pass())
        }
        Command::Motion { input, conn, inst, format, out } => {
            let src = load(&input)?;
            let sel = parse_conn(&conn)?;
            let inst = parse_triple(&inst)?;
            let report = motion_report(&src, &sel, &inst)?;
            emit(&report, format, out.as_ref())?;
            Ok(report.pass())
        }
        Command::Report { input, conn, inst, format, out } => {
            let src = load(&input)?;
            let sel = parse_conn(&conn)?;
            let inst = parse_triple(&inst)?;
            let report = full_report(&src, &sel, &inst)?;
            emit(&report, format, out.as_ref())?;
            Ok(report.pass())
        }
        Command::Probe { samples, seed, format, out } => {
            let p = classify_probe(samples, seed);
            let report = probe_report(&p);
            emit(&report, format, out.as_ref())?;
            Ok(report.pass())
        }
    }
}

/// Instanton-free helper for verbs that only need a connection.
fn algebra_and_background(
    src: &AlgebraSource,
    sel: &ConnSelector,
) -> Result<(het5::liealg::LieAlgebra, Option<HeteroticBackground>), Error> {
    let inst = match sel {
        ConnSelector::Instanton(l, m, t) => (l.clone(), m.clone(), t.clone()),
        _ => ("0".to_string(), "0".to_string(), "0".to_string()),
    };
    let alg = algebra_with_instanton_params(src, &inst)?;
    let bg = match src.structure {
        Some(_) => {
            let s = het5::report::structure_of(src, &alg)?;
            Some(HeteroticBackground::new(alg.clone(), s)?)
        }
        None => None,
    };
    Ok((alg, bg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli)));
    match outcome {
        Ok(Ok(true)) => ExitCode::from(0),
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e @ (Error::Parse { .. } | Error::MissingStructure))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(Err(e @ Error::NoAlphaPrime(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(_) => {
            eprintln!("error: internal invariant violation");
            ExitCode::from(3)
        }
    }
}
