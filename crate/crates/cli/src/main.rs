mod format;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icvp_core::betti;
use icvp_core::cache;
use icvp_core::genfun;
use icvp_core::report::big_list;
use icvp_core::verify::{self, Suite, VerifyParams};
use icvp_core::{Engine, Error, GroupType};
use serde_json::json;

use format::{latex_label, render, Format, Row};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FAIL: u8 = 3;

/// Intersection cohomology Poincaré polynomials of Vinberg–Popov varieties.
#[derive(Parser)]
#[command(name = "icvp", version)]
struct Cli {
    /// Persistent memo cache file.
    #[arg(long, global = true, env = "ICVP_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print P_G(t) for a group such as A4, G2 or A2+A2+B3.
    Poincare {
        spec: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Print P_1, …, P_nmax for the groups SL_n.
    Table {
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Run a verification suite and print one JSON report per check.
    Verify {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        /// Largest n for the cross-oracle.
        #[arg(long)]
        nmax: Option<usize>,
        /// t-degree cap for the functional equation and PLog checks.
        #[arg(long)]
        tmax: Option<usize>,
        /// u-degree cap for the functional equation and PLog checks.
        #[arg(long)]
        umax: Option<usize>,
        /// Largest i for the Betti closed-form and leading-term checks.
        #[arg(long)]
        imax: Option<usize>,
    },
    /// Binomial expansions of c_i(n), or one row c_i(n) with --ci.
    Betti {
        #[arg(long, default_value_t = 9)]
        imax: usize,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        ci: Option<usize>,
        #[arg(long, value_enum, default_value = "plain")]
        format: TableFormat,
    },
    /// Coefficients of Ψ(t,u), or of its plethystic logarithm with --plog.
    Genfun {
        #[arg(long)]
        plog: bool,
        #[arg(long, default_value_t = 20)]
        tmax: usize,
        #[arg(long, default_value_t = 8)]
        umax: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Inspect or delete the cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Show,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Plain,
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgs(_) | Error::InvalidGroup(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

/// `error: …` followed by the input with a caret under the offending character.
fn parse_diagnostic(input: &str, err: &Error) -> String {
    match err {
        Error::Parse { position, .. } => format!("error: {err}\n  {input}\n  {}^", " ".repeat(*position)),
        other => format!("error: {other}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = Engine::new();
    if let Some(path) = &cli.cache {
        if !matches!(cli.command, Command::Cache { .. }) {
            if let Err(e) = cache::load(engine.cache(), path) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INTERNAL);
            }
        }
    }
    let result = run(&cli, &engine);
    if let (Some(path), Ok(_)) = (&cli.cache, &result) {
        if !matches!(cli.command, Command::Cache { .. }) {
            if let Err(e) = cache::save(engine.cache(), path) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INTERNAL);
            }
        }
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(cli: &Cli, engine: &Engine) -> Result<u8, Failure> {
    match &cli.command {
        Command::Poincare { spec, format } => {
            let group: GroupType = spec
                .parse()
                .map_err(|e| Failure::Usage(parse_diagnostic(spec, &e)))?;
            let p = engine.ic_poincare(&group)?;
            let rows = [Row {
                label: latex_label(&group),
                group: &group,
                poly: &p,
            }];
            print!("{}", render(&rows, *format));
            Ok(0)
        }
        Command::Table { nmax, format } => {
            if *nmax < 1 {
                return Err(Failure::Usage("error: --nmax must be at least 1".into()));
            }
            let groups: Vec<GroupType> = (1..=*nmax).map(GroupType::sl).collect::<Result<_, _>>()?;
            let polys: Vec<_> = (1..=*nmax).map(|n| engine.sl(n)).collect::<Result<_, _>>()?;
            let rows: Vec<Row> = groups
                .iter()
                .zip(&polys)
                .enumerate()
                .map(|(i, (group, poly))| Row {
                    label: format!("P_{{{}}}(t)", i + 1),
                    group,
                    poly,
                })
                .collect();
            print!("{}", render(&rows, *format));
            Ok(0)
        }
        Command::Verify {
            suite,
            nmax,
            tmax,
            umax,
            imax,
        } => {
            let suite: Suite = suite.parse()?;
            let mut params = VerifyParams::default();
            if let Some(n) = nmax {
                params.cross_n_max = *n;
            }
            if let Some(t) = tmax {
                params.t_max = *t;
                params.plog_t_max = *t;
            }
            if let Some(u) = umax {
                params.u_max = *u;
                params.plog_u_max = *u;
            }
            if let Some(i) = imax {
                params.betti_i_max = (*i).min(verify::REFERENCE_BINOMIAL.len() - 1);
                params.leading_i_max = *i;
                params.betti_n_max = params.betti_n_max.max(betti::verification_limit(*i));
            }
            let reports = verify::run_suite(engine, suite, &params)?;
            for r in &reports {
                println!("{}", r.to_json());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            eprintln!("{suite}: {} checks, {failed} failed", reports.len());
            Ok(if failed == 0 { 0 } else { EXIT_FAIL })
        }
        Command::Betti { imax, nmax, ci, format } => match ci {
            Some(i) => betti_row(engine, *i, nmax.unwrap_or(21), *format),
            None => betti_expansions(engine, *imax, *nmax, *format),
        },
        Command::Genfun {
            plog,
            tmax,
            umax,
            format,
        } => {
            let series = if *plog {
                genfun::plog(engine, *tmax, *umax)?
            } else {
                genfun::psi(engine, *tmax, *umax)?
            };
            let text = match format {
                TableFormat::Csv => series.to_csv(),
                TableFormat::Json => format!("{}\n", series.to_json()),
                TableFormat::Plain => aligned(&series.to_csv()),
            };
            print!("{text}");
            Ok(0)
        }
        Command::Cache { action } => {
            let path = cli
                .cache
                .as_ref()
                .ok_or_else(|| Failure::Usage("error: no cache file; pass --cache PATH or set ICVP_CACHE".into()))?;
            match action {
                CacheAction::Show => {
                    let loaded = icvp_core::MemoCache::new();
                    let n = cache::load(&loaded, path)?;
                    println!("{}: {n} entries", path.display());
                    print!("{}", cache::format_entries(&loaded.snapshot()));
                }
                CacheAction::Clear => {
                    if path.exists() {
                        std::fs::remove_file(path).map_err(|e| Failure::Internal(e.to_string()))?;
                    }
                    println!("{}: cleared", path.display());
                }
            }
            Ok(0)
        }
    }
}

fn betti_row(engine: &Engine, i: usize, nmax: usize, format: TableFormat) -> Result<u8, Failure> {
    let start = i.max(1);
    if nmax < start {
        return Err(Failure::Usage(format!("error: --nmax must be at least {start}")));
    }
    let table = betti::c_table(engine, start, nmax)?;
    let values: Vec<_> = (start..=nmax).map(|n| table.c(i, n)).collect();
    let text = match format {
        TableFormat::Plain => {
            let cells: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            format!("{}\n", cells.join(","))
        }
        TableFormat::Json => format!("{}\n", json!({"i": i, "n_from": start, "values": big_list(&values)})),
        TableFormat::Csv => {
            let mut out = String::from("n,c\n");
            for (k, v) in values.iter().enumerate() {
                writeln!(out, "{},{v}", start + k).unwrap();
            }
            out
        }
    };
    print!("{text}");
    Ok(0)
}

fn betti_expansions(engine: &Engine, imax: usize, nmax: Option<usize>, format: TableFormat) -> Result<u8, Failure> {
    let needed = betti::verification_limit(imax);
    let nmax = nmax.unwrap_or(needed);
    if nmax < needed {
        return Err(Failure::Usage(format!(
            "error: expansions through i = {imax} need --nmax of at least {needed}"
        )));
    }
    let table = betti::c_table(engine, imax.max(1), nmax)?;
    let expansions = (0..=imax)
        .map(|i| betti::binomial_coeffs(&table, i))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        TableFormat::Plain => expansions
            .iter()
            .map(|e| {
                let cells: Vec<String> = e.coeffs.iter().map(|c| c.to_string()).collect();
                format!("a_{}: {}  (holds for n >= {})\n", e.i, cells.join(","), e.holds_from)
            })
            .collect(),
        TableFormat::Json => expansions
            .iter()
            .map(|e| {
                format!(
                    "{}\n",
                    json!({"i": e.i, "coeffs": big_list(&e.coeffs), "holds_from": e.holds_from, "verified_through": e.verified_through})
                )
            })
            .collect(),
        TableFormat::Csv => {
            let width = imax / 2 + 1;
            let mut out = String::from("i,holds_from");
            for k in 0..width {
                write!(out, ",a{k}").unwrap();
            }
            out.push('\n');
            for e in &expansions {
                write!(out, "{},{}", e.i, e.holds_from).unwrap();
                for k in 0..width {
                    write!(out, ",{}", e.coeffs.get(k).cloned().unwrap_or_default()).unwrap();
                }
                out.push('\n');
            }
            out
        }
    };
    print!("{text}");
    Ok(0)
}

/// Right-aligns the columns of a CSV table.
fn aligned(csv: &str) -> String {
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
