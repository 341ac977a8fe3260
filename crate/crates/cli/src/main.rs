use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kradius::bounds::bounds;
use kradius::search::{exact_search, SearchStatus, DEFAULT_NODE_BUDGET, MAX_SEARCH_ALPHABET};
use kradius::sequence::verify_with_radius;
use kradius::{
    construct, io as seqio, verify, BuildOptions, Error, QChoice, Strategy, VerifyPolicy,
};

/// Largest alphabet searched without `--allow-long`.
const QUICK_SEARCH_ALPHABET: usize = 10;

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "kradius",
    version,
    about = "Build, check and bound k-radius sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a k-radius sequence and write it out.
    Construct {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long, default_value = "prime")]
        q_choice: QChoice,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write ids `n/2 + v` as `_v` in the text format.
        #[arg(long)]
        show_underlines: bool,
    },
    /// Check a sequence file (`-` for standard input).
    Verify {
        file: String,
        /// Radius to check instead of the one in the file.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the known bounds on the shortest length.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Find the shortest length exactly by branch and bound.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Node budget; scientific notation such as `1e6` is accepted.
        #[arg(long, value_parser = parse_budget, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Stop once every length up to this one is refuted.
        #[arg(long)]
        length_cap: Option<u64>,
        /// Permit alphabets above the quick-search size.
        #[arg(long)]
        allow_long: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build and time a grid of instances.
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u32).range(1..))]
        n_list: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "auto")]
        strategies: Vec<Strategy>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
}

fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return (v > 0)
            .then_some(v)
            .ok_or_else(|| "budget must be positive".into());
    }
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(v.is_finite() && v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64) {
        return Err(format!("'{s}' is not a positive whole number"));
    }
    Ok(v as u64)
}

/// A failure carrying the exit status it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConstructionBug(_) => EXIT_BUG,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn cmd_construct(
    n: usize,
    k: usize,
    strategy: Strategy,
    q_choice: QChoice,
    out: Option<PathBuf>,
    format: Format,
    show_underlines: bool,
) -> Result<u8, Failure> {
    let options = BuildOptions {
        strategy,
        q_choice,
        verify: VerifyPolicy::Auto,
    };
    let (seq, plan) = construct(n, k, &options)?;
    let mut body = match format {
        Format::Text => seqio::to_text(&seq, show_underlines),
        Format::Json => seqio::to_json(&seq),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    let trace: Vec<String> = plan
        .trace
        .iter()
        .map(|r| {
            let mut s = format!("{}(n={}, k={}", r.strategy, r.n, r.k);
            for (name, v) in [("q", r.q), ("p", r.p), ("block", r.block)] {
                if let Some(v) = v {
                    s.push_str(&format!(", {name}={v}"));
                }
            }
            s + ")"
        })
        .collect();
    eprintln!("length: {}", seq.len());
    eprintln!("trace: {}", trace.join(" -> "));
    eprintln!("lower bound: {}", bounds(n, k).best_lower());
    Ok(0)
}

fn cmd_verify(file: &str, k: Option<usize>, format: Format) -> Result<u8, Failure> {
    let text = if file == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(file).map_err(|e| usage(format!("{file}: {e}")))?
    };
    let seq = seqio::parse_any(&text)?;
    let report = match k {
        Some(k) => verify_with_radius(&seq, k),
        None => verify(&seq),
    };
    match format {
        Format::Json => println!("{}", to_json(&report)),
        Format::Text => {
            println!("n: {}  k: {}  length: {}", report.n, report.k, seq.len());
            println!(
                "covered pairs: {}/{}",
                report.covered_pairs, report.total_pairs
            );
            println!(
                "k-radius: {}",
                if report.is_k_radius { "yes" } else { "no" }
            );
            for (a, b) in &report.uncovered_witnesses {
                println!("uncovered: {a} {b}");
            }
            if report.truncated {
                println!("(witness list truncated)");
            }
        }
    }
    Ok(if report.is_k_radius { 0 } else { EXIT_FAILS })
}

fn cmd_bound(n: usize, k: usize, format: Format) -> Result<u8, Failure> {
    let b = bounds(n, k);
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                bounds: &'a kradius::bounds::BoundSet,
                best_lower: u64,
                best_upper: Option<u64>,
            }
            println!(
                "{}",
                to_json(&Out {
                    bounds: &b,
                    best_lower: b.best_lower(),
                    best_upper: b.best_upper(),
                })
            );
        }
        Format::Text => {
            let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            println!("general_lower {}", b.general_lower);
            println!("mod4_lower {}", opt(b.mod4_lower));
            println!("ghosh_exact {}", opt(b.ghosh_exact));
            println!("large_k_exact {}", opt(b.large_k_exact));
            println!("jl_upper {}", opt(b.jl_upper));
            println!("best_lower {}", b.best_lower());
            println!("best_upper {}", opt(b.best_upper()));
        }
    }
    Ok(0)
}

fn cmd_search(
    n: usize,
    k: usize,
    budget: u64,
    length_cap: Option<u64>,
    allow_long: bool,
    format: Format,
) -> Result<u8, Failure> {
    if n > QUICK_SEARCH_ALPHABET && !allow_long {
        return Err(usage(format!(
            "n={n} may take a long time; pass --allow-long to search alphabets above {QUICK_SEARCH_ALPHABET} \
             (hard limit {MAX_SEARCH_ALPHABET})"
        )));
    }
    let r = exact_search(n, k, budget, length_cap)?;
    match format {
        Format::Json => println!("{}", to_json(&r)),
        Format::Text => {
            let status = match r.status {
                SearchStatus::Optimal => "optimal",
                SearchStatus::LowerBoundOnly => "lower_bound_only",
                SearchStatus::BudgetExhausted => "budget_exhausted",
            };
            println!("status: {status}");
            if let Some(best) = r.best_length {
                println!("best_length: {best}");
            }
            println!("proven_lower: {}", r.proven_lower);
            println!("nodes: {}", r.nodes_explored);
            println!("elapsed: {:.3}s", r.elapsed.as_secs_f64());
            if let Some(w) = r
                .witness
                .as_ref()
                .filter(|_| r.status == SearchStatus::Optimal)
            {
                let ids: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
                println!("witness: {}", ids.join(","));
            }
        }
    }
    Ok(if r.status == SearchStatus::Optimal {
        0
    } else {
        EXIT_FAILS
    })
}

#[derive(Debug, Serialize)]
struct BenchRow {
    n: usize,
    k: usize,
    strategy: Strategy,
    q_used: Option<usize>,
    length: Option<usize>,
    lower_bound: u64,
    ratio: Option<f64>,
    build_time: Option<f64>,
    verify_time: Option<f64>,
    error: Option<String>,
}

fn bench_row(n: usize, k: usize, strategy: Strategy) -> BenchRow {
    let mut row = BenchRow {
        n,
        k,
        strategy,
        q_used: None,
        length: None,
        lower_bound: bounds(n, k).best_lower(),
        ratio: None,
        build_time: None,
        verify_time: None,
        error: None,
    };
    let options = BuildOptions {
        strategy,
        verify: VerifyPolicy::Never,
        ..BuildOptions::default()
    };
    let started = Instant::now();
    let built = construct(n, k, &options);
    row.build_time = Some(started.elapsed().as_secs_f64());
    let (seq, plan) = match built {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.q_used = plan.top_q();
    row.length = Some(seq.len());
    row.ratio = Some(seq.len() as f64 / ((n * n) as f64 / (2 * k) as f64));
    let started = Instant::now();
    let ok = verify(&seq).is_k_radius;
    row.verify_time = Some(started.elapsed().as_secs_f64());
    if !ok {
        row.error = Some("output is not k-radius".into());
    } else if (seq.len() as u64) < row.lower_bound {
        row.error = Some("length below the lower bound".into());
    }
    row
}

fn cmd_bench(
    k: usize,
    n_list: &[usize],
    strategies: &[Strategy],
    format: TableFormat,
) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut csv = match format {
        TableFormat::Csv => Some(csv::Writer::from_writer(stdout.lock())),
        TableFormat::Json => None,
    };
    let mut failed = false;
    for &strategy in strategies {
        for &n in n_list {
            let row = bench_row(n, k, strategy);
            failed |= row.error.is_some();
            match csv.as_mut() {
                Some(w) => {
                    w.serialize(&row).map_err(|e| usage(e.to_string()))?;
                    w.flush()?;
                }
                None => {
                    let mut out = stdout.lock();
                    writeln!(out, "{}", to_json(&row))?;
                    out.flush()?;
                }
            }
        }
    }
    Ok(if failed { EXIT_FAILS } else { 0 })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Construct {
            n,
            k,
            strategy,
            q_choice,
            out,
            format,
            show_underlines,
        } => cmd_construct(
            n as usize,
            k as usize,
            strategy,
            q_choice,
            out,
            format,
            show_underlines,
        ),
        Command::Verify { file, k, format } => cmd_verify(&file, k.map(|k| k as usize), format),
        Command::Bound { n, k, format } => cmd_bound(n as usize, k as usize, format),
        Command::Search {
            n,
            k,
            budget,
            length_cap,
            allow_long,
            format,
        } => cmd_search(
            n as usize, k as usize, budget, length_cap, allow_long, format,
        ),
        Command::Bench {
            k,
            n_list,
            strategies,
            format,
        } => {
            let n_list: Vec<usize> = n_list.into_iter().map(|n| n as usize).collect();
            cmd_bench(k as usize, &n_list, &strategies, format)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
