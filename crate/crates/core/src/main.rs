use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zeroone_crn::catalog::{self, Family};
use zeroone_crn::network::{enumerate_networks, parse_network, FilterSet};
use zeroone_crn::pipeline::{
    analyze_network, count_conventions, parse_rational_list, report_json, run_pipeline, PipelineConfig, PipelineError, WORKERS_ENV,
};

const USAGE: u8 = 1;
const ANALYSIS: u8 = 2;

#[derive(Parser)]
#[command(name = "zocrn", version, about = "Steady-state analysis of zero-one mass-action networks")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one network file, optionally at given rate and total constants.
    Analyze(AnalyzeArgs),
    /// List or count zero-one networks.
    Enumerate(EnumerateArgs),
    /// Run the screening pipeline from a TOML or JSON config.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the bundled fixture networks.
    Catalog {
        /// Print one fixture in full.
        id: Option<String>,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Comma-separated rate constants, e.g. 1,3/2,0.5
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Comma-separated total constants.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    PositiveFlux,
    Nondegenerate,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    species: usize,
    #[arg(long)]
    reactions: usize,
    #[arg(long, value_enum, value_delimiter = ',')]
    filter: Vec<Filter>,
    #[arg(long)]
    rank: Option<usize>,
    /// Keep one network per species relabeling class.
    #[arg(long)]
    canonical: bool,
    /// Print only the number of networks.
    #[arg(long)]
    count: bool,
    /// Print counts under every counting convention.
    #[arg(long, conflicts_with = "count")]
    conventions: bool,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("zocrn: {msg}");
    ExitCode::from(code)
}

fn analyze(args: AnalyzeArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return fail(USAGE, format!("{}: {e}", args.file.display())),
    };
    let net = match parse_network(&text) {
        Ok(n) => n,
        Err(e) => return fail(USAGE, format!("{}: {e}", args.file.display())),
    };
    let parse = |s: &Option<String>| s.as_deref().map(parse_rational_list).transpose();
    let (kappa, c) = match (parse(&args.kappa), parse(&args.c)) {
        (Ok(k), Ok(c)) => (k, c),
        (Err(e), _) | (_, Err(e)) => return fail(USAGE, e),
    };
    match analyze_network(&net, kappa.as_deref(), c.as_deref()) {
        Ok(report) => {
            match args.format {
                Format::Text => {
                    println!("{}", report.network.to_string().trim_end());
                    println!("rank {}: {}", report.rank, report.summary);
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap()),
            }
            ExitCode::SUCCESS
        }
        Err(e @ PipelineError::Input(_)) => fail(USAGE, e),
        Err(e) => fail(ANALYSIS, e),
    }
}

fn enumerate(args: EnumerateArgs) -> ExitCode {
    if args.conventions {
        return match count_conventions(args.species, args.reactions) {
            Ok(c) => {
                println!("{}", serde_json::to_string_pretty(&c).unwrap());
                ExitCode::SUCCESS
            }
            Err(e) => fail(USAGE, e),
        };
    }
    let filters = FilterSet {
        rank: args.rank,
        positive_flux: args.filter.iter().any(|f| matches!(f, Filter::PositiveFlux)),
        nondegenerate: args.filter.iter().any(|f| matches!(f, Filter::Nondegenerate)),
        canonical: args.canonical,
    };
    let iter = match enumerate_networks(args.species, args.reactions, &filters) {
        Ok(it) => it,
        Err(e) => return fail(USAGE, e),
    };
    if args.count {
        println!("{}", iter.count());
    } else {
        for net in iter {
            println!("{}", net.reactions_line());
        }
    }
    ExitCode::SUCCESS
}

fn pipeline(config: PathBuf, workers: Option<usize>) -> ExitCode {
    let mut cfg = match PipelineConfig::from_path(&config) {
        Ok(c) => c,
        Err(e) => return fail(USAGE, e),
    };
    if workers.is_some() {
        cfg.workers = workers;
    }
    match run_pipeline(&cfg) {
        Ok(report) => {
            let mut json = report_json(&report);
            json.as_object_mut().unwrap().remove("records");
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => fail(ANALYSIS, e),
    }
}

fn catalog_cmd(id: Option<String>) -> ExitCode {
    match id {
        Some(id) => match catalog::get(&id) {
            Some(f) => {
                print!("{}", f.text);
                ExitCode::SUCCESS
            }
            None => fail(USAGE, format!("unknown fixture {id}")),
        },
        None => {
            for f in catalog::FIXTURES {
                let family = match f.family {
                    Family::G1 => "G1",
                    Family::G2 => "G2",
                    Family::G3 => "G3",
                    Family::Example => "example",
                };
                let n = f.network();
                println!("{:<20} {:<8} {:>2} reactions  {}", f.id, family, n.num_reactions(), f.description);
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            return fail(USAGE, "worker count must be positive");
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Pipeline { config } => pipeline(config, cli.workers),
        Command::Catalog { id } => catalog_cmd(id),
    }
}
