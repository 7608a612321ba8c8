mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cohconf::suites::Suite;

use crate::output::Format;

const AFTER_HELP: &str = "\
Exit codes:
  0  success, every checked inequality holds
  1  an inequality failed; the witness is printed for reproduction
  2  input error (unreadable or malformed file, bad parameters, disconnected relation)
  3  construction infeasible (no set found, intransitive group, inhomogeneous closure)

CSV columns:
  verify      suite,instance,lhs,rhs,holds
  diameter    n,directed_diameter,undirected_diameter,girth,strongly_connected,connected
  scheme      mode,n,rank,certified,seeds_in_s_union
  search-hr   q,k,A,kA_size,covers,progression_x
  girthex     k,q,route,check,lhs,rhs,holds

Empty CSV cells stand for an infinite distance or an absent value.

File formats:
  edge list   first line n, then one `x y` pair per line (points 0..n-1)
  dense       first line n, then n rows of n characters 0/1
  generators  first line n, then one permutation per line as n images
  Lines starting with # are ignored.";

#[derive(Parser, Debug)]
#[command(name = "cohconf", version, about = "Relations, coherent configurations and diameter bounds on finite point sets", after_help = AFTER_HELP)]
struct Cli {
    /// Output format. `json` and `csv` go to --out when given, else stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,

    /// Write machine-format output here; a short summary still goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Orbits of a permutation group on pairs; input is a generators file.
    Orbit,
    /// Weisfeiler-Leman closure; inputs are relation files.
    Wl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Directed and undirected diameter, girth and connectivity of a relation.
    Diameter {
        /// Relation file (edge list or dense).
        input: PathBuf,
    },
    /// Build and certify a scheme from generators or seed relations.
    Scheme {
        #[arg(long, value_enum, default_value_t = Mode::Orbit)]
        mode: Mode,
        /// Generators file (orbit) or one or more relation files (wl).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Run a seeded verification suite and report one row per instance.
    ///
    /// Parameter meaning per suite, defaults in parentheses:
    ///
    ///   ruzsa      --n points (cycles 8,16,32,64), --trials triples (1000)
    ///
    ///   expand     --q max points (64), --k max |T| (8), --trials random larger T (1000)
    ///
    ///   commbound  --q max prime (512), --trials connection sets (200)
    ///
    ///   mains      --n max points (64), --trials random unions per scheme (4)
    ///
    ///   girthex    --q max prime (10000), --k girth (2), --trials steps per prime (4000)
    #[command(after_help = "CSV columns: suite,instance,lhs,rhs,holds")]
    Verify {
        /// One of ruzsa, expand, commbound, mains, girthex.
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Local search for A with A - A = Z_q and a small k-fold sumset.
    SearchHr {
        /// Prime modulus.
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Local-search steps.
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a Cayley graph of diameter at most 2 and directed girth at least k.
    Girthex {
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Try only this prime instead of scanning primes up to 10000.
        #[arg(long)]
        q: Option<u64>,
        /// Local-search steps per prime.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the final graph as an edge list here.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

/// Suite parameters; unset values take the suite default.
#[derive(clap::Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: cohconf::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sink = output::Sink::new(cli.format, cli.out);
    let result = match cli.command {
        Command::Diameter { input } => commands::diameter(&sink, &input),
        Command::Scheme { mode, inputs } => commands::scheme(&sink, mode, &inputs),
        Command::Verify { suite, params } => commands::verify(
            &sink,
            suite,
            &cohconf::suites::SuiteParams {
                n: params.n,
                q: params.q,
                k: params.k,
                trials: params.trials,
                seed: params.seed,
            },
        ),
        Command::SearchHr { q, k, trials, seed } => commands::search_hr(&sink, q, k, trials, seed),
        Command::Girthex {
            k,
            q,
            trials,
            seed,
            graph,
        } => commands::girthex(&sink, k, q, trials, seed, graph.as_deref()),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
