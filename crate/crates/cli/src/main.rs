//! Command-line front end: enumerate codebooks, decode received words, run
//! channel simulations with CSV output, and check the bundled golden
//! instances.

mod selftest;
mod simulate;
mod spec_file;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use mpcode::{
    cost_matrix_awgn, cost_matrix_qsc, decode_chebyshev, decode_memoryless, enumerate_codebook,
    min_distance, AwgnChannel, DecodeResult, Metric, QSymmetricChannel,
};

/// Exit code 2; bad arguments or malformed inputs.
/// Exit code 1; a decode, simulation or enumeration failure at runtime.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(String),
}

impl From<mpcode::Error> for CliError {
    fn from(e: mpcode::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "mpcode",
    version,
    about = "Multipermutation codes: enumeration, LP decoding and channel simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a codebook and print its size, minimum distances and the
    /// first few codewords
    Enumerate {
        /// JSON code description (see README for the schema)
        spec: PathBuf,
        /// Cap on the number of enumerated candidates
        #[arg(long, default_value_t = 10_000_000)]
        max: u128,
        /// How many codewords to print
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Decode one received word and print the result as JSON
    Decode {
        /// JSON code description
        spec: PathBuf,
        /// Channel model: "awgn SIGMA", "qsc P" or "chebyshev"
        #[arg(long, num_args = 1..=2, required = true)]
        channel: Vec<String>,
        /// Received word, comma separated
        #[arg(long, required = true)]
        received: String,
    },
    /// Transmit random codewords, decode them and emit one CSV record per
    /// trial plus a summary line per grid point
    Simulate {
        /// JSON code description
        spec: PathBuf,
        /// Channel model: "awgn" or "qsc" (parameters come from the grid)
        #[arg(long, required = true)]
        channel: String,
        /// Comma-separated channel parameters (sigma or p), one run each
        #[arg(long = "param-grid", required = true)]
        param_grid: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append the analytic block-error upper bound per grid point
        /// (AWGN only)
        #[arg(long)]
        union_bound: bool,
    },
    /// Run the bundled golden checks and print PASS/FAIL per check
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Enumerate { spec, max, show } => cmd_enumerate(&spec, max, show),
        Command::Decode { spec, channel, received } => cmd_decode(&spec, &channel, &received),
        Command::Simulate {
            spec,
            channel,
            param_grid,
            trials,
            seed,
            out,
            union_bound,
        } => simulate::run(simulate::Options {
            spec_path: spec,
            channel,
            param_grid,
            trials,
            seed,
            out,
            union_bound,
        }),
        Command::Selftest => selftest::run(),
    }
}

fn cmd_enumerate(path: &Path, max: u128, show: usize) -> Result<(), CliError> {
    let spec = spec_file::load_spec(path)?;
    let book = enumerate_codebook(&spec, Some(max))?;
    if book.len() < 2 {
        println!("{} codewords", book.len());
    } else {
        let t = spec.initial_vector();
        let d_h = min_distance(&book, Metric::Hamming, t)?;
        let d_inf = min_distance(&book, Metric::Chebyshev, t)?;
        println!("{} codewords, d_H_min = {d_h}, d_inf_min = {d_inf}", book.len());
    }
    for k in 0..book.len().min(show) {
        println!("{}", book.multipermutation(k)?);
    }
    Ok(())
}

enum DecodeChannel {
    Awgn(f64),
    Qsc(f64),
    Chebyshev,
}

fn parse_decode_channel(tokens: &[String]) -> Result<DecodeChannel, CliError> {
    let usage = |msg: &str| CliError::Usage(msg.to_string());
    match tokens {
        [name] if name == "chebyshev" => Ok(DecodeChannel::Chebyshev),
        [name, value] if name == "awgn" => {
            let sigma: f64 = value
                .parse()
                .map_err(|_| usage("awgn expects a numeric sigma"))?;
            AwgnChannel::new(sigma).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(DecodeChannel::Awgn(sigma))
        }
        [name, value] if name == "qsc" => {
            let p: f64 = value
                .parse()
                .map_err(|_| usage("qsc expects a numeric crossover probability"))?;
            Ok(DecodeChannel::Qsc(p))
        }
        [name] if name == "awgn" || name == "qsc" => {
            Err(usage("this channel needs a parameter, e.g. --channel awgn 0.5"))
        }
        _ => Err(usage("--channel must be \"awgn SIGMA\", \"qsc P\" or \"chebyshev\"")),
    }
}

fn parse_real_word(text: &str, expected_len: usize) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|tok| tok.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse received word \"{text}\"")))?;
    if values.len() != expected_len {
        return Err(CliError::Usage(format!(
            "received word has {} entries, code expects {expected_len}",
            values.len()
        )));
    }
    Ok(values)
}

fn parse_symbol_word(text: &str, expected_len: usize, m: usize) -> Result<Vec<usize>, CliError> {
    let values: Vec<usize> = text
        .split(',')
        .map(|tok| tok.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse symbol word \"{text}\"")))?;
    if values.len() != expected_len {
        return Err(CliError::Usage(format!(
            "received word has {} entries, code expects {expected_len}",
            values.len()
        )));
    }
    if let Some(&bad) = values.iter().find(|&&s| s == 0 || s > m) {
        return Err(CliError::Usage(format!("symbol {bad} outside 1..={m}")));
    }
    Ok(values)
}

fn cmd_decode(path: &Path, channel: &[String], received: &str) -> Result<(), CliError> {
    let spec = spec_file::load_spec(path)?;
    let n = spec.block_length();
    let result = match parse_decode_channel(channel)? {
        DecodeChannel::Chebyshev => {
            let y = parse_real_word(received, n)?;
            decode_chebyshev(&spec, &y)?
        }
        DecodeChannel::Awgn(_sigma) => {
            let y = parse_real_word(received, n)?;
            let gamma = cost_matrix_awgn(&y, spec.initial_vector())?;
            decode_memoryless(&spec, &gamma)?
        }
        DecodeChannel::Qsc(p) => {
            let y = parse_symbol_word(received, n, spec.num_symbols())?;
            QSymmetricChannel::new(p, spec.num_symbols())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let gamma = cost_matrix_qsc(&y, p, spec.num_symbols())?;
            decode_memoryless(&spec, &gamma)?
        }
    };
    print_decode_result(&result);
    Ok(())
}

fn print_decode_result(result: &DecodeResult) {
    let out = json!({
        "objective": result.objective,
        "delta": result.delta,
        "certified": result.certificate,
        "decoded": result.decoded,
        "decoded_valid": result.decoded_valid,
    });
    println!("{out}");
}
