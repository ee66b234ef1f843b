//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification fails (or an
//! exhaustive search finds a witness), 2 on usage, config or I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{profile_csv, search_constant_even_near1, verify_all, Verdict};
use crate::codeword::{CodeTable, Codeword};
use crate::counting::table_csv;
use crate::error::Error;
use crate::reconstruct::{candidates, reconstruct, threshold_reconstruct};
use crate::reconstruct::{ReconstructionPolicy, TieBreak};
use crate::simulate::{parse_key_values, Mapping, SimulationConfig, Simulator};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "counting-code", version, about = "Gray-derived counting codes")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// Codeword width in bits.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Master seed for simulations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Code {
    Binary,
    Gray,
    Counting,
}

impl From<Code> for Mapping {
    fn from(c: Code) -> Self {
        match c {
            Code::Binary => Mapping::Binary,
            Code::Gray => Mapping::Gray,
            Code::Counting => Mapping::Counting,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Tie {
    Smaller,
    Larger,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the reflected Gray code of width n.
    GenGray,
    /// Print the counting code of width n.
    GenCounting,
    /// Print near-k Hamming distance profiles of a code.
    Profile {
        #[arg(long, value_enum, default_value = "counting")]
        code: Code,
        /// Neighbor offsets to profile.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        offsets: Vec<usize>,
    },
    /// Check the distance laws on a code of width n.
    Verify {
        #[arg(long, value_enum, default_value = "counting")]
        code: Code,
    },
    /// Reconstruct a value from a decoded codeword and a prediction.
    Reconstruct {
        /// Decoded codeword as an MSB-first bit string.
        #[arg(long)]
        decoded: String,
        #[arg(long)]
        predicted: u32,
        #[arg(long, value_enum, default_value = "counting")]
        code: Code,
        #[arg(long, default_value_t = 1)]
        radius: u32,
        /// Leave the decoded codeword itself out of the candidates.
        #[arg(long)]
        no_center: bool,
        #[arg(long, value_enum, default_value = "smaller")]
        tie_break: Tie,
        /// Use the thresholding baseline with this threshold instead.
        #[arg(long)]
        threshold: Option<u32>,
    },
    /// Run a Monte-Carlo comparison of remapping schemes.
    Simulate(SimulateArgs),
    /// Exhaustively search for a counting sequence with constant even near-1 distance.
    SearchEven {
        /// Target distance.
        #[arg(long)]
        l: u32,
    },
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    /// exact, uniform or laplacian.
    #[arg(long)]
    prediction: Option<String>,
    #[arg(long)]
    prediction_scale: Option<f64>,
    /// iid or at-most-m.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    p_flip: Option<f64>,
    /// Comma-separated weights of 0, 1, 2, ... flips.
    #[arg(long)]
    flip_weights: Option<String>,
    /// Comma-separated mapping:strategy pairs.
    #[arg(long)]
    schemes: Option<String>,
    #[arg(long)]
    threshold: Option<u32>,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    include_center: Option<bool>,
    /// smaller or larger.
    #[arg(long)]
    tie_break: Option<String>,
    /// 8-bit PGM supplying original values.
    #[arg(long)]
    image: Option<PathBuf>,
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    text: String,
    status: u8,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return status;
        }
    };
    let result = dispatch(&cli);
    match result {
        Ok(output) => {
            let written = match &cli.shared.out {
                Some(path) => std::fs::write(path, &output.text)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => out
                    .write_all(output.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => output.status,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let shared = &cli.shared;
    match &cli.command {
        Command::GenGray => gen(shared, Code::Gray),
        Command::GenCounting => gen(shared, Code::Counting),
        Command::Profile { code, offsets } => profile(shared, *code, offsets),
        Command::Verify { code } => verify(shared, *code),
        Command::Reconstruct {
            decoded,
            predicted,
            code,
            radius,
            no_center,
            tie_break,
            threshold,
        } => {
            let policy = ReconstructionPolicy {
                radius: *radius,
                include_center: !no_center,
                tie_break: match tie_break {
                    Tie::Smaller => TieBreak::PreferSmaller,
                    Tie::Larger => TieBreak::PreferLarger,
                },
            };
            reconstruct_cmd(shared, decoded, *predicted, *code, policy, *threshold)
        }
        Command::Simulate(args) => simulate(shared, args),
        Command::SearchEven { l } => search_even(shared, *l),
    }
}

fn require_n(shared: &Shared) -> Result<u32, Failure> {
    shared
        .n
        .ok_or_else(|| Failure::Usage("--n is required for this subcommand".into()))
}

fn table_for(code: Code, n: u32) -> Result<CodeTable, Failure> {
    Ok(Mapping::from(code).table(n)?)
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output {
        text,
        status: EXIT_OK,
    })
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn gen(shared: &Shared, code: Code) -> Result<Output, Failure> {
    let n = require_n(shared)?;
    let table = table_for(code, n)?;
    let text = match shared.format.unwrap_or(Format::Csv) {
        Format::Csv => table_csv(&table),
        Format::Json => {
            let words: Vec<String> = table.entries().iter().map(ToString::to_string).collect();
            json_line(&json!({ "n": n, "code": Mapping::from(code), "codewords": words }))
        }
        Format::Table => {
            let kw = (table.len() - 1).to_string().len().max(1);
            let mut s = format!("{:>kw$}  codeword\n", "k");
            for (k, cw) in table.entries().iter().enumerate() {
                let _ = writeln!(s, "{k:>kw$}  {cw}");
            }
            s
        }
    };
    ok(text)
}

fn profile(shared: &Shared, code: Code, offsets: &[usize]) -> Result<Output, Failure> {
    let n = require_n(shared)?;
    let table = table_for(code, n)?;
    let text = match shared.format.unwrap_or(Format::Csv) {
        Format::Csv => profile_csv(&table, offsets),
        Format::Json => {
            let profiles: Vec<_> = offsets
                .iter()
                .map(|&k| crate::analysis::near_k_profile(table.entries(), k))
                .collect();
            json_line(&json!({ "n": n, "code": Mapping::from(code), "profiles": profiles }))
        }
        Format::Table => {
            let mut s = String::from("k,codeword");
            for k in offsets {
                let _ = write!(s, ",near-{k}");
            }
            s.push('\n');
            s.push_str(&profile_csv(&table, offsets));
            align_csv(&s)
        }
    };
    ok(text)
}

fn verify(shared: &Shared, code: Code) -> Result<Output, Failure> {
    let n = require_n(shared)?;
    let table = table_for(code, n)?;
    let verdicts = verify_all(&table)?;
    let status = if verdicts.iter().all(|v| v.pass) {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let text = match shared.format.unwrap_or(Format::Table) {
        Format::Json => json_line(&serde_json::to_value(&verdicts).expect("verdicts serialize")),
        Format::Csv => verdict_csv(&verdicts),
        Format::Table => {
            let mut s = String::from("theorem\tn\tpass\tdetails\n");
            for v in &verdicts {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}",
                    v.theorem,
                    v.n,
                    if v.pass { "PASS" } else { "FAIL" },
                    v.details
                );
            }
            align_tsv(&s)
        }
    };
    Ok(Output { text, status })
}

fn verdict_csv(verdicts: &[Verdict]) -> String {
    let mut s = String::from("theorem,n,pass,details\n");
    for v in verdicts {
        let _ = writeln!(
            s,
            "{},{},{},\"{}\"",
            v.theorem,
            v.n,
            v.pass,
            v.details.replace('"', "\"\"")
        );
    }
    s
}

fn reconstruct_cmd(
    shared: &Shared,
    decoded: &str,
    predicted: u32,
    code: Code,
    policy: ReconstructionPolicy,
    threshold: Option<u32>,
) -> Result<Output, Failure> {
    let n = require_n(shared)?;
    let cw = Codeword::parse(decoded)?;
    if cw.width() != n {
        return Err(Failure::Usage(format!(
            "decoded word `{decoded}` has {} bits, expected {n}",
            cw.width()
        )));
    }
    let table = table_for(code, n)?;
    if predicted > table.max_value() {
        return Err(Failure::Usage(format!(
            "prediction {predicted} exceeds {}",
            table.max_value()
        )));
    }
    if policy.radius > n {
        return Err(Failure::Usage(format!(
            "radius {} exceeds width {n}",
            policy.radius
        )));
    }
    let decoded_value = table.decode(cw);
    let output = match threshold {
        Some(t) => threshold_reconstruct(decoded_value, predicted, t),
        None => reconstruct(cw, predicted, &table, &policy),
    };
    let text = match shared.format.unwrap_or(Format::Table) {
        Format::Table => format!("{output}\n"),
        Format::Csv => format!(
            "decoded,decoded_value,predicted,output\n{cw},{decoded_value},{predicted},{output}\n"
        ),
        Format::Json => {
            let cands: Vec<_> = if threshold.is_some() {
                Vec::new()
            } else {
                candidates(cw, &table, &policy)
                    .into_iter()
                    .map(|(c, v)| json!({ "codeword": c.to_string(), "value": v }))
                    .collect()
            };
            json_line(&json!({
                "decoded": cw.to_string(),
                "decoded_value": decoded_value,
                "predicted": predicted,
                "candidates": cands,
                "output": output,
            }))
        }
    };
    ok(text)
}

fn simulate(shared: &Shared, args: &SimulateArgs) -> Result<Output, Failure> {
    let mut map = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_key_values(&text)?
        }
        None => Default::default(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            map.insert(key.to_string(), v);
        }
    };
    set("n", shared.n.map(|v| v.to_string()));
    set("seed", shared.seed.map(|v| v.to_string()));
    set("trials", args.trials.map(|v| v.to_string()));
    set("prediction", args.prediction.clone());
    set(
        "prediction_scale",
        args.prediction_scale.map(|v| v.to_string()),
    );
    set("channel", args.channel.clone());
    set("p_flip", args.p_flip.map(|v| v.to_string()));
    set("flip_weights", args.flip_weights.clone());
    set("schemes", args.schemes.clone());
    set("threshold", args.threshold.map(|v| v.to_string()));
    set("radius", args.radius.map(|v| v.to_string()));
    set("include_center", args.include_center.map(|v| v.to_string()));
    set("tie_break", args.tie_break.clone());
    set(
        "image",
        args.image.as_ref().map(|p| p.display().to_string()),
    );

    let config = SimulationConfig::from_map(&map)?;
    let report = Simulator::new(config)?.run();
    let text = match shared.format.unwrap_or(Format::Table) {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
        Format::Csv => {
            let mut s = String::from(
                "scheme,trials,mse,psnr_db,exact_recovery_rate,worse_than_prediction_rate\n",
            );
            for r in &report.schemes {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.scheme,
                    r.trials,
                    r.mse,
                    r.psnr_db,
                    r.exact_recovery_rate,
                    r.worse_than_prediction_rate
                );
            }
            s
        }
    };
    ok(text)
}

fn search_even(shared: &Shared, l: u32) -> Result<Output, Failure> {
    let n = require_n(shared)?;
    let found = search_constant_even_near1(n, l)?;
    let words = found
        .as_ref()
        .map(|seq| seq.iter().map(ToString::to_string).collect::<Vec<_>>());
    let text = match shared.format.unwrap_or(Format::Table) {
        Format::Json => json_line(&json!({ "n": n, "l": l, "witness": words })),
        Format::Csv | Format::Table => match &words {
            None => "none\n".to_string(),
            Some(w) => format!("{}\n", w.join(",")),
        },
    };
    Ok(Output {
        text,
        status: if found.is_some() {
            EXIT_FAILED
        } else {
            EXIT_OK
        },
    })
}

fn align_csv(text: &str) -> String {
    align(text, ',')
}

fn align_tsv(text: &str) -> String {
    align(text, '\t')
}

/// Pads delimited columns to equal width; the last column is left ragged.
fn align(text: &str, sep: char) -> String {
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(sep).collect()).collect();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let last = row.len().saturating_sub(1);
        for (c, cell) in row.iter().enumerate() {
            if c == last {
                out.push_str(cell);
            } else {
                let _ = write!(out, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push('\n');
    }
    out
}
