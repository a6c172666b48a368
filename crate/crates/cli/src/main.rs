use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use delaychan::channel::{ChannelParams, DelayBudget, Rational, Resolution};
use delaychan::experiments::{
    aggregate, attack_codeword, codebook, fit_power_law, parse_rational, parse_xy_table,
    run_experiment, sweep, write_sweep_csv, write_trial_csv, AdversarySpec, Axis, CodecSpec,
    ExperimentError, ExperimentSpec, OuterSpec,
};
use delaychan::format::{format_bits, parse_codewords, write_schedules, write_trace};
use delaychan::oracle::{
    codebook_valid, max_codebook, received_sets, write_received_set_csv, write_witness,
    RateEstimate, Verdict,
};

/// Exit status for a trial whose attack failed revalidation.
const INVARIANT_EXIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "delaychan",
    version,
    about = "Adversarial delay channel experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of a codec against an adversary and write the trial CSV.
    Simulate(RunArgs),
    /// Attack codewords read from a file and write the delay schedules.
    Attack(AttackArgs),
    /// Repeat `simulate` over values of one parameter and write one row per value.
    Sweep(SweepArgs),
    /// Exhaustive received-set checks at tiny parameters.
    Oracle(OracleArgs),
    /// Least-squares power law through two columns of a CSV table.
    Fit(FitArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Budget {
    /// Per-symbol delay limit.
    #[arg(long)]
    dmax: Option<u64>,
    /// Average delay limit; `1/4`, `0.25` and `3` are all accepted.
    #[arg(long, value_parser = parse_rational)]
    davg: Option<Rational>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Symbols per macro-interval.
    #[arg(long = "M")]
    m: usize,
    /// Number of macro-intervals.
    #[arg(long = "T")]
    t: usize,
    /// Receiver resolution, or `inf` for the sum channel.
    #[arg(long, default_value = "4", value_parser = parse_resolution)]
    k: Resolution,
    #[command(flatten)]
    budget: Budget,
}

impl ChannelArgs {
    fn params(&self) -> Result<ChannelParams> {
        let budget = match (self.budget.dmax, self.budget.davg) {
            (Some(d), None) => DelayBudget::Max(d),
            (None, Some(a)) => DelayBudget::Avg(a),
            _ => bail!("give exactly one of --dmax and --davg"),
        };
        Ok(ChannelParams::new(self.m, self.t, self.k, budget)?)
    }
}

#[derive(Args)]
struct CodecArgs {
    /// max_unary, avg_concat, first_one or spread.
    #[arg(long, default_value = "max_unary")]
    codec: String,
    /// Rate knob: c for max_unary and avg_concat, c' for first_one.
    #[arg(long, default_value = "1/2", value_parser = parse_rational)]
    c: Rational,
    /// Outer code: none, reference, or rs:<fraction>.
    #[arg(long, default_value = "reference")]
    outer: OuterSpec,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    codec: CodecArgs,
    /// identity, block_end, random, collision_point, banking or flip_and_delay.
    #[arg(long, default_value = "identity")]
    adversary: String,
    /// Flip allowance per macro-step for random and flip_and_delay.
    #[arg(long, default_value_t = 0)]
    flips: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        Ok(ExperimentSpec {
            codec: CodecSpec::from_id(&self.codec.codec, self.codec.c, self.codec.outer)
                .map_err(anyhow::Error::msg)?,
            adversary: AdversarySpec::from_id(&self.adversary, self.flips)
                .map_err(anyhow::Error::msg)?,
            channel: self.channel.params()?,
            trials: self.trials,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Codeword file, one bit string per line.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the banking trace, when the adversary keeps one.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Where to write one received word per codeword.
    #[arg(long)]
    received: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// c, ell, M, T, k, dmax, davg or flips.
    #[arg(long)]
    axis: Axis,
    /// Comma-separated values, e.g. `1/4,1/16,1/64`.
    #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
    values: Vec<Rational>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Codebook file; without it the codec's full codebook is checked.
    #[arg(long, conflicts_with = "max_size")]
    codebook: Option<PathBuf>,
    #[command(flatten)]
    codec: CodecArgs,
    /// Find a largest valid codebook over every binary word instead.
    #[arg(long)]
    max_size: bool,
    /// Limit on received words and search nodes per codeword.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Largest payload, in bits, to enumerate from a codec.
    #[arg(long, default_value_t = 16)]
    max_bits: usize,
    /// Received-set sizes as CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Collision record, written when the codebook is invalid.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// CSV table with a column-name line; `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    /// x column, by name or 0-based index.
    #[arg(long, default_value = "value")]
    x: String,
    /// y column, by name or 0-based index.
    #[arg(long)]
    y: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_resolution(s: &str) -> Result<Resolution, String> {
    match s {
        "inf" | "unbounded" => Ok(Resolution::Unbounded),
        _ => s
            .parse::<u32>()
            .map(Resolution::Finite)
            .map_err(|_| format!("expected a positive integer or `inf`, got {s:?}")),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn read_input(p: &Path) -> Result<String> {
    if p == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn simulate(args: &RunArgs) -> Result<()> {
    let records = run_experiment(&args.spec()?)?;
    emit(args.out.as_deref(), &write_trial_csv(&records))?;
    let agg = aggregate(&records);
    eprintln!(
        "trials={} success_rate={} mean_spent={} max_spent={} distinct_forms={}",
        agg.trials, agg.success_rate, agg.mean_spent, agg.max_spent, agg.distinct_forms
    );
    Ok(())
}

fn attack(args: &AttackArgs) -> Result<()> {
    let spec = args.run.spec()?;
    let words = parse_codewords(&read_input(&args.input)?, Some(spec.channel.codeword_len()))?;
    let mut schedules = Vec::with_capacity(words.len());
    let mut received = String::new();
    let mut trace = String::new();
    for (i, c) in words.iter().enumerate() {
        let out = attack_codeword(&spec, c).map_err(|e| match e {
            ExperimentError::Invariant { reason, .. } => {
                ExperimentError::Invariant { trial: i, reason }
            }
            e => e,
        })?;
        let y = out.received(c, &spec.channel)?;
        let values: Vec<String> = y.values().iter().map(u32::to_string).collect();
        received.push_str(&values.join(","));
        received.push('\n');
        if let Some(t) = &out.trace {
            trace.push_str(&format!("# codeword {i}\n"));
            trace.push_str(&write_trace(t));
        }
        eprintln!(
            "codeword {i}: spent={} max_delay={} flips={}",
            out.ledger.spent,
            out.ledger.max_delay,
            out.flips.len()
        );
        schedules.push(out.schedule);
    }
    emit(args.run.out.as_deref(), &write_schedules(&schedules))?;
    if let Some(p) = &args.received {
        emit(Some(p), &received)?;
    }
    if let Some(p) = &args.trace {
        emit(Some(p), &trace)?;
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let rows = sweep(&args.run.spec()?, args.axis, &args.values)?;
    emit(args.run.out.as_deref(), &write_sweep_csv(&rows))
}

fn oracle(args: &OracleArgs) -> Result<()> {
    let ch = args.channel.params()?;
    if args.max_size {
        let best = max_codebook(&ch, args.cap)?;
        let rate = RateEstimate::new(best.len(), ch.t());
        println!(
            "max_codebook_size={} log2_size={} rate={}",
            best.len(),
            rate.log2_size,
            rate.rate
        );
        for c in &best {
            println!("{}", format_bits(c.bits()));
        }
        return Ok(());
    }
    let book = match &args.codebook {
        Some(p) => parse_codewords(&read_input(p)?, Some(ch.codeword_len()))?,
        None => {
            let spec = ExperimentSpec {
                codec: CodecSpec::from_id(&args.codec.codec, args.codec.c, args.codec.outer)
                    .map_err(anyhow::Error::msg)?,
                adversary: AdversarySpec::Identity,
                channel: ch,
                trials: 1,
                seed: 0,
            };
            codebook(&spec, args.max_bits)?
        }
    };
    let sets = received_sets(&book, &ch, args.cap)?;
    emit(args.out.as_deref(), &write_received_set_csv(&book, &sets))?;
    match codebook_valid(&book, &ch, args.cap)? {
        Verdict::Valid => eprintln!("valid: {} codewords", book.len()),
        Verdict::Invalid(collision) => {
            eprintln!(
                "invalid: codewords {} and {} can both be received as {}",
                collision.first, collision.second, collision.witness
            );
            if let Some(p) = &args.witness {
                emit(Some(p), &write_witness(&collision))?;
            }
        }
    }
    Ok(())
}

fn fit(args: &FitArgs) -> Result<()> {
    let points = parse_xy_table(&read_input(&args.input)?, &args.x, &args.y)?;
    let f = fit_power_law(&points)?;
    emit(
        args.out.as_deref(),
        &format!(
            "exponent={}\nscale={}\nresidual={}\n",
            f.exponent, f.scale, f.residual
        ),
    )
}

fn exit_status(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<ExperimentError>() {
        Some(ExperimentError::Invariant { .. }) => INVARIANT_EXIT,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Attack(a) => attack(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Oracle(a) => oracle(a),
        Command::Fit(a) => fit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}
