use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use serpsim::harness::{
    cmd_compare, cmd_corpus, cmd_dcg, cmd_generate, cmd_perturb, cmd_sample, render_csv, render_jsonl, write_output,
    HarnessConfig, PerturbMode, PerturbationSpec, Profile,
};
use serpsim::normalize::DupMode;
use serpsim::rank::WeightKind;
use serpsim::sampling::StrataConfig;
use serpsim::{Error, Result};

#[derive(Parser)]
#[command(name = "serpsim", version, about = "Compare ranked search-result lists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Measures {
    /// Results kept per list.
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Permutation resamples per distribution test.
    #[arg(long, default_value_t = 199)]
    resamples: usize,
    /// Cross-list duplicate test.
    #[arg(long, value_enum, default_value_t = Dup::Consensus)]
    dupmode: Dup,
}

impl Measures {
    fn config(&self) -> HarnessConfig {
        HarnessConfig {
            top_n: self.top,
            seed: self.seed,
            resamples: self.resamples,
            dupmode: match self.dupmode {
                Dup::Consensus => DupMode::Consensus,
                Dup::Shingle => DupMode::Shingle,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dup {
    Consensus,
    Shingle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Correlated,
    AntiCorrelated,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Iota,
    Dcgw,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Every measure for two snapshot files, as one JSON record.
    Compare {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Judgments for the relative DCG field.
        #[arg(long)]
        judgments: Option<PathBuf>,
        #[command(flatten)]
        measures: Measures,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// J_url histogram (CSV) over a corpus directory.
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        #[command(flatten)]
        measures: Measures,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-query reports as JSON Lines.
        #[arg(long)]
        reports: Option<PathBuf>,
    },
    /// Footrule and Kendall tau over every shared-block placement (CSV).
    Perturb {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_enum)]
        weights: Weights,
        #[arg(long, default_value_t = 10)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative DCG joined with overlap measures (CSV).
    Dcg {
        #[arg(long)]
        judgments: PathBuf,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// r_dcg histogram of low-overlap queries (CSV).
        #[arg(long)]
        hist: Option<PathBuf>,
    },
    /// Synthetic corpus with planted overlap and duplicates.
    Generate {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stratified sample of a query log (JSON Lines).
    Sample {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        market: String,
        #[arg(long)]
        per_stratum: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        hi: u64,
        #[arg(long, default_value_t = 10)]
        lo: u64,
        /// Query texts to skip, one per line.
        #[arg(long)]
        exclude: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compare {
            left,
            right,
            judgments,
            measures,
            out,
        } => {
            let report = cmd_compare(&left, &right, judgments.as_deref(), &measures.config())?;
            write_output(out.as_deref(), &render_jsonl(&[report])?)
        }
        Command::Corpus {
            dir,
            measures,
            out,
            reports,
        } => {
            let result = cmd_corpus(&dir, &measures.config())?;
            if let Some(path) = reports {
                write_output(Some(&path), &render_jsonl(&result.reports)?)?;
            }
            write_output(out.as_deref(), &result.histogram.to_csv()?)
        }
        Command::Perturb {
            mode,
            weights,
            len,
            out,
        } => {
            let modes = match mode {
                Mode::Correlated => vec![PerturbMode::Correlated],
                Mode::AntiCorrelated => vec![PerturbMode::AntiCorrelated],
                Mode::Both => vec![PerturbMode::Correlated, PerturbMode::AntiCorrelated],
            };
            let kinds = match weights {
                Weights::Iota => vec![WeightKind::Iota],
                Weights::Dcgw => vec![WeightKind::Dcgw],
                Weights::Both => vec![WeightKind::Iota, WeightKind::Dcgw],
            };
            if len == 0 {
                return Err(Error::InvalidSpec("len must be at least 1".into()));
            }
            let specs: Vec<_> = modes
                .iter()
                .flat_map(|&m| kinds.iter().flat_map(move |&k| PerturbationSpec::sweep(m, k, len)))
                .collect();
            write_output(out.as_deref(), &render_csv(&cmd_perturb(&specs)?)?)
        }
        Command::Dcg {
            judgments,
            dir,
            n,
            seed,
            out,
            hist,
        } => {
            let cfg = HarnessConfig {
                seed,
                ..HarnessConfig::default()
            };
            let result = cmd_dcg(&judgments, &dir, n, &cfg)?;
            if let Some(path) = hist {
                write_output(Some(&path), &render_csv(&result.low_overlap)?)?;
            }
            write_output(out.as_deref(), &render_csv(&result.rows)?)
        }
        Command::Generate { profile, seed, out } => {
            let profile = Profile::read(&profile)?;
            cmd_generate(&profile, seed, &out).map(|_| ())
        }
        Command::Sample {
            log,
            market,
            per_stratum,
            seed,
            hi,
            lo,
            exclude,
            out,
        } => {
            let mut cfg = StrataConfig::new(per_stratum, seed);
            cfg.hi = hi;
            cfg.lo = lo;
            if let Some(path) = exclude {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Io { path, source: e })?;
                cfg.exclude = text.lines().map(str::to_string).collect::<HashSet<_>>();
            }
            let sample = cmd_sample(&log, &market, &cfg)?;
            write_output(out.as_deref(), &render_jsonl(&sample)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
