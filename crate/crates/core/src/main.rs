//! Batch command-line front end for the denoiser.
//!
//! Exit codes: 0 success, 1 invalid arguments, 2 I/O failures,
//! 3 numeric aborts. Output files are written to a temporary sibling
//! and renamed into place, so failures never leave partial files.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use domino_denoise::error::DenoiseError;
use domino_denoise::imaging::{load_image, psnr, save_image, ssim, NoiseSpec};
use domino_denoise::rng;
use domino_denoise::tiling::{
    count_tilings_exact, count_tilings_formula, domino_tiling, pad_to_even, Parity,
};
use domino_denoise::trainer::{self, make_pair, DenoiseConfig, Mode, PairStrategy};

#[derive(Parser)]
#[command(
    name = "domino-denoise",
    version,
    about = "Zero-shot image denoising validated by pixel domino tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise one image by training on it alone.
    Denoise(DenoiseArgs),
    /// Add synthetic noise to a clean image.
    AddNoise(AddNoiseArgs),
    /// Write the two parity-filled images an input produces.
    Tile(TileArgs),
    /// Count the domino tilings of a grid.
    Count(CountArgs),
    /// Denoise a directory of clean images at several noise levels.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Masked self-prediction with tiling validation.
    Dd,
    /// Parity-filled images trained against each other.
    #[value(name = "n2f-domino")]
    N2fDomino,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Dd => Mode::DominoDenoise,
            ModeArg::N2fDomino => Mode::N2fDomino,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum StrategyArg {
    /// Minimum-cost domino tiling partners.
    Domino,
    /// Mean of the in-bounds 4-neighbors.
    Avg,
    /// A seeded random in-bounds 4-neighbor.
    Rand,
    /// The cheapest 4-neighbor by directional variance.
    Best,
}

impl From<StrategyArg> for PairStrategy {
    fn from(arg: StrategyArg) -> PairStrategy {
        match arg {
            StrategyArg::Domino => PairStrategy::Domino,
            StrategyArg::Avg => PairStrategy::AvgNeighbor,
            StrategyArg::Rand => PairStrategy::RandNeighbor,
            StrategyArg::Best => PairStrategy::BestNeighbor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Dd,
    #[value(name = "n2f-domino")]
    N2fDomino,
    #[value(name = "avg-nbr")]
    AvgNbr,
    #[value(name = "rand-nbr")]
    RandNbr,
    #[value(name = "best-nbr")]
    BestNbr,
}

impl MethodArg {
    fn label(self) -> &'static str {
        match self {
            MethodArg::Dd => "dd",
            MethodArg::N2fDomino => "n2f-domino",
            MethodArg::AvgNbr => "avg-nbr",
            MethodArg::RandNbr => "rand-nbr",
            MethodArg::BestNbr => "best-nbr",
        }
    }

    /// The neighbor-fill methods are ablations of the main mode with a
    /// cheaper validation pair.
    fn mode_and_strategy(self) -> (Mode, PairStrategy) {
        match self {
            MethodArg::Dd => (Mode::DominoDenoise, PairStrategy::Domino),
            MethodArg::N2fDomino => (Mode::N2fDomino, PairStrategy::Domino),
            MethodArg::AvgNbr => (Mode::DominoDenoise, PairStrategy::AvgNeighbor),
            MethodArg::RandNbr => (Mode::DominoDenoise, PairStrategy::RandNeighbor),
            MethodArg::BestNbr => (Mode::DominoDenoise, PairStrategy::BestNeighbor),
        }
    }
}

/// Training knobs shared by `denoise` and `benchmark`.
#[derive(Args)]
struct TuningArgs {
    /// Channel width of every hidden layer.
    #[arg(long, default_value_t = 48)]
    channels: usize,
    /// Iterations per validation epoch.
    #[arg(long = "epoch-len", default_value_t = 500)]
    epoch_len: usize,
    /// Epochs (dd) or checks (n2f-domino) without improvement before
    /// stopping.
    #[arg(long, default_value_t = 30)]
    patience: usize,
    /// Hard iteration cap.
    #[arg(long = "max-iters", default_value_t = 100_000)]
    max_iters: u64,
    /// Iterations between n2f-domino validation checks.
    #[arg(long = "check-interval", default_value_t = 250)]
    check_interval: usize,
}

impl TuningArgs {
    fn config(&self, mode: Mode, strategy: PairStrategy, seed: u64) -> DenoiseConfig {
        let mut cfg = DenoiseConfig::new(mode, seed);
        cfg.channels = self.channels;
        cfg.epoch_len = self.epoch_len;
        cfg.patience = self.patience;
        cfg.max_iterations = self.max_iters;
        cfg.n2f_check_interval = self.check_interval;
        cfg.pair_strategy = strategy;
        cfg
    }
}

#[derive(Args)]
struct DenoiseArgs {
    /// Noisy input image (PNG or PGM, grayscale).
    #[arg(long = "in")]
    input: PathBuf,
    /// Where the denoised image goes.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Dd)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How the validation pair is built.
    #[arg(long, value_enum, default_value_t = StrategyArg::Domino)]
    strategy: StrategyArg,
    /// Where the JSON run report goes.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Args)]
struct AddNoiseArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Gaussian standard deviation on the 0-255 scale.
    #[arg(long)]
    sigma: Option<f64>,
    /// Poisson event-rate scale; smaller is noisier.
    #[arg(long)]
    peak: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Gaussian,
    Poisson,
}

#[derive(Args)]
struct TileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output keeping even-parity pixels.
    #[arg(long = "out-even")]
    out_even: PathBuf,
    /// Output keeping odd-parity pixels.
    #[arg(long = "out-odd")]
    out_odd: PathBuf,
    /// CSV dump of the even tiling, one `i,j,k,l` pair per line
    /// (domino strategy only).
    #[arg(long = "dump-tiling")]
    dump_tiling: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Domino)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    rows: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cols: u64,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Directory of clean grayscale images (PNG or PGM).
    #[arg(long = "clean-dir")]
    clean_dir: PathBuf,
    /// Gaussian noise levels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sigma: Vec<f64>,
    /// Methods to compare, comma separated.
    #[arg(long, value_delimiter = ',', required = true, value_enum)]
    methods: Vec<MethodArg>,
    #[arg(long = "out-csv")]
    out_csv: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tuning: TuningArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Denoise(args) => cmd_denoise(args),
        Command::AddNoise(args) => cmd_add_noise(args),
        Command::Tile(args) => cmd_tile(args),
        Command::Count(args) => cmd_count(args),
        Command::Benchmark(args) => cmd_benchmark(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &DenoiseError) -> u8 {
    match err {
        DenoiseError::Io { .. } | DenoiseError::Format(_) | DenoiseError::Checkpoint(_) => 2,
        DenoiseError::NonFiniteLoss(_) | DenoiseError::Infeasible => 3,
        _ => 1,
    }
}

fn cmd_denoise(args: DenoiseArgs) -> Result<(), DenoiseError> {
    let cfg = args
        .tuning
        .config(args.mode.into(), args.strategy.into(), args.seed);
    let noisy = load_image(&args.input)?;
    let (out, report) = trainer::run(&noisy, &cfg)?;
    atomic_output(&args.out, |tmp| save_image(&out, tmp))?;
    if let Some(report_path) = &args.report {
        let json = serde_json::to_string_pretty(&report)
            .expect("run reports always serialize");
        atomic_output(report_path, |tmp| {
            fs::write(tmp, format!("{json}\n")).map_err(|e| DenoiseError::io(tmp, e))
        })?;
    }
    Ok(())
}

fn cmd_add_noise(args: AddNoiseArgs) -> Result<(), DenoiseError> {
    let spec = match args.kind {
        KindArg::Gaussian => {
            if args.peak.is_some() {
                return Err(DenoiseError::InvalidArgument(
                    "--peak does not apply to gaussian noise".into(),
                ));
            }
            let sigma = args.sigma.ok_or_else(|| {
                DenoiseError::InvalidArgument("gaussian noise requires --sigma".into())
            })?;
            NoiseSpec::Gaussian {
                sigma,
                seed: args.seed,
            }
        }
        KindArg::Poisson => {
            if args.sigma.is_some() {
                return Err(DenoiseError::InvalidArgument(
                    "--sigma does not apply to poisson noise".into(),
                ));
            }
            let peak = args.peak.ok_or_else(|| {
                DenoiseError::InvalidArgument("poisson noise requires --peak".into())
            })?;
            NoiseSpec::Poisson {
                peak,
                seed: args.seed,
            }
        }
    };
    let clean = load_image(&args.input)?;
    let noisy = spec.apply(&clean)?;
    atomic_output(&args.out, |tmp| save_image(&noisy, tmp))
}

fn cmd_tile(args: TileArgs) -> Result<(), DenoiseError> {
    if args.dump_tiling.is_some() && args.strategy != StrategyArg::Domino {
        return Err(DenoiseError::InvalidArgument(
            "--dump-tiling needs the domino strategy".into(),
        ));
    }
    let img = load_image(&args.input)?;
    let (even_filled, odd_filled) = make_pair(&img, args.strategy.into(), args.seed)?;
    atomic_output(&args.out_even, |tmp| save_image(&even_filled, tmp))?;
    atomic_output(&args.out_odd, |tmp| save_image(&odd_filled, tmp))?;
    if let Some(csv_path) = &args.dump_tiling {
        let (padded, _) = pad_to_even(&img);
        let tiling = domino_tiling(&padded, Parity::Even)?;
        let mut csv = String::new();
        for &((i, j), (k, l)) in tiling.pairs() {
            csv.push_str(&format!("{i},{j},{k},{l}\n"));
        }
        atomic_output(csv_path, |tmp| {
            fs::write(tmp, &csv).map_err(|e| DenoiseError::io(tmp, e))
        })?;
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<(), DenoiseError> {
    let (rows, cols) = (args.rows as usize, args.cols as usize);
    let formula = count_tilings_formula(rows, cols);
    match count_tilings_exact(rows, cols) {
        Ok(exact) => println!("formula={formula:.0} exact={exact}"),
        Err(DenoiseError::SizeLimit(_)) => println!("formula={formula:.0}"),
        Err(other) => return Err(other),
    }
    Ok(())
}

fn cmd_benchmark(args: BenchmarkArgs) -> Result<(), DenoiseError> {
    let mut images: Vec<PathBuf> = fs::read_dir(&args.clean_dir)
        .map_err(|e| DenoiseError::io(&args.clean_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            matches!(
                path.extension().and_then(|e| e.to_str()).map(str::to_lowercase),
                Some(ref ext) if ext == "png" || ext == "pgm"
            )
        })
        .collect();
    images.sort();
    if images.is_empty() {
        return Err(DenoiseError::InvalidArgument(format!(
            "no PNG or PGM images in {}",
            args.clean_dir.display()
        )));
    }

    let mut csv = String::from("image,method,noise,psnr,ssim,seconds\n");
    let mut method_sums = vec![(0.0, 0.0, 0.0); args.methods.len()];
    let mut cells = 0usize;
    for (image_index, path) in images.iter().enumerate() {
        let clean = load_image(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        for (sigma_index, &sigma) in args.sigma.iter().enumerate() {
            let noise_seed = rng::subseed(
                args.seed,
                "bench-noise",
                (image_index as u64) << 16 | sigma_index as u64,
            );
            let noisy = NoiseSpec::Gaussian {
                sigma,
                seed: noise_seed,
            }
            .apply(&clean)?;
            for (method_index, method) in args.methods.iter().enumerate() {
                let (mode, strategy) = method.mode_and_strategy();
                let run_seed = rng::subseed(
                    args.seed,
                    "bench-run",
                    (image_index as u64) << 32 | (sigma_index as u64) << 16 | method_index as u64,
                );
                let cfg = args.tuning.config(mode, strategy, run_seed);
                let started = Instant::now();
                let (out, _) = trainer::run(&noisy, &cfg)?;
                let seconds = started.elapsed().as_secs_f64();
                let psnr_db = psnr(&out, &clean)?;
                let ssim_value = ssim(&out, &clean)?;
                eprintln!(
                    "{name} sigma={sigma} {}: psnr={psnr_db:.4} ssim={ssim_value:.4} ({seconds:.1}s)",
                    method.label()
                );
                csv.push_str(&format!(
                    "{name},{},{sigma},{psnr_db:.4},{ssim_value:.4},{seconds:.4}\n",
                    method.label()
                ));
                let sums = &mut method_sums[method_index];
                sums.0 += psnr_db;
                sums.1 += ssim_value;
                sums.2 += seconds;
            }
            cells += 1;
        }
    }
    for (method, sums) in args.methods.iter().zip(&method_sums) {
        let n = cells as f64;
        csv.push_str(&format!(
            "mean,{},all,{:.4},{:.4},{:.4}\n",
            method.label(),
            sums.0 / n,
            sums.1 / n,
            sums.2 / n
        ));
    }
    atomic_output(&args.out_csv, |tmp| {
        fs::write(tmp, &csv).map_err(|e| DenoiseError::io(tmp, e))
    })
}

/// Runs `write` against a temporary sibling of `path` and renames it
/// into place on success.
fn atomic_output<F>(path: &Path, write: F) -> Result<(), DenoiseError>
where
    F: FnOnce(&Path) -> Result<(), DenoiseError>,
{
    let name = path.file_name().ok_or_else(|| {
        DenoiseError::InvalidArgument(format!("{} has no file name", path.display()))
    })?;
    let mut tmp_name = OsString::from(format!(".tmp-{}-", std::process::id()));
    tmp_name.push(name);
    let tmp = path.with_file_name(tmp_name);
    match write(&tmp) {
        Ok(()) => fs::rename(&tmp, path).map_err(|e| DenoiseError::io(path, e)),
        Err(err) => {
            let _ = fs::remove_file(&tmp);
            Err(err)
        }
    }
}
