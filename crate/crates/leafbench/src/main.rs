use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use leafbench::bench::{benchmark_filter, format_timing_csv};
use leafbench::config::RunConfig;
use leafbench::io::{load_image, save_image};
use leafbench::report::{
    format_display_csv, format_full_csv, format_markdown_tables, parse_full_csv,
};
use leafbench::runner::{run_grid, TARGET_SIZE};
use leafbench::{corpus, synth};
use leafbench_core::clahe::{clahe, ClaheParams};
use leafbench_core::filters::{apply_filter, FilterSpec};
use leafbench_core::metrics::{evaluate, MetricConfig};
use leafbench_core::noise::{NoiseModel, NoiseSpec};
use leafbench_core::raster::resize_bilinear;

#[derive(Parser)]
#[command(
    name = "leafbench",
    version,
    about = "Noise injection, denoising filters, CLAHE, quality metrics, and the full benchmark grid for leaf images"
)]
struct Cli {
    /// Cap on worker threads for grid runs (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print a log line per processed image
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum NoiseKindArg {
    Gaussian,
    #[value(name = "salt_pepper", alias = "salt-pepper")]
    SaltPepper,
    Speckle,
    Uniform,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FilterKindArg {
    Mean,
    Gaussian,
    Median,
    Bilateral,
    Nlm,
    /// Alias for nlm, matching the study's table label
    Bm3d,
}

#[derive(Subcommand)]
enum Command {
    /// Inject one noise type into every image of a directory
    Noise {
        #[arg(long, value_enum)]
        kind: NoiseKindArg,
        /// Gaussian mean on the normalized [0,1] scale
        #[arg(long, default_value_t = 0.0)]
        mean: f64,
        /// Gaussian/speckle variance on the normalized [0,1] scale
        #[arg(long, default_value_t = 0.01)]
        variance: f64,
        /// Salt-and-pepper corrupted-pixel fraction
        #[arg(long, default_value_t = 0.05)]
        amount: f64,
        /// Uniform noise lower offset (0-255 scale)
        #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
        lo: f64,
        /// Uniform noise upper offset (0-255 scale)
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        input_dir: PathBuf,
        output_dir: PathBuf,
    },
    /// Apply one denoising filter to an image
    Filter {
        #[arg(long, value_enum)]
        kind: FilterKindArg,
        /// Kernel size for mean/gaussian/median
        #[arg(long, default_value_t = 5)]
        kernel_size: usize,
        /// Gaussian sigma (omit for the kernel-derived default)
        #[arg(long)]
        sigma: Option<f64>,
        /// Bilateral neighborhood diameter
        #[arg(long, default_value_t = 9)]
        diameter: usize,
        #[arg(long, default_value_t = 75.0)]
        sigma_color: f64,
        #[arg(long, default_value_t = 75.0)]
        sigma_space: f64,
        /// NLM luma filtering strength
        #[arg(long, default_value_t = 10.0)]
        h: f64,
        /// NLM chroma filtering strength
        #[arg(long, default_value_t = 10.0)]
        h_color: f64,
        #[arg(long, default_value_t = 7)]
        template_window: usize,
        #[arg(long, default_value_t = 21)]
        search_window: usize,
        input: PathBuf,
        output: PathBuf,
    },
    /// Apply CLAHE to an image
    Clahe {
        /// Relative clip limit
        #[arg(long, default_value_t = 2.0)]
        clip: f64,
        /// Tile grid as GXxGY, e.g. 8x8 or 5x5
        #[arg(long, value_parser = parse_grid, default_value = "8x8")]
        grid: (usize, usize),
        input: PathBuf,
        output: PathBuf,
    },
    /// Score a test image against a reference: one CSV row
    /// (mse,ssim,psnr,nrmse,nmi)
    Metrics { reference: PathBuf, test: PathBuf },
    /// Run the full noise x filter x experiment grid from a JSON config
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Time each configured filter over noisy corpus images
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Noise injected into the timing images
        #[arg(long, value_enum, default_value_t = NoiseKindArg::Gaussian)]
        noise: NoiseKindArg,
    },
    /// Render Markdown tables from a full-precision results CSV
    Report {
        input_csv: PathBuf,
        output_md: PathBuf,
    },
    /// Write a deterministic synthetic leaf corpus (for desk-scale runs)
    Synth {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        output_dir: PathBuf,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (gx, gy) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{s}` is not of the form GXxGY (e.g. 8x8)"))?;
    let gx: usize = gx.trim().parse().map_err(|_| format!("bad grid width `{gx}`"))?;
    let gy: usize = gy.trim().parse().map_err(|_| format!("bad grid height `{gy}`"))?;
    if gx == 0 || gy == 0 {
        return Err("grid dimensions must be at least 1".into());
    }
    Ok((gx, gy))
}

enum AppError {
    /// Bad invocation or configuration: exit code 1.
    Usage(String),
    /// Failure while doing the work: exit code 2.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for AppError {
    fn from(e: anyhow::Error) -> Self {
        AppError::Runtime(e)
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(AppError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Noise {
            kind,
            mean,
            variance,
            amount,
            lo,
            hi,
            seed,
            input_dir,
            output_dir,
        } => {
            let model = match kind {
                NoiseKindArg::Gaussian => NoiseModel::Gaussian { mean, variance },
                NoiseKindArg::SaltPepper => NoiseModel::SaltPepper { amount },
                NoiseKindArg::Speckle => NoiseModel::Speckle { variance },
                NoiseKindArg::Uniform => NoiseModel::Uniform { lo, hi },
            };
            model
                .validate()
                .map_err(|e| AppError::Usage(e.to_string()))?;
            cmd_noise(NoiseSpec::new(model, seed), &input_dir, &output_dir, cli.verbose)?;
            Ok(())
        }
        Command::Filter {
            kind,
            kernel_size,
            sigma,
            diameter,
            sigma_color,
            sigma_space,
            h,
            h_color,
            template_window,
            search_window,
            input,
            output,
        } => {
            let spec = match kind {
                FilterKindArg::Mean => FilterSpec::Mean { kernel_size },
                FilterKindArg::Gaussian => FilterSpec::Gaussian { kernel_size, sigma },
                FilterKindArg::Median => FilterSpec::Median { kernel_size },
                FilterKindArg::Bilateral => FilterSpec::Bilateral {
                    diameter,
                    sigma_color,
                    sigma_space,
                },
                FilterKindArg::Nlm | FilterKindArg::Bm3d => FilterSpec::Nlm {
                    h,
                    h_color,
                    template_window,
                    search_window,
                },
            };
            spec.validate().map_err(|e| AppError::Usage(e.to_string()))?;
            let img = load_image(&input).context("loading input").map_err(AppError::from)?;
            let out = apply_filter(&img, &spec)
                .context("applying filter")
                .map_err(anyhow::Error::from)?;
            save_image(&output, &out).context("writing output")?;
            Ok(())
        }
        Command::Clahe {
            clip,
            grid,
            input,
            output,
        } => {
            let params = ClaheParams::new(clip, grid.0, grid.1);
            params
                .validate()
                .map_err(|e| AppError::Usage(e.to_string()))?;
            let img = load_image(&input).context("loading input")?;
            let out = clahe(&img, &params)
                .context("applying CLAHE")
                .map_err(anyhow::Error::from)?;
            save_image(&output, &out).context("writing output")?;
            Ok(())
        }
        Command::Metrics { reference, test } => {
            let reference = load_image(&reference).context("loading reference")?;
            let test = load_image(&test).context("loading test image")?;
            let v = evaluate(&reference, &test, &MetricConfig::default())
                .context("computing metrics")
                .map_err(anyhow::Error::from)?;
            println!("{:?},{:?},{:?},{:?},{:?}", v.mse, v.ssim, v.psnr, v.nrmse, v.nmi);
            Ok(())
        }
        Command::Run { config } => {
            let config = load_config(&config)?;
            let output = run_grid(&config, cli.threads, cli.verbose)
                .context("running grid")
                .map_err(anyhow::Error::from)?;
            fs::create_dir_all(&config.output_dir)
                .with_context(|| format!("creating {}", config.output_dir.display()))?;
            let display = format_display_csv(&output.rows)
                .context("formatting CSV")
                .map_err(anyhow::Error::from)?;
            let full = format_full_csv(&output.rows)
                .context("formatting CSV")
                .map_err(anyhow::Error::from)?;
            let display_path = config.output_dir.join("results.csv");
            let full_path = config.output_dir.join("results_full.csv");
            fs::write(&display_path, display)
                .with_context(|| format!("writing {}", display_path.display()))?;
            fs::write(&full_path, full)
                .with_context(|| format!("writing {}", full_path.display()))?;
            println!(
                "{} cells over {} images ({} skipped) -> {}, {}",
                output.rows.len(),
                output.image_count - output.failures.len(),
                output.failures.len(),
                display_path.display(),
                full_path.display()
            );
            Ok(())
        }
        Command::Bench { config, noise } => {
            let config = load_config(&config)?;
            cmd_bench(&config, noise)?;
            Ok(())
        }
        Command::Report {
            input_csv,
            output_md,
        } => {
            let text = fs::read_to_string(&input_csv)
                .with_context(|| format!("reading {}", input_csv.display()))?;
            let rows = parse_full_csv(&text)
                .context("parsing results CSV")
                .map_err(anyhow::Error::from)?;
            let md = format_markdown_tables(&rows)
                .context("rendering tables")
                .map_err(anyhow::Error::from)?;
            fs::write(&output_md, md)
                .with_context(|| format!("writing {}", output_md.display()))?;
            Ok(())
        }
        Command::Synth {
            count,
            seed,
            output_dir,
        } => {
            if count == 0 {
                return Err(AppError::Usage("count must be at least 1".into()));
            }
            for (i, img) in synth::leaf_corpus(count, seed).iter().enumerate() {
                save_image(&output_dir.join(format!("leaf_{i:04}.png")), img)
                    .context("writing corpus image")?;
            }
            println!("wrote {count} images to {}", output_dir.display());
            Ok(())
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, AppError> {
    let config = RunConfig::load(path).map_err(|e| AppError::Usage(e.to_string()))?;
    config
        .validate()
        .map_err(|e| AppError::Usage(e.to_string()))?;
    Ok(config)
}

fn cmd_noise(
    spec: NoiseSpec,
    input_dir: &Path,
    output_dir: &Path,
    verbose: bool,
) -> Result<(), AppError> {
    let paths = corpus::discover(input_dir)
        .with_context(|| format!("scanning {}", input_dir.display()))?;
    if paths.is_empty() {
        return Err(AppError::Usage(format!(
            "input_dir: no images found in {}",
            input_dir.display()
        )));
    }
    for (index, path) in paths.iter().enumerate() {
        let img = load_image(path).with_context(|| format!("loading {}", path.display()))?;
        let noisy = spec
            .inject(&img, index as u64)
            .context("injecting noise")
            .map_err(anyhow::Error::from)?;
        let relative = path.strip_prefix(input_dir).unwrap_or(path);
        let out_path = output_dir.join(relative).with_extension("png");
        save_image(&out_path, &noisy).context("writing output")?;
        if verbose {
            eprintln!("noised [{index}] {}", out_path.display());
        }
    }
    Ok(())
}

fn cmd_bench(config: &RunConfig, noise: NoiseKindArg) -> Result<(), AppError> {
    let paths = corpus::discover(&config.corpus_dir)
        .with_context(|| format!("scanning {}", config.corpus_dir.display()))?;
    if paths.is_empty() {
        return Err(AppError::Usage(format!(
            "corpus_dir: no images found in {}",
            config.corpus_dir.display()
        )));
    }
    let noises = config.resolved_noises();
    let chosen = noises
        .iter()
        .find(|n| {
            n.kind().label()
                == match noise {
                    NoiseKindArg::Gaussian => "gaussian",
                    NoiseKindArg::SaltPepper => "salt_pepper",
                    NoiseKindArg::Speckle => "speckle",
                    NoiseKindArg::Uniform => "uniform",
                }
        })
        .copied()
        .ok_or_else(|| AppError::Usage("noise: requested kind not in the config's noise list".into()))?;

    // noisy 256x256 inputs, cycling the corpus up to the configured count
    let count = config.timing.image_count;
    let mut images = Vec::with_capacity(count);
    for index in 0..count {
        let path = &paths[index % paths.len()];
        let img = load_image(path).with_context(|| format!("loading {}", path.display()))?;
        let resized = resize_bilinear(&img, TARGET_SIZE, TARGET_SIZE)
            .context("resizing")
            .map_err(anyhow::Error::from)?;
        images.push(
            chosen
                .inject(&resized, index as u64)
                .context("injecting noise")
                .map_err(anyhow::Error::from)?,
        );
    }

    let mut records = Vec::new();
    for spec in config.resolved_filters() {
        let record = benchmark_filter(&spec, chosen.kind(), &images, config.timing.repetitions)
            .context("timing filter")
            .map_err(anyhow::Error::from)?;
        eprintln!(
            "{:10} {} images x{}: {:.3}-{:.3} s",
            record.filter.label(),
            record.image_count,
            record.repetitions,
            record.elapsed_min,
            record.elapsed_max
        );
        records.push(record);
    }
    let csv = format_timing_csv(&records);
    fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;
    let path = config.output_dir.join("timing.csv");
    fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?;
    print!("{csv}");
    Ok(())
}
