use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adasmooth::io::{dense_to_csv, load_pgm, save_pgm, Image};
use adasmooth::solvers::{theoretical_bound, BoundKind, BoundParams};
use adasmooth::LinearMap;
use adasmooth_bench::image::clamp_unit;
use adasmooth_bench::{
    gen_instance, psnr, run_experiment, run_sweep, ExperimentConfig, HarnessError, InstanceSpec, Result,
};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

/// Adaptive smoothing experiments: instance generation, runs, sweeps and bounds.
#[derive(Parser)]
#[command(name = "adasmooth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the instance of a config and write its data files.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the configured algorithms and write traces plus summary.csv.
    Run(RunArgs),
    /// Evaluate the [sweep] grid and report the best point.
    Sweep(RunArgs),
    /// PSNR in dB of an 8-bit PGM image against a reference image.
    Psnr { image: PathBuf, reference: PathBuf },
    /// Evaluate a theoretical bound at iteration `--iters`.
    Bound(BoundArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep only algorithms of this kind.
    #[arg(long)]
    algo: Option<String>,
}

#[derive(Args)]
struct BoundArgs {
    /// adaptive, adaptive-optimal, nonadaptive, nonadaptive-fixed, smooth-g,
    /// dual-objective or dual-feasibility.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    iters: usize,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    opnorm: Option<f64>,
    #[arg(long)]
    diameter: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lg: Option<f64>,
    #[arg(long)]
    lb: Option<f64>,
    #[arg(long)]
    x0_norm: Option<f64>,
}

/// Any config file with an `[instance]` table.
#[derive(Deserialize)]
struct InstanceFile {
    instance: InstanceSpec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen { config, seed, out } => gen(&config, seed, &out),
        Command::Run(args) => {
            let cfg = load_config(&args)?;
            for row in run_experiment(&cfg)? {
                println!(
                    "{}: objective {:.6e}, gap {:.6e}",
                    row.label, row.final_objective, row.final_gap
                );
            }
            println!("wrote {}", cfg.output_dir.display());
            Ok(())
        }
        Command::Sweep(args) => {
            let cfg = load_config(&args)?;
            let result = run_sweep(&cfg)?;
            let best = result.best_point();
            println!(
                "best: {} (objective {:.6e})",
                best.summary.label, best.summary.final_objective
            );
            println!("wrote {}", cfg.output_dir.join("sweep_summary.csv").display());
            Ok(())
        }
        Command::Psnr { image, reference } => {
            let a = load_pgm(&image)?;
            let b = load_pgm(&reference)?;
            if (a.height, a.width) != (b.height, b.width) {
                return Err(HarnessError::Config(format!(
                    "image sizes differ: {}x{} vs {}x{}",
                    a.height, a.width, b.height, b.width
                )));
            }
            println!("{:.4}", psnr(&a.pixels, &b.pixels)?);
            Ok(())
        }
        Command::Bound(args) => {
            let kind = bound_kind(&args.kind)?;
            let params = BoundParams {
                r0: args.r0,
                opnorm: args.opnorm,
                diameter: args.diameter,
                gamma1: args.gamma1,
                lb: args.lb,
                lg: args.lg,
                gamma: args.gamma,
                x0_norm: args.x0_norm,
            };
            println!("{:.16e}", theoretical_bound(kind, &params, args.iters)?);
            Ok(())
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.instance.seed = seed;
    }
    if let Some(iters) = args.iters {
        cfg.iters = iters;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(kind) = &args.algo {
        cfg.select_algorithm(kind)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn bound_kind(name: &str) -> Result<BoundKind> {
    Ok(match name {
        "adaptive" => BoundKind::AdaptiveGeneral,
        "adaptive-optimal" => BoundKind::AdaptiveOptimal,
        "nonadaptive" => BoundKind::Nonadaptive,
        "nonadaptive-fixed" => BoundKind::NonadaptiveFixed,
        "smooth-g" => BoundKind::SmoothG,
        "dual-objective" => BoundKind::DualObjective,
        "dual-feasibility" => BoundKind::DualFeasibility,
        other => return Err(HarnessError::Config(format!("unknown bound kind {other}"))),
    })
}

fn gen(config: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config).map_err(|e| io_err(config, e))?;
    let mut spec = toml::from_str::<InstanceFile>(&text)
        .map_err(|e| HarnessError::Config(e.to_string()))?
        .instance;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let inst = gen_instance(&spec)?;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    write(&out.join("instance.toml"), &spec.to_toml())?;
    if spec.family.is_image() {
        let image = |pixels: &[f64]| Image::new(spec.height, spec.width, clamp_unit(pixels));
        save_pgm(&out.join("truth.pgm"), &image(&inst.natural)?)?;
        save_pgm(&out.join("observed.pgm"), &image(&inst.rhs)?)?;
    } else {
        let LinearMap::Dense { rows, cols, data } = &inst.design else {
            return Err(HarnessError::Config("regression instances carry a dense design".into()));
        };
        write(&out.join("B.csv"), &dense_to_csv(*rows, *cols, data))?;
        write(&out.join("b.csv"), &dense_to_csv(inst.rhs.len(), 1, &inst.rhs))?;
        write(
            &out.join("x_natural.csv"),
            &dense_to_csv(inst.natural.len(), 1, &inst.natural),
        )?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn io_err(path: &Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}
