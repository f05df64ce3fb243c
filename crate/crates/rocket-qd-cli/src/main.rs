//! `rocket-qd`: run quality-diversity searches over model rocket designs
//! and work with the archives they produce.
//!
//! A full experiment is a shell loop over `run`, followed by `metrics` /
//! `compare` for the learning curves, `merge` + `heatmap` for coverage
//! pictures, and `select` to pull out buildable candidates.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write as _};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rocket_qd::archive::coverage_categories;
use rocket_qd::archive_csv;
use rocket_qd::design_doc;
use rocket_qd::emitter::Evaluator;
use rocket_qd::experiment::{
    self, candidates_csv, load_config, occupancy_counts, read_log, select_candidates, LogRow,
    RunConfig,
};
use rocket_qd::mass::Materials;
use rocket_qd::sim::{simulate, trajectory_csv, DragConfig, SimParams};
use rocket_qd::stats::rank_sum;
use rocket_qd::{heatmap, rng, wind, Algorithm, ArchiveConfig, EvalContext, Genome, GridArchive};

#[derive(Parser)]
#[command(
    name = "rocket-qd",
    version,
    about = "Quality-diversity search over model rocket designs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute one search run and write its run directory.
    Run(RunArgs),
    /// Combine run logs into one CSV tagged by algorithm and seed.
    Metrics {
        /// Run directories (each holding `config` and `log.csv`).
        #[arg(long, num_args = 1.., required = true)]
        runs: Vec<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge final archives from several run directories into one CSV.
    Merge {
        #[arg(long)]
        out: PathBuf,
        /// Run directories or archive CSV files.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Per-cell occupancy counts across runs, as `xi,yi,count` CSV.
    Counts {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Rank-sum comparison of two groups of runs at logged generations.
    Compare {
        /// Run directories in the first group.
        #[arg(long = "group-a", num_args = 1.., required = true)]
        group_a: Vec<PathBuf>,
        /// Run directories in the second group.
        #[arg(long = "group-b", num_args = 1.., required = true)]
        group_b: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Metric::Both)]
        metric: Metric,
        /// Compare every this-many generations (the final one always).
        #[arg(long, default_value_t = 20)]
        every: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick manufacture candidates per target altitude and nose type.
    Select {
        #[arg(long)]
        archive: PathBuf,
        /// Also write one plain-text build sheet per candidate here.
        #[arg(long)]
        docs: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an archive (or several) as an SVG heatmap.
    Heatmap {
        /// Archive CSVs: one for fitness, two or three for category,
        /// any number for counts.
        #[arg(long = "archive", num_args = 1.., required = true)]
        archives: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Fitness)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fly a single genome through the three wind conditions.
    Simulate {
        /// Eleven comma-separated gene values.
        #[arg(long, allow_hyphen_values = true)]
        genome: String,
        /// Write the trajectory of one condition as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Wind condition for the trace: 0 calm, 1 moderate, 2 turbulent.
        #[arg(long, default_value_t = 0)]
        condition: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        materials: Option<PathBuf>,
        #[arg(long)]
        drag: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Occupied,
    QdScore,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fitness,
    Category,
    Counts,
}

#[derive(clap::Args)]
struct RunArgs {
    /// RunConfig as TOML; explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// map-elites, cma-me, or cma-mae.
    #[arg(long)]
    algo: Option<String>,
    /// Run seed; fixes every random draw in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Generations to evolve.
    #[arg(long)]
    gens: Option<u64>,
    /// Output root; the run writes to <out>/<algo>/<seed>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluations per generation, split across emitters.
    #[arg(long)]
    solutions_per_gen: Option<usize>,
    /// Number of emitters.
    #[arg(long)]
    emitters: Option<usize>,
    /// Initial emitter step size.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Archive threshold learning rate; defaults per algorithm.
    #[arg(long)]
    alpha: Option<f64>,
    /// Snapshot the archive every this many generations.
    #[arg(long)]
    log_every: Option<u64>,
    /// Materials table as TOML (densities, payload items).
    #[arg(long)]
    materials: Option<PathBuf>,
    /// Drag model constants as TOML.
    #[arg(long)]
    drag: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::Metrics { runs, out } => cmd_metrics(&runs, out.as_deref()),
        Cmd::Merge { out, inputs } => cmd_merge(&out, &inputs),
        Cmd::Counts { out, inputs } => cmd_counts(out.as_deref(), &inputs),
        Cmd::Compare {
            group_a,
            group_b,
            metric,
            every,
            out,
        } => cmd_compare(&group_a, &group_b, metric, every, out.as_deref()),
        Cmd::Select { archive, docs, out } => cmd_select(&archive, docs.as_deref(), out.as_deref()),
        Cmd::Heatmap {
            archives,
            mode,
            out,
        } => cmd_heatmap(&archives, mode, &out),
        Cmd::Simulate {
            genome,
            trace,
            condition,
            seed,
            materials,
            drag,
        } => cmd_simulate(
            &genome,
            trace.as_deref(),
            condition,
            seed,
            materials.as_deref(),
            drag.as_deref(),
        ),
    }
}

fn eval_context(materials: Option<&Path>, drag: Option<&Path>) -> Result<EvalContext> {
    let mut ctx = EvalContext::default();
    if let Some(path) = materials {
        let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
        ctx.materials = Materials::from_toml(&text)?;
    }
    if let Some(path) = drag {
        let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
        ctx.drag = DragConfig::from_toml(&text)?;
    }
    Ok(ctx)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
            toml::from_str::<RunConfig>(&text).with_context(|| path.display().to_string())?
        }
        None => {
            let (Some(algo), Some(seed), Some(out)) = (&args.algo, args.seed, &args.out) else {
                bail!("without --config, all of --algo, --seed and --out are required");
            };
            RunConfig::new(Algorithm::parse(algo)?, seed, out)
        }
    };
    if let Some(algo) = &args.algo {
        config.algorithm = Algorithm::parse(algo)?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(gens) = args.gens {
        config.generations = gens;
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(v) = args.solutions_per_gen {
        config.solutions_per_gen = v;
    }
    if let Some(v) = args.emitters {
        config.emitters = v;
    }
    if let Some(v) = args.sigma0 {
        config.sigma0 = v;
    }
    if let Some(v) = args.alpha {
        config.alpha = Some(v);
    }
    if let Some(v) = args.log_every {
        config.log_every = v;
    }

    let ctx = eval_context(args.materials.as_deref(), args.drag.as_deref())?;
    let result = experiment::run(&config, &ctx)?;
    let last = result.logs.last().expect("at least one generation");
    println!(
        "{} seed {}: {} generations, occupied {}, qd_score {:.1}, best {:.2} -> {}",
        config.algorithm.name(),
        config.seed,
        config.generations,
        last.occupied,
        last.qd_score,
        last.best_fitness,
        result.dir.display()
    );
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| path.display().to_string())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_metrics(runs: &[PathBuf], out: Option<&Path>) -> Result<()> {
    let mut text = format!("algorithm,seed,{}\n", experiment::LOG_HEADER);
    for dir in runs {
        let config = load_config(dir).with_context(|| dir.display().to_string())?;
        for row in read_log(&dir.join("log.csv"))? {
            text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                config.algorithm.name(),
                config.seed,
                row.generation,
                row.evaluations,
                row.occupied,
                row.qd_score,
                row.best_fitness
            ));
        }
    }
    write_or_print(out, &text)
}

/// Accepts either a run directory (uses its `archive_final.csv`) or a CSV
/// file directly.
fn read_archive_input(input: &Path) -> Result<GridArchive> {
    let path = if input.is_dir() {
        input.join("archive_final.csv")
    } else {
        input.to_path_buf()
    };
    let file = File::open(&path).with_context(|| path.display().to_string())?;
    let archive = archive_csv::read_archive(BufReader::new(file), ArchiveConfig::default())
        .with_context(|| path.display().to_string())?;
    Ok(archive)
}

fn cmd_merge(out: &Path, inputs: &[PathBuf]) -> Result<()> {
    let archives: Vec<GridArchive> = inputs
        .iter()
        .map(|p| read_archive_input(p))
        .collect::<Result<_>>()?;
    let refs: Vec<&GridArchive> = archives.iter().collect();
    let merged = GridArchive::merge(&refs)?;
    let mut file = BufWriter::new(File::create(out).with_context(|| out.display().to_string())?);
    archive_csv::write_archive(&merged, &mut file)?;
    file.flush()?;
    println!(
        "merged {} archives: {} occupied cells -> {}",
        refs.len(),
        merged.occupied_count(),
        out.display()
    );
    Ok(())
}

fn cmd_counts(out: Option<&Path>, inputs: &[PathBuf]) -> Result<()> {
    let archives: Vec<GridArchive> = inputs
        .iter()
        .map(|p| read_archive_input(p))
        .collect::<Result<_>>()?;
    let refs: Vec<&GridArchive> = archives.iter().collect();
    let counts = occupancy_counts(&refs)?;
    let mut text = String::from("xi,yi,count\n");
    for yi in 0..counts.config.y_bins {
        for xi in 0..counts.config.x_bins {
            let c = counts.counts[yi * counts.config.x_bins + xi];
            if c > 0 {
                text.push_str(&format!("{xi},{yi},{c}\n"));
            }
        }
    }
    write_or_print(out, &text)
}

fn metric_value(metric: Metric, row: &LogRow) -> f64 {
    match metric {
        Metric::Occupied => row.occupied as f64,
        Metric::QdScore => row.qd_score,
        Metric::Both => unreachable!("expanded before lookup"),
    }
}

fn cmd_compare(
    group_a: &[PathBuf],
    group_b: &[PathBuf],
    metric: Metric,
    every: u64,
    out: Option<&Path>,
) -> Result<()> {
    if every == 0 {
        bail!("--every must be positive");
    }
    let load = |dirs: &[PathBuf]| -> Result<Vec<Vec<LogRow>>> {
        dirs.iter()
            .map(|d| read_log(&d.join("log.csv")))
            .collect::<rocket_qd::Result<_>>()
            .map_err(Into::into)
    };
    let logs_a = load(group_a)?;
    let logs_b = load(group_b)?;
    let last_common = logs_a
        .iter()
        .chain(&logs_b)
        .map(|rows| rows.last().map_or(0, |r| r.generation))
        .min()
        .unwrap_or(0);
    if last_common == 0 {
        bail!("a run log is empty");
    }
    let metrics: &[Metric] = match metric {
        Metric::Both => &[Metric::Occupied, Metric::QdScore],
        Metric::Occupied => &[Metric::Occupied],
        Metric::QdScore => &[Metric::QdScore],
    };
    let mut text = String::from("generation,metric,mean_a,mean_b,u,z,p\n");
    let generations = (1..=last_common).filter(|g| g % every == 0 || *g == last_common);
    for generation in generations {
        // Logs hold one row per generation, so the row index is implied.
        let at = |rows: &Vec<LogRow>| rows[(generation - 1) as usize];
        for &m in metrics {
            let a: Vec<f64> = logs_a.iter().map(|r| metric_value(m, &at(r))).collect();
            let b: Vec<f64> = logs_b.iter().map(|r| metric_value(m, &at(r))).collect();
            let test = rank_sum(&a, &b);
            let name = match m {
                Metric::Occupied => "occupied",
                Metric::QdScore => "qd_score",
                Metric::Both => unreachable!(),
            };
            text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                generation,
                name,
                mean(&a),
                mean(&b),
                test.u,
                test.z,
                test.p
            ));
        }
    }
    write_or_print(out, &text)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn cmd_select(archive: &Path, docs: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let archive = read_archive_input(archive)?;
    let candidates = select_candidates(&archive);
    write_or_print(out, &candidates_csv(&candidates))?;
    if let Some(dir) = docs {
        fs::create_dir_all(dir)?;
        let ctx = EvalContext::default();
        for c in &candidates {
            let name = format!(
                "{:02.0}m_{}.txt",
                c.target,
                rocket_qd::nose::NOSE_TYPES[c.nose_type]
                    .name()
                    .to_lowercase()
            );
            fs::write(dir.join(name), design_doc::describe(&c.solution, &ctx))?;
        }
    }
    Ok(())
}

fn cmd_heatmap(archives: &[PathBuf], mode: Mode, out: &Path) -> Result<()> {
    let loaded: Vec<GridArchive> = archives
        .iter()
        .map(|p| read_archive_input(p))
        .collect::<Result<_>>()?;
    let svg = match mode {
        Mode::Fitness => {
            if loaded.len() != 1 {
                bail!("fitness mode takes exactly one archive");
            }
            heatmap::fitness_svg(&loaded[0])
        }
        Mode::Category => {
            let names: Vec<String> = archives.iter().map(|p| label_for(p)).collect();
            let named: Vec<(&str, &GridArchive)> = names
                .iter()
                .map(String::as_str)
                .zip(loaded.iter())
                .collect();
            let map = coverage_categories(&named)?;
            heatmap::category_svg(loaded[0].config(), &map)?
        }
        Mode::Counts => {
            let refs: Vec<&GridArchive> = loaded.iter().collect();
            let counts = occupancy_counts(&refs)?;
            heatmap::counts_svg(&counts.config, &counts.counts, counts.archives)?
        }
    };
    fs::write(out, svg).with_context(|| out.display().to_string())?;
    Ok(())
}

/// Legend label for an archive path: run directories are `<algo>/<seed>`,
/// plain files use their stem.
fn label_for(path: &Path) -> String {
    if path.is_dir() {
        let seed = path.file_name().map(|s| s.to_string_lossy().into_owned());
        let algo = path
            .parent()
            .and_then(|p| p.file_name())
            .map(|s| s.to_string_lossy().into_owned());
        if let (Some(algo), Some(seed)) = (algo, seed) {
            return format!("{algo}/{seed}");
        }
    }
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn cmd_simulate(
    genome: &str,
    trace: Option<&Path>,
    condition: usize,
    seed: u64,
    materials: Option<&Path>,
    drag: Option<&Path>,
) -> Result<()> {
    if condition >= wind::CONDITIONS.len() {
        bail!("condition must be 0..{}", wind::CONDITIONS.len() - 1);
    }
    let genome: Genome = rocket_qd::genome::parse_genome(genome)?;
    let ctx = eval_context(materials, drag)?;
    let solution = Evaluator::evaluate(&ctx, &genome, seed, 0, 0);
    print!("{}", design_doc::describe(&solution, &ctx));

    if let Some(path) = trace {
        let design = rocket_qd::rocket::decode(&genome);
        let params = SimParams {
            record_trajectory: true,
            ..ctx.params.clone()
        };
        let outcome = simulate(
            &design,
            &ctx.materials,
            &ctx.drag,
            &ctx.motor,
            wind::condition(condition),
            &params,
            rng::stream(&[seed, 0, 0, condition as u64]),
        );
        let samples = outcome.trajectory.unwrap_or_default();
        fs::write(path, trajectory_csv(&samples)).with_context(|| path.display().to_string())?;
        println!(
            "trace:  condition {} -> {} ({} samples, apogee {:.1} m at {:.2} s)",
            condition,
            path.display(),
            samples.len(),
            outcome.apogee,
            outcome.time_to_apogee
        );
    }
    Ok(())
}
