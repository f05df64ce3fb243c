//! Full runs: configuration, execution, logging, and post-run analysis.
//!
//! A run owns one archive and ten emitters, steps them for a fixed number of
//! generations, and leaves a predictable directory behind:
//!
//! ```text
//! <out>/<algorithm>/<seed>/
//!   config              exact configuration, TOML
//!   log.csv             one metrics row per generation, flushed as written
//!   archive_gen_N.csv   snapshot every `log_every` generations
//!   archive_final.csv   final archive
//!   heatmap_final.svg   fitness rendering of the final archive
//! ```
//!
//! Everything downstream (metric comparison, merging, candidate selection)
//! reads those files back rather than holding state in memory, so a 15-run
//! experiment can be driven by a shell loop.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::archive::{ArchiveConfig, GridArchive, Solution};
use crate::archive_csv;
use crate::emitter::{scheduler_step, Emitter, EmitterKind, GenerationLog};
use crate::evaluate::EvalContext;
use crate::heatmap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "map-elites")]
    MapElites,
    #[serde(rename = "cma-me")]
    CmaMe,
    #[serde(rename = "cma-mae")]
    CmaMae,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::MapElites, Algorithm::CmaMe, Algorithm::CmaMae];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MapElites => "map-elites",
            Algorithm::CmaMe => "cma-me",
            Algorithm::CmaMae => "cma-mae",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }

    fn emitter_kind(self) -> EmitterKind {
        match self {
            Algorithm::MapElites => EmitterKind::Gaussian,
            Algorithm::CmaMe => EmitterKind::Cma2Imp,
            Algorithm::CmaMae => EmitterKind::CmaImp,
        }
    }

    /// Archive learning rate when the config leaves it unset. The elitist
    /// algorithms keep hard thresholds; CMA-MAE anneals slowly.
    pub fn default_alpha(self) -> f64 {
        match self {
            Algorithm::MapElites | Algorithm::CmaMe => 1.0,
            Algorithm::CmaMae => 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    #[serde(default = "default_generations")]
    pub generations: u64,
    #[serde(default = "default_solutions_per_gen")]
    pub solutions_per_gen: usize,
    #[serde(default = "default_emitters")]
    pub emitters: usize,
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    /// Archive learning rate; None defers to the algorithm's default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default = "default_log_every")]
    pub log_every: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn default_generations() -> u64 {
    300
}
fn default_solutions_per_gen() -> usize {
    37
}
fn default_emitters() -> usize {
    10
}
fn default_sigma0() -> f64 {
    0.5
}
fn default_log_every() -> u64 {
    20
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, seed: u64, out_dir: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            algorithm,
            generations: default_generations(),
            solutions_per_gen: default_solutions_per_gen(),
            emitters: default_emitters(),
            sigma0: default_sigma0(),
            alpha: None,
            log_every: default_log_every(),
            seed,
            out_dir: out_dir.into(),
        }
    }

    pub fn effective_alpha(&self) -> f64 {
        self.alpha.unwrap_or_else(|| self.algorithm.default_alpha())
    }

    /// Where this run's files live: `<out>/<algorithm>/<seed>/`.
    pub fn run_dir(&self) -> PathBuf {
        self.out_dir
            .join(self.algorithm.name())
            .join(self.seed.to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 || self.log_every == 0 {
            return Err(Error::Config(
                "generations and log_every must be positive".into(),
            ));
        }
        if self.emitters == 0 || self.solutions_per_gen == 0 {
            return Err(Error::Config(
                "emitters and solutions_per_gen must be positive".into(),
            ));
        }
        if self.solutions_per_gen < self.emitters {
            return Err(Error::Config(format!(
                "{} emitters cannot share {} solutions",
                self.emitters, self.solutions_per_gen
            )));
        }
        if self.algorithm != Algorithm::MapElites && self.solutions_per_gen < 2 * self.emitters {
            return Err(Error::Config(
                "CMA emitters need batches of at least 2".into(),
            ));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(Error::Config(format!(
                "sigma0 must be positive, got {}",
                self.sigma0
            )));
        }
        let alpha = self.effective_alpha();
        if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            return Err(Error::Config(format!(
                "alpha must lie in [0,1], got {alpha}"
            )));
        }
        Ok(())
    }
}

pub struct RunOutput {
    pub dir: PathBuf,
    pub archive: GridArchive,
    pub logs: Vec<GenerationLog>,
}

pub const LOG_HEADER: &str = "generation,evaluations,occupied,qd_score,best_fitness";

/// Batches split the generation budget as evenly as possible, earlier
/// emitters taking the remainder (37 over 10 gives seven 4s then three 3s).
fn build_emitters(config: &RunConfig) -> Vec<Emitter> {
    let kind = config.algorithm.emitter_kind();
    let base = config.solutions_per_gen / config.emitters;
    let extra = config.solutions_per_gen % config.emitters;
    (0..config.emitters)
        .map(|i| {
            let batch = base + usize::from(i < extra);
            Emitter::new(kind, batch, config.sigma0, &[config.seed, 0xE0, i as u64])
        })
        .collect()
}

fn write_archive_file(archive: &GridArchive, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    archive_csv::write_archive(archive, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Executes a full run and writes the run directory. The log file is flushed
/// after every generation, so an aborted run keeps everything logged so far.
pub fn run(config: &RunConfig, ctx: &EvalContext) -> Result<RunOutput> {
    config.validate()?;
    let dir = config.run_dir();
    fs::create_dir_all(&dir)?;
    let rendered = toml::to_string(config).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(dir.join("config"), rendered)?;

    let mut archive = GridArchive::new(ArchiveConfig::annealed(config.effective_alpha()))?;
    let mut emitters = build_emitters(config);
    let mut log_file = BufWriter::new(File::create(dir.join("log.csv"))?);
    writeln!(log_file, "{LOG_HEADER}")?;

    let mut logs = Vec::with_capacity(config.generations as usize);
    let mut evaluations: u64 = 0;
    for gen in 1..=config.generations {
        let log = scheduler_step(&mut emitters, &mut archive, ctx, config.seed, gen);
        evaluations += log.evaluations() as u64;
        writeln!(
            log_file,
            "{},{},{},{},{}",
            gen, evaluations, log.occupied, log.qd_score, log.best_fitness
        )?;
        log_file.flush()?;
        if gen % config.log_every == 0 {
            write_archive_file(&archive, &dir.join(format!("archive_gen_{gen}.csv")))?;
        }
        logs.push(log);
    }

    write_archive_file(&archive, &dir.join("archive_final.csv"))?;
    fs::write(
        dir.join("heatmap_final.svg"),
        heatmap::fitness_svg(&archive),
    )?;
    Ok(RunOutput { dir, archive, logs })
}

/// Reads a `config` file back from a run directory.
pub fn load_config(dir: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(dir.join("config"))?;
    toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRow {
    pub generation: u64,
    pub evaluations: u64,
    pub occupied: usize,
    pub qd_score: f64,
    pub best_fitness: f64,
}

pub fn read_log(path: &Path) -> Result<Vec<LogRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == LOG_HEADER => {}
        _ => {
            return Err(Error::Config(format!(
                "{} is not a run log",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let bad = || Error::Config(format!("{} line {}: bad log row", path.display(), i + 1));
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad());
        }
        rows.push(LogRow {
            generation: fields[0].parse().map_err(|_| bad())?,
            evaluations: fields[1].parse().map_err(|_| bad())?,
            occupied: fields[2].parse().map_err(|_| bad())?,
            qd_score: fields[3].parse().map_err(|_| bad())?,
            best_fitness: fields[4].parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}

/// Per-cell occupancy across runs, for count heatmaps.
pub struct CountsMap {
    pub config: ArchiveConfig,
    pub counts: Vec<u32>,
    pub archives: usize,
}

pub fn occupancy_counts(archives: &[&GridArchive]) -> Result<CountsMap> {
    let first = archives
        .first()
        .ok_or_else(|| Error::Config("counts need at least one archive".into()))?;
    let config = *first.config();
    let mut counts = vec![0u32; config.cells()];
    for a in archives {
        if !a.config().grid_compatible(&config) {
            return Err(Error::ConfigMismatch("archives use different grids".into()));
        }
        for (xi, yi, _) in a.occupants() {
            counts[yi * config.x_bins + xi] += 1;
        }
    }
    Ok(CountsMap {
        config,
        counts,
        archives: archives.len(),
    })
}

/// Altitude targets for picking manufacture candidates, tightest first so a
/// rocket lands in the nearest target above it.
pub const SELECTION_TARGETS: [f64; 4] = [50.0, 60.0, 70.0, 80.0];

#[derive(Clone, Debug)]
pub struct Candidate {
    pub target: f64,
    pub nose_type: usize,
    pub xi: usize,
    pub yi: usize,
    pub solution: Solution,
}

/// Picks, per target altitude and nose type, the stable rocket whose mean
/// apogee comes closest to the target from below (strictly below; margin
/// under one caliber disqualifies). Targets are processed in ascending order
/// and each rocket is used at most once, so a rocket binds to the tightest
/// target it undershoots. Ties on apogee go to higher fitness, then to the
/// lower cell index.
pub fn select_candidates(archive: &GridArchive) -> Vec<Candidate> {
    let x_bins = archive.config().x_bins;
    let flat = |xi: usize, yi: usize| yi * x_bins + xi;
    let mut used: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for &target in &SELECTION_TARGETS {
        for nose in 0..6 {
            let mut best: Option<(usize, usize, &Solution)> = None;
            for (xi, yi, sol) in archive.occupants() {
                if used.contains(&flat(xi, yi))
                    || sol.meta.nose_type != nose
                    || sol.meta.stability < 1.0
                    || sol.measure_y >= target
                {
                    continue;
                }
                let replaces = match best {
                    None => true,
                    Some((bx, by, b)) => {
                        (sol.measure_y, sol.fitness, flat(bx, by))
                            > (b.measure_y, b.fitness, flat(xi, yi))
                    }
                };
                if replaces {
                    best = Some((xi, yi, sol));
                }
            }
            if let Some((xi, yi, sol)) = best {
                used.insert(flat(xi, yi));
                out.push(Candidate {
                    target,
                    nose_type: nose,
                    xi,
                    yi,
                    solution: sol.clone(),
                });
            }
        }
    }
    out
}

pub const CANDIDATE_HEADER: &str = "target,nose_type,xi,yi,fitness,measure_x,measure_y,stability,\
alt_1,alt_2,alt_3,genome_0,genome_1,genome_2,genome_3,genome_4,genome_5,genome_6,genome_7,\
genome_8,genome_9,genome_10";

pub fn candidates_csv(candidates: &[Candidate]) -> String {
    let mut out = String::from(CANDIDATE_HEADER);
    out.push('\n');
    for c in candidates {
        let s = &c.solution;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            c.target,
            c.nose_type,
            c.xi,
            c.yi,
            s.fitness,
            s.measure_x,
            s.measure_y,
            s.meta.stability
        ));
        for a in s.meta.altitudes {
            out.push_str(&format!(",{a}"));
        }
        for g in s.genome.as_slice() {
            out.push_str(&format!(",{g}"));
        }
        out.push('\n');
    }
    out
}
