//! Candidate generation and the per-generation schedule.
//!
//! Three emitter kinds share one interface: Gaussian perturbation of random
//! elites (MAP-Elites), CMA with two-stage improvement ranking (CMA-ME), and
//! CMA with single-stage ranking against annealed thresholds (CMA-MAE).
//! A generation asks every emitter, evaluates the combined batch (in
//! parallel; results depend only on derived seeds), inserts in a fixed
//! order, then feeds each CMA emitter the ranking of its own batch.

use crate::archive::{GridArchive, InsertResult, InsertStatus, Solution};
use crate::cma::CmaState;
use crate::genome::{Genome, GENOME_LEN};
use crate::rng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitterKind {
    /// Gaussian noise around uniformly chosen elites.
    Gaussian,
    /// CMA ranked by discovery first, improvement second.
    Cma2Imp,
    /// CMA ranked purely by fitness-over-threshold value.
    CmaImp,
}

pub struct Emitter {
    pub kind: EmitterKind,
    pub batch: usize,
    sigma0: f64,
    rng: ChaCha8Rng,
    cma: Option<CmaState>,
    pub restarts: usize,
}

impl Emitter {
    pub fn new(kind: EmitterKind, batch: usize, sigma0: f64, seed: &[u64]) -> Self {
        assert!(batch >= 1);
        let cma = match kind {
            EmitterKind::Gaussian => None,
            EmitterKind::Cma2Imp | EmitterKind::CmaImp => {
                Some(CmaState::new(&[0.0; GENOME_LEN], sigma0, batch))
            }
        };
        Emitter {
            kind,
            batch,
            sigma0,
            rng: rng::stream(seed),
            cma,
            restarts: 0,
        }
    }

    pub fn ask(&mut self, archive: &GridArchive) -> Vec<Genome> {
        match self.kind {
            EmitterKind::Gaussian => (0..self.batch)
                .map(|_| {
                    let mut g = if archive.occupied_count() == 0 {
                        Genome::zeros()
                    } else {
                        let pick = self.rng.random_range(0..archive.occupied_count());
                        archive.nth_occupant(pick).genome
                    };
                    for v in g.0.iter_mut() {
                        *v += self.sigma0 * self.rng.sample::<f64, _>(StandardNormal);
                    }
                    g
                })
                .collect(),
            _ => {
                let cma = self.cma.as_mut().expect("cma emitter has state");
                cma.ask(&mut self.rng)
                    .into_iter()
                    .map(|x| Genome(x.try_into().expect("genome length")))
                    .collect()
            }
        }
    }

    /// Feeds back this emitter's own batch in insertion order. Gaussian
    /// emitters are stateless and ignore it.
    pub fn tell(&mut self, archive: &GridArchive, genomes: &[Genome], results: &[InsertResult]) {
        let ranking = match self.kind {
            EmitterKind::Gaussian => return,
            EmitterKind::Cma2Imp => rank_2imp(results),
            EmitterKind::CmaImp => rank_imp(results),
        };
        let cma = self.cma.as_mut().expect("cma emitter has state");
        let ranked: Vec<&[f64]> = ranking.iter().map(|&i| genomes[i].as_slice()).collect();
        cma.tell(&ranked);
        if cma.should_restart(results) {
            let mean = if archive.occupied_count() == 0 {
                Genome::zeros()
            } else {
                let pick = self.rng.random_range(0..archive.occupied_count());
                archive.nth_occupant(pick).genome
            };
            *cma = CmaState::new(mean.as_slice(), self.sigma0, self.batch);
            self.restarts += 1;
        }
    }
}

/// Two-stage improvement ranking: discoveries first, then improvements, then
/// rejections; descending value inside each stage; stable on ties.
pub fn rank_2imp(results: &[InsertResult]) -> Vec<usize> {
    let stage = |s: InsertStatus| match s {
        InsertStatus::NewCell => 0,
        InsertStatus::Improved => 1,
        InsertStatus::Rejected => 2,
    };
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| {
        stage(results[a].status)
            .cmp(&stage(results[b].status))
            .then(
                results[b]
                    .value
                    .partial_cmp(&results[a].value)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    order
}

/// Single-stage ranking by value (fitness minus pre-insert threshold) alone;
/// stable on ties.
pub fn rank_imp(results: &[InsertResult]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| {
        results[b]
            .value
            .partial_cmp(&results[a].value)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

/// Produces one evaluated solution per genome. Implementations must be pure
/// in (genome, run_seed, generation, solution_index) so batches can be
/// evaluated on any number of workers without changing results.
pub trait Evaluator: Sync {
    fn evaluate(
        &self,
        genome: &Genome,
        run_seed: u64,
        generation: u64,
        solution_index: u64,
    ) -> Solution;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmitterTally {
    pub new_cells: usize,
    pub improved: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationLog {
    pub generation: u64,
    pub tallies: Vec<EmitterTally>,
    pub occupied: usize,
    pub qd_score: f64,
    pub best_fitness: f64,
}

impl GenerationLog {
    pub fn evaluations(&self) -> usize {
        self.tallies
            .iter()
            .map(|t| t.new_cells + t.improved + t.rejected)
            .sum()
    }
}

/// Runs one generation: ask, evaluate, insert, tell.
pub fn scheduler_step<E: Evaluator>(
    emitters: &mut [Emitter],
    archive: &mut GridArchive,
    evaluator: &E,
    run_seed: u64,
    generation: u64,
) -> GenerationLog {
    let mut batches: Vec<Vec<Genome>> = Vec::with_capacity(emitters.len());
    let mut flat: Vec<Genome> = Vec::new();
    for emitter in emitters.iter_mut() {
        let batch = emitter.ask(archive);
        flat.extend_from_slice(&batch);
        batches.push(batch);
    }

    let solutions: Vec<Solution> = flat
        .par_iter()
        .enumerate()
        .map(|(i, genome)| evaluator.evaluate(genome, run_seed, generation, i as u64))
        .collect();

    // Insertion is serialized in (emitter, within-batch) order so archive
    // state never depends on evaluation scheduling.
    let results: Vec<InsertResult> = solutions
        .into_iter()
        .map(|s| {
            archive.insert(s).unwrap_or(InsertResult {
                status: InsertStatus::Rejected,
                value: f64::NEG_INFINITY,
            })
        })
        .collect();

    let mut tallies = Vec::with_capacity(emitters.len());
    let mut offset = 0;
    for (emitter, batch) in emitters.iter_mut().zip(&batches) {
        let slice = &results[offset..offset + batch.len()];
        let mut tally = EmitterTally::default();
        for r in slice {
            match r.status {
                InsertStatus::NewCell => tally.new_cells += 1,
                InsertStatus::Improved => tally.improved += 1,
                InsertStatus::Rejected => tally.rejected += 1,
            }
        }
        emitter.tell(archive, batch, slice);
        tallies.push(tally);
        offset += batch.len();
    }

    let best_fitness = archive
        .occupants()
        .map(|(_, _, s)| s.fitness)
        .fold(0.0, f64::max);
    GenerationLog {
        generation,
        tallies,
        occupied: archive.occupied_count(),
        qd_score: archive.qd_score(),
        best_fitness,
    }
}
