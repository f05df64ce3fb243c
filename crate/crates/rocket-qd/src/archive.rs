//! Grid archive.
//!
//! A 100x100 grid over (nose/stability composite, mean apogee). Each cell
//! stores at most one solution plus an acceptance threshold. With learning
//! rate 1 the threshold equals the occupant's fitness and insertion is the
//! classic elitist replacement; with a small learning rate the threshold
//! anneals upward while the stored occupant still tracks the best solution
//! ever accepted, so exports always show the elitist record.

use crate::error::{Error, Result};
use crate::genome::Genome;
use serde::{Deserialize, Serialize};

/// Decoded-design summary carried along for export.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionMeta {
    /// Nose type index, 0..=5.
    pub nose_type: usize,
    /// Stability margin in calibers at ignition mass.
    pub stability: f64,
    /// Apogee per wind condition, calm to turbulent.
    pub altitudes: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub genome: Genome,
    pub fitness: f64,
    pub measure_x: f64,
    pub measure_y: f64,
    pub meta: SolutionMeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveConfig {
    pub x_bins: usize,
    pub y_bins: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Threshold learning rate. 1.0 is elitist; CMA-MAE uses 0.01.
    pub learning_rate: f64,
    /// Starting acceptance threshold for every cell. Zero means fitness-0
    /// (unstable) designs are never archived.
    pub threshold_floor: f64,
}

impl Default for ArchiveConfig {
    fn default() -> Self {
        ArchiveConfig {
            x_bins: 100,
            y_bins: 100,
            x_range: (0.0, 15.0),
            y_range: (0.0, 90.0),
            learning_rate: 1.0,
            threshold_floor: 0.0,
        }
    }
}

impl ArchiveConfig {
    pub fn annealed(learning_rate: f64) -> Self {
        ArchiveConfig {
            learning_rate,
            ..ArchiveConfig::default()
        }
    }

    /// True when the two configs describe the same grid geometry. Learning
    /// rates may differ: merging and coverage comparison operate on cells,
    /// not on acceptance dynamics.
    pub fn grid_compatible(&self, other: &ArchiveConfig) -> bool {
        self.x_bins == other.x_bins
            && self.y_bins == other.y_bins
            && self.x_range == other.x_range
            && self.y_range == other.y_range
    }

    pub fn x_width(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / self.x_bins as f64
    }

    pub fn y_width(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / self.y_bins as f64
    }

    pub fn cells(&self) -> usize {
        self.x_bins * self.y_bins
    }

    fn validate(&self) -> Result<()> {
        if self.x_bins == 0 || self.y_bins == 0 {
            return Err(Error::Config(
                "archive needs at least one bin per axis".into(),
            ));
        }
        // partial_cmp so NaN bounds fail too.
        let ascending = |r: (f64, f64)| r.0.partial_cmp(&r.1) == Some(std::cmp::Ordering::Less);
        if !ascending(self.x_range) || !ascending(self.y_range) {
            return Err(Error::Config("archive ranges must be non-empty".into()));
        }
        if !(0.0..=1.0).contains(&self.learning_rate) {
            return Err(Error::Config("learning rate must lie in [0,1]".into()));
        }
        Ok(())
    }
}

/// Bin lookup with half-open bins; values at or beyond an edge are captured
/// by the nearest edge bin. Multiplying by the bin count before dividing by
/// the range keeps exact boundary values (like 7.5 on [0,15]) in the upper
/// bin.
pub fn index_of(measure_x: f64, measure_y: f64, config: &ArchiveConfig) -> (usize, usize) {
    (
        axis_index(measure_x, config.x_range, config.x_bins),
        axis_index(measure_y, config.y_range, config.y_bins),
    )
}

fn axis_index(value: f64, range: (f64, f64), bins: usize) -> usize {
    let v = if value.is_nan() {
        range.0
    } else {
        value.clamp(range.0, range.1)
    };
    let i = ((v - range.0) * bins as f64 / (range.1 - range.0)).floor() as isize;
    i.clamp(0, bins as isize - 1) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertStatus {
    NewCell,
    Improved,
    Rejected,
}

/// Outcome of one insertion attempt. `value` is the solution's fitness minus
/// the cell threshold before the attempt; emitters rank on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InsertResult {
    pub status: InsertStatus,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct GridArchive {
    config: ArchiveConfig,
    cells: Vec<Option<Solution>>,
    thresholds: Vec<f64>,
    /// Flat indices of occupied cells in first-occupation order; lets
    /// emitters pick a uniformly random elite in O(1).
    occupied: Vec<u32>,
}

impl GridArchive {
    pub fn new(config: ArchiveConfig) -> Result<Self> {
        config.validate()?;
        Ok(GridArchive {
            cells: vec![None; config.cells()],
            thresholds: vec![config.threshold_floor; config.cells()],
            occupied: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &ArchiveConfig {
        &self.config
    }

    fn flat(&self, xi: usize, yi: usize) -> usize {
        yi * self.config.x_bins + xi
    }

    pub fn index_of(&self, measure_x: f64, measure_y: f64) -> (usize, usize) {
        index_of(measure_x, measure_y, &self.config)
    }

    /// Applies the acceptance rule: a candidate enters iff its fitness
    /// strictly beats the cell threshold. On acceptance the threshold moves
    /// toward the fitness by the learning rate and the occupant keeps the
    /// best fitness seen.
    pub fn insert(&mut self, s: Solution) -> Result<InsertResult> {
        if !s.fitness.is_finite() {
            return Err(Error::NonFiniteFitness(s.fitness));
        }
        let (xi, yi) = self.index_of(s.measure_x, s.measure_y);
        let at = self.flat(xi, yi);
        let old_threshold = self.thresholds[at];
        let value = s.fitness - old_threshold;
        if s.fitness <= old_threshold {
            return Ok(InsertResult {
                status: InsertStatus::Rejected,
                value,
            });
        }
        let alpha = self.config.learning_rate;
        self.thresholds[at] = (1.0 - alpha) * old_threshold + alpha * s.fitness;
        let status = match &mut self.cells[at] {
            Some(occupant) => {
                if s.fitness > occupant.fitness {
                    *occupant = s;
                }
                InsertStatus::Improved
            }
            slot @ None => {
                *slot = Some(s);
                self.occupied.push(at as u32);
                InsertStatus::NewCell
            }
        };
        Ok(InsertResult { status, value })
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn qd_score(&self) -> f64 {
        self.occupied
            .iter()
            .map(|&at| {
                self.cells[at as usize]
                    .as_ref()
                    .expect("occupied cell")
                    .fitness
            })
            .sum()
    }

    pub fn cell(&self, xi: usize, yi: usize) -> Option<&Solution> {
        self.cells[self.flat(xi, yi)].as_ref()
    }

    pub fn threshold(&self, xi: usize, yi: usize) -> f64 {
        self.thresholds[self.flat(xi, yi)]
    }

    /// Occupied cells as (xi, yi, solution), in row-major order.
    pub fn occupants(&self) -> impl Iterator<Item = (usize, usize, &Solution)> {
        let xb = self.config.x_bins;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(at, cell)| cell.as_ref().map(|s| (at % xb, at / xb, s)))
    }

    /// The occupant of the n-th occupied cell in first-occupation order.
    pub fn nth_occupant(&self, n: usize) -> &Solution {
        let at = self.occupied[n] as usize;
        self.cells[at].as_ref().expect("occupied cell")
    }

    /// Rebuilds a cell directly from snapshot data, bypassing the acceptance
    /// rule; used by the CSV importer to restore exact state.
    pub(crate) fn restore_cell(
        &mut self,
        xi: usize,
        yi: usize,
        s: Solution,
        threshold: f64,
    ) -> Result<()> {
        if xi >= self.config.x_bins || yi >= self.config.y_bins {
            return Err(Error::Config(format!("cell ({xi},{yi}) out of grid")));
        }
        let at = self.flat(xi, yi);
        if self.cells[at].is_some() {
            return Err(Error::Config(format!("cell ({xi},{yi}) restored twice")));
        }
        self.cells[at] = Some(s);
        self.thresholds[at] = threshold;
        self.occupied.push(at as u32);
        Ok(())
    }

    /// Combines archives cell-wise, keeping the best occupant everywhere.
    /// The result is elitist regardless of the inputs' learning rates.
    pub fn merge(archives: &[&GridArchive]) -> Result<GridArchive> {
        let first = archives
            .first()
            .ok_or_else(|| Error::Config("merge needs at least one archive".into()))?;
        check_grids(archives)?;
        let mut out = GridArchive::new(ArchiveConfig {
            learning_rate: 1.0,
            threshold_floor: first.config.threshold_floor,
            ..first.config
        })?;
        for a in archives {
            for (_, _, s) in a.occupants() {
                out.insert(s.clone())?;
            }
        }
        Ok(out)
    }
}

fn check_grids(archives: &[&GridArchive]) -> Result<()> {
    if let Some(first) = archives.first() {
        for (i, a) in archives.iter().enumerate().skip(1) {
            if !a.config.grid_compatible(&first.config) {
                return Err(Error::ConfigMismatch(format!(
                    "archive {i} uses a different grid than archive 0"
                )));
            }
        }
    }
    Ok(())
}

/// Which of up to 32 named archives cover each cell, as a bitmask per cell
/// (bit i set when `archives[i]` occupies the cell). Cell order is row-major.
#[derive(Clone, Debug)]
pub struct CoverageMap {
    pub names: Vec<String>,
    pub x_bins: usize,
    pub y_bins: usize,
    pub mask: Vec<u32>,
}

pub fn coverage_categories(named: &[(&str, &GridArchive)]) -> Result<CoverageMap> {
    let archives: Vec<&GridArchive> = named.iter().map(|(_, a)| *a).collect();
    let first = archives
        .first()
        .ok_or_else(|| Error::Config("coverage needs at least one archive".into()))?;
    check_grids(&archives)?;
    if named.len() > 32 {
        return Err(Error::Config(
            "coverage supports at most 32 archives".into(),
        ));
    }
    let mut mask = vec![0u32; first.config.cells()];
    for (i, a) in archives.iter().enumerate() {
        for (xi, yi, _) in a.occupants() {
            mask[yi * first.config.x_bins + xi] |= 1 << i;
        }
    }
    Ok(CoverageMap {
        names: named.iter().map(|(n, _)| n.to_string()).collect(),
        x_bins: first.config.x_bins,
        y_bins: first.config.y_bins,
        mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn solution(fitness: f64, mx: f64, my: f64) -> Solution {
        Solution {
            genome: Genome::zeros(),
            fitness,
            measure_x: mx,
            measure_y: my,
            meta: SolutionMeta {
                nose_type: 0,
                stability: 1.5,
                altitudes: [my, my, my],
            },
        }
    }

    #[test]
    fn index_corners_and_center() {
        let c = ArchiveConfig::default();
        assert_eq!(index_of(0.0, 0.0, &c), (0, 0));
        assert_eq!(index_of(15.0, 90.0, &c), (99, 99));
        assert_eq!(index_of(7.5, 45.0, &c), (50, 50));
    }

    #[test]
    fn index_clamps_out_of_range() {
        let c = ArchiveConfig::default();
        assert_eq!(index_of(-3.0, -1.0, &c), (0, 0));
        assert_eq!(index_of(99.0, 500.0, &c), (99, 99));
        assert_eq!(index_of(f64::NAN, 45.0, &c), (0, 50));
    }

    #[test]
    fn index_bin_centers() {
        let c = ArchiveConfig::default();
        for k in 0..100 {
            let x = (k as f64 + 0.5) * c.x_width();
            let y = (k as f64 + 0.5) * c.y_width();
            assert_eq!(index_of(x, y, &c), (k, k));
        }
    }

    #[test]
    fn index_boundary_jumps_are_single_steps() {
        // Just below and just above every interior boundary may differ by at
        // most one bin, and the sequence of indices along the axis is
        // non-decreasing.
        let c = ArchiveConfig::default();
        let mut last = 0;
        for i in 0..=15_000 {
            let x = i as f64 * 1e-3;
            let (xi, _) = index_of(x, 0.0, &c);
            assert!(
                xi == last || xi == last + 1,
                "jump at x={x}: {last} -> {xi}"
            );
            last = xi;
        }
        assert_eq!(last, 99);
    }

    #[test]
    fn elitist_insert_empty_cell() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let r = a.insert(solution(40.0, 1.0, 50.0)).unwrap();
        assert_eq!(r.status, InsertStatus::NewCell);
        assert_eq!(r.value, 40.0);
        let (xi, yi) = a.index_of(1.0, 50.0);
        assert_eq!(a.threshold(xi, yi), 40.0);
        assert_eq!(a.occupied_count(), 1);
    }

    #[test]
    fn elitist_rejects_worse_and_equal() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        a.insert(solution(30.0, 1.0, 50.0)).unwrap();
        let worse = a.insert(solution(20.0, 1.0, 50.0)).unwrap();
        assert_eq!(worse.status, InsertStatus::Rejected);
        assert_eq!(worse.value, -10.0);
        let tie = a.insert(solution(30.0, 1.0, 50.0)).unwrap();
        assert_eq!(tie.status, InsertStatus::Rejected);
        let better = a.insert(solution(31.0, 1.0, 50.0)).unwrap();
        assert_eq!(better.status, InsertStatus::Improved);
        assert_eq!(better.value, 1.0);
    }

    #[test]
    fn zero_fitness_never_enters() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let r = a.insert(solution(0.0, 1.0, 50.0)).unwrap();
        assert_eq!(r.status, InsertStatus::Rejected);
        assert_eq!(a.occupied_count(), 0);
    }

    #[test]
    fn annealed_threshold_update() {
        let mut a = GridArchive::new(ArchiveConfig::annealed(0.01)).unwrap();
        let r = a.insert(solution(40.0, 1.0, 50.0)).unwrap();
        assert_eq!(r.status, InsertStatus::NewCell);
        let (xi, yi) = a.index_of(1.0, 50.0);
        assert!((a.threshold(xi, yi) - 0.4).abs() < 1e-15);
        // Occupant outlives later, lower-fitness accepted solutions.
        let r2 = a.insert(solution(10.0, 1.0, 50.0)).unwrap();
        assert_eq!(r2.status, InsertStatus::Improved);
        assert_eq!(a.cell(xi, yi).unwrap().fitness, 40.0);
        let expected = (1.0 - 0.01) * 0.4 + 0.01 * 10.0;
        assert!((a.threshold(xi, yi) - expected).abs() < 1e-15);
    }

    #[test]
    fn non_finite_fitness_is_an_error() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        assert!(a.insert(solution(f64::NAN, 1.0, 50.0)).is_err());
        assert!(a.insert(solution(f64::INFINITY, 1.0, 50.0)).is_err());
        assert_eq!(a.occupied_count(), 0);
    }

    #[test]
    fn same_cell_counts_once() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        // Three measures all inside bin (50, 50).
        for (f, x) in [(10.0, 7.51), (12.0, 7.56), (11.0, 7.60)] {
            assert_eq!(a.index_of(x, 45.3), (50, 50));
            a.insert(solution(f, x, 45.3)).unwrap();
        }
        assert_eq!(a.occupied_count(), 1);
        assert_eq!(a.qd_score(), 12.0);
    }

    #[test]
    fn qd_score_sums_occupants() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        assert_eq!(a.qd_score(), 0.0);
        a.insert(solution(40.0, 1.0, 50.0)).unwrap();
        assert_eq!(a.qd_score(), 40.0);
        a.insert(solution(35.0, 4.0, 20.0)).unwrap();
        assert_eq!(a.qd_score(), 75.0);
    }

    #[test]
    fn merge_single_is_identity() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        a.insert(solution(12.0, 3.0, 30.0)).unwrap();
        a.insert(solution(9.0, 8.0, 70.0)).unwrap();
        let m = GridArchive::merge(&[&a]).unwrap();
        assert_eq!(m.occupied_count(), a.occupied_count());
        assert_eq!(m.qd_score(), a.qd_score());
    }

    #[test]
    fn merge_disjoint_and_overlapping() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let mut b = GridArchive::new(ArchiveConfig::default()).unwrap();
        a.insert(solution(30.0, 1.0, 10.0)).unwrap();
        b.insert(solution(20.0, 9.0, 80.0)).unwrap();
        let disjoint = GridArchive::merge(&[&a, &b]).unwrap();
        assert_eq!(disjoint.occupied_count(), 2);

        b.insert(solution(35.0, 1.0, 10.0)).unwrap();
        let merged = GridArchive::merge(&[&a, &b]).unwrap();
        let (xi, yi) = merged.index_of(1.0, 10.0);
        assert_eq!(merged.cell(xi, yi).unwrap().fitness, 35.0);
    }

    #[test]
    fn merge_rejects_mismatched_grids() {
        let a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let b = GridArchive::new(ArchiveConfig {
            x_bins: 50,
            ..ArchiveConfig::default()
        })
        .unwrap();
        assert!(GridArchive::merge(&[&a, &b]).is_err());
    }

    #[test]
    fn merge_accepts_differing_learning_rates() {
        let a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let b = GridArchive::new(ArchiveConfig::annealed(0.01)).unwrap();
        assert!(GridArchive::merge(&[&a, &b]).is_ok());
    }

    #[test]
    fn coverage_bitmasks() {
        let mut a = GridArchive::new(ArchiveConfig::default()).unwrap();
        let mut b = GridArchive::new(ArchiveConfig::default()).unwrap();
        let mut c = GridArchive::new(ArchiveConfig::default()).unwrap();
        let empty = coverage_categories(&[("a", &a), ("b", &b), ("c", &c)]).unwrap();
        assert!(empty.mask.iter().all(|&m| m == 0));

        a.insert(solution(5.0, 0.01, 0.01)).unwrap();
        let one = coverage_categories(&[("a", &a), ("b", &b)]).unwrap();
        assert_eq!(one.mask[0], 0b01);

        b.insert(solution(6.0, 0.01, 0.01)).unwrap();
        c.insert(solution(7.0, 0.01, 0.01)).unwrap();
        let all = coverage_categories(&[("a", &a), ("b", &b), ("c", &c)]).unwrap();
        assert_eq!(all.mask[0], 0b111);
        assert_eq!(all.names, vec!["a", "b", "c"]);
    }

    /// Brute-force recorder used to check the annealed archive: tracks, per
    /// cell, the exact threshold recurrence and the best accepted fitness.
    struct Recorder {
        alpha: f64,
        thresholds: std::collections::HashMap<(usize, usize), f64>,
        best: std::collections::HashMap<(usize, usize), f64>,
    }

    impl Recorder {
        fn insert(&mut self, cell: (usize, usize), fitness: f64) {
            let t = self.thresholds.entry(cell).or_insert(0.0);
            if fitness > *t {
                *t = (1.0 - self.alpha) * *t + self.alpha * fitness;
                let b = self.best.entry(cell).or_insert(f64::NEG_INFINITY);
                if fitness > *b {
                    *b = fitness;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn annealed_occupant_is_best_ever_accepted(
            alpha in prop::sample::select(vec![0.01, 0.1, 0.5, 1.0]),
            inserts in prop::collection::vec((0.0f64..40.0, 0.0f64..15.0, 0.0f64..90.0), 1..200),
        ) {
            let mut archive = GridArchive::new(ArchiveConfig::annealed(alpha)).unwrap();
            let mut recorder = Recorder {
                alpha,
                thresholds: Default::default(),
                best: Default::default(),
            };
            for (f, mx, my) in inserts {
                let cell = archive.index_of(mx, my);
                archive.insert(solution(f, mx, my)).unwrap();
                recorder.insert(cell, f);
            }
            prop_assert_eq!(archive.occupied_count(), recorder.best.len());
            for (&(xi, yi), &best) in &recorder.best {
                prop_assert_eq!(archive.cell(xi, yi).unwrap().fitness, best);
                let t = archive.threshold(xi, yi);
                prop_assert!((t - recorder.thresholds[&(xi, yi)]).abs() < 1e-12);
                // A threshold can never exceed the best fitness seen.
                prop_assert!(t <= best + 1e-12);
            }
        }

        #[test]
        fn elitist_metrics_are_monotone(
            inserts in prop::collection::vec((0.0f64..40.0, 0.0f64..15.0, 0.0f64..90.0), 1..200),
        ) {
            let mut archive = GridArchive::new(ArchiveConfig::default()).unwrap();
            let mut last_count = 0;
            let mut last_qd = 0.0;
            for (f, mx, my) in inserts {
                archive.insert(solution(f, mx, my)).unwrap();
                let count = archive.occupied_count();
                let qd = archive.qd_score();
                prop_assert!(count >= last_count);
                prop_assert!(qd >= last_qd - 1e-12);
                last_count = count;
                last_qd = qd;
            }
        }

        #[test]
        fn replay_gives_identical_archives(
            inserts in prop::collection::vec((0.0f64..40.0, 0.0f64..15.0, 0.0f64..90.0), 1..100),
        ) {
            let mut a = GridArchive::new(ArchiveConfig::annealed(0.01)).unwrap();
            let mut b = GridArchive::new(ArchiveConfig::annealed(0.01)).unwrap();
            for (f, mx, my) in &inserts {
                let ra = a.insert(solution(*f, *mx, *my)).unwrap();
                let rb = b.insert(solution(*f, *mx, *my)).unwrap();
                prop_assert_eq!(ra, rb);
            }
            for (xi, yi, s) in a.occupants() {
                let other = b.cell(xi, yi).unwrap();
                prop_assert_eq!(s, other);
                prop_assert_eq!(a.threshold(xi, yi).to_bits(), b.threshold(xi, yi).to_bits());
            }
        }

        #[test]
        fn every_in_range_point_maps_to_one_bin(x in 0.0f64..=15.0, y in 0.0f64..=90.0) {
            let c = ArchiveConfig::default();
            let (xi, yi) = index_of(x, y, &c);
            prop_assert!(xi < 100 && yi < 100);
            // The chosen bin's half-open interval must contain the value,
            // within one float step of the computed edges.
            let x_lo = xi as f64 * c.x_width();
            let x_hi = (xi + 1) as f64 * c.x_width();
            prop_assert!(x >= x_lo - 1e-9 && (x <= x_hi + 1e-9));
            let y_lo = yi as f64 * c.y_width();
            let y_hi = (yi + 1) as f64 * c.y_width();
            prop_assert!(y >= y_lo - 1e-9 && (y <= y_hi + 1e-9));
        }
    }
}
