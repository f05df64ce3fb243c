//! Horizontal wind as a discrete Gauss-Markov process.
//!
//! The speed starts at the condition mean and relaxes toward it: every
//! update period, v <- max(0, 0.95 v + N(0.05 mean, stdev sqrt(p))). Between
//! updates the speed holds, which keeps a flight deterministic given the
//! stream of draws.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindCondition {
    pub mean: f64,
    pub stdev: f64,
    /// Seconds between speed updates.
    pub period: f64,
}

impl WindCondition {
    pub fn new(mean: f64, stdev: f64) -> WindCondition {
        assert!(mean >= 0.0 && stdev >= 0.0);
        WindCondition {
            mean,
            stdev,
            period: 0.5,
        }
    }
}

/// The three evaluation conditions, calm to turbulent.
pub const CONDITIONS: [(f64, f64); 3] = [(2.0, 0.2), (3.5667, 1.4667), (5.1333, 2.7333)];

pub fn condition(index: usize) -> WindCondition {
    let (mean, stdev) = CONDITIONS[index];
    WindCondition::new(mean, stdev)
}

pub struct WindProcess {
    condition: WindCondition,
    rng: ChaCha8Rng,
    current: f64,
    next_update: f64,
}

impl WindProcess {
    pub fn new(condition: WindCondition, rng: ChaCha8Rng) -> WindProcess {
        WindProcess {
            condition,
            rng,
            current: condition.mean,
            next_update: condition.period,
        }
    }

    /// Speed at time t. Queries must be non-decreasing in t; each crossed
    /// period boundary consumes exactly one draw, so a trace replays
    /// bit-identically from the same rng state.
    pub fn speed(&mut self, t: f64) -> f64 {
        while t >= self.next_update {
            let c = &self.condition;
            let noise = Normal::new(0.05 * c.mean, c.stdev * c.period.sqrt())
                .expect("finite wind parameters")
                .sample(&mut self.rng);
            self.current = (0.95 * self.current + noise).max(0.0);
            self.next_update += c.period;
        }
        self.current
    }
}
