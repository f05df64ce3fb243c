//! Three-condition evaluation: genome to fitness and archive measures.
//!
//! Every candidate flies once per wind condition. Fitness rewards altitude
//! consistency, 40 - stdev(apogees), floored at zero; an unstable or
//! errored flight zeroes it outright. The measures place the design on the
//! archive grid: x combines nose type with the stability margin, y is the
//! mean apogee.

use rand_chacha::ChaCha8Rng;

use crate::archive::{Solution, SolutionMeta};
use crate::emitter::Evaluator;
use crate::genome::Genome;
use crate::mass::Materials;
use crate::motor::MotorModel;
use crate::rng;
use crate::rocket::decode;
use crate::sim::{simulate, DragConfig, SimParams};
use crate::wind;

/// Everything an evaluation needs besides the genome. Construction is
/// explicit so a run's calibration is pinned up front.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub materials: Materials,
    pub drag: DragConfig,
    pub motor: MotorModel,
    pub params: SimParams,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            materials: Materials::default(),
            drag: DragConfig::default(),
            motor: MotorModel::stock(),
            params: SimParams::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    /// 40 - stdev(apogees), floored at 0; exactly 0 for unstable or
    /// errored flights.
    pub fitness: f64,
    /// Nose-type slot plus stability margin, in [0, 15].
    pub measure_x: f64,
    /// Mean apogee over the three conditions, meters.
    pub measure_y: f64,
    pub altitudes: [f64; 3],
    /// Stability margin in calibers at ignition mass.
    pub calibers: f64,
}

/// Population standard deviation (divide by n).
pub fn population_stdev(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "stdev of an empty set");
    // Equal inputs must give exactly zero; the mean can round otherwise
    // (e.g. (a+a+a)/3 != a) and leak a few ulps into the score.
    if values.iter().all(|v| *v == values[0]) {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Measure-x: each nose type owns a slot of width 2.5 (2 for the clipped
/// stability range plus a 0.5 buffer); the margin, clipped to [1, 3], picks
/// the position inside the slot.
pub fn measure_x(nose_index: usize, calibers: f64) -> f64 {
    assert!(nose_index <= 5);
    2.5 * nose_index as f64 + calibers.clamp(1.0, 3.0) - 1.0
}

impl EvalContext {
    /// Flies the three conditions with the given rng streams and scores the
    /// result.
    pub fn evaluate_with_streams(&self, genome: &Genome, streams: [ChaCha8Rng; 3]) -> Evaluation {
        let design = decode(genome);
        let mut altitudes = [0.0; 3];
        let mut calibers = 0.0;
        let mut any_flagged = false;
        for (c, stream) in streams.into_iter().enumerate() {
            let out = simulate(
                &design,
                &self.materials,
                &self.drag,
                &self.motor,
                wind::condition(c),
                &self.params,
                stream,
            );
            altitudes[c] = out.apogee;
            any_flagged |= out.flagged;
            // Identical for all three flights: wind does not alter geometry.
            calibers = out.calibers;
        }

        let fitness = if calibers < 1.0 || any_flagged {
            0.0
        } else {
            (40.0 - population_stdev(&altitudes)).max(0.0)
        };
        Evaluation {
            fitness,
            measure_x: measure_x(design.nose.kind.index(), calibers),
            measure_y: altitudes.iter().sum::<f64>() / 3.0,
            altitudes,
            calibers,
        }
    }

    /// Deterministic evaluation keyed by run coordinates: condition c draws
    /// from stream (run_seed, generation, solution_index, c), so no flight's
    /// noise depends on any other flight.
    pub fn evaluate(
        &self,
        genome: &Genome,
        run_seed: u64,
        generation: u64,
        solution_index: u64,
    ) -> Evaluation {
        let streams = [0u64, 1, 2].map(|c| rng::stream(&[run_seed, generation, solution_index, c]));
        self.evaluate_with_streams(genome, streams)
    }
}

impl Evaluator for EvalContext {
    fn evaluate(
        &self,
        genome: &Genome,
        run_seed: u64,
        generation: u64,
        solution_index: u64,
    ) -> Solution {
        let design = decode(genome);
        let e = EvalContext::evaluate(self, genome, run_seed, generation, solution_index);
        Solution {
            genome: *genome,
            fitness: e.fitness,
            measure_x: e.measure_x,
            measure_y: e.measure_y,
            meta: SolutionMeta {
                nose_type: design.nose.kind.index(),
                stability: e.calibers,
                altitudes: e.altitudes,
            },
        }
    }
}
