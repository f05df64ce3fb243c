//! Quality-diversity search over model rocket designs.
//!
//! The library evolves 11-gene rocket designs (nose cone, body tube, fin
//! polygon) against a built-in planar flight simulator, filling a 100x100
//! grid archive whose axes are a nose-type/stability composite and mean
//! apogee. Three algorithms are provided: MAP-Elites (Gaussian emitters on
//! an elitist archive), CMA-ME (CMA emitters with two-stage improvement
//! ranking), and CMA-MAE (CMA emitters ranked against annealed acceptance
//! thresholds).
//!
//! Module map:
//!
//! - [`genome`]: the 11-vector encoding, sigmoid squashing, gene ranges.
//! - [`archive`]: grid archive, insertion rules, metrics, merging.
//! - [`archive_csv`]: archive snapshot export/import.
//! - [`cma`]: a self-contained CMA-ES core (ask/tell/restart).
//! - [`emitter`]: Gaussian and CMA emitters, improvement ranking, the
//!   per-generation scheduler.
//! - [`nose`]: nose cone profiles and their planform properties.
//! - [`rocket`]: genome decoding and fin-polygon validation.
//! - [`mass`]: material table, component masses, center of gravity.
//! - [`barrowman`]: center of pressure and stability margin.
//! - [`motor`]: thrust-curve files and the bundled A8-3 motor.
//! - [`wind`]: the discrete gust process.
//! - [`sim`]: RK4 point-mass boost-to-apogee simulation.
//! - [`evaluate`]: three-condition evaluation producing fitness and measures.
//! - [`experiment`]: full runs, logging, candidate selection, comparisons.
//! - [`heatmap`]: SVG renderings of archives, coverage, and counts.
//! - [`design_doc`]: plain-text build sheets for selected candidates.

pub mod archive;
pub mod archive_csv;
pub mod barrowman;
pub mod cma;
pub mod design_doc;
pub mod emitter;
mod error;
pub mod evaluate;
pub mod experiment;
pub mod genome;
pub mod heatmap;
pub mod mass;
pub mod motor;
pub mod nose;
pub mod rng;
pub mod rocket;
pub mod sim;
pub mod stats;
pub mod wind;

pub use archive::{ArchiveConfig, GridArchive, InsertResult, InsertStatus, Solution};
pub use error::{Error, Result};
pub use evaluate::EvalContext;
pub use experiment::{Algorithm, RunConfig};
pub use genome::Genome;
