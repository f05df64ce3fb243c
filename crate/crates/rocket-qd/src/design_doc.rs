//! Plain-text build sheets for archived rockets.
//!
//! A candidate pulled out of an archive is an 11-vector; whoever builds it
//! needs millimeters and grams. `describe` renders one solution as a short
//! document with a fixed field order, so diffs between candidates are
//! meaningful and output is byte-stable. The genome line round-trips at full
//! precision for feeding back into `simulate`.

use std::fmt::Write;

use crate::barrowman::stability_report;
use crate::evaluate::EvalContext;
use crate::mass::mass_properties;
use crate::rocket::decode;
use crate::Solution;

const MM: f64 = 1000.0;
const G: f64 = 1000.0;

pub fn describe(sol: &Solution, ctx: &EvalContext) -> String {
    let design = decode(&sol.genome);
    let ignition_mass = ctx.motor.mass(0.0);
    let mass = mass_properties(&design, &ctx.materials, ignition_mass);
    let report = stability_report(&design, &ctx.materials, ignition_mass);

    let mut out = String::new();
    let genome: Vec<String> = sol
        .genome
        .as_slice()
        .iter()
        .map(|g| g.to_string())
        .collect();
    let _ = writeln!(out, "genome: {}", genome.join(","));
    let _ = writeln!(
        out,
        "nose:   {} length {:.1} mm, shape {:.3}, wall {:.2} mm",
        design.nose.kind.name(),
        design.nose.length * MM,
        design.nose.shape,
        design.nose.wall * MM
    );
    let _ = writeln!(
        out,
        "body:   length {:.1} mm, outer diameter {:.1} mm",
        design.body.length * MM,
        crate::rocket::TUBE_OUTER_DIAMETER * MM
    );
    let points: Vec<String> = design
        .fins
        .points
        .iter()
        .map(|&(x, y)| format!("({:.1}, {:.1})", x * MM, y * MM))
        .collect();
    let _ = writeln!(
        out,
        "fins:   {} x [{}] mm{}",
        design.fins.count,
        points.join(", "),
        if design.fins.fallback_used {
            "  (fallback shape)"
        } else {
            ""
        }
    );
    let _ = writeln!(
        out,
        "mass:   {:.1} g on the pad, CG {:.1} mm from nose tip",
        mass.total * G,
        mass.cg * MM
    );
    for c in &mass.components {
        let _ = writeln!(
            out,
            "  {:<12} {:>6.1} g at {:>6.1} mm",
            c.name,
            c.mass * G,
            c.position * MM
        );
    }
    if report.degenerate {
        let _ = writeln!(out, "stability: degenerate (no normal force)");
    } else {
        let _ = writeln!(
            out,
            "stability: CP {:.1} mm, margin {:.2} calibers{}",
            report.cp * MM,
            report.calibers,
            if report.unstable { "  (UNSTABLE)" } else { "" }
        );
    }
    let [a, b, c] = sol.meta.altitudes;
    let _ = writeln!(
        out,
        "flight: apogee {a:.1} / {b:.1} / {c:.1} m (calm to turbulent), mean {:.1} m",
        sol.measure_y
    );
    let _ = writeln!(
        out,
        "score:  fitness {:.2}, measures ({:.3}, {:.3})",
        sol.fitness, sol.measure_x, sol.measure_y
    );
    out
}
