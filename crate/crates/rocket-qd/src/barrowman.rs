//! Small-angle center-of-pressure estimate and the stability margin.
//!
//! Classic Barrowman accounting: the nose contributes a fixed normal-force
//! slope of 2 at its profile-dependent pressure center, the cylindrical body
//! contributes nothing, and each fin set contributes through its
//! trapezoid-equivalent planform with the body-interference factor. The
//! stability margin is quoted in calibers of the 24.8 mm tube.

use crate::mass::{mass_properties, Materials};
use crate::nose::{self, BASE_RADIUS};
use crate::rocket::RocketDesign;

pub const CALIBER: f64 = 0.0248;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityReport {
    /// Center of pressure, meters from the nose tip.
    pub cp: f64,
    /// Total normal-force coefficient slope.
    pub cn_total: f64,
    /// Center of gravity at motor-loaded pre-launch mass.
    pub cg: f64,
    /// (cp - cg) / caliber. Negative when the CG sits aft of the CP.
    pub calibers: f64,
    /// Margin below one caliber: flight is not trusted.
    pub unstable: bool,
    /// Force accounting broke down (non-finite intermediate); the report
    /// carries a large negative margin instead of poisoning downstream math.
    pub degenerate: bool,
}

/// Trapezoid equivalent of the decoded fin quadrilateral: root chord along
/// the body, tip chord between the two free vertices, span to the farthest
/// one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinPlanform {
    pub root_chord: f64,
    pub tip_chord: f64,
    pub span: f64,
    /// Mid-chord line length from root to tip.
    pub mid_chord_sweep: f64,
    /// Tip leading edge aft of the root leading edge.
    pub tip_offset: f64,
}

pub fn fin_planform(points: &[(f64, f64); 4]) -> FinPlanform {
    let (x1, y1) = points[1];
    let (x2, y2) = points[2];
    let root_chord = points[3].0;
    let tip_chord = (x2 - x1).abs();
    let span = y1.max(y2);
    let tip_mid = (x1 + x2) / 2.0;
    let root_mid = root_chord / 2.0;
    let mid_chord_sweep = ((tip_mid - root_mid).powi(2) + span * span).sqrt();
    FinPlanform {
        root_chord,
        tip_chord,
        span,
        mid_chord_sweep,
        tip_offset: x1.min(x2),
    }
}

/// Normal-force slope for an N-fin set, body interference included.
pub fn fin_cn(planform: &FinPlanform, count: u32) -> f64 {
    let s = planform.span;
    if s <= 0.0 {
        return 0.0;
    }
    let d = 2.0 * BASE_RADIUS;
    let chord_sum = planform.root_chord + planform.tip_chord;
    if chord_sum <= 0.0 {
        return 0.0;
    }
    let aspect = 2.0 * planform.mid_chord_sweep / chord_sum;
    let bare = 4.0 * count as f64 * (s / d).powi(2) / (1.0 + (1.0 + aspect * aspect).sqrt());
    let interference = 1.0 + BASE_RADIUS / (BASE_RADIUS + s);
    bare * interference
}

/// Chordwise pressure-center of the fin set, measured from the root leading
/// edge.
pub fn fin_cp_offset(planform: &FinPlanform) -> f64 {
    let cr = planform.root_chord;
    let ct = planform.tip_chord;
    let sum = cr + ct;
    if sum <= 0.0 {
        return 0.0;
    }
    planform.tip_offset / 3.0 * (cr + 2.0 * ct) / sum + (sum - cr * ct / sum) / 6.0
}

/// Center of pressure and total normal-force slope for the whole airframe.
/// Returns (cp, cn_total, degenerate).
pub fn center_of_pressure(design: &RocketDesign) -> (f64, f64, bool) {
    let nose_cn = 2.0;
    let nose_cp =
        nose::pressure_center_fraction(design.nose.kind, design.nose.shape) * design.nose.length;

    let planform = fin_planform(&design.fins.points);
    let fins_cn = fin_cn(&planform, design.fins.count);
    let fins_cp = design.fin_root_position() + fin_cp_offset(&planform);

    let cn_total = nose_cn + fins_cn;
    let cp = (nose_cn * nose_cp + fins_cn * fins_cp) / cn_total;
    let degenerate = !cp.is_finite() || !cn_total.is_finite() || cn_total <= 0.0;
    (cp, cn_total, degenerate)
}

/// Stability margin at ignition: CG includes the full motor mass, since the
/// tightest margin is at the moment of launch.
pub fn stability_report(
    design: &RocketDesign,
    materials: &Materials,
    motor_mass: f64,
) -> StabilityReport {
    let (cp, cn_total, degenerate) = center_of_pressure(design);
    let mass = mass_properties(design, materials, motor_mass);
    let calibers = (cp - mass.cg) / CALIBER;
    if degenerate || !calibers.is_finite() {
        // Finite sentinel: sorts below every real margin and serializes.
        return StabilityReport {
            cp: 0.0,
            cn_total: 0.0,
            cg: mass.cg,
            calibers: -1000.0,
            unstable: true,
            degenerate: true,
        };
    }
    StabilityReport {
        cp,
        cn_total,
        cg: mass.cg,
        calibers,
        unstable: calibers < 1.0,
        degenerate: false,
    }
}
