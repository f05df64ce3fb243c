//! Nose cone profiles.
//!
//! Six surface-of-revolution families over a shared base radius, each giving
//! radius as a function of axial distance from the tip. The same profiles
//! feed shell-mass integration, the normal-force center used by the
//! stability analysis, and the pressure-drag estimate.

use serde::{Deserialize, Serialize};

/// Body tube outer radius; every nose flares to this at its base.
pub const BASE_RADIUS: f64 = 0.0124;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoseType {
    Ogive,
    Conical,
    Ellipsoid,
    Power,
    Parabolic,
    Haack,
}

pub const NOSE_TYPES: [NoseType; 6] = [
    NoseType::Ogive,
    NoseType::Conical,
    NoseType::Ellipsoid,
    NoseType::Power,
    NoseType::Parabolic,
    NoseType::Haack,
];

impl NoseType {
    pub fn from_index(i: usize) -> NoseType {
        NOSE_TYPES[i]
    }

    pub fn index(self) -> usize {
        NOSE_TYPES
            .iter()
            .position(|&t| t == self)
            .expect("listed type")
    }

    pub fn name(self) -> &'static str {
        match self {
            NoseType::Ogive => "OGIVE",
            NoseType::Conical => "CONICAL",
            NoseType::Ellipsoid => "ELLIPSOID",
            NoseType::Power => "POWER",
            NoseType::Parabolic => "PARABOLIC",
            NoseType::Haack => "HAACK",
        }
    }
}

/// Profile radius at axial position `x` from the tip, for a cone of length
/// `length` ending at [`BASE_RADIUS`]. `shape` is the family parameter in
/// [0,1]; CONICAL and ELLIPSOID ignore it.
///
/// Panics outside 0 ≤ x ≤ length: callers integrate over the profile and a
/// domain escape is always a bug, not data.
pub fn radius(kind: NoseType, shape: f64, length: f64, x: f64) -> f64 {
    assert!(
        (0.0..=length).contains(&x),
        "x={x} outside nose [0, {length}]"
    );
    // Every profile starts at a point. Returning exactly 0.0 here (rather
    // than whatever the arc formulas round to) anchors the downstream
    // integrals and the POWER blunt-tip convention in one place.
    if x == 0.0 {
        return 0.0;
    }
    let r = BASE_RADIUS;
    let l = length;
    let s = x / l;
    match kind {
        NoseType::Conical => r * s,
        // Quarter-ellipse with semi-axes (length, base radius).
        NoseType::Ellipsoid => {
            let u = (l - x) / l;
            r * (1.0 - u * u).max(0.0).sqrt()
        }
        // Power series r*(x/l)^k; k=0 is a blunt cylinder (with its
        // documented jump at the tip, since x=0 is pinned to zero above),
        // k=1 is conical.
        NoseType::Power => r * s.powf(shape.clamp(0.0, 1.0)),
        // k=0 conical, k=1 the full tangent parabola.
        NoseType::Parabolic => {
            let k = shape.clamp(0.0, 1.0);
            r * (s * (2.0 - k * s)) / (2.0 - k)
        }
        // Circular arc through tip and base: k=1 is the tangent ogive (arc
        // tangent to the body), smaller k grows the arc radius toward the
        // conical chord.
        NoseType::Ogive => {
            let k = shape.clamp(0.0, 1.0);
            if k < 1e-4 {
                return r * s;
            }
            let rho_tangent = (l * l + r * r) / (2.0 * r);
            let rho = rho_tangent / k;
            // Arc center sits below the axis, equidistant from (0,0) and
            // (l, r).
            let chord = (l * l + r * r).sqrt();
            let h = (rho * rho - chord * chord / 4.0).sqrt();
            let cx = l / 2.0 + h * r / chord;
            let cy = r / 2.0 - h * l / chord;
            cy + (rho * rho - (x - cx) * (x - cx)).max(0.0).sqrt()
        }
        // Sears-Haack family; the shape gene spans the drag-minimizing range,
        // clipping at the LV-Haack profile.
        NoseType::Haack => {
            let c = 3.0 * shape.clamp(0.0, 1.0 / 3.0);
            let theta = (1.0 - 2.0 * s).clamp(-1.0, 1.0).acos();
            let term = theta - (2.0 * theta).sin() / 2.0 + c * theta.sin().powi(3);
            r * term.max(0.0).sqrt() / std::f64::consts::PI.sqrt()
        }
    }
}

/// Axial center of the normal force on the nose alone, as a fraction of nose
/// length from the tip. Closed forms where the classical tables give them;
/// the planform-centroid integral for the shape-parameterized families.
pub fn pressure_center_fraction(kind: NoseType, shape: f64) -> f64 {
    match kind {
        NoseType::Conical => 2.0 / 3.0,
        NoseType::Ellipsoid => 0.5,
        // Conical limit at k=0 blending to the tangent-ogive value 0.466.
        NoseType::Ogive => {
            let k = shape.clamp(0.0, 1.0);
            (1.0 - k) * (2.0 / 3.0) + k * 0.466
        }
        NoseType::Power | NoseType::Parabolic | NoseType::Haack => {
            planform_centroid_fraction(kind, shape)
        }
    }
}

/// Centroid of the planform (the profile seen side-on) as a fraction of
/// length: integral of s*r(s) over integral of r(s), by Simpson's rule on a
/// unit-length profile.
pub fn planform_centroid_fraction(kind: NoseType, shape: f64) -> f64 {
    let n = 400; // even panel count; plenty for these smooth profiles
    let h = 1.0 / n as f64;
    let mut area = 0.0;
    let mut moment = 0.0;
    for i in 0..=n {
        let s = i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let r = radius(kind, shape, 1.0, s);
        area += w * r;
        moment += w * s * r;
    }
    moment / area
}

/// Planform area fraction: integral of r(s) ds relative to a length-1,
/// base-radius nose. Used by the drag model for frontal bluntness.
pub fn planform_area_fraction(kind: NoseType, shape: f64) -> f64 {
    let n = 400;
    let h = 1.0 / n as f64;
    let mut area = 0.0;
    for i in 0..=n {
        let s = i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        area += w * radius(kind, shape, 1.0, s);
    }
    area * h / 3.0 / BASE_RADIUS
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn every_type_meets_the_body_at_base_radius() {
        for kind in NOSE_TYPES {
            for shape in [0.0, 0.25, 0.5, 1.0] {
                let r = radius(kind, shape, 0.1, 0.1);
                assert!(
                    (r - BASE_RADIUS).abs() < 1e-12,
                    "{kind:?} shape {shape}: base radius {r}"
                );
            }
        }
    }

    #[test]
    fn every_type_starts_at_a_point() {
        for kind in NOSE_TYPES {
            for shape in [0.0, 0.5, 1.0] {
                assert_eq!(radius(kind, shape, 0.1, 0.0), 0.0, "{kind:?} shape {shape}");
            }
        }
    }

    #[test]
    fn conical_is_linear() {
        assert!((radius(NoseType::Conical, 0.0, 0.1, 0.05) - 0.0062).abs() < 1e-15);
    }

    #[test]
    fn ogive_limits() {
        // Small shape values approach the cone; shape 1 is the tangent
        // ogive, which matches the textbook closed form.
        let l = 0.1;
        for x in [0.01, 0.04, 0.07] {
            let near_cone = radius(NoseType::Ogive, 1e-3, l, x);
            let cone = radius(NoseType::Conical, 0.0, l, x);
            assert!(
                (near_cone - cone).abs() < 1e-4,
                "x={x}: {near_cone} vs {cone}"
            );

            let rho = (l * l + BASE_RADIUS * BASE_RADIUS) / (2.0 * BASE_RADIUS);
            let tangent = (rho * rho - (l - x) * (l - x)).sqrt() + BASE_RADIUS - rho;
            let ours = radius(NoseType::Ogive, 1.0, l, x);
            assert!((ours - tangent).abs() < 1e-12, "x={x}: {ours} vs {tangent}");
        }
    }

    #[test]
    fn power_shape_extremes() {
        // Shape 1 is the cone; shape 0 is a blunt cylinder away from the tip.
        for x in [0.02, 0.05, 0.09] {
            let p = radius(NoseType::Power, 1.0, 0.1, x);
            let c = radius(NoseType::Conical, 0.0, 0.1, x);
            assert!((p - c).abs() < 1e-15);
            assert!((radius(NoseType::Power, 0.0, 0.1, x) - BASE_RADIUS).abs() < 1e-15);
        }
    }

    #[test]
    fn parabolic_shape_zero_is_conical() {
        for x in [0.0, 0.03, 0.06, 0.1] {
            let p = radius(NoseType::Parabolic, 0.0, 0.1, x);
            let c = radius(NoseType::Conical, 0.0, 0.1, x);
            assert!((p - c).abs() < 1e-15);
        }
    }

    #[test]
    fn haack_clips_above_one_third() {
        for x in [0.0, 0.025, 0.05, 0.075, 0.1] {
            let clipped = radius(NoseType::Haack, 0.5, 0.1, x);
            let third = radius(NoseType::Haack, 1.0 / 3.0, 0.1, x);
            assert_eq!(clipped, third);
        }
    }

    #[test]
    fn profiles_are_continuous() {
        // Scan each profile at 1e-4*L resolution. Where a coarse jump
        // exceeds 1e-6 m (several families have vertical tangents at the
        // tip), refine the step by 1e-4: a continuous profile shrinks the
        // jump with the step, a genuine discontinuity does not. The POWER
        // blunt-cylinder tip is the documented exception.
        let l = 0.1;
        let steps = 10_000;
        for kind in NOSE_TYPES {
            for shape in [0.0, 0.1, 1.0 / 3.0, 0.7, 1.0] {
                let mut prev = radius(kind, shape, l, 0.0);
                for i in 1..=steps {
                    let x = l * i as f64 / steps as f64;
                    let x_prev = l * (i - 1) as f64 / steps as f64;
                    let r = radius(kind, shape, l, x);
                    let jump = (r - prev).abs();
                    let blunt_tip = kind == NoseType::Power && shape < 0.05 && i == 1;
                    if jump >= 1e-6 && !blunt_tip {
                        let h = (x - x_prev) * 1e-4;
                        let fine = (radius(kind, shape, l, x_prev + h) - prev).abs();
                        // Power-law tips refine like h^k, slowly for small
                        // exponents, so the first step only has to shrink; a
                        // genuine step would not shrink at all.
                        let ratio = if i == 1 { 0.9 } else { 0.1 };
                        assert!(
                            fine < jump * ratio,
                            "{kind:?} shape {shape} discontinuous at x={x_prev}: \
                             step jump {jump}, refined jump {fine}"
                        );
                    }
                    prev = r;
                }
            }
        }
    }

    #[test]
    fn centroid_integral_matches_conical_closed_form() {
        // The integral route must agree with the closed forms on profiles
        // where both exist: the cone itself and the cone limits of the
        // parameterized families.
        let conical = planform_centroid_fraction(NoseType::Conical, 0.0);
        assert!((conical - 2.0 / 3.0).abs() < 1e-9, "conical {conical}");
        let power_cone = planform_centroid_fraction(NoseType::Power, 1.0);
        assert!(
            (power_cone - 2.0 / 3.0).abs() < 1e-9,
            "power k=1 {power_cone}"
        );
        let parabolic_cone = planform_centroid_fraction(NoseType::Parabolic, 0.0);
        assert!(
            (parabolic_cone - 2.0 / 3.0).abs() < 1e-9,
            "parabolic k=0 {parabolic_cone}"
        );
    }

    #[test]
    fn pressure_center_spans_documented_values() {
        assert!((pressure_center_fraction(NoseType::Conical, 0.3) - 2.0 / 3.0).abs() < 1e-12);
        assert!((pressure_center_fraction(NoseType::Ellipsoid, 0.9) - 0.5).abs() < 1e-12);
        assert!((pressure_center_fraction(NoseType::Ogive, 0.0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((pressure_center_fraction(NoseType::Ogive, 1.0) - 0.466).abs() < 1e-12);
        // Blunter profiles carry their force further forward than the cone.
        assert!(pressure_center_fraction(NoseType::Haack, 0.0) < 2.0 / 3.0);
        assert!(pressure_center_fraction(NoseType::Parabolic, 1.0) < 2.0 / 3.0);
    }

    proptest! {
        #[test]
        fn radius_bounded_near_base(kind_idx in 0usize..6, shape in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
            // All families stay within base radius except HAACK near its
            // clip point, whose profile crests about 1.1% proud of the body
            // just ahead of the base.
            let kind = NoseType::from_index(kind_idx);
            let l = 0.17;
            let r = radius(kind, shape, l, frac * l);
            prop_assert!(r >= 0.0);
            prop_assert!(r <= BASE_RADIUS * 1.012);
        }

        #[test]
        fn pressure_center_inside_nose(kind_idx in 0usize..6, shape in 0.0f64..=1.0) {
            let kind = NoseType::from_index(kind_idx);
            let f = pressure_center_fraction(kind, shape);
            prop_assert!(f > 0.0 && f < 1.0, "{:?} shape {}: {}", kind, shape, f);
        }
    }
}
