//! Genome decoding and fin-polygon validation.
//!
//! Decoding is total: every real 11-vector produces a usable design. Fin
//! shapes that fail the geometric checks revert to the reference
//! parallelogram rather than failing, mirroring how fragile or degenerate
//! fins are rejected at manufacture time.

use crate::genome::{scale_gene, Genome};
use crate::nose::NoseType;

/// Body tube outer diameter, fixed by the stock tubing.
pub const TUBE_OUTER_DIAMETER: f64 = 0.0248;
pub const TUBE_INNER_DIAMETER: f64 = 0.0241;
/// Fin root leading edge sits this far above the tube's aft end.
pub const FIN_ROOT_OFFSET: f64 = 0.05;
/// Minimum clearance between a fin vertex and each non-incident edge.
pub const FIN_MIN_CLEARANCE: f64 = 0.005;

/// Reference fin polygon: (x1,y1)=(0.025,0.03), (x2,y2)=(0.075,0.03),
/// x3=0.05. Used verbatim when a decoded shape is invalid.
pub const FALLBACK_FIN: [(f64, f64); 4] = [(0.0, 0.0), (0.025, 0.03), (0.075, 0.03), (0.05, 0.0)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoseGeom {
    pub kind: NoseType,
    pub length: f64,
    /// Family shape parameter; already clipped to 1/3 for HAACK.
    pub shape: f64,
    pub wall: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BodyGeom {
    pub length: f64,
    pub outer_diameter: f64,
    pub inner_diameter: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinSet {
    pub count: u32,
    /// Closed polygon (0,0) -> p1 -> p2 -> (x3,0), in fin-local coordinates:
    /// +x runs aft along the tube, +y outward from its surface.
    pub points: [(f64, f64); 4],
    pub fallback_used: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RocketDesign {
    pub nose: NoseGeom,
    pub body: BodyGeom,
    pub fins: FinSet,
}

impl RocketDesign {
    pub fn total_length(&self) -> f64 {
        self.nose.length + self.body.length
    }

    /// Axial position (from the nose tip) of the fin-local origin.
    pub fn fin_root_position(&self) -> f64 {
        self.total_length() - FIN_ROOT_OFFSET
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinViolation {
    /// Every vertex on the tube surface: no area.
    NoPositiveY,
    /// No extent along the tube.
    NoPositiveX,
    /// A vertex other than the first sits at the origin.
    ExtraOrigin,
    /// Two vertices coincide.
    DuplicatePoint,
    /// Two polygon edges cross.
    EdgesCross,
    /// A vertex comes within 5 mm of a non-incident edge.
    TooThin,
}

/// Checks the decoded fin quadrilateral. All rules must hold for a valid
/// shape; the first violated rule is reported.
pub fn validate_fins(points: &[(f64, f64); 4]) -> Result<(), FinViolation> {
    if !points.iter().any(|p| p.1 > 0.0) {
        return Err(FinViolation::NoPositiveY);
    }
    if !points.iter().any(|p| p.0 > 0.0) {
        return Err(FinViolation::NoPositiveX);
    }
    if points[1..].contains(&(0.0, 0.0)) {
        return Err(FinViolation::ExtraOrigin);
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if points[i] == points[j] {
                return Err(FinViolation::DuplicatePoint);
            }
        }
    }
    // The closed polygon has four edges; only the two non-adjacent pairs can
    // properly cross (adjacent edges share a vertex).
    let edge = |i: usize| (points[i], points[(i + 1) % 4]);
    for (a, b) in [(0, 2), (1, 3)] {
        let (p1, p2) = edge(a);
        let (p3, p4) = edge(b);
        if segments_cross(p1, p2, p3, p4) {
            return Err(FinViolation::EdgesCross);
        }
    }
    for (v, &p) in points.iter().enumerate() {
        // Edges v and (v+3)%4 touch vertex v; the other two are opposite.
        for e in [(v + 1) % 4, (v + 2) % 4] {
            let (a, b) = edge(e);
            if point_segment_distance(p, a, b) < FIN_MIN_CLEARANCE {
                return Err(FinViolation::TooThin);
            }
        }
    }
    Ok(())
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Proper intersection only: the segments cross at an interior point of
/// both. Touching endpoints and collinear overlap do not count (overlap
/// degeneracies are caught by the clearance rule instead).
pub fn segments_cross(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64), p4: (f64, f64)) -> bool {
    let d1 = cross(p3, p4, p1);
    let d2 = cross(p3, p4, p2);
    let d3 = cross(p1, p2, p3);
    let d4 = cross(p1, p2, p4);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Euclidean distance from a point to a closed segment.
pub fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = b.0 - a.0;
    let dy = b.1 - a.1;
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len_sq).clamp(0.0, 1.0)
    };
    let cx = a.0 + t * dx - p.0;
    let cy = a.1 + t * dy - p.1;
    (cx * cx + cy * cy).sqrt()
}

/// Maps an 11-gene vector to a physical design. Never fails: gene scaling is
/// range-bounded and invalid fins revert to [`FALLBACK_FIN`].
pub fn decode(genome: &Genome) -> RocketDesign {
    let nose_length = scale_gene(0, genome[0]);
    // Type and count scale onto [0,6] and [2,6]; truncation makes the upper
    // endpoint an overflow that folds back to the last legal value.
    let type_index = (scale_gene(1, genome[1]) as usize).min(5);
    let kind = NoseType::from_index(type_index);
    let mut shape = scale_gene(2, genome[2]);
    if kind == NoseType::Haack {
        shape = shape.min(1.0 / 3.0);
    }
    let wall = scale_gene(3, genome[3]);
    let body_length = scale_gene(4, genome[4]);
    let fin_count = (scale_gene(5, genome[5]) as u32).min(5);

    let points = [
        (0.0, 0.0),
        (scale_gene(6, genome[6]), scale_gene(7, genome[7])),
        (scale_gene(8, genome[8]), scale_gene(9, genome[9])),
        (scale_gene(10, genome[10]), 0.0),
    ];
    let fins = match validate_fins(&points) {
        Ok(()) => FinSet {
            count: fin_count,
            points,
            fallback_used: false,
        },
        Err(_) => FinSet {
            count: fin_count,
            points: FALLBACK_FIN,
            fallback_used: true,
        },
    };

    RocketDesign {
        nose: NoseGeom {
            kind,
            length: nose_length,
            shape,
            wall,
        },
        body: BodyGeom {
            length: body_length,
            outer_diameter: TUBE_OUTER_DIAMETER,
            inner_diameter: TUBE_INNER_DIAMETER,
        },
        fins,
    }
}
