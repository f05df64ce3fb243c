//! Mass and center-of-gravity model.
//!
//! Structural masses come from the decoded geometry and a material table;
//! recovery gear, avionics, and the motor are fixed point masses placed
//! relative to the joints that exist on every design (nose base, aft end).
//! The table ships with defaults for the stock build but loads from a TOML
//! file so builders can recalibrate without touching code.

use serde::{Deserialize, Serialize};

use crate::nose;
use crate::rocket::RocketDesign;

/// Reference point a payload item is positioned against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    NoseTip,
    NoseBase,
    Aft,
}

/// One fixed mass riding inside the airframe. `offset` is signed meters
/// along the axis from the anchor (positive toward the tail).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayloadItem {
    pub name: String,
    pub mass: f64,
    pub anchor: Anchor,
    pub offset: f64,
}

/// Densities, sheet stock, and the payload manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Materials {
    /// Printed nose shell (PLA).
    pub nose_density: f64,
    /// Wound cardboard tube.
    pub body_density: f64,
    /// Balsa fin stock.
    pub fin_density: f64,
    pub fin_sheet_thickness: f64,
    /// The loaded motor acts at this distance forward of the aft end.
    pub motor_center_from_aft: f64,
    pub payload: Vec<PayloadItem>,
}

impl Default for Materials {
    fn default() -> Self {
        // Masses as kg literals so they match a parsed config bit for bit.
        let item = |name: &str, mass: f64, anchor: Anchor, offset: f64| PayloadItem {
            name: name.to_string(),
            mass,
            anchor,
            offset,
        };
        Materials {
            nose_density: 1240.0,
            body_density: 680.0,
            fin_density: 160.0,
            fin_sheet_thickness: 0.003,
            // 70 mm motor case, mass centered halfway up.
            motor_center_from_aft: 0.035,
            payload: vec![
                item("parachute", 0.006, Anchor::NoseBase, 0.02),
                item("shock_cord", 0.0025, Anchor::NoseBase, 0.04),
                item("wadding", 0.0015, Anchor::NoseBase, 0.06),
                item("altimeter", 0.009, Anchor::Aft, -0.03),
                item("launch_hook", 0.003, Anchor::Aft, -0.01),
                item("engine_block", 0.002, Anchor::Aft, -0.07),
            ],
        }
    }
}

impl Materials {
    pub fn from_toml(text: &str) -> crate::Result<Materials> {
        let m: Materials = toml::from_str(text).map_err(|e| crate::Error::Config(e.to_string()))?;
        for item in &m.payload {
            if !item.mass.is_finite() || item.mass < 0.0 {
                return Err(crate::Error::Config(format!(
                    "payload item {} has mass {}",
                    item.name, item.mass
                )));
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MassComponent {
    pub name: String,
    pub mass: f64,
    /// Center of this component, meters from the nose tip.
    pub position: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MassProperties {
    pub total: f64,
    /// Mass-weighted mean position from the nose tip.
    pub cg: f64,
    pub components: Vec<MassComponent>,
}

/// Segments for the nose surface-of-revolution sum. The profiles are smooth
/// enough that this is well past convergence for 1e-3 relative error.
const NOSE_SEGMENTS: usize = 512;

/// Nose shell as a thin surface of revolution: lateral area of the stacked
/// frusta times the wall thickness. Returns (mass, area-weighted center).
fn nose_shell(design: &RocketDesign, density: f64) -> (f64, f64) {
    let n = &design.nose;
    let mut area = 0.0;
    let mut moment = 0.0;
    let mut x_prev = 0.0;
    let mut r_prev = 0.0;
    for i in 1..=NOSE_SEGMENTS {
        let x = n.length * i as f64 / NOSE_SEGMENTS as f64;
        let r = nose::radius(n.kind, n.shape, n.length, x);
        let slant = ((x - x_prev).powi(2) + (r - r_prev).powi(2)).sqrt();
        let band = std::f64::consts::PI * (r_prev + r) * slant;
        area += band;
        moment += band * 0.5 * (x_prev + x);
        x_prev = x;
        r_prev = r;
    }
    let mass = area * n.wall * density;
    let center = if area > 0.0 { moment / area } else { 0.0 };
    (mass, center)
}

/// Unsigned area and centroid of a closed polygon via the shoelace formula.
pub fn polygon_area_centroid(points: &[(f64, f64)]) -> (f64, (f64, f64)) {
    let mut twice_area = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..points.len() {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % points.len()];
        let w = x0 * y1 - x1 * y0;
        twice_area += w;
        cx += (x0 + x1) * w;
        cy += (y0 + y1) * w;
    }
    if twice_area == 0.0 {
        return (0.0, (0.0, 0.0));
    }
    let area = twice_area / 2.0;
    (area.abs(), (cx / (6.0 * area), cy / (6.0 * area)))
}

/// Full mass accounting for a design with a motor of the given loaded mass
/// installed. Payload positions are clamped into the airframe so that a
/// mis-calibrated table degrades CG accuracy instead of producing designs
/// with mass outside the rocket.
pub fn mass_properties(
    design: &RocketDesign,
    materials: &Materials,
    motor_mass: f64,
) -> MassProperties {
    let total_length = design.total_length();
    let nose_base = design.nose.length;
    let mut components = Vec::new();

    let (nose_mass, nose_center) = nose_shell(design, materials.nose_density);
    components.push(MassComponent {
        name: "nose".to_string(),
        mass: nose_mass,
        position: nose_center,
    });

    let b = &design.body;
    let annulus = std::f64::consts::FRAC_PI_4
        * (b.outer_diameter * b.outer_diameter - b.inner_diameter * b.inner_diameter);
    components.push(MassComponent {
        name: "body".to_string(),
        mass: annulus * b.length * materials.body_density,
        position: nose_base + b.length / 2.0,
    });

    let (fin_area, fin_centroid) = polygon_area_centroid(&design.fins.points);
    components.push(MassComponent {
        name: "fins".to_string(),
        mass: fin_area
            * materials.fin_sheet_thickness
            * materials.fin_density
            * design.fins.count as f64,
        position: design.fin_root_position() + fin_centroid.0,
    });

    for item in &materials.payload {
        let anchor = match item.anchor {
            Anchor::NoseTip => 0.0,
            Anchor::NoseBase => nose_base,
            Anchor::Aft => total_length,
        };
        components.push(MassComponent {
            name: item.name.clone(),
            mass: item.mass,
            position: (anchor + item.offset).clamp(0.0, total_length),
        });
    }

    components.push(MassComponent {
        name: "motor".to_string(),
        mass: motor_mass,
        position: (total_length - materials.motor_center_from_aft).clamp(0.0, total_length),
    });

    let total: f64 = components.iter().map(|c| c.mass).sum();
    let moment: f64 = components.iter().map(|c| c.mass * c.position).sum();
    let cg = if total > 0.0 { moment / total } else { 0.0 };
    MassProperties {
        total,
        cg,
        components,
    }
}

impl MassProperties {
    pub fn component(&self, name: &str) -> Option<&MassComponent> {
        self.components.iter().find(|c| c.name == name)
    }
}
