//! Planar point-mass flight simulation to apogee.
//!
//! The rocket leaves a 1 m vertical rail, then flies a gravity turn: thrust
//! acts along the air-relative velocity, so wind shows up as weathercocking
//! tilt rather than explicit rotational dynamics. Drag is a single
//! design-dependent coefficient on the tube cross-section. RK4 at a fixed
//! step; the flight ends at apogee.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::barrowman;
use crate::mass::{mass_properties, polygon_area_centroid, Materials};
use crate::motor::MotorModel;
use crate::nose;
use crate::rocket::RocketDesign;
use crate::wind::{WindCondition, WindProcess};

/// Tube cross-section, the reference area for every drag coefficient.
pub const REFERENCE_AREA: f64 = std::f64::consts::FRAC_PI_4 * 0.0248 * 0.0248;

/// Drag calibration. The defaults put the stock design's apogee in the
/// 40-80 m band; everything here is fair game for recalibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DragConfig {
    /// Skin-friction coefficient applied per unit wetted-over-reference
    /// area.
    pub skin_friction: f64,
    /// Per-fin drag applied per unit fin-over-reference area.
    pub fin_cd: f64,
    /// Blunt-base pressure drag.
    pub base_drag: f64,
    /// Nose pressure drag falls linearly with fineness (length/diameter)
    /// at this slope, clamped to [fineness_min, fineness_max].
    pub fineness_slope: f64,
    pub fineness_min: f64,
    pub fineness_max: f64,
    /// Pressure-drag coefficient per nose type at shape 0 and shape 1,
    /// interpolated linearly; indexed by nose type order.
    pub pressure: [[f64; 2]; 6],
}

impl Default for DragConfig {
    fn default() -> Self {
        DragConfig {
            skin_friction: 0.0045,
            fin_cd: 0.01,
            base_drag: 0.12,
            fineness_slope: 0.15,
            fineness_min: 0.55,
            fineness_max: 1.6,
            // Type order: ogive, conical, ellipsoid, power, parabolic,
            // haack. A blunt power nose (shape 0) pays heavily; the conical
            // limits agree across families at 0.10.
            pressure: [
                [0.10, 0.04],
                [0.10, 0.10],
                [0.06, 0.06],
                [0.60, 0.10],
                [0.10, 0.05],
                [0.045, 0.045],
            ],
        }
    }
}

impl DragConfig {
    pub fn from_toml(text: &str) -> crate::Result<DragConfig> {
        toml::from_str(text).map_err(|e| crate::Error::Config(e.to_string()))
    }
}

/// Whole-airframe drag coefficient on [`REFERENCE_AREA`].
pub fn drag_coefficient(design: &RocketDesign, cfg: &DragConfig) -> f64 {
    let n = &design.nose;
    let d = design.body.outer_diameter;

    let table = cfg.pressure[n.kind.index()];
    let kappa = n.shape.clamp(0.0, 1.0);
    let pressure = table[0] + (table[1] - table[0]) * kappa;
    let fineness = n.length / d;
    let factor = (cfg.fineness_max - cfg.fineness_slope * fineness)
        .clamp(cfg.fineness_min, cfg.fineness_max);
    let nose_term = pressure * factor;

    let nose_wetted = 2.0
        * std::f64::consts::PI
        * nose::BASE_RADIUS
        * n.length
        * nose::planform_area_fraction(n.kind, n.shape);
    let body_wetted = std::f64::consts::PI * d * design.body.length;
    let skin_term = cfg.skin_friction * (nose_wetted + body_wetted) / REFERENCE_AREA;

    let (fin_area, _) = polygon_area_centroid(&design.fins.points);
    let fin_term = cfg.fin_cd * design.fins.count as f64 * fin_area / REFERENCE_AREA;

    nose_term + skin_term + fin_term + cfg.base_drag
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimParams {
    pub dt: f64,
    pub rail_length: f64,
    pub air_density: f64,
    pub gravity: f64,
    /// Hard simulated-time ceiling; reaching it flags the outcome.
    pub max_time: f64,
    pub record_trajectory: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 0.01,
            rail_length: 1.0,
            air_density: 1.225,
            gravity: 9.80665,
            max_time: 120.0,
            record_trajectory: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub u: f64,
    pub w: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOutcome {
    pub apogee: f64,
    pub time_to_apogee: f64,
    pub max_speed: f64,
    /// Stability margin at ignition mass.
    pub calibers: f64,
    /// Blow-up or time ceiling: the flight result is not trustworthy.
    pub flagged: bool,
    pub trajectory: Option<Vec<TrajectorySample>>,
}

/// `t,x,z,u,w,mass` rows for a recorded trajectory.
pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from("t,x,z,u,w,mass\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.t, s.x, s.z, s.u, s.w, s.mass
        ));
    }
    out
}

#[derive(Clone, Copy)]
struct State {
    x: f64,
    z: f64,
    u: f64,
    w: f64,
}

impl State {
    fn add_scaled(self, d: Derivative, h: f64) -> State {
        State {
            x: self.x + h * d.dx,
            z: self.z + h * d.dz,
            u: self.u + h * d.du,
            w: self.w + h * d.dw,
        }
    }

    fn finite(&self) -> bool {
        self.x.is_finite() && self.z.is_finite() && self.u.is_finite() && self.w.is_finite()
    }
}

#[derive(Clone, Copy)]
struct Derivative {
    dx: f64,
    dz: f64,
    du: f64,
    dw: f64,
}

/// Flies one launch. The rng seeds the wind process only; everything else
/// is deterministic in the inputs.
pub fn simulate(
    design: &RocketDesign,
    materials: &Materials,
    drag: &DragConfig,
    motor: &MotorModel,
    condition: WindCondition,
    params: &SimParams,
    rng: ChaCha8Rng,
) -> SimOutcome {
    let report = barrowman::stability_report(design, materials, motor.total_mass);
    let launch_mass = mass_properties(design, materials, motor.total_mass).total;
    let dry_mass = launch_mass - motor.total_mass;
    let mass_at = |t: f64| dry_mass + motor.mass(t);

    let cd = drag_coefficient(design, drag);
    let drag_k = 0.5 * params.air_density * cd * REFERENCE_AREA;
    let g = params.gravity;
    let burn = motor.burn_time();

    let mut wind = WindProcess::new(condition, rng);
    let mut s = State {
        x: 0.0,
        z: 0.0,
        u: 0.0,
        w: 0.0,
    };
    let mut t = 0.0;
    let mut lifted = false;
    let mut departed_rail = false;
    let mut apogee = 0.0f64;
    let mut time_to_apogee = 0.0;
    let mut max_speed = 0.0f64;
    let mut flagged = false;
    let mut trajectory = params.record_trajectory.then(Vec::new);
    if let Some(tr) = trajectory.as_mut() {
        tr.push(TrajectorySample {
            t,
            x: 0.0,
            z: 0.0,
            u: 0.0,
            w: 0.0,
            mass: mass_at(0.0),
        });
    }

    loop {
        if t >= params.max_time {
            flagged = true;
            break;
        }
        if !lifted && motor.thrust(t) <= mass_at(t) * g {
            if t >= burn {
                // Never produced liftoff thrust: sits on the pad.
                break;
            }
            // Held down; clock advances, nothing moves.
            t += params.dt;
            continue;
        }

        // Wind is piecewise-constant with a 0.5 s period, so freezing it
        // per 0.01 s step loses nothing.
        let wind_x = wind.speed(t);
        let on_rail = !departed_rail;
        let deriv = |tau: f64, y: &State| -> Derivative {
            let m = mass_at(tau);
            let thrust = motor.thrust(tau);
            if on_rail {
                // Rail reaction cancels all lateral force; motion is
                // vertical with drag opposing the climb.
                let drag_z = drag_k * y.w * y.w.abs();
                Derivative {
                    dx: 0.0,
                    dz: y.w,
                    du: 0.0,
                    dw: (thrust - drag_z) / m - g,
                }
            } else {
                let rel_u = y.u - wind_x;
                let rel_w = y.w;
                let speed = (rel_u * rel_u + rel_w * rel_w).sqrt();
                let (dir_u, dir_w) = if speed > 1e-9 {
                    (rel_u / speed, rel_w / speed)
                } else {
                    (0.0, 1.0)
                };
                Derivative {
                    dx: y.u,
                    dz: y.w,
                    du: (thrust * dir_u - drag_k * speed * rel_u) / m,
                    dw: (thrust * dir_w - drag_k * speed * rel_w) / m - g,
                }
            }
        };

        let h = params.dt;
        let k1 = deriv(t, &s);
        let k2 = deriv(t + h / 2.0, &s.add_scaled(k1, h / 2.0));
        let k3 = deriv(t + h / 2.0, &s.add_scaled(k2, h / 2.0));
        let k4 = deriv(t + h, &s.add_scaled(k3, h));
        s = State {
            x: s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
            z: s.z + h / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz),
            u: s.u + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
            w: s.w + h / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw),
        };
        t += h;

        if !s.finite() {
            return SimOutcome {
                apogee: 0.0,
                time_to_apogee: 0.0,
                max_speed: 0.0,
                calibers: report.calibers,
                flagged: true,
                trajectory,
            };
        }
        if s.z > 1e-12 || s.w > 1e-12 {
            lifted = true;
        }
        if s.z >= params.rail_length {
            departed_rail = true;
        }
        if s.z > apogee {
            apogee = s.z;
            time_to_apogee = t;
        }
        max_speed = max_speed.max((s.u * s.u + s.w * s.w).sqrt());
        if let Some(tr) = trajectory.as_mut() {
            tr.push(TrajectorySample {
                t,
                x: s.x,
                z: s.z,
                u: s.u,
                w: s.w,
                mass: mass_at(t),
            });
        }
        if lifted && s.w <= 0.0 {
            break;
        }
    }

    SimOutcome {
        apogee: apogee.max(0.0),
        time_to_apogee,
        max_speed,
        calibers: report.calibers,
        flagged,
        trajectory,
    }
}
