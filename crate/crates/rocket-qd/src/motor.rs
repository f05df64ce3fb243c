//! Motor model: a named thrust curve plus mass bookkeeping.
//!
//! Curves load from a plain-text file of `key value` headers followed by
//! `time_s thrust_N` rows. The stock A8-3 style curve is compiled in.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MotorModel {
    pub name: String,
    /// Piecewise-linear samples, strictly increasing in time.
    pub curve: Vec<(f64, f64)>,
    pub propellant_mass: f64,
    /// Loaded mass, casing plus propellant.
    pub total_mass: f64,
    /// Ejection delay. Flights end at apogee, so this is informational.
    pub delay: f64,
}

impl MotorModel {
    /// Last curve sample time.
    pub fn burn_time(&self) -> f64 {
        self.curve.last().map(|&(t, _)| t).unwrap_or(0.0)
    }

    /// Thrust at time t by linear interpolation; zero before the first
    /// sample and from burnout onward (the half-open convention keeps a
    /// synthetic constant-thrust test curve unambiguous at its end point).
    pub fn thrust(&self, t: f64) -> f64 {
        let burn = self.burn_time();
        if t < self.curve[0].0 || t >= burn {
            return 0.0;
        }
        match self
            .curve
            .binary_search_by(|&(s, _)| s.partial_cmp(&t).unwrap())
        {
            Ok(i) => self.curve[i].1,
            Err(i) => {
                let (t0, f0) = self.curve[i - 1];
                let (t1, f1) = self.curve[i];
                f0 + (f1 - f0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Loaded motor mass at time t; propellant burns off linearly in time.
    pub fn mass(&self, t: f64) -> f64 {
        let burn = self.burn_time();
        if burn <= 0.0 {
            return self.total_mass;
        }
        let burned = (t / burn).clamp(0.0, 1.0);
        self.total_mass - self.propellant_mass * burned
    }

    /// Trapezoidal total impulse of the curve.
    pub fn total_impulse(&self) -> f64 {
        self.curve
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum()
    }

    /// The compiled-in stock motor.
    pub fn stock() -> MotorModel {
        parse_motor(include_str!("../data/a8-3.txt")).expect("compiled-in motor data is valid")
    }
}

/// Parses the motor file format. `#` starts a comment (full line or
/// trailing); blank lines are skipped; a line whose first token parses as a
/// number is a curve row, anything else is a `key value` header.
pub fn parse_motor(text: &str) -> Result<MotorModel> {
    let fail = |line: usize, msg: String| Error::MotorFile { line, msg };
    let mut name = None;
    let mut total = None;
    let mut propellant = None;
    let mut delay = None;
    let mut curve: Vec<(f64, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0].parse::<f64>().is_ok() {
            if tokens.len() != 2 {
                return Err(fail(
                    line_no,
                    format!("expected `time thrust`, got {line:?}"),
                ));
            }
            let t: f64 = tokens[0].parse().unwrap();
            let f: f64 = tokens[1]
                .parse()
                .map_err(|_| fail(line_no, format!("bad thrust {:?}", tokens[1])))?;
            if !t.is_finite() || !f.is_finite() {
                return Err(fail(line_no, "non-finite curve sample".to_string()));
            }
            if f < 0.0 {
                return Err(fail(line_no, format!("negative thrust {f}")));
            }
            if let Some(&(prev, _)) = curve.last() {
                if t <= prev {
                    return Err(fail(line_no, format!("time {t} not after {prev}")));
                }
            } else if t < 0.0 {
                return Err(fail(line_no, format!("negative start time {t}")));
            }
            curve.push((t, f));
        } else {
            if tokens.len() != 2 {
                return Err(fail(line_no, format!("expected `key value`, got {line:?}")));
            }
            let parse_mass = |what: &str| -> Result<f64> {
                let v: f64 = tokens[1]
                    .parse()
                    .map_err(|_| fail(line_no, format!("bad {what} {:?}", tokens[1])))?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(fail(line_no, format!("{what} must be positive, got {v}")));
                }
                Ok(v)
            };
            match tokens[0] {
                "name" => name = Some(tokens[1].to_string()),
                "total_mass_kg" => total = Some(parse_mass("total mass")?),
                "propellant_mass_kg" => propellant = Some(parse_mass("propellant mass")?),
                "delay_s" => {
                    let v: f64 = tokens[1]
                        .parse()
                        .map_err(|_| fail(line_no, format!("bad delay {:?}", tokens[1])))?;
                    if !v.is_finite() || v < 0.0 {
                        return Err(fail(line_no, format!("delay must be >= 0, got {v}")));
                    }
                    delay = Some(v);
                }
                other => return Err(fail(line_no, format!("unknown key {other:?}"))),
            }
        }
    }

    let total = total.ok_or_else(|| fail(0, "missing total_mass_kg".to_string()))?;
    let propellant = propellant.ok_or_else(|| fail(0, "missing propellant_mass_kg".to_string()))?;
    if propellant >= total {
        return Err(fail(
            0,
            format!("propellant {propellant} must be less than total {total}"),
        ));
    }
    if curve.len() < 2 {
        return Err(fail(
            0,
            format!("need at least 2 curve samples, got {}", curve.len()),
        ));
    }
    if curve[0].1 != 0.0 || curve.last().unwrap().1 != 0.0 {
        return Err(fail(
            0,
            "thrust curve must start and end at 0 N".to_string(),
        ));
    }
    Ok(MotorModel {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        curve,
        propellant_mass: propellant,
        total_mass: total,
        delay: delay.unwrap_or(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_motor_loads() {
        let m = MotorModel::stock();
        assert_eq!(m.name, "A8-3");
        assert_eq!(m.total_mass, 0.01635);
        assert_eq!(m.propellant_mass, 0.0033);
        assert_eq!(m.delay, 3.0);
        assert_eq!(m.burn_time(), 0.730);
        assert_eq!(m.curve.len(), 26);
    }

    #[test]
    fn stock_impulse_is_in_class() {
        // Trapezoid of the shipped samples, hand-summed once: 2.364346 N s.
        let i = MotorModel::stock().total_impulse();
        assert!((i - 2.364346).abs() < 1e-9, "impulse {i}");
    }

    #[test]
    fn thrust_interpolates() {
        let m = MotorModel::stock();
        assert_eq!(m.thrust(0.0), 0.0);
        assert_eq!(m.thrust(0.226), 9.730);
        // Midpoint of the 0.206..0.226 segment.
        let mid = m.thrust(0.216);
        assert!((mid - (9.294 + 9.730) / 2.0).abs() < 1e-12);
        assert_eq!(m.thrust(0.730), 0.0);
        assert_eq!(m.thrust(5.0), 0.0);
    }

    #[test]
    fn thrust_is_nonnegative_everywhere() {
        let m = MotorModel::stock();
        for i in 0..=2000 {
            let t = i as f64 * 0.0005;
            assert!(m.thrust(t) >= 0.0);
        }
    }

    #[test]
    fn mass_burns_linearly() {
        let m = MotorModel::stock();
        assert_eq!(m.mass(0.0), 0.01635);
        let half = m.mass(m.burn_time() / 2.0);
        assert!((half - (0.01635 - 0.00165)).abs() < 1e-12);
        assert_eq!(m.mass(m.burn_time()), 0.01635 - 0.0033);
        assert_eq!(m.mass(100.0), 0.01635 - 0.0033);
    }

    #[test]
    fn synthetic_triangle_impulse() {
        let text = "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n1.0 4.0\n2.0 0.0\n";
        let m = parse_motor(text).unwrap();
        assert_eq!(m.total_impulse(), 4.0);
        assert_eq!(m.name, "unnamed");
        assert_eq!(m.thrust(0.5), 2.0);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "# header\ntotal_mass_kg 0.02 # trailing\n\npropellant_mass_kg 0.01\n0.0 0.0 # liftoff\n1.0 0.0\n";
        assert!(parse_motor(text).is_ok());
    }

    #[test]
    fn rejects_bad_files() {
        let cases: &[(&str, &str)] = &[
            (
                "negative thrust",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n0.5 -1.0\n1.0 0.0\n",
            ),
            (
                "non-monotone time",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n0.5 1.0\n0.5 2.0\n1.0 0.0\n",
            ),
            (
                "nonzero start",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 1.0\n1.0 0.0\n",
            ),
            (
                "nonzero end",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n1.0 2.0\n",
            ),
            (
                "propellant ge total",
                "total_mass_kg 0.01\npropellant_mass_kg 0.01\n0.0 0.0\n1.0 0.0\n",
            ),
            (
                "missing total",
                "propellant_mass_kg 0.01\n0.0 0.0\n1.0 0.0\n",
            ),
            (
                "missing propellant",
                "total_mass_kg 0.02\n0.0 0.0\n1.0 0.0\n",
            ),
            (
                "one sample",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n",
            ),
            (
                "unknown key",
                "mass 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n1.0 0.0\n",
            ),
            (
                "three columns",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0 9.0\n1.0 0.0\n",
            ),
            (
                "negative start time",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n-0.5 0.0\n1.0 0.0\n",
            ),
            (
                "nan thrust",
                "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n0.5 NaN\n1.0 0.0\n",
            ),
        ];
        for (what, text) in cases {
            assert!(parse_motor(text).is_err(), "{what} should fail");
        }
    }

    #[test]
    fn error_reports_line_number() {
        let text = "total_mass_kg 0.02\npropellant_mass_kg 0.01\n0.0 0.0\n0.5 -1.0\n1.0 0.0\n";
        match parse_motor(text) {
            Err(Error::MotorFile { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected MotorFile error, got {other:?}"),
        }
    }
}
