//! Deterministic SVG renderings of archive grids.
//!
//! Three looks: per-cell fitness on a fixed 0-40 ramp, subset-membership
//! colors for comparing up to three archives, and darkness-ramped counts
//! for how many runs reached each cell. Output is plain hand-assembled SVG:
//! same input, same bytes.

use crate::archive::{ArchiveConfig, CoverageMap, GridArchive};
use crate::{Error, Result};

const CELL: f64 = 6.0;
const MARGIN_LEFT: f64 = 54.0;
const MARGIN_TOP: f64 = 14.0;
const MARGIN_BOTTOM: f64 = 42.0;
const BACKGROUND: &str = "#f2f2f2";

/// Fixed fitness ramp, dark violet to yellow, sampled at t in [0,1].
const FITNESS_STOPS: [(u8, u8, u8); 5] = [
    (0x44, 0x01, 0x54),
    (0x3a, 0x52, 0x8b),
    (0x21, 0x90, 0x8c),
    (0x5e, 0xc9, 0x62),
    (0xfd, 0xe7, 0x25),
];

/// Subset colors for category maps, indexed by membership bitmask - 1:
/// a, b, a+b, c, a+c, b+c, a+b+c.
const CATEGORY_COLORS: [&str; 7] = [
    "#e41a1c", "#377eb8", "#984ea3", "#4daf4a", "#ff7f00", "#a65628", "#ffd92f",
];

fn ramp(stops: &[(u8, u8, u8)], t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (stops.len() - 1) as f64;
    let i = (t.floor() as usize).min(stops.len() - 2);
    let f = t - i as f64;
    let (r0, g0, b0) = stops[i];
    let (r1, g1, b1) = stops[i + 1];
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(r0, r1), mix(g0, g1), mix(b0, b1))
}

struct Canvas {
    cfg: ArchiveConfig,
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(cfg: &ArchiveConfig, legend_width: f64) -> Canvas {
        let grid_w = cfg.x_bins as f64 * CELL;
        let grid_h = cfg.y_bins as f64 * CELL;
        let mut c = Canvas {
            cfg: *cfg,
            body: String::new(),
            width: MARGIN_LEFT + grid_w + 16.0 + legend_width,
            height: MARGIN_TOP + grid_h + MARGIN_BOTTOM,
        };
        c.body.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{grid_w}\" \
             height=\"{grid_h}\" fill=\"{BACKGROUND}\" stroke=\"#999999\" \
             stroke-width=\"1\"/>\n"
        ));
        c.axes();
        c
    }

    /// Cell (xi, yi) in grid coordinates; yi = 0 renders at the bottom.
    fn cell(&mut self, xi: usize, yi: usize, fill: &str) {
        let x = MARGIN_LEFT + xi as f64 * CELL;
        let y = MARGIN_TOP + (self.cfg.y_bins - 1 - yi) as f64 * CELL;
        self.body.push_str(&format!(
            "<rect class=\"cell\" x=\"{x}\" y=\"{y}\" width=\"{CELL}\" \
             height=\"{CELL}\" fill=\"{fill}\"/>\n"
        ));
    }

    fn axes(&mut self) {
        let cfg = self.cfg;
        let grid_w = cfg.x_bins as f64 * CELL;
        let grid_h = cfg.y_bins as f64 * CELL;
        let ticks = 6usize;
        for i in 0..=ticks {
            let f = i as f64 / ticks as f64;
            let vx = cfg.x_range.0 + f * (cfg.x_range.1 - cfg.x_range.0);
            let px = MARGIN_LEFT + f * grid_w;
            let base = MARGIN_TOP + grid_h;
            self.body.push_str(&format!(
                "<line x1=\"{px}\" y1=\"{base}\" x2=\"{px}\" y2=\"{}\" \
                 stroke=\"#333333\" stroke-width=\"1\"/>\n",
                base + 4.0
            ));
            self.body.push_str(&format!(
                "<text x=\"{px}\" y=\"{}\" font-size=\"10\" \
                 text-anchor=\"middle\" font-family=\"sans-serif\">{:.1}</text>\n",
                base + 15.0,
                vx
            ));

            let vy = cfg.y_range.0 + f * (cfg.y_range.1 - cfg.y_range.0);
            let py = MARGIN_TOP + grid_h - f * grid_h;
            self.body.push_str(&format!(
                "<line x1=\"{}\" y1=\"{py}\" x2=\"{MARGIN_LEFT}\" y2=\"{py}\" \
                 stroke=\"#333333\" stroke-width=\"1\"/>\n",
                MARGIN_LEFT - 4.0
            ));
            self.body.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\" \
                 font-family=\"sans-serif\">{:.0}</text>\n",
                MARGIN_LEFT - 7.0,
                py + 3.5,
                vy
            ));
        }
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">nose type / stability</text>\n",
            MARGIN_LEFT + grid_w / 2.0,
            MARGIN_TOP + grid_h + 32.0
        ));
        self.body.push_str(&format!(
            "<text x=\"12\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 12 {})\">mean apogee (m)</text>\n",
            MARGIN_TOP + grid_h / 2.0,
            MARGIN_TOP + grid_h / 2.0
        ));
    }

    fn legend_swatch(&mut self, slot: usize, fill: &str, label: &str) {
        let x = MARGIN_LEFT + self.cfg.x_bins as f64 * CELL + 16.0;
        let y = MARGIN_TOP + slot as f64 * 18.0;
        self.body.push_str(&format!(
            "<rect x=\"{x}\" y=\"{y}\" width=\"12\" height=\"12\" fill=\"{fill}\" \
             stroke=\"#666666\" stroke-width=\"0.5\"/>\n"
        ));
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" \
             font-family=\"sans-serif\">{label}</text>\n",
            x + 16.0,
            y + 10.0
        ));
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
             viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

/// Occupied cells colored by fitness on the fixed 0-40 scale.
pub fn fitness_svg(archive: &GridArchive) -> String {
    let cfg = archive.config();
    let mut canvas = Canvas::new(cfg, 70.0);
    for (xi, yi, sol) in archive.occupants() {
        canvas.cell(xi, yi, &ramp(&FITNESS_STOPS, sol.fitness / 40.0));
    }
    for (slot, f) in [0.0, 10.0, 20.0, 30.0, 40.0].iter().enumerate() {
        let fill = ramp(&FITNESS_STOPS, f / 40.0);
        canvas.legend_swatch(slot, &fill, &format!("{f:.0}"));
    }
    canvas.finish()
}

/// Cells colored by which archives found them. At most three archives; the
/// legend enumerates every non-empty subset.
pub fn category_svg(cfg: &ArchiveConfig, map: &CoverageMap) -> Result<String> {
    if map.names.is_empty() || map.names.len() > 3 {
        return Err(Error::Config(format!(
            "category heatmaps support 1-3 archives, got {}",
            map.names.len()
        )));
    }
    if map.x_bins != cfg.x_bins || map.y_bins != cfg.y_bins {
        return Err(Error::Config(
            "coverage map does not match grid".to_string(),
        ));
    }
    let mut canvas = Canvas::new(cfg, 150.0);
    for yi in 0..map.y_bins {
        for xi in 0..map.x_bins {
            let mask = map.mask[yi * map.x_bins + xi];
            if mask != 0 {
                canvas.cell(xi, yi, CATEGORY_COLORS[(mask - 1) as usize]);
            }
        }
    }
    let subsets = (1u32 << map.names.len()) - 1;
    for mask in 1..=subsets {
        let members: Vec<&str> = map
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, n)| n.as_str())
            .collect();
        canvas.legend_swatch(
            (mask - 1) as usize,
            CATEGORY_COLORS[(mask - 1) as usize],
            &members.join(" + "),
        );
    }
    Ok(canvas.finish())
}

/// Cells shaded by how many of `total` runs occupied them.
pub fn counts_svg(cfg: &ArchiveConfig, counts: &[u32], total: usize) -> Result<String> {
    if counts.len() != cfg.cells() {
        return Err(Error::Config(format!(
            "counts length {} does not match {} cells",
            counts.len(),
            cfg.cells()
        )));
    }
    let stops = [(0xde, 0xeb, 0xf7), (0x08, 0x30, 0x6b)];
    let denom = total.max(1) as f64;
    let mut canvas = Canvas::new(cfg, 70.0);
    for yi in 0..cfg.y_bins {
        for xi in 0..cfg.x_bins {
            let c = counts[yi * cfg.x_bins + xi];
            if c > 0 {
                canvas.cell(xi, yi, &ramp(&stops, c as f64 / denom));
            }
        }
    }
    for (slot, frac) in [0.0f64, 0.5, 1.0].iter().enumerate() {
        let label = format!("{:.0}", frac * denom);
        let fill = ramp(&stops, *frac);
        canvas.legend_swatch(slot, &fill, &label);
    }
    Ok(canvas.finish())
}
