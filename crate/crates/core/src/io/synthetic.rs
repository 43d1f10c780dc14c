//! Synthetic sequences with exact ground truth.
//!
//! A spec is a JSON object:
//!
//! ```json
//! {
//!   "width": 160, "height": 120, "frames": 100, "seed": 7,
//!   "background": {"kind": "solid", "color": [20, 20, 20]},
//!   "target": {"shape": "disk", "center": [40, 60], "half_extent": [20, 20],
//!              "fill": [230, 40, 40]},
//!   "velocity": [3, 0], "scale_ramp": 1.0, "hue_drift": 0.0
//! }
//! ```
//!
//! Backgrounds are `solid`, `two_tone` (vertical stripes) or `noise`
//! (uniform per-pixel jitter around a base colour, redrawn every frame).
//! A target may carry a `pattern` of `cells x cells` tiles coloured from a
//! palette; the tiles scale with the target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TrackError};
use crate::imaging::{FrameImage, Rgb, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Background {
    Solid { color: Rgb },
    TwoTone { colors: [Rgb; 2], stripe: usize },
    Noise { color: Rgb, amplitude: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Ellipse inscribed in the half-extents (a disk when they are equal).
    Disk,
    Rectangle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pattern {
    pub cells: usize,
    pub palette: Vec<Rgb>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub shape: Shape,
    pub center: [f64; 2],
    pub half_extent: [f64; 2],
    pub fill: Rgb,
    #[serde(default)]
    pub pattern: Option<Pattern>,
}

fn unit_ramp() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    #[serde(default)]
    pub seed: u64,
    pub background: Background,
    pub target: TargetSpec,
    /// Pixels per frame.
    #[serde(default)]
    pub velocity: [f64; 2],
    /// Per-frame multiplicative change of both half-extents.
    #[serde(default = "unit_ramp")]
    pub scale_ramp: f64,
    /// Degrees of hue rotation per frame.
    #[serde(default)]
    pub hue_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSequence {
    pub frames: Vec<FrameImage>,
    pub ground_truth: Vec<Window>,
}

/// Rotates the hue of a colour by `degrees`, keeping saturation and value.
pub fn rotate_hue(rgb: Rgb, degrees: f64) -> Rgb {
    let [r, g, b] = rgb.map(|c| c as f64 / 255.0);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    if delta == 0.0 {
        return rgb;
    }
    let h = if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = delta / max;
    let h = (h + degrees).rem_euclid(360.0);
    let c = max * s;
    let x = c * (1.0 - ((h / 60.0).rem_euclid(2.0) - 1.0).abs());
    let m = max - c;
    let (r1, g1, b1) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [r1, g1, b1].map(|v| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8)
}

impl SyntheticSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| TrackError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Ground-truth window of frame `t` (0-based).
    pub fn window_at(&self, t: usize) -> Result<Window> {
        let k = self.scale_ramp.powi(t as i32);
        Window::new(
            self.target.center[0] + self.velocity[0] * t as f64,
            self.target.center[1] + self.velocity[1] * t as f64,
            self.target.half_extent[0] * k,
            self.target.half_extent[1] * k,
        )
        .map_err(|e| TrackError::Spec(format!("frame {}: {e}", t + 1)))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(TrackError::Spec(m));
        if self.width == 0 || self.height == 0 || self.frames == 0 {
            return bad("width, height and frames must be positive".into());
        }
        if self.width.saturating_mul(self.height) > 1 << 26 {
            return bad(format!(
                "resolution {}x{} too large",
                self.width, self.height
            ));
        }
        let finite = self
            .velocity
            .iter()
            .chain(&self.target.center)
            .all(|v| v.is_finite())
            && self.hue_drift.is_finite();
        if !finite {
            return bad("non-finite motion parameters".into());
        }
        if !(self.scale_ramp.is_finite() && self.scale_ramp > 0.0) {
            return bad(format!(
                "scale_ramp must be positive, got {}",
                self.scale_ramp
            ));
        }
        if let Background::TwoTone { stripe: 0, .. } = self.background {
            return bad("two_tone stripe width must be positive".into());
        }
        if let Some(p) = &self.target.pattern {
            if p.cells == 0 || p.palette.is_empty() {
                return bad("pattern needs at least one cell and one palette colour".into());
            }
        }
        let (w, h) = (self.width as f64, self.height as f64);
        for t in 0..self.frames {
            let win = self.window_at(t)?;
            let ix = (win.cx + win.hx).min(w - 0.5) - (win.cx - win.hx).max(-0.5);
            let iy = (win.cy + win.hy).min(h - 0.5) - (win.cy - win.hy).max(-0.5);
            let inside = ix.max(0.0) * iy.max(0.0) / (4.0 * win.hx * win.hy);
            if inside < 0.5 {
                return bad(format!(
                    "target is only {:.0}% inside the frame at frame {}",
                    inside * 100.0,
                    t + 1
                ));
            }
        }
        Ok(())
    }

    fn background_pixel(&self, x: usize, rng: &mut ChaCha8Rng) -> Rgb {
        match &self.background {
            Background::Solid { color } => *color,
            Background::TwoTone { colors, stripe } => colors[(x / stripe) % 2],
            Background::Noise { color, amplitude } => {
                let a = *amplitude as i16;
                color.map(|c| (c as i16 + rng.gen_range(-a..=a)).clamp(0, 255) as u8)
            }
        }
    }

    fn target_pixel(
        &self,
        win: &Window,
        x: f64,
        y: f64,
        palette: &[Rgb],
        fill: Rgb,
    ) -> Option<Rgb> {
        let u = (x - win.cx) / win.hx;
        let v = (y - win.cy) / win.hy;
        let inside = match self.target.shape {
            Shape::Disk => u * u + v * v <= 1.0,
            Shape::Rectangle => u.abs() <= 1.0 && v.abs() <= 1.0,
        };
        if !inside {
            return None;
        }
        Some(match &self.target.pattern {
            None => fill,
            Some(p) => {
                let cell = |t: f64| (((t + 1.0) * 0.5 * p.cells as f64) as usize).min(p.cells - 1);
                palette[(cell(u) + cell(v) * p.cells) % palette.len()]
            }
        })
    }
}

/// Renders every frame of `spec` together with its ground-truth windows.
/// Identical specs produce bit-identical output.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticSequence> {
    spec.validate()?;
    let mut frames = Vec::with_capacity(spec.frames);
    let mut ground_truth = Vec::with_capacity(spec.frames);
    for t in 0..spec.frames {
        let win = spec.window_at(t)?;
        let turn = spec.hue_drift * t as f64;
        let fill = rotate_hue(spec.target.fill, turn);
        let palette: Vec<Rgb> = spec
            .target
            .pattern
            .as_ref()
            .map(|p| p.palette.iter().map(|&c| rotate_hue(c, turn)).collect())
            .unwrap_or_default();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(t as u64);
        let mut data = Vec::with_capacity(spec.width * spec.height * 3);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let px = spec
                    .target_pixel(&win, x as f64, y as f64, &palette, fill)
                    .unwrap_or_else(|| spec.background_pixel(x, &mut rng));
                data.extend_from_slice(&px);
            }
        }
        frames.push(FrameImage::new(spec.width, spec.height, data)?);
        ground_truth.push(win);
    }
    Ok(SyntheticSequence {
        frames,
        ground_truth,
    })
}
