//! Adaptive bandwidth from a multi-scale information measure of the window.
//!
//! Every `N` frames the measure is taken on the tracked window (`I4`) and
//! on the window enlarged by `1 + alpha` (`I5`) and compared with the
//! baselines `I1`, `I2` from the previous check. The resulting scale factor
//! `S` resizes both window extents by `1 + S`, subject to the per-direction
//! change counters.

use std::fmt::Debug;

use crate::error::{Result, TrackError};
use crate::imaging::{clip_window, ColorQuantizer, FrameImage, Window};

/// Lower bound on the argument of the base-10 logarithm in the
/// decreasing-scale branch.
pub const LOG_ARGUMENT_FLOOR: f64 = 1e-6;

/// Shrink threshold of the increasing-information branch: `I1 * 0.95 > I4`.
pub const SHRINK_RATIO: f64 = 0.95;

/// Information content of the pixels inside a window. Must be non-negative
/// and zero for a window of a single color.
pub trait InformationMeasure: Debug + Send + Sync {
    fn measure(
        &self,
        frame: &FrameImage,
        window: &Window,
        quantizer: &ColorQuantizer,
    ) -> Result<f64>;
}

/// Mean Shannon entropy (bits) of the quantized color histogram of the
/// window content, taken at several downsampling factors. Downsampling
/// averages non-overlapping `f x f` blocks anchored at the window's top-left
/// pixel; partial blocks at the right and bottom edges average what they hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiScaleEntropy {
    pub factors: Vec<usize>,
}

impl Default for MultiScaleEntropy {
    fn default() -> Self {
        Self {
            factors: vec![1, 2, 4],
        }
    }
}

impl MultiScaleEntropy {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(TrackError::Config(
                "msiim_scales must be a non-empty list of positive factors".into(),
            ));
        }
        Ok(Self { factors })
    }
}

pub(crate) fn entropy_bits(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

impl InformationMeasure for MultiScaleEntropy {
    fn measure(
        &self,
        frame: &FrameImage,
        window: &Window,
        quantizer: &ColorQuantizer,
    ) -> Result<f64> {
        let rect = clip_window(frame, window)?;
        let mut counts = vec![0.0; quantizer.bins()];
        let mut sum = 0.0;
        for &f in &self.factors {
            counts.iter_mut().for_each(|c| *c = 0.0);
            let mut by = rect.y0;
            while by <= rect.y1 {
                let ey = (by + f - 1).min(rect.y1);
                let mut bx = rect.x0;
                while bx <= rect.x1 {
                    let ex = (bx + f - 1).min(rect.x1);
                    let mut acc = [0u64; 3];
                    let mut n = 0u64;
                    for y in by..=ey {
                        for x in bx..=ex {
                            let p = frame.pixel(x, y);
                            for c in 0..3 {
                                acc[c] += p[c] as u64;
                            }
                            n += 1;
                        }
                    }
                    let mean = acc.map(|a| ((a + n / 2) / n) as u8);
                    counts[quantizer.quantize(mean)] += 1.0;
                    bx += f;
                }
                by += f;
            }
            sum += entropy_bits(&counts);
        }
        Ok(sum / self.factors.len() as f64)
    }
}

/// Measures the information content of the window with `measure`.
pub fn msiim(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    measure: &dyn InformationMeasure,
) -> Result<f64> {
    measure.measure(frame, window, quantizer)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleConfig {
    /// Enlargement used for the outer measurement (`1 + alpha`).
    pub alpha: f64,
    /// Background-elimination parameter of the scale-factor formulas.
    pub beta: f64,
    /// Frames between scale checks; `None` disables checks.
    pub period: Option<u32>,
    /// Saturation limit of the per-direction change counters.
    pub limit: u32,
    /// `S` is clamped to `[-clamp, clamp]`.
    pub clamp: f64,
    /// Smallest allowed window width and height, in pixels.
    pub min_extent: f64,
    pub msiim_scales: Vec<usize>,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 2.4,
            period: Some(10),
            limit: 5,
            clamp: 0.2,
            min_extent: 4.0,
            msiim_scales: vec![1, 2, 4],
        }
    }
}

impl ScaleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(TrackError::Config(m));
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.period == Some(0) {
            return bad("scale_period_n must be at least 1".into());
        }
        if self.limit == 0 {
            return bad("scale_limit_l must be at least 1".into());
        }
        if !(self.clamp.is_finite() && self.clamp > 0.0 && self.clamp < 1.0) {
            return bad(format!("scale_clamp must be in (0, 1), got {}", self.clamp));
        }
        if !(self.min_extent.is_finite() && self.min_extent > 0.0) {
            return bad(format!(
                "min_extent_px must be positive, got {}",
                self.min_extent
            ));
        }
        MultiScaleEntropy::new(self.msiim_scales.clone()).map(|_| ())
    }

    pub fn is_check_frame(&self, frame_index: usize) -> bool {
        matches!(self.period, Some(n) if frame_index.is_multiple_of(n as usize))
    }
}

/// Outcome of the scale-factor formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactor {
    pub s: f64,
    /// Set when `I1` or `I4` is zero and the formulas are undefined.
    pub degenerate: bool,
}

/// Scale factor from the baseline (`i1`, `i2`) and current (`i4`, `i5`)
/// measurements.
///
/// `I5 - I2 >= 0`: `S = lg(beta - (I5 - (I2 - I1)) / I1)` when `I5/I4 > I2/I1`.
/// `I5 - I2 < 0`: `S = beta * lg(I4 / I1)` when `I1 * 0.95 > I4`.
/// Otherwise `S = 0`. The result is clamped to `[-clamp, clamp]`.
pub fn compute_scale_factor(
    i1: f64,
    i2: f64,
    i4: f64,
    i5: f64,
    beta: f64,
    clamp: f64,
) -> ScaleFactor {
    if !(i1 > 0.0 && i4 > 0.0) {
        return ScaleFactor {
            s: 0.0,
            degenerate: true,
        };
    }
    let s = if i5 - i2 >= 0.0 {
        if i5 / i4 > i2 / i1 {
            let arg = beta - (i5 - (i2 - i1)) / i1;
            arg.max(LOG_ARGUMENT_FLOOR).log10()
        } else {
            0.0
        }
    } else if i1 * SHRINK_RATIO > i4 {
        beta * (i4 / i1).log10()
    } else {
        0.0
    };
    ScaleFactor {
        s: s.clamp(-clamp, clamp),
        degenerate: false,
    }
}

/// Multiplies both extents by `1 + s`, keeping the center and never letting
/// the width or height drop below `min_extent`.
pub fn apply_scale(window: &Window, s: f64, min_extent: f64) -> Window {
    let factor = 1.0 + s;
    let floor = min_extent / 2.0;
    Window {
        hx: (window.hx * factor).max(floor),
        hy: (window.hy * factor).max(floor),
        ..*window
    }
}

/// Per-direction change counters limiting repeated resizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScaleCounters {
    pub increases: u32,
    pub decreases: u32,
}

impl ScaleCounters {
    /// Registers a scale change and reports whether it may be applied. A
    /// change is suppressed when its direction's counter was already at
    /// `limit` before this update; the opposite counter is decremented.
    pub fn update(&mut self, s: f64, limit: u32) -> bool {
        if s > 0.0 {
            let permitted = self.increases < limit;
            self.increases = (self.increases + 1).min(limit);
            self.decreases = self.decreases.saturating_sub(1);
            permitted
        } else if s < 0.0 {
            let permitted = self.decreases < limit;
            self.decreases = (self.decreases + 1).min(limit);
            self.increases = self.increases.saturating_sub(1);
            permitted
        } else {
            true
        }
    }
}

/// Result of one scheduled scale check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCheck {
    /// Factor produced by the formulas.
    pub computed: f64,
    /// Factor actually applied (0 when suppressed by the counters).
    pub applied: f64,
    pub permitted: bool,
    pub degenerate: bool,
    pub window: Window,
}

/// Scale-adaptation state owned by one tracker.
#[derive(Debug)]
pub struct ScaleState {
    pub config: ScaleConfig,
    measure: Box<dyn InformationMeasure>,
    pub i1: f64,
    pub i2: f64,
    pub i4: f64,
    pub i5: f64,
    pub s: f64,
    pub counters: ScaleCounters,
}

impl ScaleState {
    /// Takes the baseline measurements on the initial window.
    pub fn init(
        frame: &FrameImage,
        window: &Window,
        quantizer: &ColorQuantizer,
        config: ScaleConfig,
    ) -> Result<Self> {
        let measure = Box::new(MultiScaleEntropy::new(config.msiim_scales.clone())?);
        Self::with_measure(frame, window, quantizer, config, measure)
    }

    pub fn with_measure(
        frame: &FrameImage,
        window: &Window,
        quantizer: &ColorQuantizer,
        config: ScaleConfig,
        measure: Box<dyn InformationMeasure>,
    ) -> Result<Self> {
        config.validate()?;
        let i1 = measure.measure(frame, window, quantizer)?;
        let i2 = measure.measure(frame, &window.scaled(1.0 + config.alpha), quantizer)?;
        Ok(Self {
            config,
            measure,
            i1,
            i2,
            i4: i1,
            i5: i2,
            s: 0.0,
            counters: ScaleCounters::default(),
        })
    }

    /// Measures the current window, derives `S`, refreshes the baselines and
    /// resizes the window when the counters permit it.
    pub fn check(
        &mut self,
        frame: &FrameImage,
        window: &Window,
        quantizer: &ColorQuantizer,
    ) -> Result<ScaleCheck> {
        self.i4 = self.measure.measure(frame, window, quantizer)?;
        self.i5 =
            self.measure
                .measure(frame, &window.scaled(1.0 + self.config.alpha), quantizer)?;
        let factor = compute_scale_factor(
            self.i1,
            self.i2,
            self.i4,
            self.i5,
            self.config.beta,
            self.config.clamp,
        );
        self.i1 = self.i4;
        self.i2 = self.i5;
        let permitted = self.counters.update(factor.s, self.config.limit);
        let applied = if permitted { factor.s } else { 0.0 };
        self.s = applied;
        Ok(ScaleCheck {
            computed: factor.s,
            applied,
            permitted,
            degenerate: factor.degenerate,
            window: apply_scale(window, applied, self.config.min_extent),
        })
    }
}
