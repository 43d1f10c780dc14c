//! Mean-shift localization: move the candidate window to the weighted
//! centroid of its pixels until the step falls below `min_dist`.

use crate::error::{Result, TrackError};
use crate::histograms::{
    apply_transfer, bhattacharyya, kernel_masses, HistogramRole, Kernel, TransferFunction,
    WeightedHistogram,
};
use crate::imaging::{clamp_center, clip_window, ColorQuantizer, FrameImage, Window};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationConfig {
    /// Exit threshold on the step length, in pixels.
    pub min_dist: f64,
    pub max_iterations: usize,
}

impl Default for LocalizationConfig {
    fn default() -> Self {
        Self {
            min_dist: 0.5,
            max_iterations: 20,
        }
    }
}

impl LocalizationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_dist.is_finite() && self.min_dist > 0.0) {
            return Err(TrackError::Config(format!(
                "min_dist must be positive, got {}",
                self.min_dist
            )));
        }
        if self.max_iterations == 0 {
            return Err(TrackError::Config(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    pub final_window: Window,
    pub iterations: usize,
    /// Step length of each iteration, in pixels.
    pub displacements: Vec<f64>,
    /// Window center after each iteration.
    pub centers: Vec<(f64, f64)>,
    pub final_rho: f64,
}

/// How candidate histograms are treated before they are compared with the
/// target model.
#[derive(Debug, Clone, Copy)]
enum CandidateWeighting<'a> {
    Plain,
    Transfer(&'a TransferFunction),
}

fn candidate_model(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    weighting: CandidateWeighting<'_>,
) -> Result<WeightedHistogram> {
    let masses = kernel_masses(frame, window, quantizer, kernel)?;
    let p = WeightedHistogram::from_masses(masses, HistogramRole::Candidate)?;
    match weighting {
        CandidateWeighting::Plain => Ok(p),
        CandidateWeighting::Transfer(v) => apply_transfer(&p, v),
    }
}

/// Per-bin pixel weight `sqrt(q_u / p_u)`; bins absent from `p` get 0.
fn bin_weights(target: &WeightedHistogram, candidate: &WeightedHistogram) -> Vec<f64> {
    target
        .weights()
        .iter()
        .zip(candidate.weights())
        .map(|(&q, &p)| if p > 0.0 { (q / p).sqrt() } else { 0.0 })
        .collect()
}

fn step_with(
    frame: &FrameImage,
    window: &Window,
    target: &WeightedHistogram,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    weighting: CandidateWeighting<'_>,
) -> Result<(f64, f64)> {
    if target.len() != quantizer.bins() {
        return Err(TrackError::DimensionMismatch {
            left: target.len(),
            right: quantizer.bins(),
        });
    }
    let candidate = candidate_model(frame, window, quantizer, kernel, weighting)?;
    let weights = bin_weights(target, &candidate);
    let rect = clip_window(frame, window)?;
    let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
    for (x, y) in rect.positions() {
        let (px, py) = (x as f64, y as f64);
        let g = kernel.shadow(window.normalized_offset(px, py));
        if g == 0.0 {
            continue;
        }
        let w = g * weights[quantizer.quantize(frame.pixel(x, y))];
        sx += w * px;
        sy += w * py;
        sw += w;
    }
    if sw <= 0.0 {
        return Err(TrackError::ZeroWeight);
    }
    Ok((sx / sw, sy / sw))
}

/// One mean-shift update: the centroid of the window pixels weighted by
/// `sqrt(q_u / p_u(y0))`.
pub fn mean_shift_step(
    frame: &FrameImage,
    window: &Window,
    target: &WeightedHistogram,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
) -> Result<(f64, f64)> {
    step_with(
        frame,
        window,
        target,
        quantizer,
        kernel,
        CandidateWeighting::Plain,
    )
}

fn localize_with(
    frame: &FrameImage,
    start: &Window,
    target: &WeightedHistogram,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    cfg: &LocalizationConfig,
    weighting: CandidateWeighting<'_>,
) -> Result<LocalizationResult> {
    cfg.validate()?;
    let mut window = clamp_center(frame, start);
    let mut displacements = Vec::with_capacity(cfg.max_iterations);
    let mut centers = Vec::with_capacity(cfg.max_iterations);
    for _ in 0..cfg.max_iterations {
        let (nx, ny) = step_with(frame, &window, target, quantizer, kernel, weighting).map_err(
            |e| match e {
                TrackError::ZeroWeight => TrackError::TargetLost,
                other => other,
            },
        )?;
        let next = clamp_center(frame, &window.with_center(nx, ny));
        let step = (next.cx - window.cx).hypot(next.cy - window.cy);
        displacements.push(step);
        centers.push((next.cx, next.cy));
        window = next;
        if step < cfg.min_dist {
            break;
        }
    }
    let candidate = candidate_model(frame, &window, quantizer, kernel, weighting)?;
    let final_rho = bhattacharyya(&candidate, target)?;
    Ok(LocalizationResult {
        final_window: window,
        iterations: displacements.len(),
        displacements,
        centers,
        final_rho,
    })
}

/// Iterates [`mean_shift_step`] from `start` until the step is shorter than
/// `cfg.min_dist` or `cfg.max_iterations` steps have been taken. Window
/// centers are clamped to the frame. A step with no supporting pixels is
/// reported as [`TrackError::TargetLost`].
pub fn localize(
    frame: &FrameImage,
    start: &Window,
    target: &WeightedHistogram,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    cfg: &LocalizationConfig,
) -> Result<LocalizationResult> {
    localize_with(
        frame,
        start,
        target,
        quantizer,
        kernel,
        cfg,
        CandidateWeighting::Plain,
    )
}

/// Localization with background weighting applied to both the target
/// model and every candidate model. `target` is the plain (unweighted)
/// target model.
pub fn localize_bwh(
    frame: &FrameImage,
    start: &Window,
    target: &WeightedHistogram,
    transfer: &TransferFunction,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    cfg: &LocalizationConfig,
) -> Result<LocalizationResult> {
    let weighted = apply_transfer(target, transfer)?;
    localize_with(
        frame,
        start,
        &weighted,
        quantizer,
        kernel,
        cfg,
        CandidateWeighting::Transfer(transfer),
    )
}
