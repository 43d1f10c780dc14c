//! Kernel-weighted color histograms and the similarity measures used to
//! compare them.
//!
//! A target model `q` and a candidate model `p(y)` are both built the same
//! way: every window pixel contributes its kernel weight `k(|x|^2)` to the
//! bin its color quantizes to, and the result is normalized to unit mass.
//! The background-weighted variants attenuate colors that are prominent in
//! the ring around the target through a per-bin transfer function
//! `v_u = min(o*/o_u, 1)`.

use crate::error::{Result, TrackError};
use crate::imaging::{clip_window, ColorQuantizer, FrameImage, Window};

/// Normalization tolerance for every constructed histogram.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Default ratio between the background ring's outer extent and the target window.
pub const DEFAULT_BACKGROUND_RATIO: f64 = 2.0;

/// Kernel profile `k(x)` evaluated on squared normalized distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    /// `k(x) = 1 - x` on `[0, 1]`, zero beyond. Its shadow `g = -k'` is constant.
    #[default]
    Epanechnikov,
    /// `k(x) = 1` on `[0, 1]`, zero beyond.
    Uniform,
}

impl Kernel {
    #[inline]
    pub fn profile(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        match self {
            Kernel::Epanechnikov => 1.0 - x,
            Kernel::Uniform => 1.0,
        }
    }

    /// Weight `g(x)` applied to each pixel in the mean-shift centroid. For
    /// both profiles this is the indicator of the kernel support.
    #[inline]
    pub fn shadow(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramRole {
    Target,
    Candidate,
    Background,
    TransferAdjusted,
    BackgroundWeighted,
    Other,
}

/// A normalized `m`-bin color distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHistogram {
    weights: Vec<f64>,
    role: HistogramRole,
}

impl WeightedHistogram {
    /// Normalizes raw non-negative masses into a histogram.
    pub fn from_masses(masses: Vec<f64>, role: HistogramRole) -> Result<Self> {
        if masses.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(TrackError::InvalidFrame(
                "histogram masses must be finite and non-negative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(TrackError::ZeroMass);
        }
        let weights = masses.into_iter().map(|w| w / total).collect();
        Ok(Self { weights, role })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn role(&self) -> HistogramRole {
        self.role
    }

    pub fn with_role(mut self, role: HistogramRole) -> Self {
        self.role = role;
        self
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.total() - 1.0).abs() < NORMALIZATION_TOLERANCE
    }
}

/// Per-bin background attenuation `v_u` in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    v: Vec<f64>,
}

impl TransferFunction {
    /// The identity transfer (`v = 1` everywhere) over `bins` bins.
    pub fn identity(bins: usize) -> Self {
        Self { v: vec![1.0; bins] }
    }

    pub fn from_values(v: Vec<f64>) -> Result<Self> {
        if v.iter().any(|x| !(x.is_finite() && *x > 0.0 && *x <= 1.0)) {
            return Err(TrackError::Config(
                "transfer values must lie in (0, 1]".into(),
            ));
        }
        Ok(Self { v })
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().all(|&x| x == 1.0)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(TrackError::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Un-normalized kernel-weighted bin masses of the window content.
pub(crate) fn kernel_masses(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
) -> Result<Vec<f64>> {
    let rect = clip_window(frame, window)?;
    let mut masses = vec![0.0; quantizer.bins()];
    let mut total = 0.0;
    for (x, y) in rect.positions() {
        let k = kernel.profile(window.normalized_offset(x as f64, y as f64));
        if k > 0.0 {
            masses[quantizer.quantize(frame.pixel(x, y))] += k;
            total += k;
        }
    }
    if total <= 0.0 {
        return Err(TrackError::DegenerateKernel);
    }
    Ok(masses)
}

/// Kernel-weighted target model `q`.
pub fn build_target_model(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
) -> Result<WeightedHistogram> {
    let masses = kernel_masses(frame, window, quantizer, kernel)?;
    WeightedHistogram::from_masses(masses, HistogramRole::Target)
}

/// Kernel-weighted candidate model `p(y)` centered on the window.
pub fn build_candidate_model(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
) -> Result<WeightedHistogram> {
    let masses = kernel_masses(frame, window, quantizer, kernel)?;
    WeightedHistogram::from_masses(masses, HistogramRole::Candidate)
}

/// Bhattacharyya coefficient `sum_u sqrt(p_u q_u)`.
pub fn bhattacharyya(p: &WeightedHistogram, q: &WeightedHistogram) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    Ok(p.weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a * b).sqrt())
        .sum())
}

/// Bhattacharyya distance `sqrt(1 - rho)`, evaluated as
/// `sqrt(sum (sqrt p_u - sqrt q_u)^2 / 2)`, which is the same quantity for
/// normalized inputs but exact at `p == q`.
pub fn bhatt_distance(p: &WeightedHistogram, q: &WeightedHistogram) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    let half_sq: f64 = p
        .weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum::<f64>()
        / 2.0;
    Ok(half_sq.sqrt())
}

/// Unweighted histogram of the ring between the target window and the same
/// window with both half-extents multiplied by `ratio`.
pub fn build_background_histogram(
    frame: &FrameImage,
    target: &Window,
    quantizer: &ColorQuantizer,
    ratio: f64,
) -> Result<WeightedHistogram> {
    if !(ratio.is_finite() && ratio > 1.0) {
        return Err(TrackError::Config(format!(
            "background ratio must exceed 1, got {ratio}"
        )));
    }
    let outer = target.scaled(ratio);
    let rect = clip_window(frame, &outer)?;
    let mut masses = vec![0.0; quantizer.bins()];
    let mut count = 0usize;
    for (x, y) in rect.positions() {
        if target.contains(x as f64, y as f64) {
            continue;
        }
        masses[quantizer.quantize(frame.pixel(x, y))] += 1.0;
        count += 1;
    }
    if count == 0 {
        return Err(TrackError::EmptyWindow);
    }
    WeightedHistogram::from_masses(masses, HistogramRole::Background)
}

/// `v_u = min(o*/o_u, 1)` with `o*` the smallest nonzero background entry.
/// Bins absent from the background keep `v_u = 1`.
pub fn compute_transfer(background: &WeightedHistogram) -> TransferFunction {
    let o_star = background
        .weights
        .iter()
        .copied()
        .filter(|&o| o > 0.0)
        .fold(f64::INFINITY, f64::min);
    let v = background
        .weights
        .iter()
        .map(|&o| if o > 0.0 { (o_star / o).min(1.0) } else { 1.0 })
        .collect();
    TransferFunction { v }
}

/// Target model with background colors attenuated by `v`.
pub fn build_cbwh_target_model(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    kernel: Kernel,
    transfer: &TransferFunction,
) -> Result<WeightedHistogram> {
    check_dims(transfer.len(), quantizer.bins())?;
    let mut masses = kernel_masses(frame, window, quantizer, kernel)?;
    for (m, v) in masses.iter_mut().zip(&transfer.v) {
        *m *= v;
    }
    WeightedHistogram::from_masses(masses, HistogramRole::TransferAdjusted)
}

/// Multiplies a histogram by `v` elementwise and renormalizes.
pub fn apply_transfer(
    hist: &WeightedHistogram,
    transfer: &TransferFunction,
) -> Result<WeightedHistogram> {
    check_dims(hist.len(), transfer.len())?;
    let masses = hist
        .weights
        .iter()
        .zip(&transfer.v)
        .map(|(h, v)| h * v)
        .collect();
    WeightedHistogram::from_masses(masses, HistogramRole::BackgroundWeighted)
}

/// Background weighting applied to both target and candidate models.
pub fn apply_bwh_weighting(
    target: &WeightedHistogram,
    candidate: &WeightedHistogram,
    transfer: &TransferFunction,
) -> Result<(WeightedHistogram, WeightedHistogram)> {
    Ok((
        apply_transfer(target, transfer)?,
        apply_transfer(candidate, transfer)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: [u8; 3] = [200, 30, 30];
    const B: [u8; 3] = [30, 30, 200];

    fn q() -> ColorQuantizer {
        ColorQuantizer::default()
    }

    fn hist(w: &[f64]) -> WeightedHistogram {
        WeightedHistogram::from_masses(w.to_vec(), HistogramRole::Other).unwrap()
    }

    /// Direct per-pixel sum over the whole frame, independent of the clip logic.
    fn oracle_masses(frame: &FrameImage, w: &Window, qz: &ColorQuantizer) -> Vec<f64> {
        let mut m = vec![0.0; qz.bins()];
        for y in 0..frame.height() {
            for x in 0..frame.width() {
                let (px, py) = (x as f64, y as f64);
                if (px - w.cx).abs() > w.hx || (py - w.cy).abs() > w.hy {
                    continue;
                }
                let d = ((px - w.cx) / w.hx).powi(2) + ((py - w.cy) / w.hy).powi(2);
                if d <= 1.0 {
                    m[qz.quantize(frame.pixel(x, y))] += 1.0 - d;
                }
            }
        }
        let s: f64 = m.iter().sum();
        m.iter().map(|v| v / s).collect()
    }

    fn checkerboard(w: usize, h: usize) -> FrameImage {
        let mut f = FrameImage::filled(w, h, A).unwrap();
        for y in 0..h {
            for x in 0..w {
                if (x + y) % 2 == 1 {
                    f.set_pixel(x, y, B);
                }
            }
        }
        f
    }

    #[test]
    fn single_color_window_is_a_spike() {
        let f = FrameImage::filled(20, 20, A).unwrap();
        let w = Window::new(10.0, 10.0, 5.0, 5.0).unwrap();
        let h = build_target_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let nz: Vec<_> = h.weights().iter().filter(|&&v| v > 0.0).collect();
        assert_eq!(nz.len(), 1);
        assert!((nz[0] - 1.0).abs() < 1e-12);
        assert_eq!(h.role(), HistogramRole::Target);
    }

    #[test]
    fn symmetric_split_gives_equal_bins() {
        // left half A, right half B, window centered on the seam between columns 9 and 10
        let mut f = FrameImage::filled(20, 20, A).unwrap();
        for y in 0..20 {
            for x in 10..20 {
                f.set_pixel(x, y, B);
            }
        }
        let w = Window::new(9.5, 10.0, 6.0, 6.0).unwrap();
        let h = build_target_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let (a, b) = (h.weights()[q().quantize(A)], h.weights()[q().quantize(B)]);
        assert!((a - b).abs() < 1e-12);
        assert!((a - 0.5).abs() < 1e-12);
    }

    #[test]
    fn checkerboard_matches_direct_summation() {
        let f = checkerboard(5, 5);
        let w = Window::new(2.0, 2.0, 2.5, 2.5).unwrap();
        let h = build_target_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let oracle = oracle_masses(&f, &w, &q());
        for (a, b) in h.weights().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
        // frozen from an offline evaluation of the same sum
        let a = oracle[q().quantize(A)];
        assert!((a - 0.5098814229249011).abs() < 1e-12, "{a}");
    }

    #[test]
    fn candidate_equals_target_on_same_window() {
        let f = checkerboard(15, 15);
        let w = Window::new(7.0, 6.0, 4.0, 3.0).unwrap();
        let t = build_target_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let c = build_candidate_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        assert_eq!(t.weights(), c.weights());
        assert_eq!(c.role(), HistogramRole::Candidate);
    }

    #[test]
    fn candidate_on_new_color_region_is_spike() {
        let mut f = FrameImage::filled(40, 20, A).unwrap();
        for y in 0..20 {
            for x in 25..40 {
                f.set_pixel(x, y, B);
            }
        }
        let w = Window::new(32.0, 10.0, 4.0, 4.0).unwrap();
        let c = build_candidate_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        assert!((c.weights()[q().quantize(B)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_candidate_matches_oracle() {
        let mut f = FrameImage::filled(30, 30, A).unwrap();
        for y in 0..30 {
            for x in 15..30 {
                f.set_pixel(x, y, B);
            }
        }
        let w = Window::new(13.3, 14.7, 5.5, 4.2).unwrap();
        let c = build_candidate_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let oracle = oracle_masses(&f, &w, &q());
        for (a, b) in c.weights().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_kernel_detected() {
        // Window whose only member pixels sit on its corners (offset 2).
        let f = FrameImage::filled(10, 10, A).unwrap();
        let w = Window::new(4.5, 4.5, 0.5, 0.5).unwrap();
        assert!(matches!(
            build_target_model(&f, &w, &q(), Kernel::Epanechnikov),
            Err(TrackError::DegenerateKernel)
        ));
        let off = Window::new(50.0, 50.0, 3.0, 3.0).unwrap();
        assert!(matches!(
            build_target_model(&f, &off, &q(), Kernel::Epanechnikov),
            Err(TrackError::EmptyWindow)
        ));
    }

    #[test]
    fn uniform_kernel_is_bin_count_over_support() {
        let f = checkerboard(9, 9);
        let w = Window::new(4.0, 4.0, 3.0, 3.0).unwrap();
        let h = build_target_model(&f, &w, &q(), Kernel::Uniform).unwrap();
        let (mut na, mut nb) = (0.0, 0.0);
        for y in 0..9 {
            for x in 0..9 {
                let d = ((x as f64 - 4.0) / 3.0).powi(2) + ((y as f64 - 4.0) / 3.0).powi(2);
                if d <= 1.0 {
                    if (x + y) % 2 == 0 {
                        na += 1.0
                    } else {
                        nb += 1.0
                    }
                }
            }
        }
        assert!((h.weights()[q().quantize(A)] - na / (na + nb)).abs() < 1e-12);
        assert!((h.weights()[q().quantize(B)] - nb / (na + nb)).abs() < 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn bhattacharyya_examples() {
        let p = hist(&[0.5, 0.5]);
        let q1 = hist(&[1.0, 0.0]);
        assert!((bhattacharyya(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(bhattacharyya(&q1, &hist(&[0.0, 1.0])).unwrap(), 0.0);
        let rho = bhattacharyya(&p, &q1).unwrap();
        assert!((rho - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((rho - 0.70711).abs() < 1e-5);
        assert!(matches!(
            bhattacharyya(&p, &hist(&[1.0, 1.0, 1.0])),
            Err(TrackError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn distance_examples() {
        let p = hist(&[0.5, 0.5]);
        assert_eq!(bhatt_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(
            bhatt_distance(&hist(&[1.0, 0.0]), &hist(&[0.0, 1.0])).unwrap(),
            1.0
        );
        let d = bhatt_distance(&p, &hist(&[1.0, 0.0])).unwrap();
        assert!((d - 0.54120).abs() < 1e-5, "{d}");
    }

    #[test]
    fn background_uniform_ring_is_spike() {
        let mut f = FrameImage::filled(40, 40, B).unwrap();
        for y in 15..=25 {
            for x in 15..=25 {
                f.set_pixel(x, y, A);
            }
        }
        let w = Window::new(20.0, 20.0, 5.0, 5.0).unwrap();
        let o = build_background_histogram(&f, &w, &q(), DEFAULT_BACKGROUND_RATIO).unwrap();
        assert!((o.weights()[q().quantize(B)] - 1.0).abs() < 1e-12);
        assert!(compute_transfer(&o).is_identity());
    }

    #[test]
    fn background_ring_off_frame_is_empty() {
        let f = FrameImage::filled(10, 10, B).unwrap();
        let w = Window::new(100.0, 100.0, 3.0, 3.0).unwrap();
        assert!(matches!(
            build_background_histogram(&f, &w, &q(), 2.0),
            Err(TrackError::EmptyWindow)
        ));
        // window covering the whole frame leaves no ring pixels
        let w = Window::new(4.5, 4.5, 6.0, 6.0).unwrap();
        assert!(matches!(
            build_background_histogram(&f, &w, &q(), 2.0),
            Err(TrackError::EmptyWindow)
        ));
    }

    #[test]
    fn background_two_tone_matches_counts() {
        // top half A, bottom half B
        let mut f = FrameImage::filled(40, 40, A).unwrap();
        for y in 23..40 {
            for x in 0..40 {
                f.set_pixel(x, y, B);
            }
        }
        let w = Window::new(20.0, 20.0, 4.0, 4.0).unwrap();
        let o = build_background_histogram(&f, &w, &q(), 2.0).unwrap();
        let (mut na, mut nb) = (0.0, 0.0);
        for y in 12..=28 {
            for x in 12..=28 {
                if (16..=24).contains(&x) && (16..=24).contains(&y) {
                    continue;
                }
                if y < 23 {
                    na += 1.0
                } else {
                    nb += 1.0
                }
            }
        }
        assert_eq!(na + nb, 17.0 * 17.0 - 81.0);
        assert!((o.weights()[q().quantize(A)] - na / (na + nb)).abs() < 1e-12);
        assert!((o.weights()[q().quantize(B)] - nb / (na + nb)).abs() < 1e-12);
    }

    #[test]
    fn transfer_examples() {
        let v = compute_transfer(&hist(&[0.25, 0.25, 0.25, 0.25]));
        assert!(v.is_identity());
        let v = compute_transfer(&hist(&[0.5, 0.25, 0.25, 0.0]));
        assert_eq!(v.values(), &[0.5, 1.0, 1.0, 1.0]);
        let v = compute_transfer(&hist(&[0.0, 1.0, 0.0]));
        assert!(v.is_identity());
    }

    #[test]
    fn cbwh_identity_transfer_matches_plain_model() {
        let f = checkerboard(11, 11);
        let w = Window::new(5.0, 5.0, 4.0, 4.0).unwrap();
        let plain = build_target_model(&f, &w, &q(), Kernel::Epanechnikov).unwrap();
        let cb = build_cbwh_target_model(
            &f,
            &w,
            &q(),
            Kernel::Epanechnikov,
            &TransferFunction::identity(q().bins()),
        )
        .unwrap();
        assert_eq!(plain.weights(), cb.weights());
    }

    #[test]
    fn cbwh_halves_background_bin_before_renormalizing() {
        let f = checkerboard(11, 11);
        let w = Window::new(5.0, 5.0, 4.0, 4.0).unwrap();
        let mut v = vec![1.0; q().bins()];
        v[q().quantize(B)] = 0.5;
        let t = TransferFunction::from_values(v).unwrap();
        let cb = build_cbwh_target_model(&f, &w, &q(), Kernel::Epanechnikov, &t).unwrap();
        let o = oracle_masses(&f, &w, &q());
        let (a, b) = (o[q().quantize(A)], 0.5 * o[q().quantize(B)]);
        assert!((cb.weights()[q().quantize(A)] - a / (a + b)).abs() < 1e-12);
        assert!((cb.weights()[q().quantize(B)] - b / (a + b)).abs() < 1e-12);
    }

    #[test]
    fn cbwh_single_bin_renormalizes_to_spike() {
        let f = FrameImage::filled(10, 10, A).unwrap();
        let w = Window::new(5.0, 5.0, 3.0, 3.0).unwrap();
        let mut v = vec![1.0; q().bins()];
        v[q().quantize(A)] = 0.1;
        let t = TransferFunction::from_values(v).unwrap();
        let cb = build_cbwh_target_model(&f, &w, &q(), Kernel::Epanechnikov, &t).unwrap();
        assert!((cb.weights()[q().quantize(A)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bwh_examples() {
        let qh = hist(&[0.1, 0.2, 0.3, 0.4]);
        let ph = hist(&[0.4, 0.3, 0.2, 0.1]);
        let (a, b) = apply_bwh_weighting(&qh, &ph, &TransferFunction::identity(4)).unwrap();
        for (x, y) in a.weights().iter().zip(qh.weights()) {
            assert!((x - y).abs() < 1e-15);
        }
        for (x, y) in b.weights().iter().zip(ph.weights()) {
            assert!((x - y).abs() < 1e-15);
        }

        let half = TransferFunction::from_values(vec![0.5; 4]).unwrap();
        let (a, b) = apply_bwh_weighting(&qh, &ph, &half).unwrap();
        for (x, y) in a.weights().iter().zip(qh.weights()) {
            assert!((x - y).abs() < 1e-15);
        }
        for (x, y) in b.weights().iter().zip(ph.weights()) {
            assert!((x - y).abs() < 1e-15);
        }

        // v = [1, 0.5, 0.25, 1]: q -> [0.1, 0.1, 0.075, 0.4] / 0.675, p -> [0.4, 0.15, 0.05, 0.1] / 0.7
        let mixed = TransferFunction::from_values(vec![1.0, 0.5, 0.25, 1.0]).unwrap();
        let (a, b) = apply_bwh_weighting(&qh, &ph, &mixed).unwrap();
        let qe = [0.1 / 0.675, 0.1 / 0.675, 0.075 / 0.675, 0.4 / 0.675];
        let pe = [0.4 / 0.7, 0.15 / 0.7, 0.05 / 0.7, 0.1 / 0.7];
        for (x, y) in a.weights().iter().zip(qe) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in b.weights().iter().zip(pe) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_rejects_out_of_range() {
        assert!(TransferFunction::from_values(vec![0.0, 1.0]).is_err());
        assert!(TransferFunction::from_values(vec![1.5]).is_err());
    }

    #[test]
    fn kernel_profile_shape() {
        let k = Kernel::Epanechnikov;
        assert_eq!(k.profile(0.0), 1.0);
        assert_eq!(k.profile(1.0), 0.0);
        assert_eq!(k.profile(1.5), 0.0);
        let mut prev = f64::INFINITY;
        for i in 0..=30 {
            let v = k.profile(i as f64 * 0.05);
            assert!(v >= 0.0 && v <= prev);
            prev = v;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn normalized(n: usize) -> impl Strategy<Value = WeightedHistogram> {
            proptest::collection::vec(0.0f64..1.0, n)
                .prop_filter("nonzero", |v| v.iter().sum::<f64>() > 1e-6)
                .prop_map(|v| WeightedHistogram::from_masses(v, HistogramRole::Other).unwrap())
        }

        proptest! {
            #[test]
            fn rho_symmetric_and_bounded((p, q) in (normalized(16), normalized(16))) {
                let a = bhattacharyya(&p, &q).unwrap();
                let b = bhattacharyya(&q, &p).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
                prop_assert!((bhattacharyya(&p, &p).unwrap() - 1.0).abs() < 1e-12);
            }

            #[test]
            fn uniform_transfer_scaling_is_noop(p in normalized(12), s in 0.01f64..1.0) {
                let t = TransferFunction::from_values(vec![s; 12]).unwrap();
                let w = apply_transfer(&p, &t).unwrap();
                for (a, b) in w.weights().iter().zip(p.weights()) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }

            #[test]
            fn transfer_in_unit_interval(o in normalized(10)) {
                let v = compute_transfer(&o);
                for (vu, ou) in v.values().iter().zip(o.weights()) {
                    prop_assert!(*vu > 0.0 && *vu <= 1.0);
                    if *ou == 0.0 { prop_assert_eq!(*vu, 1.0); }
                }
            }
        }
    }
}
