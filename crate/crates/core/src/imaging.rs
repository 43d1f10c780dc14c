//! Frame rasters, tracking windows, color quantization and the pixel
//! enumeration shared by the histogram, localization and scale code.

use crate::error::{Result, TrackError};

pub type Rgb = [u8; 3];

/// Row-major 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl FrameImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(TrackError::InvalidFrame(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| TrackError::InvalidFrame("dimensions overflow".into()))?;
        if data.len() != expected {
            return Err(TrackError::InvalidFrame(format!(
                "expected {expected} bytes for {width}x{height}, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, color: Rgb) -> Result<Self> {
        let data = color
            .iter()
            .copied()
            .cycle()
            .take(width.saturating_mul(height).saturating_mul(3))
            .collect();
        Self::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, color: Rgb) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&color);
    }
}

/// Axis-aligned tracking region. `hx`/`hy` are the per-axis bandwidths
/// (half-extents); the window spans `2*hx` by `2*hy` pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub cx: f64,
    pub cy: f64,
    pub hx: f64,
    pub hy: f64,
}

impl Window {
    pub fn new(cx: f64, cy: f64, hx: f64, hy: f64) -> Result<Self> {
        if !(cx.is_finite() && cy.is_finite()) {
            return Err(TrackError::InvalidWindow(format!(
                "center ({cx}, {cy}) is not finite"
            )));
        }
        if !(hx.is_finite() && hy.is_finite() && hx > 0.0 && hy > 0.0) {
            return Err(TrackError::InvalidWindow(format!(
                "half-extents ({hx}, {hy}) must be positive"
            )));
        }
        Ok(Self { cx, cy, hx, hy })
    }

    /// Builds a window from its full width and height.
    pub fn from_size(cx: f64, cy: f64, width: f64, height: f64) -> Result<Self> {
        Self::new(cx, cy, width / 2.0, height / 2.0)
    }

    #[inline]
    pub fn width(&self) -> f64 {
        2.0 * self.hx
    }

    #[inline]
    pub fn height(&self) -> f64 {
        2.0 * self.hy
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (self.cx, self.cy)
    }

    pub fn with_center(&self, cx: f64, cy: f64) -> Self {
        Self { cx, cy, ..*self }
    }

    /// Same center, both half-extents multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hx: self.hx * factor,
            hy: self.hy * factor,
            ..*self
        }
    }

    /// Whether the integer pixel center `(px, py)` is a member of the window.
    #[inline]
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.cx - self.hx
            && px <= self.cx + self.hx
            && py >= self.cy - self.hy
            && py <= self.cy + self.hy
    }

    /// Squared normalized distance `((px-cx)/hx)^2 + ((py-cy)/hy)^2`.
    #[inline]
    pub fn normalized_offset(&self, px: f64, py: f64) -> f64 {
        let dx = (px - self.cx) / self.hx;
        let dy = (py - self.cy) / self.hy;
        dx * dx + dy * dy
    }
}

/// Free-function form of [`Window::normalized_offset`].
#[inline]
pub fn normalized_offset(position: (f64, f64), window: &Window) -> f64 {
    window.normalized_offset(position.0, position.1)
}

/// Uniform per-channel quantizer mapping RGB to one of `B^3` bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorQuantizer {
    bins_per_channel: u32,
}

impl Default for ColorQuantizer {
    fn default() -> Self {
        Self {
            bins_per_channel: 16,
        }
    }
}

impl ColorQuantizer {
    pub fn new(bins_per_channel: u32) -> Result<Self> {
        if !(1..=256).contains(&bins_per_channel) {
            return Err(TrackError::Config(format!(
                "bins per channel must be in 1..=256, got {bins_per_channel}"
            )));
        }
        Ok(Self { bins_per_channel })
    }

    pub fn bins_per_channel(&self) -> u32 {
        self.bins_per_channel
    }

    /// Total number of bins `m`.
    pub fn bins(&self) -> usize {
        (self.bins_per_channel as usize).pow(3)
    }

    /// `floor(c * B / 256)` equals `floor(c / s)` with `s = 256 / B` whenever
    /// `B` divides 256, and stays total otherwise.
    #[inline]
    pub fn channel_bin(&self, c: u8) -> usize {
        (c as usize * self.bins_per_channel as usize) >> 8
    }

    #[inline]
    pub fn quantize(&self, pixel: Rgb) -> usize {
        let b = self.bins_per_channel as usize;
        let [r, g, bl] = pixel;
        (self.channel_bin(r) * b + self.channel_bin(g)) * b + self.channel_bin(bl)
    }
}

/// Integer pixel rectangle `[x0, x1] x [y0, y1]` (inclusive) obtained by
/// clipping a window to the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (x0, x1) = (self.x0, self.x1);
        (self.y0..=self.y1).flat_map(move |y| (x0..=x1).map(move |x| (x, y)))
    }
}

fn clip_axis(center: f64, half: f64, len: usize) -> Option<(usize, usize)> {
    let lo = (center - half).ceil().max(0.0);
    let hi = (center + half).floor().min(len as f64 - 1.0);
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some((lo as usize, hi as usize))
}

/// The frame pixels whose integer centers fall inside `window`.
pub fn clip_window(frame: &FrameImage, window: &Window) -> Result<PixelRect> {
    let (x0, x1) = clip_axis(window.cx, window.hx, frame.width()).ok_or(TrackError::EmptyWindow)?;
    let (y0, y1) =
        clip_axis(window.cy, window.hy, frame.height()).ok_or(TrackError::EmptyWindow)?;
    Ok(PixelRect { x0, x1, y0, y1 })
}

/// Every in-frame pixel of `window` as `((x, y), rgb)`, row-major.
pub fn pixels_in<'a>(
    frame: &'a FrameImage,
    window: &Window,
) -> Result<impl Iterator<Item = ((usize, usize), Rgb)> + 'a> {
    let rect = clip_window(frame, window)?;
    let (x0, x1) = (rect.x0, rect.x1);
    Ok((rect.y0..=rect.y1).flat_map(move |y| (x0..=x1).map(move |x| ((x, y), frame.pixel(x, y)))))
}

/// Clamps a window center into the frame's pixel-center range.
pub fn clamp_center(frame: &FrameImage, window: &Window) -> Window {
    window.with_center(
        window.cx.clamp(0.0, frame.width() as f64 - 1.0),
        window.cy.clamp(0.0, frame.height() as f64 - 1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_corners() {
        let q = ColorQuantizer::default();
        assert_eq!(q.quantize([0, 0, 0]), 0);
        assert_eq!(q.quantize([255, 255, 255]), 4095);
        assert_eq!(q.quantize([16, 0, 0]), 256);
    }

    #[test]
    fn quantize_matches_division_rule_over_channel_sweep() {
        for b in [1u32, 2, 4, 8, 16, 32, 64, 128, 256] {
            let q = ColorQuantizer::new(b).unwrap();
            let s = 256 / b as usize;
            let bb = b as usize;
            for c in 0..=255u8 {
                let c_us = c as usize;
                assert_eq!(q.quantize([c, 0, 0]), (c_us / s) * bb * bb);
                assert_eq!(q.quantize([0, c, 0]), (c_us / s) * bb);
                assert_eq!(q.quantize([0, 0, c]), c_us / s);
            }
        }
    }

    #[test]
    fn quantize_is_surjective_for_small_b() {
        let q = ColorQuantizer::new(4).unwrap();
        let mut seen = vec![false; q.bins()];
        for r in (0..=255u8).step_by(8) {
            for g in (0..=255u8).step_by(8) {
                for b in (0..=255u8).step_by(8) {
                    seen[q.quantize([r, g, b])] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn bad_quantizer_rejected() {
        assert!(ColorQuantizer::new(0).is_err());
        assert!(ColorQuantizer::new(257).is_err());
    }

    #[test]
    fn frame_validation() {
        assert!(FrameImage::new(0, 1, vec![]).is_err());
        assert!(FrameImage::new(2, 2, vec![0; 11]).is_err());
        assert!(FrameImage::new(2, 2, vec![0; 12]).is_ok());
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(Window::new(0.0, 0.0, 1.0, -1.0).is_err());
        assert!(Window::new(f64::NAN, 0.0, 1.0, 1.0).is_err());
        let w = Window::from_size(5.0, 5.0, 100.0, 50.0).unwrap();
        assert_eq!((w.hx, w.hy), (50.0, 25.0));
    }

    #[test]
    fn whole_frame_window_yields_all_pixels() {
        let f = FrameImage::filled(3, 3, [1, 2, 3]).unwrap();
        let w = Window::new(1.0, 1.0, 1.5, 1.5).unwrap();
        assert_eq!(pixels_in(&f, &w).unwrap().count(), 9);
    }

    #[test]
    fn window_outside_frame_is_empty() {
        let f = FrameImage::filled(3, 3, [0; 3]).unwrap();
        let w = Window::new(20.0, 20.0, 2.0, 2.0).unwrap();
        assert!(matches!(pixels_in(&f, &w), Err(TrackError::EmptyWindow)));
        let w = Window::new(-5.0, 1.0, 2.0, 2.0).unwrap();
        assert!(matches!(clip_window(&f, &w), Err(TrackError::EmptyWindow)));
    }

    #[test]
    fn window_half_off_right_edge() {
        // x in [7.5, 11.5] -> columns 8..=11, clipped to 8..=9; y in [4, 6] -> 3 rows.
        let f = FrameImage::filled(10, 10, [0; 3]).unwrap();
        let w = Window::new(9.5, 5.0, 2.0, 1.0).unwrap();
        let px: Vec<_> = pixels_in(&f, &w).unwrap().map(|(p, _)| p).collect();
        assert_eq!(px.len(), 6);
        assert!(px
            .iter()
            .all(|&(x, y)| (8..=9).contains(&x) && (4..=6).contains(&y)));
    }

    #[test]
    fn normalized_offset_examples() {
        let w = Window::new(10.0, 20.0, 4.0, 2.0).unwrap();
        assert_eq!(normalized_offset((10.0, 20.0), &w), 0.0);
        assert_eq!(normalized_offset((14.0, 20.0), &w), 1.0);
        assert_eq!(normalized_offset((14.0, 22.0), &w), 2.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pixels_stay_in_frame(
                w in 1usize..40, h in 1usize..40,
                cx in -20.0f64..60.0, cy in -20.0f64..60.0,
                hx in 0.1f64..30.0, hy in 0.1f64..30.0,
            ) {
                let f = FrameImage::filled(w, h, [0; 3]).unwrap();
                let win = Window::new(cx, cy, hx, hy).unwrap();
                let pts: Vec<_> = match pixels_in(&f, &win) {
                    Ok(it) => it.map(|(p, _)| p).collect(),
                    Err(_) => Vec::new(),
                };
                for (x, y) in pts {
                    prop_assert!(x < w && y < h);
                    prop_assert!(win.contains(x as f64, y as f64));
                }
            }

            #[test]
            fn offset_translation_invariant(
                cx in -50.0f64..50.0, cy in -50.0f64..50.0,
                hx in 0.5f64..20.0, hy in 0.5f64..20.0,
                px in -50.0f64..50.0, py in -50.0f64..50.0,
                tx in -30.0f64..30.0, ty in -30.0f64..30.0,
            ) {
                let a = Window::new(cx, cy, hx, hy).unwrap();
                let b = Window::new(cx + tx, cy + ty, hx, hy).unwrap();
                let da = normalized_offset((px, py), &a);
                let db = normalized_offset((px + tx, py + ty), &b);
                prop_assert!((da - db).abs() <= 1e-9 * (1.0 + da.abs()));
            }
        }
    }
}
