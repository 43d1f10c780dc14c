//! Rectangle outlines drawn over frames.

use std::path::Path;

use crate::error::{Result, TrackError};
use crate::imaging::{FrameImage, Rgb, Window};

pub const OVERLAY_COLOR: Rgb = [255, 255, 255];

/// Pixels on the 1-px outline of the window's pixel footprint, clipped to
/// the frame. Edges lying outside the frame are dropped.
pub fn outline_pixels(width: usize, height: usize, window: &Window) -> Vec<(usize, usize)> {
    let x0 = (window.cx - window.hx).ceil();
    let x1 = (window.cx + window.hx).floor();
    let y0 = (window.cy - window.hy).ceil();
    let y1 = (window.cy + window.hy).floor();
    if x0 > x1 || y0 > y1 {
        return Vec::new();
    }
    let (w, h) = (width as f64, height as f64);
    let inside = |x: f64, y: f64| x >= 0.0 && y >= 0.0 && x < w && y < h;
    let mut out = Vec::new();
    let cx0 = x0.max(0.0);
    let cx1 = x1.min(w - 1.0);
    let cy0 = y0.max(0.0);
    let cy1 = y1.min(h - 1.0);
    let mut push = |x: f64, y: f64| {
        if inside(x, y) {
            out.push((x as usize, y as usize));
        }
    };
    let mut x = cx0;
    while x <= cx1 {
        push(x, y0);
        if y1 != y0 {
            push(x, y1);
        }
        x += 1.0;
    }
    let mut y = (y0 + 1.0).max(cy0);
    while y <= cy1.min(y1 - 1.0) {
        push(x0, y);
        if x1 != x0 {
            push(x1, y);
        }
        y += 1.0;
    }
    out
}

pub fn render_overlay(frame: &FrameImage, window: &Window, color: Rgb) -> FrameImage {
    let mut out = frame.clone();
    for (x, y) in outline_pixels(frame.width(), frame.height(), window) {
        out.set_pixel(x, y, color);
    }
    out
}

/// Writes `frame` with the window outlined to `path` as PNG.
pub fn write_overlay(frame: &FrameImage, window: &Window, path: &Path) -> Result<()> {
    let img = render_overlay(frame, window, OVERLAY_COLOR);
    let bytes = super::encode_png(&img).map_err(|e| TrackError::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    std::fs::write(path, bytes).map_err(|e| TrackError::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}
