//! File formats and sequence plumbing: frame codecs, frame directories,
//! CSV logs, configuration, synthetic sequences and overlays.

mod config;
mod overlay;
mod ppm;
mod records;
mod synthetic;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::{Result, TrackError};
use crate::imaging::FrameImage;

pub use config::{Settings, CONFIG_ENV, CONFIG_KEYS};
pub use overlay::{outline_pixels, render_overlay, write_overlay, OVERLAY_COLOR};
pub use ppm::{decode_ppm, encode_ppm};
pub use records::{
    read_ground_truth, read_records, write_ground_truth, write_records, RecordRow,
    GROUND_TRUTH_HEADER, RECORDS_HEADER, RECORDS_VERSION_LINE,
};
pub use synthetic::{
    generate_synthetic, rotate_hue, Background, Pattern, Shape, SyntheticSequence, SyntheticSpec,
    TargetSpec,
};

/// A byte-level decoding failure, without file context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct FormatError(String);

impl FormatError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Ppm,
    Png,
}

impl FrameFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "ppm" => Some(Self::Ppm),
            "png" => Some(Self::Png),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Self::Ppm => "ppm",
            Self::Png => "png",
        }
    }
}

pub fn decode_png(bytes: &[u8]) -> Result<FrameImage, FormatError> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| FormatError::new(e.to_string()))?
        .to_rgb8();
    let (w, h) = img.dimensions();
    FrameImage::new(w as usize, h as usize, img.into_raw())
        .map_err(|e| FormatError::new(e.to_string()))
}

pub fn encode_png(frame: &FrameImage) -> Result<Vec<u8>, FormatError> {
    let mut out = std::io::Cursor::new(Vec::new());
    image::write_buffer_with_format(
        &mut out,
        frame.data(),
        frame.width() as u32,
        frame.height() as u32,
        image::ExtendedColorType::Rgb8,
        image::ImageFormat::Png,
    )
    .map_err(|e| FormatError::new(e.to_string()))?;
    Ok(out.into_inner())
}

/// Decodes a frame, choosing the codec from the leading magic bytes.
pub fn decode_frame(bytes: &[u8]) -> Result<FrameImage, FormatError> {
    if bytes.starts_with(b"P6") {
        decode_ppm(bytes)
    } else if bytes.starts_with(b"\x89PNG") {
        decode_png(bytes)
    } else {
        Err(FormatError::new(
            "unrecognized frame format (expected P6 PPM or PNG)",
        ))
    }
}

pub fn read_frame(path: &Path) -> Result<FrameImage> {
    let bytes = fs::read(path)?;
    decode_frame(&bytes).map_err(|e| TrackError::Decode {
        path: path.to_path_buf(),
        reason: e.0,
    })
}

pub fn write_frame(frame: &FrameImage, path: &Path) -> Result<()> {
    let bytes = match FrameFormat::from_path(path) {
        Some(FrameFormat::Png) => encode_png(frame).map_err(|e| TrackError::Write {
            path: path.to_path_buf(),
            reason: e.0,
        })?,
        _ => encode_ppm(frame),
    };
    fs::write(path, bytes).map_err(|e| TrackError::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Trailing decimal digits of a file stem, e.g. `frame_00012` -> 12.
fn frame_number(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let digits: String = stem
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    if digits.is_empty() {
        return None;
    }
    digits.parse().ok()
}

/// Numbered frame files (`.ppm` / `.png`) of a directory in index order.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut numbered = Vec::new();
    let entries = fs::read_dir(dir)
        .map_err(|e| TrackError::Sequence(format!("cannot read {}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry?.path();
        if !path.is_file() || FrameFormat::from_path(&path).is_none() {
            continue;
        }
        let n = frame_number(&path).ok_or_else(|| {
            TrackError::Sequence(format!("frame file {} has no index", path.display()))
        })?;
        numbered.push((n, path));
    }
    numbered.sort();
    if numbered.is_empty() {
        return Err(TrackError::Sequence(format!(
            "no .ppm or .png frames in {}",
            dir.display()
        )));
    }
    for pair in numbered.windows(2) {
        if pair[1].0 != pair[0].0 + 1 {
            return Err(TrackError::Sequence(format!(
                "frame indices not contiguous: {} follows {}",
                pair[1].1.display(),
                pair[0].1.display()
            )));
        }
    }
    Ok(numbered.into_iter().map(|(_, p)| p).collect())
}

/// Decodes every frame of a directory, in index order, checking that all
/// frames share the first frame's resolution.
pub fn load_sequence(dir: &Path) -> Result<Vec<FrameImage>> {
    let paths = list_frames(dir)?;
    let mut frames: Vec<FrameImage> = Vec::with_capacity(paths.len());
    for path in paths {
        let frame = read_frame(&path)?;
        if let Some(first) = frames.first() {
            let expected = (first.width(), first.height());
            let found = (frame.width(), frame.height());
            if expected != found {
                return Err(TrackError::ResolutionMismatch {
                    path,
                    expected,
                    found,
                });
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}

/// Writes frames as `frame_00001.<ext>`, ... into `dir`.
pub fn write_sequence(
    frames: &[FrameImage],
    dir: &Path,
    format: FrameFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let width = frames.len().to_string().len().max(5);
    frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("frame_{:0width$}.{}", i + 1, format.extension()));
            write_frame(f, &path).map(|_| path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(w: usize, h: usize, seed: u8) -> FrameImage {
        let data = (0..w * h * 3)
            .map(|i| (i as u8).wrapping_mul(31).wrapping_add(seed))
            .collect();
        FrameImage::new(w, h, data).unwrap()
    }

    #[test]
    fn loads_ppm_directory_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let frames: Vec<_> = (0..3).map(|i| frame(4, 3, i)).collect();
        write_sequence(&frames, dir.path(), FrameFormat::Ppm).unwrap();
        let loaded = load_sequence(dir.path()).unwrap();
        assert_eq!(loaded, frames);
    }

    #[test]
    fn png_round_trip() {
        let f = frame(7, 5, 9);
        assert_eq!(decode_png(&encode_png(&f).unwrap()).unwrap(), f);
        assert_eq!(decode_frame(&encode_png(&f).unwrap()).unwrap(), f);
        assert!(decode_frame(b"GIF89a").is_err());
    }

    #[test]
    fn ppm_file_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let f = frame(9, 4, 3);
        let p = dir.path().join("frame_1.ppm");
        write_frame(&f, &p).unwrap();
        let back = read_frame(&p).unwrap();
        assert_eq!(back.data(), f.data());
        assert_eq!(fs::read(&p).unwrap(), encode_ppm(&back));
    }

    #[test]
    fn resolution_mismatch_names_offender() {
        let dir = tempfile::tempdir().unwrap();
        write_frame(&frame(4, 4, 0), &dir.path().join("f_01.ppm")).unwrap();
        write_frame(&frame(4, 4, 1), &dir.path().join("f_02.ppm")).unwrap();
        write_frame(&frame(5, 4, 2), &dir.path().join("f_03.png")).unwrap();
        write_frame(&frame(6, 4, 2), &dir.path().join("f_04.ppm")).unwrap();
        match load_sequence(dir.path()) {
            Err(TrackError::ResolutionMismatch {
                path,
                expected,
                found,
            }) => {
                assert!(path.ends_with("f_03.png"));
                assert_eq!((expected, found), ((4, 4), (5, 4)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decode_error_names_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("frame_1.ppm"), b"P6 2 2 255\n\0").unwrap();
        match load_sequence(dir.path()) {
            Err(TrackError::Decode { path, .. }) => assert!(path.ends_with("frame_1.ppm")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sequence_listing_rules() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            list_frames(dir.path()),
            Err(TrackError::Sequence(_))
        ));
        fs::write(dir.path().join("notes.txt"), "x").unwrap();
        write_frame(&frame(2, 2, 0), &dir.path().join("a_9.ppm")).unwrap();
        write_frame(&frame(2, 2, 0), &dir.path().join("a_10.ppm")).unwrap();
        let names: Vec<_> = list_frames(dir.path())
            .unwrap()
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(names, ["a_9.ppm", "a_10.ppm"]);
        write_frame(&frame(2, 2, 0), &dir.path().join("a_12.ppm")).unwrap();
        assert!(list_frames(dir.path()).is_err());
        fs::remove_file(dir.path().join("a_12.ppm")).unwrap();
        write_frame(&frame(2, 2, 0), &dir.path().join("cover.png")).unwrap();
        assert!(list_frames(dir.path()).is_err());
    }
}
