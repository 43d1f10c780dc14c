//! Colour-histogram mean-shift tracking with background weighting,
//! entropy-driven scale adaptation and similarity-gated template updates.
//!
//! [`trackers::Tracker`] runs one of four variants over a frame sequence;
//! [`evaluation`] turns the resulting per-frame records into confidence
//! statistics. [`io`] covers frame files, CSV logs, settings and synthetic
//! sequences.

pub mod error;
pub mod evaluation;
pub mod histograms;
pub mod imaging;
pub mod io;
pub mod localization;
pub mod scale_adapt;
pub mod template_update;
pub mod trackers;

pub use error::{Result, TrackError};
pub use evaluation::{sequence_metrics, SequenceMetrics};
pub use histograms::{Kernel, TransferFunction, WeightedHistogram};
pub use imaging::{ColorQuantizer, FrameImage, Rgb, Window};
pub use localization::{LocalizationConfig, LocalizationResult};
pub use scale_adapt::ScaleConfig;
pub use template_update::TemplateConfig;
pub use trackers::{track_sequence, FrameRecord, Tracker, TrackerConfig, Variant};
