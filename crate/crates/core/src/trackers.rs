//! The four tracker variants behind one frame-by-frame interface.
//!
//! | variant      | target model        | scale adaptation | template update |
//! |--------------|---------------------|------------------|-----------------|
//! | `ClassicMs`  | kernel histogram    | no               | no              |
//! | `Cbwh`       | background-weighted | no               | no              |
//! | `SelfAdapt`  | kernel histogram    | yes              | no              |
//! | `Dmst`       | background-weighted | yes              | yes             |

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TrackError};
use crate::histograms::{
    bhattacharyya, build_background_histogram, build_candidate_model, build_cbwh_target_model,
    build_target_model, compute_transfer, Kernel, TransferFunction, WeightedHistogram,
    DEFAULT_BACKGROUND_RATIO,
};
use crate::imaging::{ColorQuantizer, FrameImage, Window};
use crate::localization::{localize, LocalizationConfig};
use crate::scale_adapt::{ScaleConfig, ScaleState};
use crate::template_update::{TemplateConfig, TemplateStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    ClassicMs,
    Cbwh,
    SelfAdapt,
    Dmst,
}

impl Variant {
    /// All variants in report order.
    pub const ALL: [Variant; 4] = [
        Variant::ClassicMs,
        Variant::Cbwh,
        Variant::SelfAdapt,
        Variant::Dmst,
    ];

    /// Identifier used on the command line and in file names.
    pub fn id(&self) -> &'static str {
        match self {
            Variant::ClassicMs => "classic",
            Variant::Cbwh => "cbwh",
            Variant::SelfAdapt => "self-adapt",
            Variant::Dmst => "dmst",
        }
    }

    /// Name used in comparison tables.
    pub fn label(&self) -> &'static str {
        match self {
            Variant::ClassicMs => "Mean-shift",
            Variant::Cbwh => "CBWH",
            Variant::SelfAdapt => "Self-adapt",
            Variant::Dmst => "DMST",
        }
    }

    pub fn uses_background_weighting(&self) -> bool {
        matches!(self, Variant::Cbwh | Variant::Dmst)
    }

    pub fn adapts_scale(&self) -> bool {
        matches!(self, Variant::SelfAdapt | Variant::Dmst)
    }

    pub fn updates_template(&self) -> bool {
        matches!(self, Variant::Dmst)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = TrackError;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match norm.as_str() {
            "classic" | "classicms" | "meanshift" | "ms" => Ok(Variant::ClassicMs),
            "cbwh" => Ok(Variant::Cbwh),
            "selfadapt" | "selfadaptive" => Ok(Variant::SelfAdapt),
            "dmst" => Ok(Variant::Dmst),
            _ => Err(TrackError::Config(format!("unknown tracker variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerConfig {
    pub variant: Variant,
    pub initial_window: Window,
    pub quantizer: ColorQuantizer,
    pub kernel: Kernel,
    pub localization: LocalizationConfig,
    pub scale: ScaleConfig,
    pub template: TemplateConfig,
    /// Outer-to-inner extent ratio of the background ring.
    pub background_ratio: f64,
}

impl TrackerConfig {
    pub fn new(variant: Variant, initial_window: Window) -> Self {
        Self {
            variant,
            initial_window,
            quantizer: ColorQuantizer::default(),
            kernel: Kernel::default(),
            localization: LocalizationConfig::default(),
            scale: ScaleConfig::default(),
            template: TemplateConfig::default(),
            background_ratio: DEFAULT_BACKGROUND_RATIO,
        }
    }
}

/// Per-frame tracking log.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    /// 1-based frame index.
    pub frame_index: usize,
    pub window: Window,
    pub iterations: usize,
    pub displacements: Vec<f64>,
    pub rho: f64,
    /// Scale factor applied on this frame.
    pub s: f64,
    pub template_replaced: bool,
    pub lost: bool,
    /// Template-update threshold after this frame (DMST only).
    pub theta: Option<f64>,
}

#[derive(Debug)]
pub struct Tracker {
    config: TrackerConfig,
    window: Window,
    target: WeightedHistogram,
    scale: Option<ScaleState>,
    templates: Option<TemplateStore>,
    frame_index: usize,
}

/// Background transfer for the ring around `window`; a ring lying entirely
/// outside the frame carries no background evidence and yields the identity.
fn background_transfer(
    frame: &FrameImage,
    window: &Window,
    quantizer: &ColorQuantizer,
    ratio: f64,
) -> Result<TransferFunction> {
    match build_background_histogram(frame, window, quantizer, ratio) {
        Ok(bg) => Ok(compute_transfer(&bg)),
        Err(TrackError::EmptyWindow) => Ok(TransferFunction::identity(quantizer.bins())),
        Err(e) => Err(e),
    }
}

fn cbwh_model(
    frame: &FrameImage,
    window: &Window,
    cfg: &TrackerConfig,
) -> Result<WeightedHistogram> {
    let v = background_transfer(frame, window, &cfg.quantizer, cfg.background_ratio)?;
    build_cbwh_target_model(frame, window, &cfg.quantizer, cfg.kernel, &v)
}

impl Tracker {
    /// Builds the target model on the first frame and returns the tracker
    /// together with the frame-1 record.
    pub fn init(first: &FrameImage, config: TrackerConfig) -> Result<(Self, FrameRecord)> {
        config.localization.validate()?;
        config.scale.validate()?;
        config.template.validate()?;
        let window = config.initial_window;
        let target = if config.variant.uses_background_weighting() {
            cbwh_model(first, &window, &config)?
        } else {
            build_target_model(first, &window, &config.quantizer, config.kernel)?
        };
        let scale = if config.variant.adapts_scale() {
            Some(ScaleState::init(
                first,
                &window,
                &config.quantizer,
                config.scale.clone(),
            )?)
        } else {
            None
        };
        let templates = if config.variant.updates_template() {
            Some(TemplateStore::new(target.clone(), config.template)?)
        } else {
            None
        };
        let candidate = build_candidate_model(first, &window, &config.quantizer, config.kernel)?;
        let rho = bhattacharyya(&candidate, &target)?;
        let tracker = Self {
            config,
            window,
            target,
            scale,
            templates,
            frame_index: 1,
        };
        let record = FrameRecord {
            frame_index: 1,
            window,
            iterations: 0,
            displacements: Vec::new(),
            rho,
            s: 0.0,
            template_replaced: false,
            lost: false,
            theta: tracker.templates.as_ref().map(|t| t.theta()),
        };
        Ok((tracker, record))
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Index of the last processed frame (1-based).
    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    /// The model currently used for localization.
    pub fn target_model(&self) -> &WeightedHistogram {
        match &self.templates {
            Some(store) => store.key_model(),
            None => &self.target,
        }
    }

    pub fn scale_state(&self) -> Option<&ScaleState> {
        self.scale.as_ref()
    }

    pub fn template_store(&self) -> Option<&TemplateStore> {
        self.templates.as_ref()
    }

    /// Localizes the target in `frame`, then on scheduled frames adapts the
    /// bandwidth and (DMST) the target model. A lost target is reported in
    /// the record and the window coasts at its last position.
    pub fn process_frame(&mut self, frame: &FrameImage) -> Result<FrameRecord> {
        self.frame_index += 1;
        let n = self.frame_index;
        let cfg = &self.config;
        let target = match &self.templates {
            Some(store) => store.key_model(),
            None => &self.target,
        };
        let located = match localize(
            frame,
            &self.window,
            target,
            &cfg.quantizer,
            cfg.kernel,
            &cfg.localization,
        ) {
            Ok(r) => Some(r),
            Err(TrackError::TargetLost) => None,
            Err(e) => return Err(e),
        };
        let Some(located) = located else {
            return Ok(FrameRecord {
                frame_index: n,
                window: self.window,
                iterations: 0,
                displacements: Vec::new(),
                rho: 0.0,
                s: 0.0,
                template_replaced: false,
                lost: true,
                theta: self.templates.as_ref().map(|t| t.theta()),
            });
        };

        let localized = located.final_window;
        let mut next = localized;
        let mut s = 0.0;
        let mut replaced = false;
        if let Some(scale) = self.scale.as_mut() {
            if scale.config.is_check_frame(n) {
                let check = scale.check(frame, &localized, &cfg.quantizer)?;
                s = check.applied;
                next = check.window;
                if s != 0.0 {
                    if let Some(store) = self.templates.as_mut() {
                        let model = cbwh_model(frame, &localized, cfg)?;
                        store.record_candidate(model, n);
                        if store.is_due() {
                            replaced = store.maybe_replace()?.replaced;
                        }
                    }
                }
            }
        }
        self.window = next;
        Ok(FrameRecord {
            frame_index: n,
            window: next,
            iterations: located.iterations,
            displacements: located.displacements,
            rho: located.final_rho,
            s,
            template_replaced: replaced,
            lost: false,
            theta: self.templates.as_ref().map(|t| t.theta()),
        })
    }
}

/// Runs a tracker over a whole sequence, one record per frame.
pub fn track_sequence(frames: &[FrameImage], config: &TrackerConfig) -> Result<Vec<FrameRecord>> {
    let (first, rest) = frames.split_first().ok_or(TrackError::EmptySequence)?;
    let (mut tracker, record) = Tracker::init(first, config.clone())?;
    let mut records = Vec::with_capacity(frames.len());
    records.push(record);
    for frame in rest {
        records.push(tracker.process_frame(frame)?);
    }
    Ok(records)
}
