//! Flat JSON settings file with command-line overrides.
//!
//! Resolution order, highest first: `--set key=value` overrides, the file
//! named on the command line or in `DMST_CONFIG`, built-in defaults.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, TrackError};
use crate::histograms::{Kernel, DEFAULT_BACKGROUND_RATIO};
use crate::imaging::{ColorQuantizer, Window};
use crate::localization::LocalizationConfig;
use crate::scale_adapt::ScaleConfig;
use crate::template_update::TemplateConfig;
use crate::trackers::{TrackerConfig, Variant};

pub const CONFIG_ENV: &str = "DMST_CONFIG";

pub const CONFIG_KEYS: [&str; 16] = [
    "bins",
    "kernel",
    "min_dist",
    "max_iterations",
    "alpha",
    "beta",
    "scale_period_n",
    "scale_limit_l",
    "scale_clamp",
    "min_extent_px",
    "msiim_scales",
    "theta0",
    "theta_min",
    "theta_max",
    "d_limit",
    "background_ratio",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Quantization bins per colour channel.
    pub bins: u32,
    /// `"epanechnikov"` or `"uniform"`.
    pub kernel: String,
    pub min_dist: f64,
    pub max_iterations: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `null` disables scale checks.
    pub scale_period_n: Option<u32>,
    pub scale_limit_l: u32,
    pub scale_clamp: f64,
    pub min_extent_px: f64,
    pub msiim_scales: Vec<usize>,
    pub theta0: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub d_limit: usize,
    pub background_ratio: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let loc = LocalizationConfig::default();
        let scale = ScaleConfig::default();
        let tpl = TemplateConfig::default();
        Self {
            bins: ColorQuantizer::default().bins_per_channel(),
            kernel: "epanechnikov".into(),
            min_dist: loc.min_dist,
            max_iterations: loc.max_iterations,
            alpha: scale.alpha,
            beta: scale.beta,
            scale_period_n: scale.period,
            scale_limit_l: scale.limit,
            scale_clamp: scale.clamp,
            min_extent_px: scale.min_extent,
            msiim_scales: scale.msiim_scales,
            theta0: tpl.theta0,
            theta_min: tpl.theta_min,
            theta_max: tpl.theta_max,
            d_limit: tpl.d_limit,
            background_ratio: DEFAULT_BACKGROUND_RATIO,
        }
    }
}

fn parse_kernel(name: &str) -> Result<Kernel> {
    match name.to_ascii_lowercase().as_str() {
        "epanechnikov" => Ok(Kernel::Epanechnikov),
        "uniform" => Ok(Kernel::Uniform),
        other => Err(TrackError::Config(format!("unknown kernel '{other}'"))),
    }
}

impl Settings {
    /// Parses a settings object; absent keys keep their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| TrackError::Config(e.to_string()))?;
        if !value.is_object() {
            return Err(TrackError::Config("settings must be a JSON object".into()));
        }
        serde_json::from_value(value).map_err(|e| TrackError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TrackError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| TrackError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("settings serialize")
    }

    /// Applies one `key=value` override. The value is read as JSON when it
    /// parses as JSON and as a bare string otherwise.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| {
            TrackError::Config(format!("override '{assignment}' is not key=value"))
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(TrackError::Config(format!("unknown setting '{key}'")));
        }
        let raw = raw.trim();
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
        let mut obj = serde_json::to_value(&*self).expect("settings serialize");
        obj[key] = value;
        *self = serde_json::from_value(obj)
            .map_err(|e| TrackError::Config(format!("bad value for '{key}': {e}")))?;
        Ok(())
    }

    /// Resolves settings from an explicit file, the environment fallback and
    /// overrides.
    pub fn resolve(
        file: Option<&Path>,
        env: Option<OsString>,
        overrides: &[String],
    ) -> Result<Self> {
        let path: Option<PathBuf> = match file {
            Some(p) => Some(p.to_path_buf()),
            None => env.filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        let mut settings = match path {
            Some(p) => Self::load(&p)?,
            None => Self::default(),
        };
        for o in overrides {
            settings.apply_override(o)?;
        }
        Ok(settings)
    }

    pub fn tracker_config(
        &self,
        variant: Variant,
        initial_window: Window,
    ) -> Result<TrackerConfig> {
        let cfg = TrackerConfig {
            variant,
            initial_window,
            quantizer: ColorQuantizer::new(self.bins)?,
            kernel: parse_kernel(&self.kernel)?,
            localization: LocalizationConfig {
                min_dist: self.min_dist,
                max_iterations: self.max_iterations,
            },
            scale: ScaleConfig {
                alpha: self.alpha,
                beta: self.beta,
                period: self.scale_period_n,
                limit: self.scale_limit_l,
                clamp: self.scale_clamp,
                min_extent: self.min_extent_px,
                msiim_scales: self.msiim_scales.clone(),
            },
            template: TemplateConfig {
                theta0: self.theta0,
                theta_min: self.theta_min,
                theta_max: self.theta_max,
                d_limit: self.d_limit,
            },
            background_ratio: self.background_ratio,
        };
        cfg.localization.validate()?;
        cfg.scale.validate()?;
        cfg.template.validate()?;
        if !(cfg.background_ratio.is_finite() && cfg.background_ratio > 1.0) {
            return Err(TrackError::Config(format!(
                "background_ratio must exceed 1, got {}",
                cfg.background_ratio
            )));
        }
        Ok(cfg)
    }
}
