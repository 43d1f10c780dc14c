//! Command-line front end: synthetic sequence generation, tracking,
//! multi-variant comparison and log evaluation.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use dmst::evaluation::{comparison_table, format_table, ComparisonRow, COMPARISON_HEADER};
use dmst::io::{
    generate_synthetic, load_sequence, read_ground_truth, read_records, write_ground_truth,
    write_overlay, write_records, write_sequence, FrameFormat, Settings, SyntheticSpec, CONFIG_ENV,
};
use dmst::{
    sequence_metrics, track_sequence, FrameImage, FrameRecord, SequenceMetrics, Variant, Window,
};

pub const GROUND_TRUTH_FILE: &str = "groundtruth.csv";
pub const RECORDS_FILE: &str = "records.csv";
pub const COMPARISON_CSV: &str = "comparison.csv";
pub const COMPARISON_TXT: &str = "comparison.txt";

#[derive(Debug, Parser)]
#[command(
    name = "dmst",
    version,
    about = "Mean-shift tracking with scale and template adaptation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic sequence and its ground truth.
    Synth {
        spec: PathBuf,
        outdir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ppm)]
        format: OutputFormat,
    },
    /// Track one target through a frame directory.
    Track {
        #[arg(long)]
        variant: Variant,
        /// Initial window as `cx,cy,W,H` (center and full size). Defaults to
        /// the first row of the sequence's groundtruth.csv.
        #[arg(long, value_parser = parse_init_arg)]
        init: Option<Window>,
        #[command(flatten)]
        settings: SettingsArgs,
        /// Also write every frame with the tracked window outlined.
        #[arg(long)]
        overlay: bool,
        seqdir: PathBuf,
        outdir: PathBuf,
    },
    /// Run several variants over one or more sequences and tabulate MCC, NV,
    /// iterations and loss rate.
    Compare {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "classic,cbwh,self-adapt,dmst"
        )]
        variants: Vec<Variant>,
        #[command(flatten)]
        settings: SettingsArgs,
        /// Sequence directories followed by the output directory.
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
    },
    /// Recompute MCC and NV from a records file.
    Eval { records: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Ppm,
    Png,
}

impl From<OutputFormat> for FrameFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Ppm => FrameFormat::Ppm,
            OutputFormat::Png => FrameFormat::Png,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SettingsArgs {
    /// JSON settings file (falls back to $DMST_CONFIG).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one setting, e.g. `--set beta=2.0`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl SettingsArgs {
    pub fn resolve(&self) -> anyhow::Result<Settings> {
        Ok(Settings::resolve(
            self.config.as_deref(),
            std::env::var_os(CONFIG_ENV),
            &self.overrides,
        )?)
    }
}

/// Parses `cx,cy,W,H` into a window.
pub fn parse_init(text: &str) -> Result<Window, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected cx,cy,W,H but got '{text}'"));
    }
    let mut v = [0.0; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse::<f64>()
            .map_err(|_| format!("'{p}' is not a number"))?;
    }
    Window::from_size(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_init_arg(text: &str) -> Result<Window, String> {
    parse_init(text)
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Synth {
            spec,
            outdir,
            format,
        } => synth(&spec, &outdir, format.into(), out),
        Command::Track {
            variant,
            init,
            settings,
            overlay,
            seqdir,
            outdir,
        } => {
            let settings = settings.resolve()?;
            let m = track(variant, init, &settings, overlay, &seqdir, &outdir)?;
            writeln!(out, "{}", metrics_line(&m))?;
            Ok(())
        }
        Command::Compare {
            variants,
            settings,
            mut paths,
        } => {
            let outdir = paths.pop().expect("clap enforces two paths");
            let settings = settings.resolve()?;
            let rows = compare(&variants, &settings, &paths, &outdir)?;
            write!(out, "{}", format_table(&rows))?;
            Ok(())
        }
        Command::Eval { records } => {
            let m = eval(&records)?;
            writeln!(out, "{}", metrics_line(&m))?;
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| anyhow!(first_line(&e.to_string())))?;
    run(cli, out)
}

pub fn first_line(text: &str) -> String {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("")
        .trim()
        .trim_start_matches("error: ")
        .to_string()
}

pub fn metrics_line(m: &SequenceMetrics) -> String {
    format!(
        "frames={} MCC={} NV={} iterations={} loss_rate={}",
        m.frames, m.mcc, m.nv, m.mean_iterations, m.loss_rate
    )
}

pub fn synth(
    spec_path: &Path,
    outdir: &Path,
    format: FrameFormat,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let text = fs::read_to_string(spec_path)
        .with_context(|| format!("cannot read {}", spec_path.display()))?;
    let spec =
        SyntheticSpec::from_json(&text).with_context(|| format!("{}", spec_path.display()))?;
    let seq = generate_synthetic(&spec)?;
    write_sequence(&seq.frames, outdir, format)?;
    let gt = outdir.join(GROUND_TRUTH_FILE);
    write_ground_truth(create(&gt)?, &seq.ground_truth)?;
    writeln!(
        out,
        "wrote {} frames to {}",
        seq.frames.len(),
        outdir.display()
    )?;
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<fs::File>> {
    let f = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// First ground-truth window of a sequence directory.
pub fn default_init(seqdir: &Path) -> anyhow::Result<Window> {
    let path = seqdir.join(GROUND_TRUTH_FILE);
    let file = fs::File::open(&path)
        .with_context(|| format!("no --init given and cannot open {}", path.display()))?;
    let windows = read_ground_truth(file).with_context(|| format!("{}", path.display()))?;
    windows
        .first()
        .copied()
        .ok_or_else(|| anyhow!("{} has no rows", path.display()))
}

fn run_tracker(
    frames: &[FrameImage],
    variant: Variant,
    init: Window,
    settings: &Settings,
) -> anyhow::Result<Vec<FrameRecord>> {
    let cfg = settings.tracker_config(variant, init)?;
    Ok(track_sequence(frames, &cfg)?)
}

/// Tracks one sequence and writes `records.csv` (and overlays) to `outdir`.
pub fn track(
    variant: Variant,
    init: Option<Window>,
    settings: &Settings,
    overlay: bool,
    seqdir: &Path,
    outdir: &Path,
) -> anyhow::Result<SequenceMetrics> {
    let frames = load_sequence(seqdir)?;
    let init = match init {
        Some(w) => w,
        None => default_init(seqdir)?,
    };
    let records = run_tracker(&frames, variant, init, settings)?;
    fs::create_dir_all(outdir).with_context(|| format!("cannot create {}", outdir.display()))?;
    let mut w = create(&outdir.join(RECORDS_FILE))?;
    write_records(&mut w, &records, settings.min_dist)?;
    w.flush()?;
    if overlay {
        let dir = outdir.join("overlays");
        fs::create_dir_all(&dir)?;
        for (frame, rec) in frames.iter().zip(&records) {
            let path = dir.join(format!("frame_{:05}.png", rec.frame_index));
            write_overlay(frame, &rec.window, &path)?;
        }
    }
    Ok(sequence_metrics(&records, settings.min_dist)?)
}

fn sequence_name(dir: &Path) -> String {
    dir.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

/// Runs every variant on every sequence. Per-run logs go to
/// `outdir/<sequence>/<variant>.csv`; the table goes to `comparison.csv`
/// and `comparison.txt`.
pub fn compare(
    variants: &[Variant],
    settings: &Settings,
    seqdirs: &[PathBuf],
    outdir: &Path,
) -> anyhow::Result<Vec<ComparisonRow>> {
    let mut seen = BTreeSet::new();
    let mut unique_variants = Vec::new();
    for v in variants {
        if seen.insert(*v) {
            unique_variants.push(*v);
        }
    }
    if unique_variants.is_empty() {
        bail!("no variants given");
    }
    let names: Vec<String> = seqdirs.iter().map(|d| sequence_name(d)).collect();
    let mut distinct = BTreeSet::new();
    for n in &names {
        if !distinct.insert(n) {
            bail!("two sequences share the name '{n}'");
        }
    }

    let sequences: Vec<(String, Vec<FrameImage>, Window)> = seqdirs
        .par_iter()
        .zip(&names)
        .map(|(dir, name)| {
            let frames = load_sequence(dir)?;
            let init = default_init(dir)?;
            Ok((name.clone(), frames, init))
        })
        .collect::<anyhow::Result<_>>()?;

    let jobs: Vec<(usize, Variant)> = (0..sequences.len())
        .flat_map(|i| unique_variants.iter().map(move |v| (i, *v)))
        .collect();
    let entries: Vec<(String, Variant, SequenceMetrics)> = jobs
        .par_iter()
        .map(|&(i, variant)| {
            let (name, frames, init) = &sequences[i];
            let records = run_tracker(frames, variant, *init, settings)
                .with_context(|| format!("{name} / {variant}"))?;
            let dir = outdir.join(name);
            fs::create_dir_all(&dir)?;
            let mut w = create(&dir.join(format!("{}.csv", variant.id())))?;
            write_records(&mut w, &records, settings.min_dist)?;
            w.flush()?;
            let m = sequence_metrics(&records, settings.min_dist)?;
            Ok((name.clone(), variant, m))
        })
        .collect::<anyhow::Result<_>>()?;

    let rows = comparison_table(&entries);
    write_comparison_csv(create(&outdir.join(COMPARISON_CSV))?, &rows)?;
    fs::write(outdir.join(COMPARISON_TXT), format_table(&rows))
        .with_context(|| format!("cannot write {}", outdir.join(COMPARISON_TXT).display()))?;
    Ok(rows)
}

pub fn write_comparison_csv<W: Write>(mut out: W, rows: &[ComparisonRow]) -> anyhow::Result<()> {
    writeln!(out, "{}", COMPARISON_HEADER.join(","))?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sequence,
            r.variant.label(),
            r.mcc,
            r.nv,
            r.iterations,
            r.loss_rate
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Recomputes sequence statistics from the CC, iteration and loss columns
/// of a records file.
pub fn eval(path: &Path) -> anyhow::Result<SequenceMetrics> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let rows = read_records(file).with_context(|| format!("{}", path.display()))?;
    let cc = rows.iter().map(|r| r.cc).collect();
    let iterations: Vec<usize> = rows.iter().map(|r| r.iterations).collect();
    let lost: Vec<bool> = rows.iter().map(|r| r.lost).collect();
    SequenceMetrics::from_parts(cc, &iterations, &lost)
        .with_context(|| format!("{}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_parsing() {
        let w = parse_init("10,20,8,6").unwrap();
        assert_eq!((w.cx, w.cy, w.width(), w.height()), (10.0, 20.0, 8.0, 6.0));
        assert!(parse_init(" 1.5 , 2 ,3, 4 ").is_ok());
        for bad in [
            "",
            "1,2,3",
            "1,2,3,4,5",
            "a,2,3,4",
            "1,2,0,4",
            "1,2,-3,4",
            "1,2,inf,4",
            "1,NaN,3,4",
        ] {
            assert!(parse_init(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn variant_list_parses() {
        let cli =
            Cli::try_parse_from(["dmst", "compare", "--variants", "dmst,classic", "a", "out"])
                .unwrap();
        match cli.command {
            Command::Compare {
                variants, paths, ..
            } => {
                assert_eq!(variants, vec![Variant::Dmst, Variant::ClassicMs]);
                assert_eq!(paths.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["dmst", "compare", "out"]).is_err());
        assert!(Cli::try_parse_from(["dmst", "track", "--variant", "foo", "a", "b"]).is_err());
    }

    #[test]
    fn first_line_strips_prefix() {
        assert_eq!(first_line("\nerror: bad thing\n\nUsage: x"), "bad thing");
    }
}
