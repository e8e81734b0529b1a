//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or parameter errors, 2 for I/O and
//! format errors. Diagnostics go to stderr; data goes to files or stdout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::eval::{match_detections, Counts};
use crate::io::ground_truth::{list_frames, read_ground_truth, write_ground_truth_csv};
use crate::io::netpbm::{read_mask_with, write_mask};
use crate::io::overlay::write_overlay;
use crate::io::report::{write_report, ReportFormat};
use crate::mask::{BinaryMask, ComponentSet};
use crate::morphology::{SeShape, StructuringElement};
use crate::pipeline::{compare_schemes, evaluate_frame};
use crate::schemes::{apply_scheme, GroundTruthContext, SchemeSpec};
use crate::synth::{generate_scene, CorruptionParams, SceneParams};

#[derive(Debug, Parser)]
#[command(name = "detsieve", version, about = "Post-process and evaluate binary detection masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply one post-processing scheme to a mask.
    Apply(ApplyArgs),
    /// Classify a detection mask against ground truth.
    Eval(EvalArgs),
    /// Evaluate several schemes over a directory of frames.
    Compare(CompareArgs),
    /// Generate synthetic ground truth and corrupted detections.
    Synth(SynthArgs),
    /// Render a color-coded classification image (P6).
    Overlay(OverlayArgs),
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// Lower area bound for the proposed scheme.
    #[arg(long)]
    low: Option<usize>,
    /// Upper area bound for the proposed scheme.
    #[arg(long)]
    high: Option<usize>,
    /// Structuring element shape: square or disk.
    #[arg(long)]
    se_shape: Option<SeShape>,
    /// Structuring element radius.
    #[arg(long)]
    se_radius: Option<usize>,
    #[arg(long)]
    median_window: Option<usize>,
    #[arg(long)]
    area_fraction: Option<f64>,
    #[arg(long)]
    aspect_min: Option<f64>,
    #[arg(long)]
    si_min: Option<f64>,
    #[arg(long)]
    area_max: Option<usize>,
}

impl SchemeArgs {
    fn se_or(&self, default: StructuringElement) -> StructuringElement {
        StructuringElement::new(
            self.se_shape.unwrap_or(default.shape()),
            self.se_radius.unwrap_or(default.radius()),
        )
    }

    /// Scheme `name` with defaults overridden by whichever flags apply to it.
    fn build(&self, name: &str) -> Result<SchemeSpec> {
        let mut spec = SchemeSpec::default_for(name)?;
        match &mut spec {
            SchemeSpec::NoOp => {}
            SchemeSpec::Proposed(p) => {
                p.t_low = self.low.unwrap_or(p.t_low);
                p.t_high = self.high.unwrap_or(p.t_high);
                p.se = self.se_or(p.se.clone());
            }
            SchemeSpec::FilteredDilation(p) => {
                p.median_window = self.median_window.unwrap_or(p.median_window);
                p.dilation_se = self.se_or(p.dilation_se.clone());
            }
            SchemeSpec::HeuristicFiltering(p) => {
                p.area_fraction = self.area_fraction.unwrap_or(p.area_fraction);
                p.aspect_min = self.aspect_min.unwrap_or(p.aspect_min);
            }
            SchemeSpec::ShapeIndexFiltering(p) => {
                p.si_min = self.si_min.or(p.si_min);
            }
            SchemeSpec::SieveAndOpen(p) => {
                p.area_max = self.area_max.unwrap_or(p.area_max);
                p.open_se = self.se_or(p.open_se.clone());
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct GtArgs {
    /// Ground truth: CSV of rectangles, a bitmap, or a directory of bitmaps.
    #[arg(long)]
    gt: Option<PathBuf>,
    /// Frame of a CSV or directory ground truth to use.
    #[arg(long, default_value_t = 0)]
    frame: usize,
}

impl GtArgs {
    fn load(&self, width: usize, height: usize) -> Result<Option<ComponentSet>> {
        let Some(path) = &self.gt else {
            return Ok(None);
        };
        let is_bitmap = path.extension().and_then(|e| e.to_str()) == Some("pbm");
        if is_bitmap {
            let mask = read_mask_with(path, false)?;
            mask.check_dims(width, height).map_err(|e| e.with_path(path))?;
            Ok(Some(ComponentSet::from_mask(&mask)))
        } else {
            Ok(Some(read_ground_truth(path, width, height)?.frame(self.frame)))
        }
    }

    fn require(&self, width: usize, height: usize) -> Result<ComponentSet> {
        self.load(width, height)?
            .ok_or_else(|| Error::Param("--gt is required".into()))
    }
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[arg(long, default_value = "proposed")]
    scheme: String,
    #[command(flatten)]
    params: SchemeArgs,
    #[command(flatten)]
    gt: GtArgs,
    /// Treat 0 (white) as foreground when reading.
    #[arg(long)]
    invert: bool,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    det: PathBuf,
    #[command(flatten)]
    gt: GtArgs,
    #[arg(long, default_value = "json")]
    format: ReportFormatArg,
    #[arg(long)]
    invert: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Directory of detection bitmaps, frame number taken from each file name.
    #[arg(long)]
    frames_dir: PathBuf,
    /// Ground truth CSV or directory of bitmaps.
    #[arg(long)]
    gt: PathBuf,
    /// Comma-separated scheme names.
    #[arg(long, value_delimiter = ',', default_value = "noop,filtered-dilation,heuristic,shape-index,sieve-open,proposed")]
    schemes: Vec<String>,
    #[command(flatten)]
    params: SchemeArgs,
    /// Report path; CSV on stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; inferred from the --out extension when omitted.
    #[arg(long)]
    format: Option<ReportFormatArg>,
    #[arg(long)]
    invert: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    frames: usize,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 720)]
    width: usize,
    #[arg(long, default_value_t = 480)]
    height: usize,
    #[arg(long, default_value_t = 40)]
    vehicles: usize,
    #[arg(long, default_value_t = 40)]
    min_area: usize,
    #[arg(long, default_value_t = 150)]
    max_area: usize,
    #[arg(long, default_value_t = 2)]
    min_separation: usize,
    #[arg(long, default_value_t = 0.05)]
    p_miss: f64,
    #[arg(long, default_value_t = 0.1)]
    p_split: f64,
    #[arg(long, default_value_t = 1)]
    jitter: usize,
    #[arg(long, default_value_t = 60)]
    small_clutter: usize,
    #[arg(long, default_value_t = 2)]
    large_clutter: usize,
}

#[derive(Debug, Args)]
struct OverlayArgs {
    #[arg(long)]
    det: PathBuf,
    #[command(flatten)]
    gt: GtArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    invert: bool,
}

#[derive(Debug, Clone, Copy)]
struct ReportFormatArg(ReportFormat);

impl std::str::FromStr for ReportFormatArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(ReportFormatArg)
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli_dispatch`] with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_io_or_format() => 2,
        Error::DimensionMismatch { .. } | Error::CorruptComponent { .. } => 2,
        _ => 1,
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Apply(a) => apply(a, err),
        Command::Eval(a) => eval(a, out),
        Command::Compare(a) => compare(a, out, err),
        Command::Synth(a) => synth(a, err),
        Command::Overlay(a) => overlay(a),
    }
}

fn apply(a: ApplyArgs, err: &mut dyn Write) -> Result<()> {
    let spec = a.params.build(&a.scheme)?;
    let mask = read_mask_with(&a.input, a.invert)?;
    let gt = a.gt.load(mask.width(), mask.height())?;
    if spec.requires_context() && gt.is_none() {
        return Err(Error::Context(format!("scheme {} needs --gt", spec.name())));
    }
    let ctx = gt.map(GroundTruthContext::from);
    let result = apply_scheme(&mask, &spec, ctx.as_ref())?;
    write_mask(&result, &a.output)?;
    let before = ComponentSet::from_mask(&mask).len();
    let after = ComponentSet::from_mask(&result).len();
    let _ = writeln!(err, "{}: {before} -> {after} objects", spec.name());
    Ok(())
}

#[derive(serde::Serialize)]
struct EvalOutput {
    #[serde(flatten)]
    counts: Counts,
    #[serde(flatten)]
    metrics: crate::eval::Metrics,
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<()> {
    let det = read_mask_with(&a.det, a.invert)?;
    let gt = a.gt.require(det.width(), det.height())?;
    let m = match_detections(&ComponentSet::from_mask(&det), &gt)?;
    let counts = m.counts();
    let metrics = m.metrics();
    let text = match a.format.0 {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&EvalOutput { counts, metrics }).expect("serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => format!(
            "tp,fn,fp,precision,recall,fscore,pwc\n{},{},{},{:.6},{:.6},{:.6},{:.6}\n",
            counts.tp, counts.fn_, counts.fp, metrics.precision, metrics.recall, metrics.fscore, metrics.pwc
        ),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn read_frames(dir: &Path, invert: bool) -> Result<Vec<(usize, BinaryMask)>> {
    let paths = list_frames(dir)?;
    if paths.is_empty() {
        return Err(Error::Io {
            path: Some(dir.to_path_buf()),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no numbered .pbm frames"),
        });
    }
    let frames: Vec<(usize, BinaryMask)> = paths
        .into_iter()
        .map(|(i, p)| Ok((i, read_mask_with(&p, invert)?)))
        .collect::<Result<_>>()?;
    let (w, h) = frames[0].1.dims();
    for (i, m) in &frames {
        m.check_dims(w, h).map_err(|e| e.with_path(dir.join(format!("frame {i}"))))?;
    }
    Ok(frames)
}

fn compare(a: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let schemes = a
        .schemes
        .iter()
        .map(|name| a.params.build(name.trim()))
        .collect::<Result<Vec<_>>>()?;
    let frames = read_frames(&a.frames_dir, a.invert)?;
    let (w, h) = frames[0].1.dims();
    let gt = read_ground_truth(&a.gt, w, h)?;
    let report = compare_schemes(&frames, &gt, &schemes)?;

    for spec in &schemes {
        let f = report.summary_for(spec.name(), "fscore").expect("every scheme is summarized");
        let _ = writeln!(
            err,
            "{:<18} fscore {:.3} ± {:.3}  (n = {})",
            spec.name(),
            f.mean,
            f.ci95_halfwidth,
            f.n
        );
    }

    match &a.out {
        Some(path) => {
            let format = a.format.map_or_else(|| ReportFormat::from_path(path), |f| f.0);
            write_report(&report, path, format)
        }
        None => {
            let text = match a.format.map_or(ReportFormat::Csv, |f| f.0) {
                ReportFormat::Csv => report.to_csv(),
                ReportFormat::Json => report.to_json(),
            };
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn synth(a: SynthArgs, err: &mut dyn Write) -> Result<()> {
    let params = SceneParams {
        width: a.width,
        height: a.height,
        n_vehicles: a.vehicles,
        vehicle_area_range: (a.min_area, a.max_area),
        min_separation: a.min_separation,
        corruption: CorruptionParams {
            p_miss: a.p_miss,
            p_split: a.p_split,
            boundary_jitter: a.jitter,
            n_small_clutter: a.small_clutter,
            n_large_clutter: a.large_clutter,
            ..CorruptionParams::default()
        },
        seed: a.seed,
        ..SceneParams::default()
    };
    let det_dir = a.out_dir.join("det");
    let gt_dir = a.out_dir.join("gt");
    for d in [&det_dir, &gt_dir] {
        fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }

    let mut all_rects = Vec::with_capacity(a.frames);
    for i in 0..a.frames {
        let scene = generate_scene(&params.clone().with_seed(a.seed.wrapping_add(i as u64)))?;
        write_mask(&scene.det_mask, det_dir.join(format!("frame_{i:04}.pbm")))?;
        write_mask(&scene.gt_mask, gt_dir.join(format!("frame_{i:04}.pbm")))?;
        all_rects.push(scene.gt_rects);
    }
    write_ground_truth_csv(
        a.out_dir.join("gt.csv"),
        all_rects.iter().enumerate().map(|(i, r)| (i, r.as_slice())),
    )?;
    let params_path = a.out_dir.join("params.json");
    fs::write(&params_path, serde_json::to_string_pretty(&params).expect("serializes"))
        .map_err(|e| Error::io(&params_path, e))?;
    let _ = writeln!(err, "wrote {} frames to {}", a.frames, a.out_dir.display());
    Ok(())
}

fn overlay(a: OverlayArgs) -> Result<()> {
    let det = read_mask_with(&a.det, a.invert)?;
    let gt = a.gt.require(det.width(), det.height())?;
    let (_, m) = evaluate_frame(&det, &gt, &SchemeSpec::NoOp)?;
    write_overlay(&det, &gt, &m, &a.out)
}
