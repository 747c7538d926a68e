//! The `ptmkit` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad or unknown flags,
//! lights outside the unit disk), 2 for data errors (unreadable or
//! inconsistent inputs). Every command prints a single `key=value` summary
//! line on success. Outputs are staged under a temporary name and renamed
//! into place only once complete.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Component, Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codec::{self, CodecError, ImageFormat};
use crate::fitter::{self, FitOptions};
use crate::lightgeom::{parse_lp, CaptureSet, LightDirection, LightSample, ProjectedLight, MIN_SAMPLES};
use crate::ptm::{normal_map, QuantizedPtm, Variant};
use crate::raster::Raster8;
use crate::synth::{self, SyntheticScene};

/// Environment variable naming the viewer asset directory.
pub const VIEWER_ASSETS_ENV: &str = "PTMKIT_VIEWER_ASSETS";

/// File name the viewer page loads from its own directory.
pub const VIEWER_PTM_NAME: &str = "artifact.ptm";

#[derive(Debug, Parser)]
#[command(name = "ptmkit", version, about = "Fit, relight and inspect polynomial texture maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a map from images listed in a light-position file.
    Fit(FitArgs),
    /// Render a map under a new light.
    Relight(RelightArgs),
    /// Write the per-pixel normal map.
    Normals(NormalsArgs),
    /// Render a synthetic Lambertian capture.
    Synth(SynthArgs),
    /// Print header information for a map file.
    Info(InfoArgs),
    /// Copy the browser viewer and a map into a directory.
    ExportViewer(ExportViewerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Rgb,
    Lrgb,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Rgb => Variant::Rgb,
            VariantArg::Lrgb => Variant::Lrgb,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub lp: PathBuf,
    #[arg(long)]
    pub images: PathBuf,
    #[arg(long, value_enum, default_value = "rgb")]
    pub variant: VariantArg,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Args)]
pub struct RelightArgs {
    #[arg(long)]
    pub ptm: PathBuf,
    /// Light direction as `x,y,z`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with_all = ["lu", "lv"])]
    pub light: Option<[f64; 3]>,
    #[arg(long, requires = "lv", allow_hyphen_values = true)]
    pub lu: Option<f64>,
    #[arg(long, requires = "lu", allow_hyphen_values = true)]
    pub lv: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NormalsArgs {
    #[arg(long)]
    pub ptm: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a mask, white where no normal could be extracted.
    #[arg(long)]
    pub degenerate_mask: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SceneArg {
    Plane,
    Hemisphere,
    Heightfield,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub scene: SceneArg,
    #[arg(long, value_parser = clap::value_parser!(u32).range(MIN_SAMPLES as i64..))]
    pub n_lights: u32,
    /// Frame size as `WxH`.
    #[arg(long, value_parser = parse_size)]
    pub size: (usize, usize),
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.0, value_parser = parse_ambient)]
    pub ambient: f64,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub ptm: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportViewerArgs {
    #[arg(long)]
    pub ptm: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Viewer asset directory. Falls back to `$PTMKIT_VIEWER_ASSETS`, then
    /// to `viewer/` next to the executable.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("expected x,y,z: {e}"))?;
    parts
        .try_into()
        .map_err(|_| "expected three comma-separated numbers".to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| "expected WxH".to_string())?;
    let w: usize = w.parse().map_err(|_| format!("bad width {w:?}"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height {h:?}"))?;
    if w == 0 || h == 0 {
        return Err("width and height must be positive".into());
    }
    Ok((w, h))
}

fn parse_ambient(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
    if !(0.0..1.0).contains(&a) {
        return Err("ambient must be in [0, 1)".into());
    }
    Ok(a)
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn data(context: impl std::fmt::Display, err: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{context}: {err}"))
}

/// Parses arguments and runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Fit(a) => cmd_fit(a, out),
        Command::Relight(a) => cmd_relight(a, out),
        Command::Normals(a) => cmd_normals(a, out),
        Command::Synth(a) => cmd_synth(a, out),
        Command::Info(a) => cmd_info(a, out),
        Command::ExportViewer(a) => cmd_export_viewer(a, out),
    }
}

fn say(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| data("stdout", e))
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Writes a file through a temporary sibling that is renamed on success.
fn write_atomic(
    path: &Path,
    fill: impl FnOnce(&mut dyn Write) -> Result<(), CodecError>,
) -> Result<(), CliError> {
    let dir = parent_dir(path);
    let tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| data(dir.display(), e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w).map_err(|e| data(path.display(), e))?;
        w.flush().map_err(|e| data(path.display(), e))?;
    }
    tmp.persist(path).map_err(|e| data(path.display(), e.error))?;
    Ok(())
}

/// Fills a staging directory, then moves its contents to `out`.
fn publish_dir(out: &Path, fill: impl FnOnce(&Path) -> Result<(), CliError>) -> Result<(), CliError> {
    let parent = parent_dir(out);
    fs::create_dir_all(&parent).map_err(|e| data(parent.display(), e))?;
    let staging = tempfile::Builder::new()
        .prefix(".ptmkit-")
        .tempdir_in(&parent)
        .map_err(|e| data(parent.display(), e))?;
    fill(staging.path())?;
    if !out.exists() {
        let kept = staging.keep();
        return fs::rename(&kept, out).map_err(|e| data(out.display(), e));
    }
    if !out.is_dir() {
        return Err(CliError::Data(format!("{} exists and is not a directory", out.display())));
    }
    let entries = fs::read_dir(staging.path()).map_err(|e| data(out.display(), e))?;
    for entry in entries {
        let entry = entry.map_err(|e| data(out.display(), e))?;
        let target = out.join(entry.file_name());
        if target.is_dir() {
            fs::remove_dir_all(&target).map_err(|e| data(target.display(), e))?;
        }
        fs::rename(entry.path(), &target).map_err(|e| data(target.display(), e))?;
    }
    Ok(())
}

fn output_format(path: &Path) -> Result<ImageFormat, CliError> {
    ImageFormat::from_path(path).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_raster(path: &Path, img: &Raster8) -> Result<(), CliError> {
    let format = output_format(path)?;
    write_atomic(path, |w| codec::write_image(img, w, format))
}

fn load_ptm(path: &Path) -> Result<QuantizedPtm, CliError> {
    let bytes = fs::read(path).map_err(|e| data(path.display(), e))?;
    codec::decode_ptm(&bytes).map_err(|e| data(path.display(), e))
}

/// Joins an `.lp` image name onto the image directory, refusing names that
/// would escape it.
fn resolve_image(dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    let rel = Path::new(name);
    if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
        return Err(CliError::Data(format!("image {name:?} does not resolve inside {}", dir.display())));
    }
    Ok(dir.join(rel))
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.lp).map_err(|e| data(args.lp.display(), e))?;
    let entries = parse_lp(&text).map_err(|e| data(args.lp.display(), e))?;
    if entries.len() < MIN_SAMPLES {
        return Err(CliError::Data(format!(
            "need at least {MIN_SAMPLES} samples, {} lists {}",
            args.lp.display(),
            entries.len()
        )));
    }
    let mut samples = Vec::with_capacity(entries.len());
    let mut images = Vec::with_capacity(entries.len());
    for e in &entries {
        let light = e.direction.project().map_err(|err| data(format!("light for {}", e.name), err))?;
        let path = resolve_image(&args.images, &e.name)?;
        let format = ImageFormat::from_path(&path).map_err(|err| data(&e.name, err))?;
        let file = fs::File::open(&path).map_err(|err| data(path.display(), err))?;
        let img = codec::read_image(std::io::BufReader::new(file), format).map_err(|err| data(path.display(), err))?;
        if let Some(first) = images.first() {
            let first: &Raster8 = first;
            if (img.width, img.height) != (first.width, first.height) {
                return Err(CliError::Data(format!(
                    "dimension mismatch: {} is {}x{}, {} is {}x{}",
                    e.name, img.width, img.height, entries[0].name, first.width, first.height
                )));
            }
        }
        samples.push(LightSample::new(light, e.name.clone()));
        images.push(img);
    }
    let (w, h) = (images[0].width, images[0].height);
    let capture = CaptureSet::new(samples, w, h).map_err(|e| data("capture", e))?;
    let stack: Vec<_> = images.iter().map(Raster8::to_float).collect();
    drop(images);

    let options = FitOptions {
        threads: args.threads.map(usize::from),
    };
    let variant = Variant::from(args.variant);
    let (ptm, report) = fitter::fit(&capture, &stack, variant, options).map_err(|e| data("fit", e))?;
    if report.rank_warning {
        eprintln!(
            "warning: lights determine only {} of 6 coefficients; using minimum-norm fit",
            report.rank
        );
    }
    let q = QuantizedPtm::quantize(&ptm).map_err(|e| data("quantize", e))?;
    write_atomic(&args.out, |w| Ok(codec::write_ptm(&q, w)?))?;
    say(
        out,
        format!(
            "variant={} width={w} height={h} {} payload_bytes={}",
            variant.name(),
            report.summary(),
            q.payload_len()
        ),
    )
}

pub fn cmd_relight(args: &RelightArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let light = match (args.light, args.lu, args.lv) {
        (Some([x, y, z]), _, _) => LightDirection::new(x, y, z)
            .project()
            .map_err(|e| CliError::Usage(e.to_string()))?,
        (None, Some(lu), Some(lv)) => ProjectedLight::new(lu, lv).map_err(|e| CliError::Usage(e.to_string()))?,
        _ => return Err(CliError::Usage("give either --light x,y,z or --lu and --lv".into())),
    };
    output_format(&args.out)?;
    let ptm = load_ptm(&args.ptm)?.dequantize();
    let img = ptm.relight(light).to_bytes();
    write_raster(&args.out, &img)?;
    say(
        out,
        format!(
            "lu={} lv={} width={} height={}",
            light.lu,
            light.lv,
            img.width,
            img.height
        ),
    )
}

pub fn cmd_normals(args: &NormalsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    output_format(&args.out)?;
    if let Some(mask) = &args.degenerate_mask {
        output_format(mask)?;
    }
    let ptm = load_ptm(&args.ptm)?.dequantize();
    let normals = normal_map(&ptm);
    write_raster(&args.out, &normals.to_image())?;
    if let Some(mask) = &args.degenerate_mask {
        write_raster(mask, &normals.degenerate_mask())?;
    }
    say(
        out,
        format!(
            "width={} height={} degenerate={}",
            normals.width,
            normals.height,
            normals.degenerate_count()
        ),
    )
}

/// Light-position file written by `synth`.
pub const SYNTH_LP_NAME: &str = "lights.lp";
/// Ground-truth normal map written by `synth`.
pub const SYNTH_NORMALS_NAME: &str = "normals_gt.ppm";

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (w, h) = args.size;
    let albedo = [0.9, 0.8, 0.7];
    let scene = match args.scene {
        SceneArg::Plane => SyntheticScene::plane(w, h, albedo, args.ambient),
        SceneArg::Hemisphere => SyntheticScene::hemisphere(w, h, albedo, args.ambient),
        SceneArg::Heightfield => SyntheticScene::heightfield(w, h, albedo, args.ambient),
    };
    let lights = synth::default_light_set(args.n_lights as usize).map_err(|e| CliError::Usage(e.to_string()))?;
    let stack = synth::render_stack(&scene, &lights).map_err(|e| CliError::Usage(e.to_string()))?;

    publish_dir(&args.out, |dir| {
        for (entry, img) in stack.entries.iter().zip(&stack.images) {
            let path = dir.join(&entry.name);
            let file = fs::File::create(&path).map_err(|e| data(path.display(), e))?;
            codec::write_image(&img.to_bytes(), BufWriter::new(file), ImageFormat::Ppm)
                .map_err(|e| data(path.display(), e))?;
        }
        let lp = dir.join(SYNTH_LP_NAME);
        fs::write(&lp, &stack.lp).map_err(|e| data(lp.display(), e))?;
        let normals = dir.join(SYNTH_NORMALS_NAME);
        let file = fs::File::create(&normals).map_err(|e| data(normals.display(), e))?;
        codec::write_image(&scene.normal_map().to_image(), BufWriter::new(file), ImageFormat::Ppm)
            .map_err(|e| data(normals.display(), e))
    })?;
    say(
        out,
        format!(
            "frames={} width={w} height={h} lp={}",
            stack.images.len(),
            args.out.join(SYNTH_LP_NAME).display()
        ),
    )
}

fn join_values(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_info(args: &InfoArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = fs::read(&args.ptm).map_err(|e| data(args.ptm.display(), e))?;
    let q = codec::decode_ptm(&bytes).map_err(|e| data(args.ptm.display(), e))?;
    let header_bytes = bytes.len() - q.payload_len();
    say(
        out,
        format!(
            "variant={} width={} height={} scales={} biases={} header_bytes={header_bytes} payload_bytes={}",
            q.variant().name(),
            q.width(),
            q.height(),
            join_values(&q.params().scale),
            join_values(&q.params().bias),
            q.payload_len()
        ),
    )
}

fn viewer_assets(explicit: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(VIEWER_ASSETS_ENV) {
        return Some(PathBuf::from(p));
    }
    let exe = std::env::current_exe().ok()?;
    Some(exe.parent()?.join("viewer"))
}

fn copy_tree(from: &Path, to: &Path) -> std::io::Result<usize> {
    let mut copied = 0;
    for entry in fs::read_dir(from)? {
        let entry = entry?;
        let target = to.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            fs::create_dir_all(&target)?;
            copied += copy_tree(&entry.path(), &target)?;
        } else {
            fs::copy(entry.path(), &target)?;
            copied += 1;
        }
    }
    Ok(copied)
}

pub fn cmd_export_viewer(args: &ExportViewerArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let assets = viewer_assets(args.assets.as_deref())
        .ok_or_else(|| CliError::Data("cannot locate viewer assets".into()))?;
    let has_index = assets.join("index.html").is_file();
    let has_script = fs::read_dir(&assets)
        .map(|rd| {
            rd.filter_map(Result::ok)
                .any(|e| e.path().extension().is_some_and(|x| x == "js"))
        })
        .unwrap_or(false);
    if !has_index || !has_script {
        return Err(CliError::Data(format!(
            "viewer assets missing in {} (need index.html and a .js bundle)",
            assets.display()
        )));
    }
    let bytes = fs::read(&args.ptm).map_err(|e| data(args.ptm.display(), e))?;
    codec::decode_ptm(&bytes).map_err(|e| data(args.ptm.display(), e))?;

    let mut files = 0;
    publish_dir(&args.out, |dir| {
        files = copy_tree(&assets, dir).map_err(|e| data(assets.display(), e))?;
        fs::write(dir.join(VIEWER_PTM_NAME), &bytes).map_err(|e| data(VIEWER_PTM_NAME, e))
    })?;
    say(
        out,
        format!(
            "out={} assets={files} ptm={VIEWER_PTM_NAME}",
            args.out.display()
        ),
    )
}
