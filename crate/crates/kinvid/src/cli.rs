//! The `kinvid` command line.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kinvid_core::align::{align_crop, AlignmentTemplate, EyeAnnotation};
use kinvid_core::classifier::{fuse_scores, pair_combine, standardize, svm_train, Label, SvmParams};
use kinvid_core::coders::{learn_bsif_filters_detailed, IcaConfig, LbpMapping};
use kinvid_core::deep::extract_video_feature;
use kinvid_core::protocol::{evaluate_all, generate_negatives, roc_auc, LooConfig, PairEntry};
use kinvid_core::rng::SplitMix64;
use kinvid_core::synth::{synth_generate, SynthConfig};
use kinvid_core::top::{extract_still_multiscale, extract_top_multiscale, Descriptor, DEFAULT_WINDOWS};
use kinvid_core::{FaceVideo, FeatureVector, Frame};
use rayon::prelude::*;

use crate::features::{feature_path, read_feature, write_feature, FeatureFile};
use crate::filters::{read_filter_bank, write_filter_bank};
use crate::frames::{load_video, write_frames, write_video};
use crate::landmarks::{read_landmarks, write_landmarks};
use crate::manifest::{read_manifest, write_manifest, VideoManifest};
use crate::model::{write_model, ModelFile};
use crate::pairs::{read_pairs, write_pairs};
use crate::parallel::{with_jobs, RayonExecutor};
use crate::report::{write_report, write_roc};
use crate::scores::{read_scores, write_scores, ScoreRow};
use crate::weights::read_weights;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "kinvid", version, about = "Kinship verification from face videos")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Register every frame to a template using the eye landmarks.
    Align(AlignArgs),
    /// Compute one feature file per video.
    Extract(ExtractArgs),
    /// Learn a BSIF filter bank from random patches of the manifest's videos.
    LearnFilters(LearnFiltersArgs),
    /// Append one negative pair per positive pair.
    Pairs(PairsArgs),
    /// Train a linear SVM on every pair and write the model.
    Train(TrainArgs),
    /// Leave-one-out evaluation per relation and on the whole set.
    Evaluate(EvaluateArgs),
    /// Sum the scores of several score files.
    Fuse(FuseArgs),
    /// ROC curve of a score file.
    Roc(RocArgs),
    /// Generate a synthetic family dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TemplateChoice {
    /// 64x64 crop for texture descriptors.
    Texture,
    /// 224x224 crop for the deep network.
    Deep,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = TemplateChoice::Texture)]
    pub template: TemplateChoice,
    /// Crop side overriding the template's size.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DescriptorChoice {
    Lbptop,
    Lpqtop,
    Bsiftop,
    Deep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MappingChoice {
    Uniform,
    Full,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Manifest of aligned videos.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub descriptor: DescriptorChoice,
    /// `P:R` pairs for lbptop (default 8:1,16:2,24:3) or window sizes for
    /// lpqtop (default 3,5,...,17).
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long, value_enum, default_value_t = MappingChoice::Uniform)]
    pub mapping: MappingChoice,
    /// Filter bank file per bsiftop scale.
    #[arg(long = "filters")]
    pub filters: Vec<PathBuf>,
    /// Spatial histogram of the first frame only.
    #[arg(long)]
    pub still: bool,
    /// VGGW1 network for the deep descriptor.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value = "fc7")]
    pub layer: String,
    /// Use every n-th frame for the deep descriptor.
    #[arg(long, default_value_t = 1)]
    pub frame_stride: usize,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct LearnFiltersArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    #[arg(long, default_value_t = 7)]
    pub size: usize,
    #[arg(long, default_value_t = 50_000)]
    pub patches: usize,
    /// FastICA iteration limit.
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// FastICA convergence tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, env = "KINVID_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    /// Pairs file holding the positive pairs.
    #[arg(long)]
    pub positives: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, env = "KINVID_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "c", default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Feature directory per method.
    #[arg(long = "features", required = true)]
    pub features: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "c", default_value_t = 1.0)]
    pub c: f64,
    /// Seed recorded in the report.
    #[arg(long, env = "KINVID_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Leave out training pairs that share a subject with the test pair.
    #[arg(long)]
    pub subject_disjoint: bool,
    /// Z-score each method's scores before fusion.
    #[arg(long)]
    pub standardize: bool,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[arg(long = "scores", required = true)]
    pub scores: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub families: usize,
    #[arg(long, default_value_t = 1)]
    pub videos_per_subject: usize,
    #[arg(long, default_value_t = 24)]
    pub frames: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Side of the square raw frames.
    #[arg(long, default_value_t = 96)]
    pub raw_side: usize,
    /// Side of the template the annotations target.
    #[arg(long, default_value_t = 64)]
    pub template_size: usize,
    #[arg(long, env = "KINVID_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Align(a) => align(a),
        Command::Extract(a) => extract(a),
        Command::LearnFilters(a) => learn_filters(a),
        Command::Pairs(a) => pairs(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Fuse(a) => fuse(a),
        Command::Roc(a) => roc(a),
        Command::Synth(a) => synth(a),
    }
}

/// Fails with every missing path listed.
fn require(paths: &[&Path]) -> Result<()> {
    let missing: Vec<String> = paths
        .iter()
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Missing(missing))
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Video ids become file names, so they must not contain separators.
fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id == "." || id == ".." || id.contains(['/', '\\']) {
        return Err(Error::Usage(format!("video id {id:?} cannot be used as a file name")));
    }
    Ok(())
}

fn load_manifest(path: &Path, landmarks: bool) -> Result<Vec<VideoManifest>> {
    require(&[path])?;
    let records = read_manifest(path)?;
    let mut needed: Vec<&Path> = records.iter().map(|r| r.frames_dir.as_path()).collect();
    if landmarks {
        needed.extend(records.iter().map(|r| r.landmarks.as_path()));
    }
    require(&needed)?;
    for r in &records {
        check_id(&r.video_id)?;
    }
    Ok(records)
}

const FPS: f64 = 25.0;

fn align(args: AlignArgs) -> Result<()> {
    let records = load_manifest(&args.manifest, true)?;
    let mut template = match args.template {
        TemplateChoice::Texture => AlignmentTemplate::texture(),
        TemplateChoice::Deep => AlignmentTemplate::deep(),
    };
    if let Some(size) = args.size {
        template = AlignmentTemplate::with_size(size);
    }
    template.validate()?;
    create_dir(&args.out)?;
    let out = &args.out;
    let written = with_jobs(args.jobs, || {
        records
            .par_iter()
            .map(|r| -> Result<VideoManifest> {
                let video = load_video(&r.frames_dir, FPS)?;
                let eyes = read_landmarks(&r.landmarks)?;
                let aligned = align_crop(&video, &eyes, &template).map_err(|e| Error::context(&r.landmarks, e))?;
                let frames_dir = PathBuf::from(&r.video_id);
                write_video(&out.join(&frames_dir), &aligned)?;
                let landmarks = PathBuf::from(format!("{}.csv", r.video_id));
                let targets: Vec<EyeAnnotation> = (0..aligned.frames())
                    .map(|frame| EyeAnnotation {
                        frame,
                        left: template.left,
                        right: template.right,
                    })
                    .collect();
                write_landmarks(&out.join(&landmarks), &targets)?;
                Ok(VideoManifest {
                    frames_dir,
                    landmarks,
                    ..r.clone()
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    write_manifest(&out.join("manifest.json"), &written)?;
    eprintln!("aligned {} videos into {}", written.len(), out.display());
    Ok(())
}

fn parse_lbp_scales(text: &str) -> Result<Vec<(u32, f64)>> {
    text.split(',')
        .map(|s| {
            let (p, r) = s
                .split_once(':')
                .ok_or_else(|| Error::Usage(format!("lbptop scale {s:?} must look like P:R")))?;
            let p = p.trim().parse().map_err(|_| Error::Usage(format!("bad neighbour count in {s:?}")))?;
            let r = r.trim().parse().map_err(|_| Error::Usage(format!("bad radius in {s:?}")))?;
            Ok((p, r))
        })
        .collect()
}

fn parse_windows(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Usage(format!("bad window size {s:?}"))))
        .collect()
}

enum Extractor {
    Texture { descriptor: Descriptor, still: bool },
    Deep {
        net: Box<kinvid_core::deep::NetworkWeights>,
        layer: String,
        stride: usize,
    },
}

impl Extractor {
    fn from_args(args: &ExtractArgs) -> Result<Self> {
        let texture = |descriptor: Descriptor| Extractor::Texture {
            descriptor,
            still: args.still,
        };
        let scales_unused = |name: &str| match &args.scales {
            Some(_) => Err(Error::Usage(format!("--scales does not apply to {name}"))),
            None => Ok(()),
        };
        Ok(match args.descriptor {
            DescriptorChoice::Lbptop => {
                let pairs = match &args.scales {
                    Some(s) => parse_lbp_scales(s)?,
                    None => vec![(8, 1.0), (16, 2.0), (24, 3.0)],
                };
                let mapping = match args.mapping {
                    MappingChoice::Uniform => LbpMapping::Uniform,
                    MappingChoice::Full => LbpMapping::Full,
                };
                texture(Descriptor::lbp(&pairs, mapping)?)
            }
            DescriptorChoice::Lpqtop => {
                let windows = match &args.scales {
                    Some(s) => parse_windows(s)?,
                    None => DEFAULT_WINDOWS.to_vec(),
                };
                texture(Descriptor::lpq(&windows)?)
            }
            DescriptorChoice::Bsiftop => {
                scales_unused("bsiftop")?;
                if args.filters.is_empty() {
                    return Err(Error::Usage("bsiftop needs one --filters file per scale".into()));
                }
                require(&args.filters.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
                let banks = args
                    .filters
                    .iter()
                    .map(|p| read_filter_bank(p))
                    .collect::<Result<Vec<_>>>()?;
                texture(Descriptor::bsif(banks)?)
            }
            DescriptorChoice::Deep => {
                scales_unused("deep")?;
                let path = args
                    .weights
                    .as_deref()
                    .ok_or_else(|| Error::Usage("deep needs --weights".into()))?;
                require(&[path])?;
                if args.frame_stride == 0 {
                    return Err(Error::Usage("--frame-stride must be at least 1".into()));
                }
                let net = read_weights(path)?;
                net.layer_index(&args.layer)?;
                Extractor::Deep {
                    net: Box::new(net),
                    layer: args.layer.clone(),
                    stride: args.frame_stride,
                }
            }
        })
    }

    fn extract(&self, video: &FaceVideo) -> kinvid_core::Result<(FeatureVector, Vec<String>)> {
        match self {
            Extractor::Texture { descriptor, still } => {
                let feature = if *still {
                    extract_still_multiscale(&video.gray_frame(0), descriptor)?
                } else {
                    extract_top_multiscale(video, descriptor)?
                };
                let scales = feature.scales.clone();
                Ok((feature.into_feature_vector(descriptor.tag(!still)), scales))
            }
            Extractor::Deep { net, layer, stride } => {
                let f = extract_video_feature(video, net, layer, *stride)?;
                Ok((f, vec![layer.clone()]))
            }
        }
    }
}

fn extract(args: ExtractArgs) -> Result<()> {
    let records = load_manifest(&args.manifest, false)?;
    let extractor = Extractor::from_args(&args)?;
    create_dir(&args.out)?;
    with_jobs(args.jobs, || {
        records.par_iter().try_for_each(|r| -> Result<()> {
            let video = load_video(&r.frames_dir, FPS)?;
            let (feature, scales) = extractor.extract(&video).map_err(|e| Error::context(&r.frames_dir, e))?;
            let file = FeatureFile {
                video_id: r.video_id.clone(),
                descriptor: feature.descriptor,
                scales,
                values: feature.values,
            };
            write_feature(&feature_path(&args.out, &r.video_id), &file)
        })
    })??;
    eprintln!("wrote {} feature files to {}", records.len(), args.out.display());
    Ok(())
}

fn learn_filters(args: LearnFiltersArgs) -> Result<()> {
    let records = load_manifest(&args.manifest, false)?;
    if args.patches == 0 {
        return Err(Error::Usage("--patches must be positive".into()));
    }
    let videos = records
        .iter()
        .map(|r| load_video(&r.frames_dir, FPS))
        .collect::<Result<Vec<_>>>()?;
    let w = args.size;
    if videos.iter().any(|v| v.width() < w || v.height() < w) {
        return Err(Error::Usage(format!("every frame must be at least {w}x{w}")));
    }
    let mut rng = SplitMix64::new(args.seed);
    let mut patches = Vec::with_capacity(args.patches * w * w);
    for _ in 0..args.patches {
        let v = &videos[rng.index(videos.len())];
        let t = rng.index(v.frames());
        let y0 = rng.index(v.height() - w + 1);
        let x0 = rng.index(v.width() - w + 1);
        for y in y0..y0 + w {
            for x in x0..x0 + w {
                patches.push(f64::from(v.at(t, y, x)));
            }
        }
    }
    let config = IcaConfig {
        max_iter: args.max_iter,
        tol: args.tol,
    };
    let outcome = learn_bsif_filters_detailed(&patches, w, args.count, args.seed, &config)?;
    write_filter_bank(&args.out, &outcome.bank)?;
    eprintln!(
        "wrote {} {w}x{w} filters to {} after {} iterations",
        args.count,
        args.out.display(),
        outcome.iterations
    );
    Ok(())
}

fn pairs(args: PairsArgs) -> Result<()> {
    require(&[&args.positives])?;
    let positives = read_pairs(&args.positives)?;
    if let Some(p) = positives.iter().find(|p| p.label != Label::Kin) {
        return Err(Error::format(&args.positives, format!("pair {} is not positive", p.pair_id)));
    }
    let all = generate_negatives(&positives, args.seed)?;
    write_pairs(&args.out, &all)?;
    eprintln!("wrote {} pairs to {}", all.len(), args.out.display());
    Ok(())
}

/// Loads the feature of every video referenced by `pairs`, failing with all
/// missing files listed.
fn load_features(dir: &Path, pairs: &[PairEntry]) -> Result<(String, BTreeMap<String, FeatureVector>)> {
    require(&[dir])?;
    let ids: BTreeSet<&str> = pairs
        .iter()
        .flat_map(|p| [p.video_a.as_str(), p.video_b.as_str()])
        .collect();
    for id in &ids {
        check_id(id)?;
    }
    let paths: Vec<PathBuf> = ids.iter().map(|id| feature_path(dir, id)).collect();
    require(&paths.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
    let mut out = BTreeMap::new();
    let mut descriptor: Option<String> = None;
    for (id, path) in ids.iter().zip(&paths) {
        let f = read_feature(path)?;
        if f.video_id != *id {
            return Err(Error::format(path, format!("holds video {:?}, expected {id:?}", f.video_id)));
        }
        match &descriptor {
            None => descriptor = Some(f.descriptor.clone()),
            Some(d) if *d != f.descriptor => {
                return Err(Error::format(path, format!("descriptor {} differs from {d}", f.descriptor)))
            }
            Some(_) => {}
        }
        out.insert(f.video_id.clone(), f.to_feature_vector());
    }
    let descriptor = descriptor.ok_or_else(|| Error::Usage("pair list is empty".into()))?;
    Ok((descriptor, out))
}

fn read_pair_list(path: &Path) -> Result<Vec<PairEntry>> {
    require(&[path])?;
    let pairs = read_pairs(path)?;
    if pairs.is_empty() {
        return Err(Error::format(path, "no pairs"));
    }
    Ok(pairs)
}

fn train(args: TrainArgs) -> Result<()> {
    let pairs = read_pair_list(&args.pairs)?;
    let (descriptor, features) = load_features(&args.features, &pairs)?;
    let params = SvmParams::new(args.c)?;
    let samples = pairs
        .iter()
        .map(|p| pair_combine(&features[&p.video_a], &features[&p.video_b]))
        .collect::<kinvid_core::Result<Vec<_>>>()?;
    let labels: Vec<Label> = pairs.iter().map(|p| p.label).collect();
    let model = svm_train(&samples, &labels, &params)?;
    write_model(&args.out, &ModelFile::new(descriptor, &model))?;
    eprintln!("trained on {} pairs, wrote {}", pairs.len(), args.out.display());
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let pairs = read_pair_list(&args.pairs)?;
    // report every missing feature file before loading any
    let mut missing = Vec::new();
    for dir in &args.features {
        for p in &pairs {
            for id in [&p.video_a, &p.video_b] {
                let path = feature_path(dir, id);
                if !path.exists() && !missing.contains(&path.display().to_string()) {
                    missing.push(path.display().to_string());
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Missing(missing));
    }
    let mut methods = Vec::new();
    for dir in &args.features {
        let (name, features) = load_features(dir, &pairs)?;
        if methods.iter().any(|(n, _)| *n == name) {
            return Err(Error::Usage(format!("descriptor {name} given twice")));
        }
        methods.push((name, features));
    }
    let config = LooConfig {
        svm: SvmParams::new(args.c)?,
        subject_disjoint: args.subject_disjoint,
    };
    let report = with_jobs(args.jobs, || {
        evaluate_all(&methods, &pairs, &config, args.standardize, args.seed, &RayonExecutor)
    })??;
    write_report(&args.out, &report)?;
    eprintln!("wrote evaluation of {} methods to {}", methods.len(), args.out.display());
    Ok(())
}

fn fuse(args: FuseArgs) -> Result<()> {
    require(&args.scores.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
    let lists = args
        .scores
        .iter()
        .map(|p| read_scores(p))
        .collect::<Result<Vec<_>>>()?;
    let first = &lists[0];
    for (path, list) in args.scores.iter().zip(&lists).skip(1) {
        let same = list.len() == first.len()
            && list.iter().zip(first).all(|(a, b)| a.pair_id == b.pair_id && a.label == b.label);
        if !same {
            return Err(Error::format(path, "pairs or labels differ from the first score file"));
        }
    }
    let values: Vec<Vec<f64>> = lists
        .iter()
        .map(|l| {
            let s: Vec<f64> = l.iter().map(|r| r.score).collect();
            if args.standardize {
                standardize(&s)
            } else {
                s
            }
        })
        .collect();
    let fused = fuse_scores(&values)?;
    let rows: Vec<ScoreRow> = first
        .iter()
        .zip(fused)
        .map(|(r, score)| ScoreRow {
            pair_id: r.pair_id.clone(),
            label: r.label,
            score,
        })
        .collect();
    write_scores(&args.out, &rows)?;
    eprintln!("fused {} score files into {}", lists.len(), args.out.display());
    Ok(())
}

fn roc(args: RocArgs) -> Result<()> {
    require(&[&args.scores])?;
    let rows = read_scores(&args.scores)?;
    let scores: Vec<f64> = rows.iter().map(|r| r.score).collect();
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    let curve = roc_auc(&scores, &labels).map_err(|e| Error::context(&args.scores, e))?;
    write_roc(&args.out, &curve)?;
    eprintln!("AUC {:.6}", curve.auc);
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        families: args.families,
        videos_per_subject: args.videos_per_subject,
        frames: args.frames,
        raw_side: args.raw_side,
        template: AlignmentTemplate::with_size(args.template_size),
        alpha: args.alpha,
        seed: args.seed,
        ..SynthConfig::default()
    };
    let data = synth_generate(&cfg)?;
    let out = &args.out;
    create_dir(&out.join("videos"))?;
    create_dir(&out.join("landmarks"))?;
    let mut records = Vec::with_capacity(data.videos.len());
    for v in &data.videos {
        let frames_dir = Path::new("videos").join(&v.video_id);
        let landmarks = Path::new("landmarks").join(format!("{}.csv", v.video_id));
        let frames: Vec<Frame> = v.frames.iter().cloned().map(Frame::from).collect();
        write_frames(&out.join(&frames_dir), &frames)?;
        write_landmarks(&out.join(&landmarks), &v.eyes)?;
        records.push(VideoManifest {
            video_id: v.video_id.clone(),
            frames_dir,
            landmarks,
            subject_id: v.subject_id.clone(),
            smile_type: v.smile_type,
        });
    }
    write_manifest(&out.join("manifest.json"), &records)?;
    write_pairs(&out.join("positives.csv"), &data.positives)?;
    eprintln!(
        "wrote {} videos and {} positive pairs to {}",
        records.len(),
        data.positives.len(),
        out.display()
    );
    Ok(())
}
