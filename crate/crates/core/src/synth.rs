//! Synthetic families of face-like videos with controllable kin similarity.
//!
//! Every video is a procedural texture in template coordinates plus a
//! travelling intensity wave:
//!
//! `I(q, t) = 128 + A * S(q) + B * D(q, t) + noise`
//!
//! `S` is a sum of oriented sinusoids whose frequencies, orientations and
//! phases belong to the subject alone, so single frames carry no family
//! information. The dynamics are
//! `D(q, t) = r sin(w1 t + k1 . q + p1) + (1 - r) sin(w2 t + k2 . q + p2)`
//! and `(w1, w2, r)` is the latent vector. A subject's latent is
//! `alpha * family + (1 - alpha) * own`, both drawn from the same
//! distribution. The phase ramps `k1`, `k2` and offsets `p1`, `p2` are drawn
//! per video, so every temporal phase appears somewhere on the face and the
//! XY pattern of the wave says nothing about the family. XT and YT codes
//! follow the temporal frequencies.
//!
//! A subject's videos share its latent and appearance. With more than one
//! video per subject, the positive pairs of a family are near copies of each
//! other, which sample-level leave-one-out rewards even at `alpha = 0`; the
//! default is one video per subject.
//!
//! Frames are rendered into a larger raw image through a random similarity
//! per video plus a small per-frame jitter. Eye annotations are the template
//! eye targets mapped through the same transform, with slight noise, so that
//! aligning with them recovers the template-space texture.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::align::{AlignmentTemplate, EyeAnnotation, Point};
use crate::classifier::Label;
use crate::image::{FaceVideo, GrayImage};
use crate::protocol::{PairEntry, Relation, SmileType};
use crate::rng::SplitMix64;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// At least 14, so every relation has two families.
    pub families: usize,
    pub videos_per_subject: usize,
    pub frames: usize,
    /// Side of the raw frames.
    pub raw_side: usize,
    /// Template the annotations register to.
    pub template: AlignmentTemplate,
    /// Kin similarity of the latent dynamics, in `[0, 1]`.
    pub alpha: f64,
    pub seed: u64,
    /// Amplitude `A` of the appearance texture.
    pub texture_amplitude: f64,
    /// Amplitude `B` of the dynamics.
    pub dynamics_amplitude: f64,
    /// Standard deviation of per-pixel Gaussian noise.
    pub noise: f64,
    pub fps: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            families: 50,
            videos_per_subject: 1,
            frames: 24,
            raw_side: 96,
            template: AlignmentTemplate::texture(),
            alpha: 1.0,
            seed: 0,
            texture_amplitude: 30.0,
            dynamics_amplitude: 40.0,
            noise: 2.0,
            fps: 25.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthVideo {
    pub video_id: String,
    pub subject_id: String,
    pub smile_type: SmileType,
    pub frames: Vec<GrayImage>,
    pub eyes: Vec<EyeAnnotation>,
    pub fps: f64,
}

impl SynthVideo {
    pub fn to_video(&self) -> Result<FaceVideo> {
        FaceVideo::from_gray_frames(&self.frames, self.fps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub videos: Vec<SynthVideo>,
    /// Positive pairs only; negatives come from the pair generator.
    pub positives: Vec<PairEntry>,
}

/// Latent dynamics `(w1, w2, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Latent([f64; 3]);

impl Latent {
    fn draw(rng: &mut SplitMix64) -> Self {
        Latent([rng.uniform(0.4, 2.4), rng.uniform(0.4, 2.4), rng.uniform(0.2, 0.8)])
    }

    fn blend(family: Latent, own: Latent, alpha: f64) -> Self {
        let mut out = [0.0; 3];
        for (o, (f, s)) in out.iter_mut().zip(family.0.iter().zip(own.0)) {
            *o = alpha * f + (1.0 - alpha) * s;
        }
        Latent(out)
    }
}

/// Oriented sinusoid components `(kx, ky, phase, weight)`.
#[derive(Debug, Clone, PartialEq)]
struct Appearance(Vec<[f64; 4]>);

impl Appearance {
    fn draw(rng: &mut SplitMix64) -> Self {
        let mut comps: Vec<[f64; 4]> = (0..4)
            .map(|_| {
                let k = rng.uniform(0.25, 0.8);
                let theta = rng.uniform(0.0, PI);
                [
                    k * libm::cos(theta),
                    k * libm::sin(theta),
                    rng.uniform(0.0, 2.0 * PI),
                    rng.uniform(0.5, 1.0),
                ]
            })
            .collect();
        let total: f64 = comps.iter().map(|c| c[3]).sum();
        comps.iter_mut().for_each(|c| c[3] /= total);
        Appearance(comps)
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0
            .iter()
            .map(|c| c[3] * libm::sin(c[0] * x + c[1] * y + c[2]))
            .sum()
    }
}

/// Template-to-raw similarity: rotation, scale, then translation.
#[derive(Debug, Clone, Copy)]
struct Pose {
    angle: f64,
    scale: f64,
    dx: f64,
    dy: f64,
}

impl Pose {
    fn to_raw(self, q: Point, centre: f64, raw_centre: f64) -> Point {
        let (s, c) = (libm::sin(self.angle), libm::cos(self.angle));
        let (x, y) = (q.x - centre, q.y - centre);
        Point::new(
            self.scale * (c * x - s * y) + raw_centre + self.dx,
            self.scale * (s * x + c * y) + raw_centre + self.dy,
        )
    }

    fn to_template(self, p: Point, centre: f64, raw_centre: f64) -> Point {
        let (s, c) = (libm::sin(self.angle), libm::cos(self.angle));
        let (x, y) = (
            (p.x - raw_centre - self.dx) / self.scale,
            (p.y - raw_centre - self.dy) / self.scale,
        );
        Point::new(c * x + s * y + centre, -s * x + c * y + centre)
    }
}

fn validate(cfg: &SynthConfig) -> Result<()> {
    cfg.template.validate()?;
    if !(0.0..=1.0).contains(&cfg.alpha) {
        return Err(Error::InvalidParams(format!(
            "alpha must lie in [0, 1], got {}",
            cfg.alpha
        )));
    }
    if cfg.families < 14 {
        return Err(Error::InvalidParams(format!(
            "need at least 14 families so every relation has two, got {}",
            cfg.families
        )));
    }
    if cfg.videos_per_subject == 0 {
        return Err(Error::InvalidParams("videos per subject must be positive".into()));
    }
    if cfg.frames < 7 || cfg.template.size < 7 {
        return Err(Error::InvalidParams(format!(
            "frames ({}) and template size ({}) must both be at least 7",
            cfg.frames, cfg.template.size
        )));
    }
    // the rotated, scaled template square plus jitter must stay inside the raw frame
    let needed = cfg.template.size as f64 * 1.1 * (libm::cos(PI / 18.0) + libm::sin(PI / 18.0)) + 10.0;
    if (cfg.raw_side as f64) < needed {
        return Err(Error::InvalidParams(format!(
            "raw side {} too small for template size {}; need at least {}",
            cfg.raw_side,
            cfg.template.size,
            libm::ceil(needed)
        )));
    }
    for (name, v) in [
        ("texture amplitude", cfg.texture_amplitude),
        ("dynamics amplitude", cfg.dynamics_amplitude),
        ("noise", cfg.noise),
        ("fps", cfg.fps),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

/// Generates the dataset.
///
/// Family `i` has two subjects and relation `Relation::ALL[i % 7]`. Video `j`
/// of a subject is spontaneous for even `j` and posed for odd `j`; positive
/// pair `j` of a family links video `j` of both subjects.
pub fn synth_generate(cfg: &SynthConfig) -> Result<SynthDataset> {
    validate(cfg)?;
    let mut master = SplitMix64::new(cfg.seed);
    let centre = (cfg.template.size as f64 - 1.0) / 2.0;
    let raw_centre = (cfg.raw_side as f64 - 1.0) / 2.0;
    let mut videos = Vec::new();
    let mut positives = Vec::new();
    for fam in 0..cfg.families {
        let mut rng = master.fork();
        let family_latent = Latent::draw(&mut rng);
        let relation = Relation::ALL[fam % 7];
        let mut ids = Vec::new();
        for sub in 0..2 {
            let subject_id = format!("f{fam:03}_s{sub}");
            let latent = Latent::blend(family_latent, Latent::draw(&mut rng), cfg.alpha);
            let appearance = Appearance::draw(&mut rng);
            let mut subject_videos = Vec::new();
            for j in 0..cfg.videos_per_subject {
                let video_id = format!("{subject_id}_v{j}");
                let smile_type = if j % 2 == 0 {
                    SmileType::Spontaneous
                } else {
                    SmileType::Posed
                };
                let (frames, eyes) = render(cfg, &mut rng, &appearance, latent, centre, raw_centre);
                videos.push(SynthVideo {
                    video_id: video_id.clone(),
                    subject_id: subject_id.clone(),
                    smile_type,
                    frames,
                    eyes,
                    fps: cfg.fps,
                });
                subject_videos.push((video_id, smile_type));
            }
            ids.push((subject_id, subject_videos));
        }
        for j in 0..cfg.videos_per_subject {
            let (sa, va) = (&ids[0].0, &ids[0].1[j]);
            let (sb, vb) = (&ids[1].0, &ids[1].1[j]);
            positives.push(PairEntry {
                pair_id: format!("p{fam:03}_{j}"),
                video_a: va.0.clone(),
                video_b: vb.0.clone(),
                subject_a: sa.clone(),
                subject_b: sb.clone(),
                relation,
                smile_type: va.1,
                label: Label::Kin,
            });
        }
    }
    Ok(SynthDataset { videos, positives })
}

fn render(
    cfg: &SynthConfig,
    rng: &mut SplitMix64,
    appearance: &Appearance,
    latent: Latent,
    centre: f64,
    raw_centre: f64,
) -> (Vec<GrayImage>, Vec<EyeAnnotation>) {
    let [w1, w2, r] = latent.0;
    // per-video phase ramps spread every phase over the face
    let ramp = |rng: &mut SplitMix64| {
        let (k, theta) = (rng.uniform(0.05, 0.1), rng.uniform(0.0, 2.0 * PI));
        [k * libm::cos(theta), k * libm::sin(theta), rng.uniform(0.0, 2.0 * PI)]
    };
    let (p1, p2) = (ramp(rng), ramp(rng));
    let base = Pose {
        angle: rng.uniform(-PI / 18.0, PI / 18.0),
        scale: rng.uniform(0.9, 1.1),
        dx: rng.uniform(-3.0, 3.0),
        dy: rng.uniform(-3.0, 3.0),
    };
    let side = cfg.raw_side;
    let mut frames = Vec::with_capacity(cfg.frames);
    let mut eyes = Vec::with_capacity(cfg.frames);
    for t in 0..cfg.frames {
        let pose = Pose {
            angle: base.angle + rng.uniform(-PI / 180.0, PI / 180.0),
            scale: base.scale,
            dx: base.dx + rng.uniform(-0.75, 0.75),
            dy: base.dy + rng.uniform(-0.75, 0.75),
        };
        let tf = t as f64;
        let mut data = Vec::with_capacity(side * side);
        for y in 0..side {
            for x in 0..side {
                let q = pose.to_template(Point::new(x as f64, y as f64), centre, raw_centre);
                let phase = |p: [f64; 3]| p[0] * q.x + p[1] * q.y + p[2];
                let dynamics = r * libm::sin(w1 * tf + phase(p1)) + (1.0 - r) * libm::sin(w2 * tf + phase(p2));
                let v = 128.0
                    + cfg.dynamics_amplitude * dynamics
                    + cfg.texture_amplitude * appearance.eval(q.x, q.y)
                    + cfg.noise * rng.normal();
                data.push(libm::floor(v + 0.5).clamp(0.0, 255.0) as u8);
            }
        }
        frames.push(GrayImage::new(side, side, data).expect("buffer matches size"));
        let mut eye = |p: Point| {
            let e = pose.to_raw(p, centre, raw_centre);
            Point::new(e.x + 0.1 * rng.normal(), e.y + 0.1 * rng.normal())
        };
        let left = eye(cfg.template.left);
        let right = eye(cfg.template.right);
        eyes.push(EyeAnnotation { frame: t, left, right });
    }
    (frames, eyes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{align_crop, compute_similarity};

    fn small() -> SynthConfig {
        SynthConfig {
            families: 14,
            videos_per_subject: 1,
            frames: 8,
            raw_side: 56,
            template: AlignmentTemplate::with_size(32),
            ..SynthConfig::default()
        }
    }

    #[test]
    fn layout_and_pairs() {
        let ds = synth_generate(&small()).unwrap();
        assert_eq!(ds.videos.len(), 28);
        assert_eq!(ds.positives.len(), 14);
        for v in &ds.videos {
            assert_eq!(v.frames.len(), 8);
            assert_eq!(v.eyes.len(), 8);
            assert_eq!((v.frames[0].width(), v.frames[0].height()), (56, 56));
        }
        assert_eq!(ds.positives[8].relation, Relation::ALL[1]);
        assert!(ds.positives.iter().all(|p| p.subject_a != p.subject_b));
    }

    #[test]
    fn deterministic_given_seed() {
        assert_eq!(synth_generate(&small()).unwrap(), synth_generate(&small()).unwrap());
        let other = SynthConfig { seed: 1, ..small() };
        assert_ne!(synth_generate(&small()).unwrap(), synth_generate(&other).unwrap());
    }

    #[test]
    fn annotations_register_to_template() {
        let cfg = small();
        let ds = synth_generate(&cfg).unwrap();
        let v = &ds.videos[3];
        let aligned = align_crop(&v.to_video().unwrap(), &v.eyes, &cfg.template).unwrap();
        assert_eq!((aligned.frames(), aligned.width(), aligned.height()), (8, 32, 32));
        // the aligned crop lies inside the raw frame, so no zero padding
        assert!(aligned.gray().iter().all(|&p| p > 0));
        let sim = compute_similarity(v.eyes[0].left, v.eyes[0].right, &cfg.template).unwrap();
        let p = sim.apply(v.eyes[0].left);
        assert!((p.x - cfg.template.left.x).abs() < 1e-6);
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(synth_generate(&SynthConfig { alpha: 1.5, ..small() }).is_err());
        assert!(synth_generate(&SynthConfig { families: 5, ..small() }).is_err());
        assert!(synth_generate(&SynthConfig { frames: 3, ..small() }).is_err());
        assert!(synth_generate(&SynthConfig { raw_side: 32, ..small() }).is_err());
    }
}
