//! Eye-based registration of face frames to a fixed template.
//!
//! Each frame is mapped by the similarity transform (rotation, uniform scale,
//! translation) that sends the annotated eyes onto the template's eye targets.
//! Output pixels are pulled back through the inverse transform and sampled
//! bilinearly; anything that falls outside the source frame is 0.

use alloc::vec::Vec;

use crate::image::FaceVideo;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// Eye positions of one frame (0-based frame index, sub-pixel coordinates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EyeAnnotation {
    pub frame: usize,
    pub left: Point,
    pub right: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentTemplate {
    pub size: usize,
    pub left: Point,
    pub right: Point,
}

impl AlignmentTemplate {
    /// Template of side `size` with eyes at `(0.3 S, 0.35 S)` and `(0.7 S, 0.35 S)`.
    pub fn with_size(size: usize) -> Self {
        let s = size as f64;
        AlignmentTemplate {
            size,
            left: Point::new(0.3 * s, 0.35 * s),
            right: Point::new(0.7 * s, 0.35 * s),
        }
    }

    /// 64x64 crop used by the texture descriptors.
    pub fn texture() -> Self {
        Self::with_size(64)
    }

    /// 224x224 crop expected by the deep network.
    pub fn deep() -> Self {
        Self::with_size(224)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.size as f64;
        let inside = |p: Point| p.x >= 0.0 && p.x < s && p.y >= 0.0 && p.y < s;
        if self.size == 0 || !inside(self.left) || !inside(self.right) {
            return Err(Error::InvalidParams(alloc::format!(
                "template eye targets must lie inside [0, {})^2",
                self.size
            )));
        }
        if self.left.y != self.right.y || self.left.x == self.right.x {
            return Err(Error::InvalidParams(
                "template eye targets must be distinct and share the same y".into(),
            ));
        }
        Ok(())
    }
}

/// 2x3 affine matrix `[[a, -b, tx], [b, a, ty]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub matrix: [[f64; 3]; 2],
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    };

    pub fn apply(&self, p: Point) -> Point {
        let m = &self.matrix;
        Point::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2],
        )
    }

    pub fn inverse(&self) -> Similarity {
        let m = &self.matrix;
        let (a, b) = (m[0][0], m[1][0]);
        let det = a * a + b * b;
        let (ia, ib) = (a / det, -b / det);
        let (tx, ty) = (m[0][2], m[1][2]);
        Similarity {
            matrix: [
                [ia, -ib, -(ia * tx - ib * ty)],
                [ib, ia, -(ib * tx + ia * ty)],
            ],
        }
    }
}

/// Similarity mapping `src_left -> template.left` and `src_right -> template.right`.
pub fn compute_similarity(
    src_left: Point,
    src_right: Point,
    template: &AlignmentTemplate,
) -> Result<Similarity> {
    let (sx, sy) = (src_right.x - src_left.x, src_right.y - src_left.y);
    let (dx, dy) = (
        template.right.x - template.left.x,
        template.right.y - template.left.y,
    );
    let norm = sx * sx + sy * sy;
    if norm == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    // complex ratio (dx + i dy) / (sx + i sy)
    let a = (dx * sx + dy * sy) / norm;
    let b = (dy * sx - dx * sy) / norm;
    let tx = template.left.x - (a * src_left.x - b * src_left.y);
    let ty = template.left.y - (b * src_left.x + a * src_left.y);
    Ok(Similarity {
        matrix: [[a, -b, tx], [b, a, ty]],
    })
}

/// Bilinear sample of channel `c` at `(x, y)`, or `None` outside the frame.
#[inline]
fn sample(
    plane: &[u8],
    width: usize,
    height: usize,
    channels: usize,
    c: usize,
    x: f64,
    y: f64,
) -> Option<f64> {
    const EDGE: f64 = 1e-9;
    let max_x = (width - 1) as f64;
    let max_y = (height - 1) as f64;
    if !(x >= -EDGE && y >= -EDGE && x <= max_x + EDGE && y <= max_y + EDGE) {
        return None;
    }
    let x = x.clamp(0.0, max_x);
    let y = y.clamp(0.0, max_y);
    let x0 = libm::floor(x) as usize;
    let y0 = libm::floor(y) as usize;
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let at = |xx: usize, yy: usize| plane[(yy * width + xx) * channels + c] as f64;
    let top = if fx == 0.0 {
        at(x0, y0)
    } else {
        (1.0 - fx) * at(x0, y0) + fx * at(x1, y0)
    };
    if fy == 0.0 {
        return Some(top);
    }
    let bottom = if fx == 0.0 {
        at(x0, y1)
    } else {
        (1.0 - fx) * at(x0, y1) + fx * at(x1, y1)
    };
    Some((1.0 - fy) * top + fy * bottom)
}

/// Warps one interleaved plane into a `size x size` output.
pub fn warp_plane(
    plane: &[u8],
    width: usize,
    height: usize,
    channels: usize,
    transform: &Similarity,
    size: usize,
) -> Vec<u8> {
    let inv = transform.inverse();
    let mut out = alloc::vec![0u8; size * size * channels];
    for oy in 0..size {
        for ox in 0..size {
            let src = inv.apply(Point::new(ox as f64, oy as f64));
            for c in 0..channels {
                if let Some(v) = sample(plane, width, height, channels, c, src.x, src.y) {
                    out[(oy * size + ox) * channels + c] =
                        libm::floor(v + 0.5).clamp(0.0, 255.0) as u8;
                }
            }
        }
    }
    out
}

/// Registers every frame of `video` to `template`, giving a `T x S x S` video.
pub fn align_crop(
    video: &FaceVideo,
    annotations: &[EyeAnnotation],
    template: &AlignmentTemplate,
) -> Result<FaceVideo> {
    template.validate()?;
    let t = video.frames();
    if annotations.len() != t {
        return Err(Error::AnnotationCount {
            expected: t,
            found: annotations.len(),
        });
    }
    let mut per_frame: Vec<Option<&EyeAnnotation>> = alloc::vec![None; t];
    for a in annotations {
        match per_frame.get_mut(a.frame) {
            Some(slot @ None) => *slot = Some(a),
            _ => {
                return Err(Error::InvalidParams(alloc::format!(
                    "annotation frame index {} is out of range or repeated",
                    a.frame
                )))
            }
        }
    }

    let (h, w, s) = (video.height(), video.width(), template.size);
    let n = h * w;
    let mut gray = Vec::with_capacity(t * s * s);
    let mut rgb = video.rgb().map(|_| Vec::with_capacity(t * s * s * 3));
    for (i, ann) in per_frame.iter().enumerate() {
        let ann = ann.expect("every slot filled");
        let sim = compute_similarity(ann.left, ann.right, template)?;
        gray.extend(warp_plane(
            &video.gray()[i * n..(i + 1) * n],
            w,
            h,
            1,
            &sim,
            s,
        ));
        if let (Some(out), Some(src)) = (rgb.as_mut(), video.rgb()) {
            out.extend(warp_plane(&src[3 * i * n..3 * (i + 1) * n], w, h, 3, &sim, s));
        }
    }
    FaceVideo::from_volume(t, s, s, gray, rgb, video.fps())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::GrayImage;
    use alloc::vec;
    use proptest::prelude::*;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        a.distance(b) < tol
    }

    #[test]
    fn identity_when_eyes_on_targets() {
        let t = AlignmentTemplate::texture();
        let sim = compute_similarity(t.left, t.right, &t).unwrap();
        for r in 0..2 {
            for c in 0..3 {
                assert!((sim.matrix[r][c] - Similarity::IDENTITY.matrix[r][c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_scale_half() {
        let t = AlignmentTemplate {
            size: 4,
            left: Point::new(0.0, 0.0),
            right: Point::new(1.0, 0.0),
        };
        let sim = compute_similarity(Point::new(0.0, 0.0), Point::new(2.0, 0.0), &t).unwrap();
        assert_eq!(sim.matrix, [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0]]);
    }

    #[test]
    fn vertical_eyes_map_onto_targets() {
        let t = AlignmentTemplate {
            size: 4,
            left: Point::new(0.0, 0.0),
            right: Point::new(1.0, 0.0),
        };
        let (l, r) = (Point::new(0.0, 0.0), Point::new(0.0, 2.0));
        let sim = compute_similarity(l, r, &t).unwrap();
        assert!(close(sim.apply(l), t.left, 1e-9));
        assert!(close(sim.apply(r), t.right, 1e-9));
    }

    #[test]
    fn coincident_points_rejected() {
        let t = AlignmentTemplate::texture();
        let p = Point::new(3.0, 3.0);
        assert_eq!(compute_similarity(p, p, &t), Err(Error::CoincidentPoints));
    }

    fn video_of(frames: &[GrayImage]) -> FaceVideo {
        FaceVideo::from_gray_frames(frames, 25.0).unwrap()
    }

    #[test]
    fn constant_frame_stays_constant_inside() {
        let video = video_of(&[GrayImage::filled(40, 30, 77)]);
        let t = AlignmentTemplate::with_size(20);
        // small eyes far apart -> upscaled crop, fully inside the source
        let ann = EyeAnnotation {
            frame: 0,
            left: Point::new(15.0, 12.0),
            right: Point::new(25.0, 13.0),
        };
        let out = align_crop(&video, &[ann], &t).unwrap();
        assert_eq!((out.frames(), out.height(), out.width()), (1, 20, 20));
        assert!(out.gray().iter().all(|&v| v == 77));

        // eyes near the corner -> part of the crop falls outside and is zero-padded
        let ann = EyeAnnotation {
            frame: 0,
            left: Point::new(1.0, 1.0),
            right: Point::new(5.0, 1.0),
        };
        let out = align_crop(&video, &[ann], &t).unwrap();
        assert!(out.gray().iter().all(|&v| v == 77 || v == 0));
        assert!(out.gray().contains(&0));
        assert!(out.gray().contains(&77));
    }

    #[test]
    fn identity_warp_is_top_left_crop() {
        let img = GrayImage::from_fn(80, 70, |x, y| ((x * 7 + y * 13) % 251) as u8);
        let t = AlignmentTemplate::texture();
        let ann = EyeAnnotation {
            frame: 0,
            left: t.left,
            right: t.right,
        };
        let out = align_crop(&video_of(std::slice::from_ref(&img)), &[ann], &t).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                assert_eq!(out.at(0, y, x), img.get(x, y));
            }
        }
    }

    #[test]
    fn rotated_face_markers_land_on_targets() {
        // Face rotated by 90 degrees: left eye above the right eye.
        let t = AlignmentTemplate::with_size(32);
        let (l, r) = (Point::new(20.0, 10.0), Point::new(20.0, 30.0));
        let ann = EyeAnnotation {
            frame: 0,
            left: l,
            right: r,
        };
        // one marker per run; the warped marker's peak must sit on its target
        for (eye, target) in [(l, t.left), (r, t.right)] {
            let mut img = GrayImage::filled(40, 40, 10);
            for dy in -1i32..=1 {
                for dx in -1i32..=1 {
                    img.set((eye.x as i32 + dx) as usize, (eye.y as i32 + dy) as usize, 250);
                }
            }
            let out = align_crop(&video_of(&[img]), &[ann], &t).unwrap();
            let mut peak = (0, 0, 0u8);
            for y in 0..32 {
                for x in 0..32 {
                    if out.at(0, y, x) > peak.2 {
                        peak = (x, y, out.at(0, y, x));
                    }
                }
            }
            assert!(close(Point::new(peak.0 as f64, peak.1 as f64), target, 1.0));
        }
    }

    #[test]
    fn annotation_count_mismatch() {
        let video = video_of(&[GrayImage::filled(8, 8, 0), GrayImage::filled(8, 8, 0)]);
        let ann = EyeAnnotation {
            frame: 0,
            left: Point::new(1.0, 1.0),
            right: Point::new(5.0, 1.0),
        };
        assert_eq!(
            align_crop(&video, &[ann], &AlignmentTemplate::with_size(8)),
            Err(Error::AnnotationCount {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn output_size_independent_of_input() {
        for (w, h) in [(10, 50), (90, 33)] {
            let frames = vec![GrayImage::filled(w, h, 5); 3];
            let anns: Vec<_> = (0..3)
                .map(|i| EyeAnnotation {
                    frame: i,
                    left: Point::new(2.0, 4.0),
                    right: Point::new(7.0, 4.5),
                })
                .collect();
            let out = align_crop(&video_of(&frames), &anns, &AlignmentTemplate::texture()).unwrap();
            assert_eq!((out.frames(), out.height(), out.width()), (3, 64, 64));
        }
    }

    proptest! {
        #[test]
        fn eyes_always_hit_targets(
            lx in -100.0f64..100.0, ly in -100.0f64..100.0,
            dx in -50.0f64..50.0, dy in -50.0f64..50.0,
        ) {
            prop_assume!(dx.abs() + dy.abs() > 1e-3);
            let t = AlignmentTemplate::deep();
            let (l, r) = (Point::new(lx, ly), Point::new(lx + dx, ly + dy));
            let sim = compute_similarity(l, r, &t).unwrap();
            prop_assert!(close(sim.apply(l), t.left, 1e-6));
            prop_assert!(close(sim.apply(r), t.right, 1e-6));
            let back = sim.inverse();
            prop_assert!(close(back.apply(t.left), l, 1e-6));
        }
    }
}
