//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use kinvid_core::classifier::Label;
use kinvid_core::coders::SIGN_TOLERANCE;
use kinvid_core::coders::Coder;
use kinvid_core::deep::{ActivationTensor, Layer, LayerKind, LayerSpec, NetworkWeights};
use kinvid_core::FaceVideo;
use kinvid_core::protocol::{PairEntry, Relation, SmileType};
use kinvid_core::rng::SplitMix64;
use kinvid_core::GrayImage;

pub fn random_image(w: usize, h: usize, rng: &mut SplitMix64) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.below(256) as u8)
}

/// `None` outside the valid interior.
pub type OracleCodes = Vec<Option<u32>>;

fn pixel(img: &GrayImage, x: usize, y: usize) -> f64 {
    img.data()[y * img.width() + x] as f64
}

fn bilinear(img: &GrayImage, x: f64, y: f64) -> f64 {
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (x - x0, y - y0);
    let (x0, y0) = (x0 as usize, y0 as usize);
    let mut v = (1.0 - fx) * (1.0 - fy) * pixel(img, x0, y0);
    if fx > 0.0 {
        v += fx * (1.0 - fy) * pixel(img, x0 + 1, y0);
    }
    if fy > 0.0 {
        v += (1.0 - fx) * fy * pixel(img, x0, y0 + 1);
    }
    if fx > 0.0 && fy > 0.0 {
        v += fx * fy * pixel(img, x0 + 1, y0 + 1);
    }
    v
}

fn bit(code: u64, i: u32, p: u32) -> bool {
    code >> (i % p) & 1 == 1
}

/// Bin of a u2 uniform mapping, found by scanning for the run of ones.
pub fn uniform_bin(code: u64, p: u32) -> u32 {
    let ones = (0..p).filter(|&i| bit(code, i, p)).count() as u32;
    if ones == 0 {
        return 0;
    }
    if ones == p {
        return p * (p - 1) + 1;
    }
    let transitions = (0..p).filter(|&i| bit(code, i, p) != bit(code, i + 1, p)).count();
    if transitions > 2 {
        return p * (p - 1) + 2;
    }
    let start = (0..p).find(|&i| bit(code, i, p) && !bit(code, i + p - 1, p)).unwrap();
    1 + (ones - 1) * p + start
}

/// Circular LBP: neighbour `p` at angle `2 pi p / P` (y down), sampled
/// bilinearly, compared with the centre by `n - c >= 0`.
pub fn lbp_oracle(img: &GrayImage, p: u32, r: f64, uniform: bool) -> OracleCodes {
    let m = r.ceil() as usize;
    let (w, h) = (img.width(), img.height());
    let mut out = vec![None; w * h];
    for y in m..h - m {
        for x in m..w - m {
            let c = pixel(img, x, y);
            let mut code = 0u64;
            for i in 0..p {
                let theta = 2.0 * PI * i as f64 / p as f64;
                let nx = x as f64 + r * theta.cos();
                let ny = y as f64 - r * theta.sin();
                if bilinear(img, nx, ny) - c >= -SIGN_TOLERANCE {
                    code |= 1 << i;
                }
            }
            out[y * w + x] = Some(if uniform { uniform_bin(code, p) } else { code as u32 });
        }
    }
    out
}

/// LPQ from the four STFT sums evaluated directly at every window offset.
pub fn lpq_oracle(img: &GrayImage, win: usize) -> OracleCodes {
    let r = (win - 1) / 2;
    let a = 1.0 / win as f64;
    let freqs = [(a, 0.0), (0.0, a), (a, a), (a, -a)];
    let (w, h) = (img.width(), img.height());
    let mut out = vec![None; w * h];
    for y in r..h - r {
        for x in r..w - r {
            let mut re = [0.0; 4];
            let mut im = [0.0; 4];
            for (k, (ux, uy)) in freqs.iter().enumerate() {
                for dy in -(r as isize)..=r as isize {
                    for dx in -(r as isize)..=r as isize {
                        let v = pixel(img, (x as isize + dx) as usize, (y as isize + dy) as usize);
                        let phase = -2.0 * PI * (ux * dx as f64 + uy * dy as f64);
                        re[k] += v * phase.cos();
                        im[k] += v * phase.sin();
                    }
                }
            }
            let mut code = 0;
            for (b, v) in re.iter().chain(&im).enumerate() {
                if *v >= -SIGN_TOLERANCE {
                    code |= 1 << b;
                }
            }
            out[y * w + x] = Some(code);
        }
    }
    out
}

/// BSIF from explicit correlation sums; `filters[i]` is row-major `side x side`.
pub fn bsif_oracle(img: &GrayImage, filters: &[Vec<f64>], side: usize) -> OracleCodes {
    let r = (side - 1) / 2;
    let (w, h) = (img.width(), img.height());
    let mut out = vec![None; w * h];
    for y in r..h - r {
        for x in r..w - r {
            let mut code = 0;
            for (i, f) in filters.iter().enumerate() {
                let mut s = 0.0;
                for ky in 0..side {
                    for kx in 0..side {
                        s += f[ky * side + kx] * pixel(img, x + kx - r, y + ky - r);
                    }
                }
                if s > SIGN_TOLERANCE {
                    code |= 1 << i;
                }
            }
            out[y * w + x] = Some(code);
        }
    }
    out
}

/// Zero-mean random filters.
pub fn random_filters(count: usize, side: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let f: Vec<f64> = (0..side * side).map(|_| rng.normal()).collect();
            let mean = f.iter().sum::<f64>() / f.len() as f64;
            f.into_iter().map(|v| v - mean).collect()
        })
        .collect()
}

/// Forward pass in f64 with one explicit sum per output element. Activations
/// are `[y][x][c]`; conv weights are read in file order `[o][i][ky][kx]`.
pub fn forward_oracle(input: &ActivationTensor, net: &NetworkWeights, stop_at: &str) -> Vec<f64> {
    let (mut h, mut w, mut c) = (input.height(), input.width(), input.channels());
    let mut act: Vec<f64> = input.data().iter().map(|&v| v as f64).collect();
    for layer in &net.layers()[1..] {
        let s = layer.spec();
        match s.kind {
            LayerKind::Input => {}
            LayerKind::Conv => {
                let (k, st, pad, oc) = (s.support, s.stride, s.pad as isize, s.num_filts);
                let weights = layer.weights();
                let oh = (h + 2 * s.pad - k) / st + 1;
                let ow = (w + 2 * s.pad - k) / st + 1;
                let mut out = vec![0.0; oh * ow * oc];
                for oy in 0..oh {
                    for ox in 0..ow {
                        for o in 0..oc {
                            let mut sum = layer.bias()[o] as f64;
                            for i in 0..c {
                                for ky in 0..k {
                                    for kx in 0..k {
                                        let iy = (oy * st + ky) as isize - pad;
                                        let ix = (ox * st + kx) as isize - pad;
                                        if iy < 0 || ix < 0 || iy >= h as isize || ix >= w as isize {
                                            continue;
                                        }
                                        let wv = weights[((o * c + i) * k + ky) * k + kx] as f64;
                                        sum += wv * act[(iy as usize * w + ix as usize) * c + i];
                                    }
                                }
                            }
                            out[(oy * ow + ox) * oc + o] = sum;
                        }
                    }
                }
                (h, w, c, act) = (oh, ow, oc, out);
            }
            LayerKind::Relu => act.iter_mut().for_each(|v| *v = v.max(0.0)),
            LayerKind::MaxPool => {
                let (oh, ow) = (h / 2, w / 2);
                let mut out = vec![f64::NEG_INFINITY; oh * ow * c];
                for oy in 0..oh {
                    for ox in 0..ow {
                        for ch in 0..c {
                            for (dy, dx) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                                let v = act[((2 * oy + dy) * w + 2 * ox + dx) * c + ch];
                                let o = &mut out[(oy * ow + ox) * c + ch];
                                *o = o.max(v);
                            }
                        }
                    }
                }
                (h, w, act) = (oh, ow, out);
            }
            LayerKind::Softmax => {
                for px in act.chunks_mut(c) {
                    let total: f64 = px.iter().map(|v| v.exp()).sum();
                    px.iter_mut().for_each(|v| *v = v.exp() / total);
                }
            }
        }
        if s.name == stop_at {
            break;
        }
    }
    act
}

/// Largest absolute difference relative to the largest oracle magnitude.
pub fn relative_error(found: &[f32], oracle: &[f64]) -> f64 {
    assert_eq!(found.len(), oracle.len());
    let scale = oracle.iter().fold(1e-12f64, |m, v| m.max(v.abs()));
    found
        .iter()
        .zip(oracle)
        .fold(0.0f64, |m, (&a, &b)| m.max((a as f64 - b).abs()))
        / scale
}

/// Pairwise AUC with half credit for ties.
pub fn mann_whitney(scores: &[f64], labels: &[Label]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        for (j, &sj) in scores.iter().enumerate() {
            if labels[i] == Label::Kin && labels[j] == Label::NonKin {
                pairs += 1.0;
                if si > sj {
                    wins += 1.0;
                } else if si == sj {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// `1/2 |w|^2 + C sum hinge`.
pub fn svm_objective(w: &[f64], b: f64, xs: &[Vec<f64>], ys: &[f64], c: f64) -> f64 {
    let hinge: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (1.0 - y * (dot(w, x) + b)).max(0.0))
        .sum();
    0.5 * dot(w, w) + c * hinge
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projection onto `{0 <= a_i <= c, sum y_i a_i = 0}` by bisection on the
/// multiplier of the equality constraint.
fn project(v: &[f64], ys: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> { v.iter().zip(ys).map(|(vi, y)| (vi - lambda * y).clamp(0.0, c)).collect() };
    let g = |a: &[f64]| dot(a, ys);
    let (mut lo, mut hi) = (-1e6, 1e6);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(&at(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Reference linear SVM: accelerated projected gradient on the dual, then
/// the bias minimising the primal for the recovered `w` by scanning the
/// hinge breakpoints. Returns `(w, b)`.
pub fn svm_reference(xs: &[Vec<f64>], ys: &[f64], c: f64, iterations: usize) -> (Vec<f64>, f64) {
    let n = xs.len();
    let q: Vec<f64> = (0..n * n).map(|k| ys[k / n] * ys[k % n] * dot(&xs[k / n], &xs[k % n])).collect();
    // power iteration for the step size
    let mut v = vec![1.0; n];
    let mut lipschitz = 1.0;
    for _ in 0..500 {
        let qv: Vec<f64> = (0..n).map(|i| dot(&q[i * n..(i + 1) * n], &v)).collect();
        lipschitz = dot(&qv, &qv).sqrt().max(1e-12);
        v = qv.iter().map(|x| x / lipschitz).collect();
    }
    let step = 1.0 / (1.01 * lipschitz);
    let mut a = vec![0.0; n];
    let mut z = a.clone();
    let mut t = 1.0f64;
    for _ in 0..iterations {
        let grad: Vec<f64> = (0..n).map(|i| dot(&q[i * n..(i + 1) * n], &z) - 1.0).collect();
        let next = project(&z.iter().zip(&grad).map(|(zi, gi)| zi - step * gi).collect::<Vec<_>>(), ys, c);
        let tn = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        z = next.iter().zip(&a).map(|(x, y)| x + (t - 1.0) / tn * (x - y)).collect();
        a = next;
        t = tn;
    }
    let d = xs[0].len();
    let mut w = vec![0.0; d];
    for i in 0..n {
        for j in 0..d {
            w[j] += a[i] * ys[i] * xs[i][j];
        }
    }
    // the objective in b is convex piecewise linear; a minimiser sits on a breakpoint
    let b = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - dot(&w, x))
        .min_by(|&b1, &b2| svm_objective(&w, b1, xs, ys, c).total_cmp(&svm_objective(&w, b2, xs, ys, c)))
        .unwrap();
    (w, b)
}

/// Spontaneous positives per relation in report column order, as in the
/// smile database statistics (228 in total).
pub const SPONTANEOUS_COUNTS: [usize; 7] = [22, 15, 32, 57, 36, 28, 38];

/// One family of two subjects per positive, one video per subject.
pub fn family_positives(counts: &[usize], smile: SmileType) -> Vec<PairEntry> {
    let mut out = Vec::new();
    for (r, &n) in Relation::ALL.iter().zip(counts) {
        for i in 0..n {
            let fam = format!("{}{i:03}", r.code());
            out.push(PairEntry {
                pair_id: format!("p_{fam}"),
                video_a: format!("{fam}_a_v"),
                video_b: format!("{fam}_b_v"),
                subject_a: format!("{fam}_a"),
                subject_b: format!("{fam}_b"),
                relation: *r,
                smile_type: smile,
                label: Label::Kin,
            });
        }
    }
    out
}

pub fn random_f32(n: usize, rng: &mut SplitMix64) -> Vec<f32> {
    (0..n).map(|_| rng.normal() as f32 * 0.5).collect()
}

/// Up to four layers after the input, at most eight channels anywhere.
pub fn random_network(rng: &mut SplitMix64) -> NetworkWeights {
    let side = [4, 6, 8, 10][rng.index(4)];
    let channels = 1 + rng.index(3);
    let mut layers = vec![Layer::plain(LayerSpec::input(side, channels)).unwrap()];
    let (mut s, mut c) = (side, channels);
    let depth = 1 + rng.index(4);
    for i in 0..depth {
        let last = i + 1 == depth;
        let choice = if i == 0 { 0 } else { rng.index(if last { 4 } else { 3 }) };
        match choice {
            1 => layers.push(Layer::plain(LayerSpec::relu(format!("r{i}"))).unwrap()),
            2 if s % 2 == 0 && s >= 2 => {
                layers.push(Layer::plain(LayerSpec::max_pool(format!("p{i}"))).unwrap());
                s /= 2;
            }
            3 => layers.push(Layer::plain(LayerSpec::softmax(format!("s{i}"))).unwrap()),
            _ => {
                let k = 1 + rng.index(3.min(s));
                let stride = 1 + rng.index(2);
                let pad = rng.index(2);
                let out = 1 + rng.index(8);
                let spec = LayerSpec::conv(format!("c{i}"), k, c, out, stride, pad);
                let w = random_f32(spec.weight_count(), rng);
                layers.push(Layer::new(spec, w, random_f32(out, rng)).unwrap());
                s = (s + 2 * pad - k) / stride + 1;
                c = out;
            }
        }
    }
    NetworkWeights::new([0.0; 3], layers).unwrap()
}

pub fn random_problem(rng: &mut SplitMix64) -> (Vec<Vec<f64>>, Vec<Label>, Vec<f64>) {
    let d = 2 + rng.index(5);
    let shift: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
    let mut xs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..20 {
        let y = if i % 2 == 0 { 1.0 } else { -1.0 };
        xs.push(shift.iter().map(|s| y * 0.5 * s + rng.normal()).collect());
        labels.push(if y > 0.0 { Label::Kin } else { Label::NonKin });
    }
    let ys = labels.iter().map(|l| l.sign()).collect();
    (xs, labels, ys)
}

/// Slices by index arithmetic on the raw volume, `t`-major then row-major.
pub fn oracle_slices(v: &FaceVideo) -> [Vec<GrayImage>; 3] {
    let (t, h, w) = (v.frames(), v.height(), v.width());
    let g = v.gray();
    let at = |tt: usize, y: usize, x: usize| g[(tt * h + y) * w + x];
    let xy = (0..t).map(|tt| GrayImage::from_fn(w, h, |x, y| at(tt, y, x))).collect();
    let xt = (0..h).map(|y| GrayImage::from_fn(w, t, |x, tt| at(tt, y, x))).collect();
    let yt = (0..w).map(|x| GrayImage::from_fn(h, t, |y, tt| at(tt, y, x))).collect();
    [xy, xt, yt]
}

pub fn oracle_counts(slices: &[GrayImage], coder: &Coder) -> Vec<u64> {
    let mut counts = vec![0u64; coder.bins()];
    for s in slices.iter().filter(|s| coder.accepts(s.width(), s.height())) {
        let codes = coder.code(s).unwrap();
        let m = codes.margin();
        for y in m..s.height() - m {
            for x in m..s.width() - m {
                counts[codes.get(x, y) as usize] += 1;
            }
        }
    }
    counts
}

pub fn random_volume(t: usize, h: usize, w: usize, rng: &mut SplitMix64) -> FaceVideo {
    let data: Vec<u8> = (0..t * h * w).map(|_| rng.below(256) as u8).collect();
    FaceVideo::from_volume(t, h, w, data, None, 25.0).unwrap()
}
