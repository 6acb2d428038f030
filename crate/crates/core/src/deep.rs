//! Forward inference for the VGG-face layer table and frame-averaged
//! descriptors.
//!
//! Activations are `f32`, stored height-major then width then channel
//! (`data[(y * width + x) * channels + c]`). Convolutions are
//! cross-correlations; the fully connected layers are convolutions whose
//! support covers the whole input.
//!
//! Layer records carry the same five integers for every type. Fields that
//! have no meaning for a type are 0. The input layer records the input side
//! in `support` and the channel count in `num_filts`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::feature::FeatureVector;
use crate::image::{FaceVideo, Frame};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LayerKind {
    Input,
    Conv,
    Relu,
    MaxPool,
    Softmax,
}

impl LayerKind {
    /// Type tag used by the weight file.
    pub fn tag(self) -> u8 {
        match self {
            LayerKind::Input => 0,
            LayerKind::Conv => 1,
            LayerKind::Relu => 2,
            LayerKind::MaxPool => 3,
            LayerKind::Softmax => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => LayerKind::Input,
            1 => LayerKind::Conv,
            2 => LayerKind::Relu,
            3 => LayerKind::MaxPool,
            4 => LayerKind::Softmax,
            _ => return None,
        })
    }

    /// Name used in the layer table.
    pub fn label(self) -> &'static str {
        match self {
            LayerKind::Input => "input",
            LayerKind::Conv => "conv",
            LayerKind::Relu => "relu",
            LayerKind::MaxPool => "mpool",
            LayerKind::Softmax => "softmx",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerSpec {
    pub name: String,
    pub kind: LayerKind,
    pub support: usize,
    pub filt_dim: usize,
    pub num_filts: usize,
    pub stride: usize,
    pub pad: usize,
}

impl LayerSpec {
    pub fn new(
        name: impl Into<String>,
        kind: LayerKind,
        support: usize,
        filt_dim: usize,
        num_filts: usize,
        stride: usize,
        pad: usize,
    ) -> Self {
        LayerSpec {
            name: name.into(),
            kind,
            support,
            filt_dim,
            num_filts,
            stride,
            pad,
        }
    }

    pub fn input(side: usize, channels: usize) -> Self {
        Self::new("input", LayerKind::Input, side, 0, channels, 0, 0)
    }

    pub fn conv(
        name: impl Into<String>,
        support: usize,
        filt_dim: usize,
        num_filts: usize,
        stride: usize,
        pad: usize,
    ) -> Self {
        Self::new(name, LayerKind::Conv, support, filt_dim, num_filts, stride, pad)
    }

    pub fn relu(name: impl Into<String>) -> Self {
        Self::new(name, LayerKind::Relu, 1, 0, 0, 1, 0)
    }

    pub fn max_pool(name: impl Into<String>) -> Self {
        Self::new(name, LayerKind::MaxPool, 2, 0, 0, 2, 0)
    }

    pub fn softmax(name: impl Into<String>) -> Self {
        Self::new(name, LayerKind::Softmax, 1, 0, 0, 1, 0)
    }

    /// Number of kernel weights a conv layer carries.
    pub fn weight_count(&self) -> usize {
        match self.kind {
            LayerKind::Conv => self.support * self.support * self.filt_dim * self.num_filts,
            _ => 0,
        }
    }

    pub fn bias_count(&self) -> usize {
        match self.kind {
            LayerKind::Conv => self.num_filts,
            _ => 0,
        }
    }

    fn fields(&self) -> [(&'static str, usize); 5] {
        [
            ("support", self.support),
            ("filt dim", self.filt_dim),
            ("num filts", self.num_filts),
            ("stride", self.stride),
            ("pad", self.pad),
        ]
    }
}

/// The 38 rows of the VGG-face table: type, name, support, filt dim, num
/// filts, stride, pad.
const VGG_FACE_ROWS: [(LayerKind, &str, usize, usize, usize, usize, usize); 38] = {
    use LayerKind::*;
    [
        (Input, "input", 224, 0, 3, 0, 0),
        (Conv, "conv1_1", 3, 3, 64, 1, 1),
        (Relu, "relu1_1", 1, 0, 0, 1, 0),
        (Conv, "conv1_2", 3, 64, 64, 1, 1),
        (Relu, "relu1_2", 1, 0, 0, 1, 0),
        (MaxPool, "pool1", 2, 0, 0, 2, 0),
        (Conv, "conv2_1", 3, 64, 128, 1, 1),
        (Relu, "relu2_1", 1, 0, 0, 1, 0),
        (Conv, "conv2_2", 3, 128, 128, 1, 1),
        (Relu, "relu2_2", 1, 0, 0, 1, 0),
        (MaxPool, "pool2", 2, 0, 0, 2, 0),
        (Conv, "conv3_1", 3, 128, 256, 1, 1),
        (Relu, "relu3_1", 1, 0, 0, 1, 0),
        (Conv, "conv3_2", 3, 256, 256, 1, 1),
        (Relu, "relu3_2", 1, 0, 0, 1, 0),
        (Conv, "conv3_3", 3, 256, 256, 1, 1),
        (Relu, "relu3_3", 1, 0, 0, 1, 0),
        (MaxPool, "pool3", 2, 0, 0, 2, 0),
        (Conv, "conv4_1", 3, 256, 512, 1, 1),
        (Relu, "relu4_1", 1, 0, 0, 1, 0),
        (Conv, "conv4_2", 3, 512, 512, 1, 1),
        (Relu, "relu4_2", 1, 0, 0, 1, 0),
        (Conv, "conv4_3", 3, 512, 512, 1, 1),
        (Relu, "relu4_3", 1, 0, 0, 1, 0),
        (MaxPool, "pool4", 2, 0, 0, 2, 0),
        (Conv, "conv5_1", 3, 512, 512, 1, 1),
        (Relu, "relu5_1", 1, 0, 0, 1, 0),
        (Conv, "conv5_2", 3, 512, 512, 1, 1),
        (Relu, "relu5_2", 1, 0, 0, 1, 0),
        (Conv, "conv5_3", 3, 512, 512, 1, 1),
        (Relu, "relu5_3", 1, 0, 0, 1, 0),
        (MaxPool, "pool5", 2, 0, 0, 2, 0),
        (Conv, "fc6", 7, 512, 4096, 1, 0),
        (Relu, "relu6", 1, 0, 0, 1, 0),
        (Conv, "fc7", 1, 4096, 4096, 1, 0),
        (Relu, "relu7", 1, 0, 0, 1, 0),
        (Conv, "fc8", 1, 4096, 2622, 1, 0),
        (Softmax, "prob", 1, 0, 0, 1, 0),
    ]
};

/// Names whose presence marks a network as the full VGG-face table.
const CANONICAL_MARKERS: [&str; 4] = ["fc6", "fc7", "fc8", "prob"];

/// The VGG-face layer table.
pub fn vgg_face_specs() -> Vec<LayerSpec> {
    VGG_FACE_ROWS
        .iter()
        .map(|&(kind, name, support, filt_dim, num_filts, stride, pad)| {
            LayerSpec::new(name, kind, support, filt_dim, num_filts, stride, pad)
        })
        .collect()
}

/// Checks a layer whose name appears in the VGG-face table against its row.
/// Layers with other names pass unchanged.
pub fn check_reserved_name(spec: &LayerSpec) -> Result<()> {
    let Some(row) = vgg_face_specs().into_iter().skip(1).find(|r| r.name == spec.name) else {
        return Ok(());
    };
    compare_rows(&row, spec)
}

fn compare_rows(expected: &LayerSpec, found: &LayerSpec) -> Result<()> {
    let mismatch = |what: &str, e: String, f: String| Error::ShapeMismatch {
        layer: found.name.clone(),
        expected: format!("{what} {e}"),
        found: format!("{what} {f}"),
    };
    if expected.kind != found.kind {
        return Err(mismatch(
            "type",
            expected.kind.label().to_string(),
            found.kind.label().to_string(),
        ));
    }
    for ((what, e), (_, f)) in expected.fields().into_iter().zip(found.fields()) {
        if e != f {
            return Err(mismatch(what, e.to_string(), f.to_string()));
        }
    }
    Ok(())
}

/// Spatial side and channel count of an activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub side: usize,
    pub channels: usize,
}

/// Validates a layer list and returns the output shape of every layer.
///
/// The first layer must be the input layer and no other layer may be one.
/// Conv layers must consume the current channel count; pooling windows must
/// tile the input exactly. Layers named as in the VGG-face table must match
/// their row, and a list containing any of fc6, fc7, fc8 or prob must be the
/// whole table in order.
pub fn infer_shapes(specs: &[LayerSpec]) -> Result<Vec<Shape>> {
    let Some(first) = specs.first() else {
        return Err(Error::InvalidParams("network has no layers".into()));
    };
    if first.kind != LayerKind::Input {
        return Err(Error::ShapeMismatch {
            layer: first.name.clone(),
            expected: "type input".into(),
            found: format!("type {}", first.kind.label()),
        });
    }
    if first.support == 0 || first.num_filts == 0 {
        return Err(Error::ShapeMismatch {
            layer: first.name.clone(),
            expected: "non-zero input side and channels".into(),
            found: format!("side {} channels {}", first.support, first.num_filts),
        });
    }
    for (i, s) in specs.iter().enumerate() {
        if specs[..i].iter().any(|p| p.name == s.name) {
            return Err(Error::InvalidParams(format!("duplicate layer name {}", s.name)));
        }
        check_reserved_name(s)?;
    }
    if specs
        .iter()
        .any(|s| CANONICAL_MARKERS.contains(&s.name.as_str()))
    {
        let table = vgg_face_specs();
        if specs.len() != table.len() {
            return Err(Error::ShapeMismatch {
                layer: "network".into(),
                expected: format!("{} layers", table.len()),
                found: format!("{} layers", specs.len()),
            });
        }
        for (e, f) in table.iter().zip(specs) {
            if e.name != f.name {
                return Err(Error::ShapeMismatch {
                    layer: f.name.clone(),
                    expected: format!("name {}", e.name),
                    found: format!("name {}", f.name),
                });
            }
            compare_rows(e, f)?;
        }
    }

    let mut shape = Shape {
        side: first.support,
        channels: first.num_filts,
    };
    let mut shapes = vec![shape];
    for s in &specs[1..] {
        let err = |expected: String, found: String| Error::ShapeMismatch {
            layer: s.name.clone(),
            expected,
            found,
        };
        shape = match s.kind {
            LayerKind::Input => {
                return Err(err("a single leading input layer".into(), "another input layer".into()))
            }
            LayerKind::Conv => {
                if s.filt_dim != shape.channels {
                    return Err(err(
                        format!("filt dim {}", shape.channels),
                        format!("filt dim {}", s.filt_dim),
                    ));
                }
                if s.support == 0 || s.stride == 0 || s.num_filts == 0 {
                    return Err(err(
                        "non-zero support, stride and num filts".into(),
                        format!(
                            "support {} stride {} num filts {}",
                            s.support, s.stride, s.num_filts
                        ),
                    ));
                }
                let padded = shape.side + 2 * s.pad;
                if padded < s.support {
                    return Err(err(
                        format!("padded input side >= {}", s.support),
                        format!("padded input side {padded}"),
                    ));
                }
                Shape {
                    side: (padded - s.support) / s.stride + 1,
                    channels: s.num_filts,
                }
            }
            LayerKind::MaxPool => {
                if s.support == 0 || s.stride == 0 || s.pad != 0 {
                    return Err(err(
                        "non-zero support and stride, no padding".into(),
                        format!("support {} stride {} pad {}", s.support, s.stride, s.pad),
                    ));
                }
                if shape.side < s.support || (shape.side - s.support) % s.stride != 0 {
                    return Err(err(
                        format!(
                            "input side covered exactly by {}x{} windows with stride {}",
                            s.support, s.support, s.stride
                        ),
                        format!("input side {}", shape.side),
                    ));
                }
                Shape {
                    side: (shape.side - s.support) / s.stride + 1,
                    channels: shape.channels,
                }
            }
            LayerKind::Relu | LayerKind::Softmax => shape,
        };
        shapes.push(shape);
    }
    Ok(shapes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationTensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f32>,
}

impl ActivationTensor {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != height * width * channels {
            return Err(Error::DimensionMismatch {
                expected: height * width * channels,
                found: data.len(),
            });
        }
        Ok(ActivationTensor {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        ActivationTensor {
            height,
            width,
            channels,
            data: vec![0.0; height * width * channels],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    pub fn get(&self, y: usize, x: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    spec: LayerSpec,
    /// Conv kernels packed `[out][ky][kx][in]`.
    kernels: Vec<f32>,
    bias: Vec<f32>,
}

impl Layer {
    /// Builds a layer from weights in file order `[out][in][ky][kx]`.
    pub fn new(spec: LayerSpec, weights: Vec<f32>, bias: Vec<f32>) -> Result<Self> {
        if weights.len() != spec.weight_count() || bias.len() != spec.bias_count() {
            return Err(Error::ShapeMismatch {
                layer: spec.name.clone(),
                expected: format!(
                    "{} weights and {} biases",
                    spec.weight_count(),
                    spec.bias_count()
                ),
                found: format!("{} weights and {} biases", weights.len(), bias.len()),
            });
        }
        let (k, c) = (spec.support, spec.filt_dim);
        let kk = k * k * c;
        let mut kernels = vec![0.0; weights.len()];
        for o in 0..spec.num_filts {
            for i in 0..c {
                for ky in 0..k {
                    for kx in 0..k {
                        kernels[o * kk + (ky * k + kx) * c + i] =
                            weights[((o * c + i) * k + ky) * k + kx];
                    }
                }
            }
        }
        Ok(Layer {
            spec,
            kernels,
            bias,
        })
    }

    /// A layer without parameters.
    pub fn plain(spec: LayerSpec) -> Result<Self> {
        Self::new(spec, Vec::new(), Vec::new())
    }

    pub fn spec(&self) -> &LayerSpec {
        &self.spec
    }

    pub fn bias(&self) -> &[f32] {
        &self.bias
    }

    /// Kernel weights in file order `[out][in][ky][kx]`.
    pub fn weights(&self) -> Vec<f32> {
        let (k, c) = (self.spec.support, self.spec.filt_dim);
        let kk = k * k * c;
        let mut out = vec![0.0; self.kernels.len()];
        for o in 0..self.spec.num_filts {
            for i in 0..c {
                for ky in 0..k {
                    for kx in 0..k {
                        out[((o * c + i) * k + ky) * k + kx] =
                            self.kernels[o * kk + (ky * k + kx) * c + i];
                    }
                }
            }
        }
        out
    }

    /// Weight in file indexing.
    pub fn weight(&self, o: usize, i: usize, ky: usize, kx: usize) -> f32 {
        let (k, c) = (self.spec.support, self.spec.filt_dim);
        self.kernels[o * k * k * c + (ky * k + kx) * c + i]
    }
}

/// A validated layer list with the preprocessing mean.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWeights {
    mean: [f32; 3],
    layers: Vec<Layer>,
    shapes: Vec<Shape>,
}

impl NetworkWeights {
    pub fn new(mean: [f32; 3], layers: Vec<Layer>) -> Result<Self> {
        let specs: Vec<LayerSpec> = layers.iter().map(|l| l.spec.clone()).collect();
        let shapes = infer_shapes(&specs)?;
        Ok(NetworkWeights {
            mean,
            layers,
            shapes,
        })
    }

    pub fn mean(&self) -> [f32; 3] {
        self.mean
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(|l| l.spec.clone()).collect()
    }

    /// Output shape of every layer.
    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn input_shape(&self) -> Shape {
        self.shapes[0]
    }

    pub fn layer_index(&self, name: &str) -> Result<usize> {
        self.layers
            .iter()
            .position(|l| l.spec.name == name)
            .ok_or_else(|| Error::UnknownLayer(name.into()))
    }
}

/// Subtracts the per-channel mean from an RGB frame sized for the network.
pub fn preprocess(frame: &Frame, net: &NetworkWeights) -> Result<ActivationTensor> {
    let input = net.input_shape();
    if frame.channels() != 3
        || input.channels != 3
        || frame.width() != input.side
        || frame.height() != input.side
    {
        return Err(Error::InvalidFrame(format!(
            "network expects {0}x{0}x{1}, got {2}x{3}x{4}",
            input.side,
            input.channels,
            frame.width(),
            frame.height(),
            frame.channels()
        )));
    }
    let mean = net.mean();
    let data = frame
        .data()
        .iter()
        .enumerate()
        .map(|(i, &v)| v as f32 - mean[i % 3])
        .collect();
    ActivationTensor::new(frame.height(), frame.width(), 3, data)
}

/// Runs the network up to and including the layer named `stop_at`.
pub fn forward(input: &ActivationTensor, net: &NetworkWeights, stop_at: &str) -> Result<ActivationTensor> {
    let stop = net.layer_index(stop_at)?;
    let shape = net.input_shape();
    if input.height != shape.side || input.width != shape.side || input.channels != shape.channels {
        return Err(Error::InvalidFrame(format!(
            "network expects {0}x{0}x{1} input, got {2}x{3}x{4}",
            shape.side, shape.channels, input.height, input.width, input.channels
        )));
    }
    let mut act = input.clone();
    for layer in &net.layers[1..=stop] {
        act = apply(layer, act);
    }
    Ok(act)
}

fn apply(layer: &Layer, act: ActivationTensor) -> ActivationTensor {
    match layer.spec.kind {
        LayerKind::Input => act,
        LayerKind::Conv => conv(layer, &act),
        LayerKind::Relu => relu(act),
        LayerKind::MaxPool => max_pool(&act, layer.spec.support, layer.spec.stride),
        LayerKind::Softmax => softmax(act),
    }
}

/// Output pixels that share one pass over a kernel row.
const TILE: usize = 8;

fn conv(layer: &Layer, act: &ActivationTensor) -> ActivationTensor {
    let s = &layer.spec;
    let (k, stride, pad, c, out_c) = (s.support, s.stride, s.pad, s.filt_dim, s.num_filts);
    let oh = (act.height + 2 * pad - k) / stride + 1;
    let ow = (act.width + 2 * pad - k) / stride + 1;
    let kk = k * k * c;
    let mut out = ActivationTensor::zeros(oh, ow, out_c);
    let mut patches = vec![0.0f32; TILE * kk];
    for oy in 0..oh {
        for ox0 in (0..ow).step_by(TILE) {
            let n = TILE.min(ow - ox0);
            for j in 0..n {
                let patch = &mut patches[j * kk..(j + 1) * kk];
                let ox = ox0 + j;
                for ky in 0..k {
                    let iy = (oy * stride + ky) as isize - pad as isize;
                    for kx in 0..k {
                        let ix = (ox * stride + kx) as isize - pad as isize;
                        let dst = &mut patch[(ky * k + kx) * c..(ky * k + kx + 1) * c];
                        if iy < 0 || ix < 0 || iy as usize >= act.height || ix as usize >= act.width {
                            dst.fill(0.0);
                        } else {
                            let base = (iy as usize * act.width + ix as usize) * c;
                            dst.copy_from_slice(&act.data[base..base + c]);
                        }
                    }
                }
            }
            for o in 0..out_c {
                let kernel = &layer.kernels[o * kk..(o + 1) * kk];
                for j in 0..n {
                    let v = layer.bias[o] + dot_f32(kernel, &patches[j * kk..(j + 1) * kk]);
                    out.data[(oy * ow + ox0 + j) * out_c + o] = v;
                }
            }
        }
    }
    out
}

/// Dot product with eight independent partial sums.
fn dot_f32(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0.0f32; 8];
    let (ca, ra) = a.split_at(a.len() / 8 * 8);
    let (cb, rb) = b.split_at(ca.len());
    for (x, y) in ca.chunks_exact(8).zip(cb.chunks_exact(8)) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    let tail: f32 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

fn relu(mut act: ActivationTensor) -> ActivationTensor {
    act.data.iter_mut().for_each(|v| *v = v.max(0.0));
    act
}

fn max_pool(act: &ActivationTensor, k: usize, stride: usize) -> ActivationTensor {
    let oh = (act.height - k) / stride + 1;
    let ow = (act.width - k) / stride + 1;
    let c = act.channels;
    let mut out = ActivationTensor::zeros(oh, ow, c);
    for oy in 0..oh {
        for ox in 0..ow {
            let dst = &mut out.data[(oy * ow + ox) * c..(oy * ow + ox + 1) * c];
            dst.fill(f32::NEG_INFINITY);
            for ky in 0..k {
                for kx in 0..k {
                    let base = ((oy * stride + ky) * act.width + ox * stride + kx) * c;
                    for (d, &v) in dst.iter_mut().zip(&act.data[base..base + c]) {
                        *d = d.max(v);
                    }
                }
            }
        }
    }
    out
}

/// Softmax over channels at every spatial position.
fn softmax(mut act: ActivationTensor) -> ActivationTensor {
    let c = act.channels;
    for px in act.data.chunks_exact_mut(c) {
        let max = px.iter().fold(f32::NEG_INFINITY, |m, &v| m.max(v)) as f64;
        let exps: Vec<f64> = px.iter().map(|&v| libm::exp(v as f64 - max)).collect();
        let total: f64 = exps.iter().sum();
        for (d, e) in px.iter_mut().zip(exps) {
            *d = (e / total) as f32;
        }
    }
    act
}

/// Indices of the frames used with a sampling stride.
pub fn sampled_frames(frames: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..frames).step_by(stride.max(1))
}

/// Network input for frame `t`: the RGB frame, or the gray frame replicated
/// over three channels when the video has no colour.
pub fn frame_input(video: &FaceVideo, t: usize, net: &NetworkWeights) -> Result<ActivationTensor> {
    let frame = video.frame(t);
    if frame.channels() == 3 {
        return preprocess(&frame, net);
    }
    let rgb = frame.data().iter().flat_map(|&v| [v, v, v]).collect();
    preprocess(&Frame::new(frame.width(), frame.height(), 3, rgb)?, net)
}

/// Mean of per-frame activations, summed in the given order in `f64`.
pub fn average_in_order(per_frame: &[ActivationTensor]) -> Result<Vec<f64>> {
    let Some(first) = per_frame.first() else {
        return Err(Error::EmptyVideo);
    };
    let mut sum = vec![0.0f64; first.data.len()];
    for a in per_frame {
        if a.data.len() != sum.len() {
            return Err(Error::DimensionMismatch {
                expected: sum.len(),
                found: a.data.len(),
            });
        }
        sum.iter_mut().zip(&a.data).for_each(|(s, &v)| *s += v as f64);
    }
    let n = per_frame.len() as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Ok(sum)
}

/// Descriptor tag for activations of `layer`.
pub fn deep_tag(layer: &str) -> String {
    format!("DEEP[{layer}]")
}

/// Averages the `stop_at` activations of every `stride`-th frame.
pub fn extract_video_feature(
    video: &FaceVideo,
    net: &NetworkWeights,
    stop_at: &str,
    stride: usize,
) -> Result<FeatureVector> {
    net.layer_index(stop_at)?;
    let per_frame = sampled_frames(video.frames(), stride)
        .map(|t| forward(&frame_input(video, t, net)?, net, stop_at))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureVector::new(deep_tag(stop_at), average_in_order(&per_frame)?))
}

/// Frame-averaged fc7 descriptor over every frame.
pub fn extract_fc7_video(video: &FaceVideo, net: &NetworkWeights) -> Result<FeatureVector> {
    extract_video_feature(video, net, "fc7", 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_vec(n: usize, rng: &mut SplitMix64) -> Vec<f32> {
        (0..n).map(|_| rng.normal() as f32 * 0.5).collect()
    }

    fn tiny_net(seed: u64) -> NetworkWeights {
        let mut rng = SplitMix64::new(seed);
        let conv = LayerSpec::conv("c1", 3, 2, 4, 1, 1);
        let w = random_vec(conv.weight_count(), &mut rng);
        let b = random_vec(4, &mut rng);
        NetworkWeights::new(
            [0.0; 3],
            vec![
                Layer::plain(LayerSpec::input(8, 2)).unwrap(),
                Layer::new(conv, w, b).unwrap(),
                Layer::plain(LayerSpec::relu("r1")).unwrap(),
                Layer::plain(LayerSpec::max_pool("p1")).unwrap(),
                Layer::plain(LayerSpec::softmax("prob1")).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn canonical_shape_chain() {
        let specs = vgg_face_specs();
        assert_eq!(specs.len(), 38);
        let shapes = infer_shapes(&specs).unwrap();
        let pools: Vec<usize> = specs
            .iter()
            .zip(&shapes)
            .filter(|(s, _)| s.kind == LayerKind::MaxPool)
            .map(|(_, sh)| sh.side)
            .collect();
        assert_eq!(pools, [112, 56, 28, 14, 7]);
        let at = |n: &str| shapes[specs.iter().position(|s| s.name == n).unwrap()];
        assert_eq!(at("pool5"), Shape { side: 7, channels: 512 });
        assert_eq!(at("fc6"), Shape { side: 1, channels: 4096 });
        assert_eq!(at("fc7"), Shape { side: 1, channels: 4096 });
        assert_eq!(at("prob"), Shape { side: 1, channels: 2622 });
        assert_eq!(specs.iter().filter(|s| s.kind == LayerKind::Conv).count(), 16);
    }

    #[test]
    fn fc8_mismatch_names_layer() {
        let mut specs = vgg_face_specs();
        specs[36].num_filts = 1000;
        match infer_shapes(&specs).unwrap_err() {
            Error::ShapeMismatch { layer, expected, found } => {
                assert_eq!(layer, "fc8");
                assert_eq!(expected, "num filts 2622");
                assert_eq!(found, "num filts 1000");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn truncated_canonical_table_rejected() {
        let mut specs = vgg_face_specs();
        specs.pop();
        assert!(infer_shapes(&specs).is_err());
    }

    #[test]
    fn chain_mismatch_rejected() {
        let specs = [
            LayerSpec::input(8, 2),
            LayerSpec::conv("a", 3, 2, 4, 1, 1),
            LayerSpec::conv("b", 3, 3, 4, 1, 1),
        ];
        assert!(matches!(
            infer_shapes(&specs).unwrap_err(),
            Error::ShapeMismatch { layer, .. } if layer == "b"
        ));
    }

    #[test]
    fn incomplete_pool_window_rejected() {
        let specs = [LayerSpec::input(7, 1), LayerSpec::max_pool("p")];
        assert!(infer_shapes(&specs).is_err());
    }

    #[test]
    fn weight_layout_round_trips() {
        let mut rng = SplitMix64::new(3);
        let spec = LayerSpec::conv("c", 3, 2, 5, 1, 0);
        let w = random_vec(spec.weight_count(), &mut rng);
        let layer = Layer::new(spec, w.clone(), vec![0.0; 5]).unwrap();
        assert_eq!(layer.weights(), w);
        assert_eq!(layer.weight(4, 1, 2, 0), w[((4 * 2 + 1) * 3 + 2) * 3]);
    }

    #[test]
    fn softmax_is_a_distribution() {
        let net = tiny_net(1);
        let mut rng = SplitMix64::new(2);
        let input = ActivationTensor::new(8, 8, 2, random_vec(128, &mut rng)).unwrap();
        let out = forward(&input, &net, "prob1").unwrap();
        assert_eq!((out.height(), out.width(), out.channels()), (4, 4, 4));
        for px in out.data().chunks_exact(4) {
            assert!(px.iter().all(|&v| v >= 0.0));
            assert!((px.iter().map(|&v| v as f64).sum::<f64>() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn relu_is_idempotent() {
        let mut rng = SplitMix64::new(5);
        let t = ActivationTensor::new(3, 3, 2, random_vec(18, &mut rng)).unwrap();
        let once = relu(t);
        assert_eq!(relu(once.clone()), once);
    }

    #[test]
    fn unknown_stop_layer() {
        let net = tiny_net(1);
        let input = ActivationTensor::zeros(8, 8, 2);
        assert_eq!(
            forward(&input, &net, "fc7").unwrap_err(),
            Error::UnknownLayer("fc7".into())
        );
    }

    #[test]
    fn preprocess_subtracts_mean() {
        let net = NetworkWeights::new(
            [129.2, 104.8, 93.6],
            vec![Layer::plain(LayerSpec::input(2, 3)).unwrap()],
        )
        .unwrap();
        let mut data = vec![0u8; 12];
        data[..3].copy_from_slice(&[130, 100, 90]);
        let t = preprocess(&Frame::new(2, 2, 3, data).unwrap(), &net).unwrap();
        let got = [t.get(0, 0, 0), t.get(0, 0, 1), t.get(0, 0, 2)];
        for (g, e) in got.iter().zip([0.8f32, -4.8, -3.6]) {
            assert!((g - e).abs() < 1e-5, "{got:?}");
        }
        assert!(preprocess(&Frame::new(3, 3, 3, vec![0; 27]).unwrap(), &net).is_err());
    }

    #[test]
    fn empty_average_is_an_error() {
        assert_eq!(average_in_order(&[]).unwrap_err(), Error::EmptyVideo);
    }
}
