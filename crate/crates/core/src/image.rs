//! Frames, grayscale planes and face video volumes.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Single-channel 8-bit image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidFrame(format!("empty image {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0);
        GrayImage {
            width,
            height,
            data: alloc::vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0);
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        GrayImage {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }
}

/// Raw frame with 1 (gray) or 3 (RGB, interleaved) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidFrame(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidFrame(format!("empty frame {width}x{height}")));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height}x{channels} frame needs {} samples, got {}",
                width * height * channels,
                data.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }
}

impl From<GrayImage> for Frame {
    fn from(img: GrayImage) -> Self {
        Frame {
            width: img.width,
            height: img.height,
            channels: 1,
            data: img.data,
        }
    }
}

/// BT.601 luma with round-half-up: `(299 R + 587 G + 114 B + 500) / 1000`.
#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let sum = 299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500;
    (sum / 1000).min(255) as u8
}

/// Converts a frame to one channel; gray frames pass through unchanged.
pub fn to_gray(frame: &Frame) -> Frame {
    if frame.channels == 1 {
        return frame.clone();
    }
    let data = frame
        .data
        .chunks_exact(3)
        .map(|px| luma(px[0], px[1], px[2]))
        .collect();
    Frame {
        width: frame.width,
        height: frame.height,
        channels: 1,
        data,
    }
}

/// Immutable `T x H x W` grayscale volume with optional RGB companion.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceVideo {
    frames: usize,
    height: usize,
    width: usize,
    gray: Vec<u8>,
    rgb: Option<Vec<u8>>,
    fps: f64,
}

impl FaceVideo {
    /// Builds a volume from raw volumes laid out `[t][y][x]` (and `[t][y][x][c]`).
    pub fn from_volume(
        frames: usize,
        height: usize,
        width: usize,
        gray: Vec<u8>,
        rgb: Option<Vec<u8>>,
        fps: f64,
    ) -> Result<Self> {
        if frames == 0 || height == 0 || width == 0 {
            return Err(Error::InvalidVideo(format!(
                "empty volume {frames}x{height}x{width}"
            )));
        }
        let n = frames * height * width;
        if gray.len() != n {
            return Err(Error::InvalidVideo(format!(
                "gray volume needs {n} samples, got {}",
                gray.len()
            )));
        }
        if let Some(rgb) = &rgb {
            if rgb.len() != 3 * n {
                return Err(Error::InvalidVideo(format!(
                    "rgb volume needs {} samples, got {}",
                    3 * n,
                    rgb.len()
                )));
            }
        }
        Ok(FaceVideo {
            frames,
            height,
            width,
            gray,
            rgb,
            fps,
        })
    }

    /// Stacks frames of identical size. RGB is kept when every frame is RGB.
    pub fn from_frames(frames: &[Frame], fps: f64) -> Result<Self> {
        let first = frames.first().ok_or(Error::EmptyVideo)?;
        let (w, h) = (first.width, first.height);
        let keep_rgb = frames.iter().all(|f| f.channels == 3);
        let mut gray = Vec::with_capacity(frames.len() * w * h);
        let mut rgb = keep_rgb.then(|| Vec::with_capacity(frames.len() * w * h * 3));
        for (i, f) in frames.iter().enumerate() {
            if f.width != w || f.height != h {
                return Err(Error::InvalidVideo(format!(
                    "frame {i} is {}x{}, expected {w}x{h}",
                    f.width, f.height
                )));
            }
            gray.extend_from_slice(to_gray(f).data());
            if let Some(rgb) = rgb.as_mut() {
                rgb.extend_from_slice(&f.data);
            }
        }
        FaceVideo::from_volume(frames.len(), h, w, gray, rgb, fps)
    }

    pub fn from_gray_frames(frames: &[GrayImage], fps: f64) -> Result<Self> {
        let converted: Vec<Frame> = frames.iter().cloned().map(Frame::from).collect();
        FaceVideo::from_frames(&converted, fps)
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn gray(&self) -> &[u8] {
        &self.gray
    }

    pub fn rgb(&self) -> Option<&[u8]> {
        self.rgb.as_deref()
    }

    #[inline]
    pub fn at(&self, t: usize, y: usize, x: usize) -> u8 {
        self.gray[(t * self.height + y) * self.width + x]
    }

    pub fn gray_frame(&self, t: usize) -> GrayImage {
        let n = self.height * self.width;
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.gray[t * n..(t + 1) * n].to_vec(),
        }
    }

    /// Frame `t` in its richest form: RGB when available, gray otherwise.
    pub fn frame(&self, t: usize) -> Frame {
        let n = self.height * self.width;
        match &self.rgb {
            Some(rgb) => Frame {
                width: self.width,
                height: self.height,
                channels: 3,
                data: rgb[3 * t * n..3 * (t + 1) * n].to_vec(),
            },
            None => self.gray_frame(t).into(),
        }
    }

    pub fn gray_frames(&self) -> Vec<GrayImage> {
        (0..self.frames).map(|t| self.gray_frame(t)).collect()
    }

    /// Copy of the video with frames reordered (`order[i]` = source frame of frame `i`).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.frames {
            return Err(Error::DimensionMismatch {
                expected: self.frames,
                found: order.len(),
            });
        }
        let n = self.height * self.width;
        let mut gray = Vec::with_capacity(self.gray.len());
        for &t in order {
            gray.extend_from_slice(&self.gray[t * n..(t + 1) * n]);
        }
        let rgb = self.rgb.as_ref().map(|rgb| {
            let mut out = Vec::with_capacity(rgb.len());
            for &t in order {
                out.extend_from_slice(&rgb[3 * t * n..3 * (t + 1) * n]);
            }
            out
        });
        FaceVideo::from_volume(self.frames, self.height, self.width, gray, rgb, self.fps)
    }
}
