use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_size, CodeImage, SIGN_TOLERANCE};
use crate::image::GrayImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpqParams {
    /// Odd window side `W >= 3`.
    pub window: usize,
}

impl LpqParams {
    pub fn new(window: usize) -> Result<Self> {
        if window < 3 || window % 2 == 0 {
            return Err(Error::InvalidParams(format!(
                "LPQ window must be odd and >= 3, got {window}"
            )));
        }
        Ok(LpqParams { window })
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    #[inline]
    fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    #[inline]
    fn conj(self) -> Complex {
        Complex {
            re: self.re,
            im: -self.im,
        }
    }

    #[inline]
    fn scale(self, s: f64) -> Complex {
        Complex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    #[inline]
    fn add(self, o: Complex) -> Complex {
        Complex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

/// LPQ code image without Gaussian weighting or decorrelation.
///
/// At every pixel the window's STFT is evaluated at `u1 = (a, 0)`,
/// `u2 = (0, a)`, `u3 = (a, a)` and `u4 = (a, -a)` with `a = 1/W`, where the
/// first component is the horizontal frequency and offsets run over
/// `-(W-1)/2 ..= (W-1)/2`:
///
/// `F(u) = sum_{dy,dx} f(y+dy, x+dx) exp(-2 pi i (u_x dx + u_y dy))`.
///
/// Bits 0..=3 are the signs of `Re F(u1..u4)`, bits 4..=7 the signs of the
/// imaginary parts; a bit is set when the value is `>= 0`.
///
/// The transform is separable; rows are filtered first, then columns.
pub fn lpq_code(image: &GrayImage, params: &LpqParams) -> Result<CodeImage> {
    let win = params.window;
    check_size(image, win, "LPQ")?;
    let r = (win - 1) / 2;
    let a = 1.0 / win as f64;
    // w1[k] = exp(-2 pi i a (k - r))
    let w1: Vec<Complex> = (0..win)
        .map(|k| {
            let phase = -2.0 * PI * a * (k as f64 - r as f64);
            Complex {
                re: libm::cos(phase),
                im: libm::sin(phase),
            }
        })
        .collect();

    let (w, h) = (image.width(), image.height());
    let data = image.data();
    // horizontal pass on interior columns: plain sum and w1-weighted sum
    let mut h0 = alloc::vec![0.0f64; w * h];
    let mut h1 = alloc::vec![Complex::default(); w * h];
    for y in 0..h {
        let row = &data[y * w..(y + 1) * w];
        for x in r..w - r {
            let mut s0 = 0.0;
            let mut s1 = Complex::default();
            for (k, wk) in w1.iter().enumerate() {
                let v = row[x + k - r] as f64;
                s0 += v;
                s1 = s1.add(wk.scale(v));
            }
            h0[y * w + x] = s0;
            h1[y * w + x] = s1;
        }
    }

    let mut out = CodeImage::new(w, h, 256, r);
    for y in r..h - r {
        for x in r..w - r {
            let mut f1 = Complex::default();
            let mut f2 = Complex::default();
            let mut f3 = Complex::default();
            let mut f4 = Complex::default();
            for (k, wk) in w1.iter().enumerate() {
                let idx = (y + k - r) * w + x;
                let (g0, g1) = (h0[idx], h1[idx]);
                f1 = f1.add(g1);
                f2 = f2.add(wk.scale(g0));
                f3 = f3.add(g1.mul(*wk));
                f4 = f4.add(g1.mul(wk.conj()));
            }
            let values = [f1.re, f2.re, f3.re, f4.re, f1.im, f2.im, f3.im, f4.im];
            let mut code = 0u32;
            for (bit, v) in values.iter().enumerate() {
                if *v >= -SIGN_TOLERANCE {
                    code |= 1 << bit;
                }
            }
            out.set(x, y, code);
        }
    }
    Ok(out)
}
