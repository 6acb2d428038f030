//! VGGW1 network files, little-endian:
//!
//! ```text
//! "VGGW1" | mean: 3 x f32 | layer count: u32
//! per layer: name length: u16 | name: UTF-8 | type tag: u8 |
//!            support, filt_dim, num_filts, stride, pad: u32 each |
//!            conv only: weights f32 [out][in][ky][kx], biases f32 [out]
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use kinvid_core::deep::{check_reserved_name, Layer, LayerKind, LayerSpec, NetworkWeights};

use crate::{Error, Result};

pub const MAGIC: &[u8; 5] = b"VGGW1";

struct Source<R> {
    inner: R,
}

impl<R: Read> Source<R> {
    fn bytes(&mut self, n: usize, what: &str) -> std::result::Result<Vec<u8>, String> {
        let mut buf = vec![0u8; n];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| format!("truncated file while reading {what}: {e}"))?;
        Ok(buf)
    }

    fn u32(&mut self, what: &str) -> std::result::Result<u32, String> {
        let b = self.bytes(4, what)?;
        Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")))
    }

    fn f32s(&mut self, n: usize, what: &str) -> std::result::Result<Vec<f32>, String> {
        let bytes = self.bytes(4 * n, what)?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect())
    }
}

/// Parses a VGGW1 stream. Layers named as in the VGG-face table are checked
/// against their row before their weights are read.
pub fn parse_weights(reader: impl Read) -> std::result::Result<NetworkWeights, ParseError> {
    let mut src = Source { inner: reader };
    let magic = src.bytes(5, "magic")?;
    if magic != MAGIC {
        return Err(format!("bad magic {:?}, expected \"VGGW1\"", String::from_utf8_lossy(&magic)).into());
    }
    let mean: [f32; 3] = src.f32s(3, "mean")?.try_into().expect("3 values");
    let count = src.u32("layer count")? as usize;
    let mut layers = Vec::with_capacity(count.min(1024));
    for index in 0..count {
        let len_bytes = src.bytes(2, &format!("layer {index} name length"))?;
        let len = u16::from_le_bytes([len_bytes[0], len_bytes[1]]) as usize;
        let name = String::from_utf8(src.bytes(len, &format!("layer {index} name"))?)
            .map_err(|_| format!("layer {index} name is not UTF-8"))?;
        let tag = src.bytes(1, &format!("layer {name} type"))?[0];
        let kind = LayerKind::from_tag(tag).ok_or_else(|| format!("layer {name} has unknown type tag {tag}"))?;
        let mut fields = [0usize; 5];
        for f in &mut fields {
            *f = src.u32(&format!("layer {name} header"))? as usize;
        }
        let [support, filt_dim, num_filts, stride, pad] = fields;
        let spec = LayerSpec::new(name, kind, support, filt_dim, num_filts, stride, pad);
        check_reserved_name(&spec)?;
        let what = format!("layer {} weights", spec.name);
        let weights = src.f32s(spec.weight_count(), &what)?;
        let bias = src.f32s(spec.bias_count(), &what)?;
        layers.push(Layer::new(spec, weights, bias)?);
    }
    let mut rest = [0u8; 1];
    if src.inner.read(&mut rest).map_err(|e| e.to_string())? != 0 {
        return Err("trailing bytes after the last layer".to_string().into());
    }
    Ok(NetworkWeights::new(mean, layers)?)
}

/// Format problem or network validation failure while parsing.
#[derive(Debug)]
pub enum ParseError {
    Format(String),
    Network(kinvid_core::Error),
}

impl From<String> for ParseError {
    fn from(m: String) -> Self {
        ParseError::Format(m)
    }
}

impl From<kinvid_core::Error> for ParseError {
    fn from(e: kinvid_core::Error) -> Self {
        ParseError::Network(e)
    }
}

pub fn read_weights(path: &Path) -> Result<NetworkWeights> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_weights(BufReader::new(file)).map_err(|e| match e {
        ParseError::Format(m) => Error::format(path, m),
        ParseError::Network(e) => Error::context(path, e),
    })
}

pub fn encode_weights(net: &NetworkWeights, out: &mut impl Write) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    for m in net.mean() {
        out.write_all(&m.to_le_bytes())?;
    }
    out.write_all(&(net.layers().len() as u32).to_le_bytes())?;
    for layer in net.layers() {
        let s = layer.spec();
        out.write_all(&(s.name.len() as u16).to_le_bytes())?;
        out.write_all(s.name.as_bytes())?;
        out.write_all(&[s.kind.tag()])?;
        for f in [s.support, s.filt_dim, s.num_filts, s.stride, s.pad] {
            out.write_all(&(f as u32).to_le_bytes())?;
        }
        for v in layer.weights().iter().chain(layer.bias()) {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn write_weights(path: &Path, net: &NetworkWeights) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode_weights(net, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
