//! The `PTMKIT_1.0` map file format, and PPM/PNG raster IO.
//!
//! A `PTMKIT_1.0` file is a five-line ASCII header followed by raw bytes:
//!
//! ```text
//! PTMKIT_1.0
//! RGB                      (or LRGB)
//! <width> <height>
//! <scale_0> ... <scale_5>
//! <bias_0> ... <bias_5>
//! <payload>
//! ```
//!
//! Each header line ends in a single `\n`. Scales and biases are written in
//! the shortest decimal form that parses back to the same `f64`. The payload
//! is the quantized planes in [`QuantizedPtm`] order, `width * height` bytes
//! each, with nothing after the last plane.

use std::io::{self, Cursor, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::ptm::{PtmError, QuantizationParams, QuantizedPtm, Variant, N_COEFFS};
use crate::raster::Raster8;

pub const MAGIC: &str = "PTMKIT_1.0";

/// Longest header line accepted by the reader.
const MAX_HEADER_LINE: usize = 4096;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not a {MAGIC} file (first line {0:?})")]
    BadMagic(String),
    #[error("unknown variant {0:?}, expected RGB or LRGB")]
    BadVariant(String),
    #[error("width and height must be positive, got {0:?}")]
    NonPositiveDimensions(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("payload truncated: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("{0} unexpected bytes after the payload")]
    TrailingData(usize),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ptm(#[from] PtmError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn join_floats(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// The exact header text written before the payload.
pub fn header_text(ptm: &QuantizedPtm) -> String {
    let q = ptm.params();
    format!(
        "{MAGIC}\n{}\n{} {}\n{}\n{}\n",
        ptm.variant().name(),
        ptm.width(),
        ptm.height(),
        join_floats(&q.scale),
        join_floats(&q.bias)
    )
}

pub fn write_ptm(ptm: &QuantizedPtm, mut sink: impl Write) -> io::Result<()> {
    sink.write_all(header_text(ptm).as_bytes())?;
    for plane in ptm.planes() {
        sink.write_all(plane)?;
    }
    sink.flush()
}

pub fn encode_ptm(ptm: &QuantizedPtm) -> Vec<u8> {
    let mut out = Vec::with_capacity(ptm.payload_len() + 256);
    write_ptm(ptm, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// Header fields of a `PTMKIT_1.0` file.
#[derive(Debug, Clone, PartialEq)]
pub struct PtmFileHeader {
    pub variant: Variant,
    pub width: usize,
    pub height: usize,
    pub params: QuantizationParams,
    /// Bytes taken by the header, including the final newline.
    pub len: usize,
}

impl PtmFileHeader {
    pub fn payload_len(&self) -> usize {
        self.width * self.height * self.variant.bytes_per_pixel()
    }
}

struct Lines<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, what: &str) -> Result<&'a str, CodecError> {
        let rest = &self.bytes[self.pos..];
        let window = &rest[..rest.len().min(MAX_HEADER_LINE)];
        let end = window
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| CodecError::MalformedHeader(format!("missing {what} line")))?;
        self.pos += end + 1;
        std::str::from_utf8(&rest[..end])
            .map_err(|_| CodecError::MalformedHeader(format!("{what} line is not text")))
    }
}

fn parse_six(line: &str, what: &str) -> Result<[f64; N_COEFFS], CodecError> {
    let values: Vec<f64> = line
        .split(' ')
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CodecError::MalformedHeader(format!("bad {what} line {line:?}")))?;
    let arr: [f64; N_COEFFS] = values
        .try_into()
        .map_err(|_| CodecError::MalformedHeader(format!("{what} line needs {N_COEFFS} values")))?;
    if !arr.iter().all(|v| v.is_finite()) {
        return Err(CodecError::MalformedHeader(format!("non-finite {what}")));
    }
    Ok(arr)
}

/// Parses the header at the start of `bytes`.
pub fn parse_header(bytes: &[u8]) -> Result<PtmFileHeader, CodecError> {
    let mut lines = Lines { bytes, pos: 0 };

    let magic_end = bytes.iter().take(MAX_HEADER_LINE).position(|&b| b == b'\n');
    let first = &bytes[..magic_end.unwrap_or(bytes.len().min(MAGIC.len() + 8))];
    if first != MAGIC.as_bytes() {
        return Err(CodecError::BadMagic(String::from_utf8_lossy(first).into_owned()));
    }
    lines.next_line("magic")?;

    let variant = match lines.next_line("variant")? {
        "RGB" => Variant::Rgb,
        "LRGB" => Variant::Lrgb,
        other => return Err(CodecError::BadVariant(other.to_string())),
    };

    let dims = lines.next_line("dimensions")?;
    let parsed: Vec<i64> = dims
        .split(' ')
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| CodecError::MalformedHeader(format!("bad dimensions {dims:?}")))?;
    let [w, h] = parsed[..] else {
        return Err(CodecError::MalformedHeader(format!("bad dimensions {dims:?}")));
    };
    if w <= 0 || h <= 0 {
        return Err(CodecError::NonPositiveDimensions(dims.to_string()));
    }
    let (width, height) = (w as usize, h as usize);
    width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(variant.bytes_per_pixel()))
        .ok_or_else(|| CodecError::MalformedHeader(format!("dimensions too large {dims:?}")))?;

    let scale = parse_six(lines.next_line("scale")?, "scale")?;
    if scale.iter().any(|&s| s <= 0.0) {
        return Err(CodecError::MalformedHeader("scales must be positive".into()));
    }
    let bias = parse_six(lines.next_line("bias")?, "bias")?;

    Ok(PtmFileHeader {
        variant,
        width,
        height,
        params: QuantizationParams { scale, bias },
        len: lines.pos,
    })
}

/// Decodes a complete `PTMKIT_1.0` byte buffer.
pub fn decode_ptm(bytes: &[u8]) -> Result<QuantizedPtm, CodecError> {
    let header = parse_header(bytes)?;
    let payload = &bytes[header.len..];
    let expected = header.payload_len();
    if payload.len() < expected {
        return Err(CodecError::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(CodecError::TrailingData(payload.len() - expected));
    }
    let plane_len = header.width * header.height;
    let planes = payload.chunks_exact(plane_len).map(<[u8]>::to_vec).collect();
    Ok(QuantizedPtm::new(
        header.variant,
        header.width,
        header.height,
        header.params,
        planes,
    )?)
}

pub fn read_ptm(mut source: impl Read) -> Result<QuantizedPtm, CodecError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_ptm(&bytes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// Picks the format from a `.ppm` or `.png` extension.
    pub fn from_path(path: &Path) -> Result<Self, CodecError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("ppm") => Ok(ImageFormat::Ppm),
            Some("png") => Ok(ImageFormat::Png),
            _ => Err(CodecError::UnsupportedFormat(format!(
                "{} (expected .ppm or .png)",
                path.display()
            ))),
        }
    }
}

pub fn read_image(mut source: impl Read, format: ImageFormat) -> Result<Raster8, CodecError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    match format {
        ImageFormat::Ppm => decode_ppm(&bytes),
        ImageFormat::Png => decode_png(&bytes),
    }
}

pub fn write_image(img: &Raster8, mut sink: impl Write, format: ImageFormat) -> Result<(), CodecError> {
    match format {
        ImageFormat::Ppm => {
            write!(sink, "P6\n{} {}\n255\n", img.width, img.height)?;
            sink.write_all(img.pixels.as_flattened())?;
        }
        ImageFormat::Png => {
            let (w, h) = (dim_u32(img.width)?, dim_u32(img.height)?);
            let mut enc = png::Encoder::new(&mut sink, w, h);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc.write_header().map_err(png_io)?;
            writer.write_image_data(img.pixels.as_flattened()).map_err(png_io)?;
            writer.finish().map_err(png_io)?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn dim_u32(v: usize) -> Result<u32, CodecError> {
    u32::try_from(v).map_err(|_| CodecError::UnsupportedFormat(format!("dimension {v} too large")))
}

fn png_io(e: png::EncodingError) -> CodecError {
    match e {
        png::EncodingError::IoError(e) => CodecError::Io(e),
        other => CodecError::Malformed(other.to_string()),
    }
}

/// Binary PPM (`P6`) with maxval 255. `#` comments are allowed in the header.
fn decode_ppm(bytes: &[u8]) -> Result<Raster8, CodecError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(CodecError::Malformed("missing PPM signature".into()));
    }
    if bytes[1] != b'6' {
        return Err(CodecError::UnsupportedFormat(format!(
            "netpbm type P{} (only P6 is supported)",
            bytes[1] as char
        )));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CodecError::Malformed("bad PPM header".into()))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(CodecError::UnsupportedFormat(format!("PPM maxval {maxval} (only 255 is supported)")));
    }
    if width == 0 || height == 0 {
        return Err(CodecError::Malformed(format!("PPM size {width}x{height}")));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(CodecError::Malformed("bad PPM header".into()));
    }
    pos += 1;
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| CodecError::Malformed("PPM too large".into()))?;
    let data = &bytes[pos..];
    if data.len() < need {
        return Err(CodecError::Malformed(format!(
            "PPM pixel data truncated: expected {need} bytes, found {}",
            data.len()
        )));
    }
    Ok(Raster8 {
        width,
        height,
        pixels: data[..need].chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
    })
}

/// 8-bit RGB or RGBA PNG; alpha is dropped.
fn decode_png(bytes: &[u8]) -> Result<Raster8, CodecError> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| CodecError::Malformed(e.to_string()))?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight || !matches!(color, png::ColorType::Rgb | png::ColorType::Rgba) {
        return Err(CodecError::UnsupportedFormat(format!("PNG {color:?} at {depth:?} bits")));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| CodecError::Malformed("PNG too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| CodecError::Malformed(e.to_string()))?;
    let channels = if info.color_type == png::ColorType::Rgba { 4 } else { 3 };
    let (w, h) = (info.width as usize, info.height as usize);
    let mut pixels = Vec::with_capacity(w * h);
    for row in buf.chunks(info.line_size).take(h) {
        pixels.extend(row[..w * channels].chunks_exact(channels).map(|c| [c[0], c[1], c[2]]));
    }
    Ok(Raster8 {
        width: w,
        height: h,
        pixels,
    })
}
