//! 8-bit scale/bias storage of coefficient planes.
//!
//! Each coefficient index `i` gets one scale `λ_i` and bias `Ω_i` for the
//! whole map (all channels pooled in RGB maps), and a stored byte `b`
//! reconstructs as `λ_i · (b + Ω_i)`.

use super::{ChromaFactors, CoefficientVector, LrgbPtm, Ptm, PtmError, RgbPtm, Variant, N_COEFFS};

/// Chroma factors in `[0, 3]` are stored as `round(factor * 255 / 3)`.
pub const CHROMA_BYTE_SCALE: f64 = 255.0 / ChromaFactors::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationParams {
    pub scale: [f64; N_COEFFS],
    pub bias: [f64; N_COEFFS],
}

impl QuantizationParams {
    pub fn identity() -> Self {
        Self {
            scale: [1.0; N_COEFFS],
            bias: [0.0; N_COEFFS],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.scale.iter().all(|s| s.is_finite() && *s > 0.0) && self.bias.iter().all(|b| b.is_finite())
    }
}

/// Scale and bias for a set of values: `λ = (max - min) / 255` (or 1 when
/// the range is empty) and `Ω = min / λ`.
fn range_params(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (1.0, 0.0);
    }
    let scale = if hi > lo { (hi - lo) / 255.0 } else { 1.0 };
    (scale, lo / scale)
}

#[inline]
fn quantize_value(a: f64, scale: f64, bias: f64) -> u8 {
    (a / scale - bias).round().clamp(0.0, 255.0) as u8
}

#[inline]
fn dequantize_value(b: u8, scale: f64, bias: f64) -> f64 {
    scale * (f64::from(b) + bias)
}

fn check_finite<'a>(values: impl Iterator<Item = &'a CoefficientVector>) -> Result<(), PtmError> {
    for (pixel, c) in values.enumerate() {
        if let Some(index) = c.0.iter().position(|x| !x.is_finite()) {
            return Err(PtmError::NonFiniteCoefficient { pixel, index });
        }
    }
    Ok(())
}

/// Quantizes one plane on its own range. Returns `(bytes, scale, bias)`.
pub fn quantize_plane(values: &[f64]) -> Result<(Vec<u8>, f64, f64), PtmError> {
    if let Some(pixel) = values.iter().position(|v| !v.is_finite()) {
        return Err(PtmError::NonFiniteCoefficient { pixel, index: 0 });
    }
    let (scale, bias) = range_params(values.iter().copied());
    let bytes = values.iter().map(|&a| quantize_value(a, scale, bias)).collect();
    Ok((bytes, scale, bias))
}

pub fn dequantize_plane(bytes: &[u8], scale: f64, bias: f64) -> Vec<f64> {
    bytes.iter().map(|&b| dequantize_value(b, scale, bias)).collect()
}

/// A map in stored form: byte planes in file order plus their parameters.
///
/// RGB planes are coefficients 0..5 of red, then green, then blue. LRGB
/// planes are luminance coefficients 0..5 followed by the r, g, b chroma
/// planes. Every plane is `width * height` bytes, row-major, top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPtm {
    variant: Variant,
    width: usize,
    height: usize,
    params: QuantizationParams,
    planes: Vec<Vec<u8>>,
}

impl QuantizedPtm {
    pub fn new(
        variant: Variant,
        width: usize,
        height: usize,
        params: QuantizationParams,
        planes: Vec<Vec<u8>>,
    ) -> Result<Self, PtmError> {
        let expected = variant.bytes_per_pixel();
        if planes.len() != expected {
            return Err(PtmError::DimensionMismatch {
                expected,
                found: planes.len(),
            });
        }
        for p in &planes {
            super::check_len(width, height, p.len())?;
        }
        Ok(Self {
            variant,
            width,
            height,
            params,
            planes,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn params(&self) -> &QuantizationParams {
        &self.params
    }

    pub fn planes(&self) -> &[Vec<u8>] {
        &self.planes
    }

    pub fn payload_len(&self) -> usize {
        self.planes.iter().map(Vec::len).sum()
    }

    /// Quantizes a map. Fails if any coefficient is NaN or infinite.
    pub fn quantize(ptm: &Ptm) -> Result<Self, PtmError> {
        let (w, h) = (ptm.width(), ptm.height());
        match ptm {
            Ptm::Rgb(p) => {
                check_finite(p.pixels().iter().flatten())?;
                let mut params = QuantizationParams::identity();
                for i in 0..N_COEFFS {
                    let pooled = p.pixels().iter().flat_map(|px| px.iter().map(move |c| c.0[i]));
                    (params.scale[i], params.bias[i]) = range_params(pooled);
                }
                let mut planes = Vec::with_capacity(3 * N_COEFFS);
                for ch in 0..3 {
                    for i in 0..N_COEFFS {
                        let (s, b) = (params.scale[i], params.bias[i]);
                        planes.push(p.pixels().iter().map(|px| quantize_value(px[ch].0[i], s, b)).collect());
                    }
                }
                Self::new(Variant::Rgb, w, h, params, planes)
            }
            Ptm::Lrgb(p) => {
                check_finite(p.luminance().iter())?;
                if let Some(pixel) = p
                    .chroma()
                    .iter()
                    .position(|f| !f.as_array().iter().all(|x| x.is_finite()))
                {
                    return Err(PtmError::NonFiniteCoefficient { pixel, index: N_COEFFS });
                }
                let mut params = QuantizationParams::identity();
                let mut planes = Vec::with_capacity(N_COEFFS + 3);
                for i in 0..N_COEFFS {
                    let (s, b) = range_params(p.luminance().iter().map(|c| c.0[i]));
                    (params.scale[i], params.bias[i]) = (s, b);
                    planes.push(p.luminance().iter().map(|c| quantize_value(c.0[i], s, b)).collect());
                }
                for ch in 0..3 {
                    planes.push(
                        p.chroma()
                            .iter()
                            .map(|f| (f.as_array()[ch] * CHROMA_BYTE_SCALE).round().clamp(0.0, 255.0) as u8)
                            .collect(),
                    );
                }
                Self::new(Variant::Lrgb, w, h, params, planes)
            }
        }
    }

    /// Reconstructs coefficients as `λ_i · (byte + Ω_i)`.
    pub fn dequantize(&self) -> Ptm {
        let n = self.width * self.height;
        let q = &self.params;
        let coeff = |plane: &[u8], i: usize, px: usize| dequantize_value(plane[px], q.scale[i], q.bias[i]);
        match self.variant {
            Variant::Rgb => {
                let pixels = (0..n)
                    .map(|px| {
                        [0, 1, 2].map(|ch| {
                            CoefficientVector(std::array::from_fn(|i| coeff(&self.planes[ch * N_COEFFS + i], i, px)))
                        })
                    })
                    .collect();
                Ptm::Rgb(RgbPtm::new(self.width, self.height, pixels).expect("plane sizes checked"))
            }
            Variant::Lrgb => {
                let lum = (0..n)
                    .map(|px| CoefficientVector(std::array::from_fn(|i| coeff(&self.planes[i], i, px))))
                    .collect();
                let chroma = (0..n)
                    .map(|px| {
                        let f = |ch: usize| f64::from(self.planes[N_COEFFS + ch][px]) / CHROMA_BYTE_SCALE;
                        ChromaFactors::new(f(0), f(1), f(2))
                    })
                    .collect();
                Ptm::Lrgb(LrgbPtm::new(self.width, self.height, lum, chroma).expect("plane sizes checked"))
            }
        }
    }
}
