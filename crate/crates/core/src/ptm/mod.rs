//! Polynomial texture maps: per-pixel biquadratic polynomials in the
//! projected light direction, stored either per channel (RGB) or as one
//! luminance polynomial with per-pixel chroma factors (LRGB).

mod normals;
mod quant;

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::lightgeom::ProjectedLight;
use crate::raster::RasterF;

pub use normals::{extract_normal, normal_map, NormalMap, SurfaceNormal};
pub use quant::{
    dequantize_plane, quantize_plane, QuantizationParams, QuantizedPtm, CHROMA_BYTE_SCALE,
};

/// Coefficients per polynomial.
pub const N_COEFFS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtmError {
    #[error("pixel ({u}, {v}) is outside the {width}x{height} map")]
    OutOfBounds {
        u: usize,
        v: usize,
        width: usize,
        height: usize,
    },
    #[error("coefficient {index} at pixel {pixel} is not finite")]
    NonFiniteCoefficient { pixel: usize, index: usize },
    #[error("expected {expected} entries for the map size, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Which per-pixel layout a map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Rgb,
    Lrgb,
}

impl Variant {
    /// Quantized bytes stored per pixel: 18 for RGB, 9 for LRGB.
    pub fn bytes_per_pixel(self) -> usize {
        match self {
            Variant::Rgb => 3 * N_COEFFS,
            Variant::Lrgb => N_COEFFS + 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Rgb => "RGB",
            Variant::Lrgb => "LRGB",
        }
    }
}

/// `a0..a5` of `a0 lu^2 + a1 lv^2 + a2 lu lv + a3 lu + a4 lv + a5`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoefficientVector(pub [f64; N_COEFFS]);

impl CoefficientVector {
    pub const ZERO: CoefficientVector = CoefficientVector([0.0; N_COEFFS]);

    /// The monomials `(lu^2, lv^2, lu lv, lu, lv, 1)` in coefficient order.
    #[inline]
    pub fn monomials(lu: f64, lv: f64) -> [f64; N_COEFFS] {
        [lu * lu, lv * lv, lu * lv, lu, lv, 1.0]
    }

    #[inline]
    pub fn eval(&self, lu: f64, lv: f64) -> f64 {
        let a = &self.0;
        a[0] * lu * lu + a[1] * lv * lv + a[2] * lu * lv + a[3] * lu + a[4] * lv + a[5]
    }

    /// Partial derivatives `(d/dlu, d/dlv)`.
    pub fn gradient(&self, lu: f64, lv: f64) -> (f64, f64) {
        let a = &self.0;
        (
            2.0 * a[0] * lu + a[2] * lv + a[3],
            2.0 * a[1] * lv + a[2] * lu + a[4],
        )
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Coefficient-wise unweighted mean.
    pub fn mean(polys: &[CoefficientVector]) -> CoefficientVector {
        let mut out = [0.0; N_COEFFS];
        for p in polys {
            for (o, c) in out.iter_mut().zip(p.0) {
                *o += c;
            }
        }
        let n = polys.len().max(1) as f64;
        CoefficientVector(out.map(|c| c / n))
    }
}

/// Evaluates the polynomial at a projected light, without clamping.
pub fn eval_poly(c: &CoefficientVector, lu: f64, lv: f64) -> f64 {
    c.eval(lu, lv)
}

/// Per-pixel colour factors of an LRGB map, `C = factor * L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChromaFactors {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl ChromaFactors {
    pub const NEUTRAL: ChromaFactors = ChromaFactors {
        r: 1.0,
        g: 1.0,
        b: 1.0,
    };
    pub const MAX: f64 = 3.0;

    pub fn new(r: f64, g: f64, b: f64) -> Self {
        Self { r, g, b }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }
}

/// Receives a callback for every polynomial evaluation during relighting.
pub trait EvalObserver {
    fn polynomial_evaluated(&self);
}

impl EvalObserver for () {
    #[inline]
    fn polynomial_evaluated(&self) {}
}

/// Counts polynomial evaluations.
#[derive(Debug, Default)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn count(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

impl EvalObserver for EvalCounter {
    fn polynomial_evaluated(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }
}

/// Three polynomials per pixel, red then green then blue.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbPtm {
    width: usize,
    height: usize,
    coeffs: Vec<[CoefficientVector; 3]>,
}

impl RgbPtm {
    pub fn new(
        width: usize,
        height: usize,
        coeffs: Vec<[CoefficientVector; 3]>,
    ) -> Result<Self, PtmError> {
        check_len(width, height, coeffs.len())?;
        Ok(Self {
            width,
            height,
            coeffs,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            coeffs: vec![[CoefficientVector::ZERO; 3]; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[CoefficientVector; 3]] {
        &self.coeffs
    }

    pub fn pixels_mut(&mut self) -> &mut [[CoefficientVector; 3]] {
        &mut self.coeffs
    }

    pub fn pixel(&self, u: usize, v: usize) -> Result<&[CoefficientVector; 3], PtmError> {
        let i = index(self.width, self.height, u, v)?;
        Ok(&self.coeffs[i])
    }

    /// Clamped `(r, g, b)` at pixel `(u, v)` (column, row) for one light.
    pub fn eval(&self, u: usize, v: usize, lu: f64, lv: f64) -> Result<[f64; 3], PtmError> {
        Ok(eval_rgb_pixel(self.pixel(u, v)?, lu, lv, &()))
    }
}

#[inline]
fn eval_rgb_pixel(
    px: &[CoefficientVector; 3],
    lu: f64,
    lv: f64,
    observer: &impl EvalObserver,
) -> [f64; 3] {
    px.each_ref().map(|c| {
        observer.polynomial_evaluated();
        c.eval(lu, lv).clamp(0.0, 1.0)
    })
}

/// One luminance polynomial plus chroma factors per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct LrgbPtm {
    width: usize,
    height: usize,
    luminance: Vec<CoefficientVector>,
    chroma: Vec<ChromaFactors>,
}

impl LrgbPtm {
    pub fn new(
        width: usize,
        height: usize,
        luminance: Vec<CoefficientVector>,
        chroma: Vec<ChromaFactors>,
    ) -> Result<Self, PtmError> {
        check_len(width, height, luminance.len())?;
        check_len(width, height, chroma.len())?;
        Ok(Self {
            width,
            height,
            luminance,
            chroma,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn luminance(&self) -> &[CoefficientVector] {
        &self.luminance
    }

    pub fn chroma(&self) -> &[ChromaFactors] {
        &self.chroma
    }

    pub fn eval(&self, u: usize, v: usize, lu: f64, lv: f64) -> Result<[f64; 3], PtmError> {
        let i = index(self.width, self.height, u, v)?;
        Ok(eval_lrgb_pixel(&self.luminance[i], &self.chroma[i], lu, lv, &()))
    }

    /// Converts an RGB map by averaging the channel polynomials into the
    /// luminance and deriving factors from the channel constant terms.
    ///
    /// Exact for gray maps (all three channels equal).
    pub fn from_rgb(rgb: &RgbPtm) -> Self {
        let (luminance, chroma) = rgb
            .coeffs
            .iter()
            .map(|px| {
                let lum = CoefficientVector::mean(px);
                let total: f64 = px.iter().map(|c| c.0[5]).sum();
                let factors = if total.abs() > 1e-12 {
                    let f = |c: &CoefficientVector| (3.0 * c.0[5] / total).clamp(0.0, ChromaFactors::MAX);
                    ChromaFactors::new(f(&px[0]), f(&px[1]), f(&px[2]))
                } else {
                    ChromaFactors::NEUTRAL
                };
                (lum, factors)
            })
            .unzip();
        Self {
            width: rgb.width,
            height: rgb.height,
            luminance,
            chroma,
        }
    }
}

#[inline]
fn eval_lrgb_pixel(
    lum: &CoefficientVector,
    factors: &ChromaFactors,
    lu: f64,
    lv: f64,
    observer: &impl EvalObserver,
) -> [f64; 3] {
    observer.polynomial_evaluated();
    let l = lum.eval(lu, lv).max(0.0);
    factors.as_array().map(|f| (f * l).clamp(0.0, 1.0))
}

/// Either map layout.
#[derive(Debug, Clone, PartialEq)]
pub enum Ptm {
    Rgb(RgbPtm),
    Lrgb(LrgbPtm),
}

impl Ptm {
    pub fn variant(&self) -> Variant {
        match self {
            Ptm::Rgb(_) => Variant::Rgb,
            Ptm::Lrgb(_) => Variant::Lrgb,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Ptm::Rgb(p) => p.width,
            Ptm::Lrgb(p) => p.width,
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Ptm::Rgb(p) => p.height,
            Ptm::Lrgb(p) => p.height,
        }
    }

    pub fn eval(&self, u: usize, v: usize, lu: f64, lv: f64) -> Result<[f64; 3], PtmError> {
        match self {
            Ptm::Rgb(p) => p.eval(u, v, lu, lv),
            Ptm::Lrgb(p) => p.eval(u, v, lu, lv),
        }
    }

    /// The polynomial normals are extracted from: the luminance for LRGB,
    /// the mean of the three channels for RGB.
    pub fn shading_polynomial(&self, pixel: usize) -> CoefficientVector {
        match self {
            Ptm::Rgb(p) => CoefficientVector::mean(&p.coeffs[pixel]),
            Ptm::Lrgb(p) => p.luminance[pixel],
        }
    }

    /// Renders the whole map under one light.
    pub fn relight(&self, light: ProjectedLight) -> RasterF {
        self.relight_observed(light, &())
    }

    /// [`Ptm::relight`], reporting each polynomial evaluation to `observer`.
    pub fn relight_observed(&self, light: ProjectedLight, observer: &impl EvalObserver) -> RasterF {
        let (lu, lv) = (light.lu, light.lv);
        let pixels = match self {
            Ptm::Rgb(p) => p
                .coeffs
                .iter()
                .map(|px| eval_rgb_pixel(px, lu, lv, observer))
                .collect(),
            Ptm::Lrgb(p) => p
                .luminance
                .iter()
                .zip(&p.chroma)
                .map(|(l, f)| eval_lrgb_pixel(l, f, lu, lv, observer))
                .collect(),
        };
        RasterF {
            width: self.width(),
            height: self.height(),
            pixels,
        }
    }
}

impl From<RgbPtm> for Ptm {
    fn from(p: RgbPtm) -> Self {
        Ptm::Rgb(p)
    }
}

impl From<LrgbPtm> for Ptm {
    fn from(p: LrgbPtm) -> Self {
        Ptm::Lrgb(p)
    }
}

fn check_len(width: usize, height: usize, found: usize) -> Result<(), PtmError> {
    let expected = width * height;
    if expected != found {
        return Err(PtmError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn index(width: usize, height: usize, u: usize, v: usize) -> Result<usize, PtmError> {
    if u >= width || v >= height {
        return Err(PtmError::OutOfBounds {
            u,
            v,
            width,
            height,
        });
    }
    Ok(v * width + u)
}
