//! Per-pixel least-squares fitting of RGB and LRGB maps from an image stack.
//!
//! The design matrix depends only on the lights, so its pseudoinverse is
//! computed once and shared by every pixel. Work is split by image row; each
//! pixel is computed independently, so the output does not depend on the
//! number of worker threads.

use rayon::prelude::*;
use thiserror::Error;

use crate::lightgeom::{CaptureSet, MIN_SAMPLES};
use crate::linsolve::{build_design_matrix, precompute_pseudoinverse, PseudoInverse, SolveError};
use crate::ptm::{ChromaFactors, CoefficientVector, LrgbPtm, Ptm, RgbPtm, Variant, N_COEFFS};
use crate::raster::RasterF;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("could not start worker threads: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Mean over pixels of the per-pixel RMS reconstruction error.
    pub rms_residual: f64,
    /// Set when the lights do not determine all six coefficients.
    pub rank_warning: bool,
    pub rank: usize,
    pub n_samples: usize,
}

impl FitReport {
    /// One `key=value` line for logs and scripts.
    pub fn summary(&self) -> String {
        format!(
            "n_samples={} rank={} rank_warning={} rms_residual={:.6}",
            self.n_samples, self.rank, self.rank_warning, self.rms_residual
        )
    }
}

/// Fit settings. `threads: None` uses the ambient rayon pool.
#[derive(Debug, Clone, Copy, Default)]
pub struct FitOptions {
    pub threads: Option<usize>,
}

struct Prepared {
    pinv: PseudoInverse,
    monomials: Vec<[f64; N_COEFFS]>,
    rank_warning: bool,
}

fn prepare(cs: &CaptureSet, images: &[RasterF]) -> Result<Prepared, FitError> {
    let n = cs.len();
    if n < MIN_SAMPLES {
        return Err(FitError::TooFewSamples(n));
    }
    if images.len() != n {
        return Err(FitError::DimensionMismatch(format!(
            "{n} light samples but {} images",
            images.len()
        )));
    }
    for (img, s) in images.iter().zip(cs.samples()) {
        if (img.width, img.height) != (cs.width(), cs.height()) || img.pixels.len() != img.width * img.height {
            return Err(FitError::DimensionMismatch(format!(
                "image {} is {}x{}, expected {}x{}",
                s.image,
                img.width,
                img.height,
                cs.width(),
                cs.height()
            )));
        }
    }
    let design = build_design_matrix(cs.samples())?;
    let pinv = precompute_pseudoinverse(&design);
    let monomials = cs
        .samples()
        .iter()
        .map(|s| CoefficientVector::monomials(s.lu, s.lv))
        .collect();
    Ok(Prepared {
        rank_warning: pinv.rank() < N_COEFFS,
        pinv,
        monomials,
    })
}

#[inline]
fn predict(monomials: &[f64; N_COEFFS], c: &[f64; N_COEFFS]) -> f64 {
    monomials.iter().zip(c).map(|(m, a)| m * a).sum()
}

fn run<T: Send>(options: FitOptions, job: impl FnOnce() -> T + Send) -> Result<T, FitError> {
    match options.threads {
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build()?.install(job)),
        None => Ok(job()),
    }
}

/// Fits three polynomials per pixel.
pub fn fit_rgb(cs: &CaptureSet, images: &[RasterF]) -> Result<(RgbPtm, FitReport), FitError> {
    fit_rgb_with(cs, images, FitOptions::default())
}

pub fn fit_rgb_with(
    cs: &CaptureSet,
    images: &[RasterF],
    options: FitOptions,
) -> Result<(RgbPtm, FitReport), FitError> {
    let prep = prepare(cs, images)?;
    let (w, h, n) = (cs.width(), cs.height(), cs.len());
    let mut coeffs = vec![[CoefficientVector::ZERO; 3]; w * h];

    let row_residuals: Vec<f64> = run(options, || {
        coeffs
            .par_chunks_mut(w)
            .enumerate()
            .map(|(y, row)| {
                let mut obs = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
                let mut total = 0.0;
                for (x, out) in row.iter_mut().enumerate() {
                    let idx = y * w + x;
                    for (k, img) in images.iter().enumerate() {
                        let p = img.pixels[idx];
                        obs[0][k] = p[0];
                        obs[1][k] = p[1];
                        obs[2][k] = p[2];
                    }
                    let mut sq = 0.0;
                    for ch in 0..3 {
                        prep.pinv.apply_into(&obs[ch], &mut out[ch].0);
                        for (m, o) in prep.monomials.iter().zip(&obs[ch]) {
                            let e = predict(m, &out[ch].0) - o;
                            sq += e * e;
                        }
                    }
                    total += (sq / (3 * n) as f64).sqrt();
                }
                total
            })
            .collect()
    })?;

    let report = FitReport {
        rms_residual: row_residuals.iter().sum::<f64>() / (w * h) as f64,
        rank_warning: prep.rank_warning,
        rank: prep.pinv.rank(),
        n_samples: n,
    };
    Ok((RgbPtm::new(w, h, coeffs).expect("sized from capture"), report))
}

/// Fits one luminance polynomial per pixel, `Lum = (R + G + B) / 3`, and
/// chroma factors `factor_c = Σ C / Σ Lum` (neutral for near-black pixels).
pub fn fit_lrgb(cs: &CaptureSet, images: &[RasterF]) -> Result<(LrgbPtm, FitReport), FitError> {
    fit_lrgb_with(cs, images, FitOptions::default())
}

pub fn fit_lrgb_with(
    cs: &CaptureSet,
    images: &[RasterF],
    options: FitOptions,
) -> Result<(LrgbPtm, FitReport), FitError> {
    let prep = prepare(cs, images)?;
    let (w, h, n) = (cs.width(), cs.height(), cs.len());
    let mut pixels = vec![(CoefficientVector::ZERO, ChromaFactors::NEUTRAL); w * h];
    let dark = 1e-6 * n as f64;

    let row_residuals: Vec<f64> = run(options, || {
        pixels
            .par_chunks_mut(w)
            .enumerate()
            .map(|(y, row)| {
                let mut lum = vec![0.0; n];
                let mut total = 0.0;
                for (x, (coeffs, factors)) in row.iter_mut().enumerate() {
                    let idx = y * w + x;
                    let mut sums = [0.0; 3];
                    for (k, img) in images.iter().enumerate() {
                        let p = img.pixels[idx];
                        lum[k] = (p[0] + p[1] + p[2]) / 3.0;
                        for c in 0..3 {
                            sums[c] += p[c];
                        }
                    }
                    prep.pinv.apply_into(&lum, &mut coeffs.0);
                    let lum_sum: f64 = lum.iter().sum();
                    *factors = if lum_sum > dark {
                        let f = |s: f64| (s / lum_sum).clamp(0.0, ChromaFactors::MAX);
                        ChromaFactors::new(f(sums[0]), f(sums[1]), f(sums[2]))
                    } else {
                        ChromaFactors::NEUTRAL
                    };

                    let fa = factors.as_array();
                    let mut sq = 0.0;
                    for (m, img) in prep.monomials.iter().zip(images) {
                        let l = predict(m, &coeffs.0);
                        let p = img.pixels[idx];
                        for c in 0..3 {
                            let e = fa[c] * l - p[c];
                            sq += e * e;
                        }
                    }
                    total += (sq / (3 * n) as f64).sqrt();
                }
                total
            })
            .collect()
    })?;

    let report = FitReport {
        rms_residual: row_residuals.iter().sum::<f64>() / (w * h) as f64,
        rank_warning: prep.rank_warning,
        rank: prep.pinv.rank(),
        n_samples: n,
    };
    let (lum, chroma) = pixels.into_iter().unzip();
    Ok((LrgbPtm::new(w, h, lum, chroma).expect("sized from capture"), report))
}

/// Fits either variant.
pub fn fit(
    cs: &CaptureSet,
    images: &[RasterF],
    variant: Variant,
    options: FitOptions,
) -> Result<(Ptm, FitReport), FitError> {
    Ok(match variant {
        Variant::Rgb => {
            let (p, r) = fit_rgb_with(cs, images, options)?;
            (Ptm::Rgb(p), r)
        }
        Variant::Lrgb => {
            let (p, r) = fit_lrgb_with(cs, images, options)?;
            (Ptm::Lrgb(p), r)
        }
    })
}
