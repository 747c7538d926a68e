//! Fitting, storage and relighting of polynomial texture maps (PTMs).
//!
//! A PTM stores, for every pixel, a biquadratic polynomial in the projected
//! light direction `(lu, lv)`:
//!
//! ```text
//! I(lu, lv) = a0 lu² + a1 lv² + a2 lu lv + a3 lu + a4 lv + a5
//! ```
//!
//! Coefficients are fitted by least squares from photographs taken under
//! known lights, stored as 8-bit planes with per-coefficient scale and bias,
//! and evaluated for arbitrary new lights. The light that maximizes the
//! polynomial gives a per-pixel surface normal.
//!
//! Modules, bottom-up:
//!
//! * [`lightgeom`]: light directions, projection, `.lp` files.
//! * [`linsolve`]: pseudoinverse least squares and {1}-inverses.
//! * [`ptm`]: map types, evaluation, quantization, normals.
//! * [`fitter`]: per-pixel fitting over an image stack.
//! * [`codec`]: the `PTMKIT_1.0` file format plus PPM/PNG IO.
//! * [`synth`]: Lambertian test scenes with known normals.
//! * [`cli`]: the `ptmkit` command line.

pub mod cli;
pub mod codec;
pub mod fitter;
pub mod lightgeom;
pub mod linsolve;
pub mod ptm;
pub mod raster;
pub mod synth;

pub use fitter::{fit, fit_lrgb, fit_rgb, FitOptions, FitReport};
pub use lightgeom::{CaptureSet, LightDirection, LightSample, ProjectedLight};
pub use ptm::{CoefficientVector, LrgbPtm, Ptm, QuantizedPtm, RgbPtm, Variant};
pub use raster::{Raster8, RasterF};
