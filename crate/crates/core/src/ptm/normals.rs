//! Surface normals from the light direction that maximizes a pixel's
//! reflectance polynomial.

use super::{CoefficientVector, Ptm};
use crate::raster::Raster8;

const DET_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNormal {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
    /// Set when the polynomial has no interior maximum.
    pub degenerate: bool,
}

impl SurfaceNormal {
    pub const UP: SurfaceNormal = SurfaceNormal {
        nx: 0.0,
        ny: 0.0,
        nz: 1.0,
        degenerate: false,
    };

    /// Image encoding: `round((n + 1) / 2 * 255)` for x and y,
    /// `round(nz * 255)` for z.
    pub fn to_rgb8(&self) -> [u8; 3] {
        let enc = |c: f64| ((c + 1.0) / 2.0 * 255.0).round().clamp(0.0, 255.0) as u8;
        [enc(self.nx), enc(self.ny), (self.nz * 255.0).round().clamp(0.0, 255.0) as u8]
    }

    pub fn angle_to(&self, other: &SurfaceNormal) -> f64 {
        let dot = self.nx * other.nx + self.ny * other.ny + self.nz * other.nz;
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Normal from the stationary point `(lu0, lv0)` of a concave polynomial.
///
/// With `d = 4 a0 a1 - a2^2`, the point is a true interior maximum only when
/// `a0 < 0` and `d > 0`; anything else yields `(0, 0, 1)` flagged
/// degenerate. Stationary points outside the unit disk are pulled back onto
/// its boundary, giving a horizontal normal with the same azimuth.
pub fn extract_normal(c: &CoefficientVector) -> SurfaceNormal {
    let [a0, a1, a2, a3, a4, _] = c.0;
    let d = 4.0 * a0 * a1 - a2 * a2;
    if !(d.abs() > DET_EPS && a0 < 0.0 && d > 0.0) {
        return SurfaceNormal {
            degenerate: true,
            ..SurfaceNormal::UP
        };
    }
    let lu0 = (a2 * a4 - 2.0 * a1 * a3) / d;
    let lv0 = (a2 * a3 - 2.0 * a0 * a4) / d;
    if !(lu0.is_finite() && lv0.is_finite()) {
        return SurfaceNormal {
            degenerate: true,
            ..SurfaceNormal::UP
        };
    }
    let r2 = lu0 * lu0 + lv0 * lv0;
    if r2 > 1.0 {
        let r = r2.sqrt();
        SurfaceNormal {
            nx: lu0 / r,
            ny: lv0 / r,
            nz: 0.0,
            degenerate: false,
        }
    } else {
        SurfaceNormal {
            nx: lu0,
            ny: lv0,
            nz: (1.0 - r2).sqrt(),
            degenerate: false,
        }
    }
}

/// Per-pixel normals of a map.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalMap {
    pub width: usize,
    pub height: usize,
    pub normals: Vec<SurfaceNormal>,
}

impl NormalMap {
    pub fn get(&self, x: usize, y: usize) -> SurfaceNormal {
        self.normals[y * self.width + x]
    }

    pub fn to_image(&self) -> Raster8 {
        Raster8 {
            width: self.width,
            height: self.height,
            pixels: self.normals.iter().map(SurfaceNormal::to_rgb8).collect(),
        }
    }

    /// White where the normal is degenerate, black elsewhere.
    pub fn degenerate_mask(&self) -> Raster8 {
        Raster8 {
            width: self.width,
            height: self.height,
            pixels: self
                .normals
                .iter()
                .map(|n| if n.degenerate { [255; 3] } else { [0; 3] })
                .collect(),
        }
    }

    pub fn degenerate_count(&self) -> usize {
        self.normals.iter().filter(|n| n.degenerate).count()
    }
}

/// Normals of every pixel, from the luminance polynomial (LRGB) or the mean
/// channel polynomial (RGB).
pub fn normal_map(ptm: &Ptm) -> NormalMap {
    let n = ptm.width() * ptm.height();
    NormalMap {
        width: ptm.width(),
        height: ptm.height(),
        normals: (0..n).map(|i| extract_normal(&ptm.shading_polynomial(i))).collect(),
    }
}
