//! In-memory RGB rasters: 8-bit for file IO, `f64` in `[0, 1]` for fitting.

/// Row-major 8-bit RGB grid, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster8 {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Raster8 {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![[0; 3]; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Linear intensities, `byte / 255`, no gamma handling.
    pub fn to_float(&self) -> RasterF {
        RasterF {
            width: self.width,
            height: self.height,
            pixels: self
                .pixels
                .iter()
                .map(|p| p.map(|c| f64::from(c) / 255.0))
                .collect(),
        }
    }
}

/// Row-major floating point RGB grid, top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterF {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[f64; 3]>,
}

impl RasterF {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![[0.0; 3]; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn to_bytes(&self) -> Raster8 {
        Raster8 {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.map(intensity_to_byte)).collect(),
        }
    }
}

/// `clamp(v, 0, 1)` then `round(v * 255)`, rounding half away from zero.
pub fn intensity_to_byte(v: f64) -> u8 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0).round() as u8
}
