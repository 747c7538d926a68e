//! Light directions, their projection onto the texture plane, and `.lp`
//! light-position files.
//!
//! Axis convention used across the crate: `u` follows the image column axis
//! (right-positive), `v` follows the image row axis pointing up (so image row
//! 0 is the largest `v`), and `z` points toward the camera.

use std::fmt::Write as _;

use thiserror::Error;

/// Norms below this are treated as a zero vector.
const ZERO_NORM: f64 = 1e-12;

/// Slack allowed when checking that a projection lies inside the unit disk.
pub const DISK_SLACK: f64 = 1e-9;

/// Smallest capture that determines all six polynomial coefficients.
pub const MIN_SAMPLES: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LightError {
    #[error("light direction has zero length")]
    ZeroVector,
    #[error("light direction points below the surface (z = {0})")]
    LowerHemisphere(f64),
    #[error("projected light ({lu}, {lv}) lies outside the unit disk")]
    OutsideDisk { lu: f64, lv: f64 },
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("invalid capture dimensions {0}x{1}")]
    BadDimensions(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed header line: {0:?}")]
    MalformedHeader(String),
    #[error("header announces {expected} lights but file has {found} data lines")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {line}: expected `<name> <x> <y> <z>`, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: cannot parse {token:?} as a number")]
    UnparsableFloat { line: usize, token: String },
}

/// A light direction in camera space. Not necessarily normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightDirection {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LightDirection {
    pub const ZENITH: LightDirection = LightDirection { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Result<Self, LightError> {
        let n = self.norm();
        if n.is_nan() || n < ZERO_NORM {
            return Err(LightError::ZeroVector);
        }
        Ok(Self::new(self.x / n, self.y / n, self.z / n))
    }

    /// Builds the upper-hemisphere unit direction from elevation and azimuth
    /// (radians); azimuth 0 points along `+u`.
    pub fn from_angles(elevation: f64, azimuth: f64) -> Self {
        let (se, ce) = elevation.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self::new(ce * ca, ce * sa, se)
    }

    pub fn project(&self) -> Result<ProjectedLight, LightError> {
        project(self)
    }
}

/// Projection `(l_u, l_v)` of a normalized light vector onto the texture plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedLight {
    pub lu: f64,
    pub lv: f64,
}

impl ProjectedLight {
    pub const ORIGIN: ProjectedLight = ProjectedLight { lu: 0.0, lv: 0.0 };

    /// Accepts a projection given directly, rejecting points outside the disk.
    pub fn new(lu: f64, lv: f64) -> Result<Self, LightError> {
        let r2 = lu * lu + lv * lv;
        if r2.is_nan() || r2 > 1.0 + DISK_SLACK {
            return Err(LightError::OutsideDisk { lu, lv });
        }
        Ok(Self { lu, lv })
    }

    /// The unit light direction this projection came from (upper hemisphere).
    pub fn direction(&self) -> LightDirection {
        let z = (1.0 - self.lu * self.lu - self.lv * self.lv).max(0.0).sqrt();
        LightDirection::new(self.lu, self.lv, z)
    }
}

/// Projects a light direction to `(l_u, l_v) = (x, y) / |d|`.
pub fn project(d: &LightDirection) -> Result<ProjectedLight, LightError> {
    let n = d.norm();
    if n.is_nan() || n < ZERO_NORM {
        return Err(LightError::ZeroVector);
    }
    if d.z < 0.0 {
        return Err(LightError::LowerHemisphere(d.z));
    }
    Ok(ProjectedLight {
        lu: d.x / n,
        lv: d.y / n,
    })
}

/// One observation of the capture: a projected light and the image it lit.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSample {
    pub lu: f64,
    pub lv: f64,
    pub image: String,
}

impl LightSample {
    pub fn new(light: ProjectedLight, image: impl Into<String>) -> Self {
        Self {
            lu: light.lu,
            lv: light.lv,
            image: image.into(),
        }
    }

    pub fn light(&self) -> ProjectedLight {
        ProjectedLight {
            lu: self.lu,
            lv: self.lv,
        }
    }
}

/// The ordered set of light samples for one capture, all at one image size.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureSet {
    samples: Vec<LightSample>,
    width: usize,
    height: usize,
}

impl CaptureSet {
    pub fn new(samples: Vec<LightSample>, width: usize, height: usize) -> Result<Self, LightError> {
        if samples.len() < MIN_SAMPLES {
            return Err(LightError::TooFewSamples(samples.len()));
        }
        if width == 0 || height == 0 {
            return Err(LightError::BadDimensions(width, height));
        }
        Ok(Self {
            samples,
            width,
            height,
        })
    }

    pub fn samples(&self) -> &[LightSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// One `.lp` line: an image name and its (unnormalized) light direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LpEntry {
    pub name: String,
    pub direction: LightDirection,
}

/// Parses `.lp` content: a count line followed by `name x y z` lines.
///
/// Blank lines are skipped, CRLF endings and trailing whitespace are
/// accepted. Directions are returned as written, not normalized.
pub fn parse_lp(text: &str) -> Result<Vec<LpEntry>, LpError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty());

    let (_, header) = lines
        .next()
        .ok_or_else(|| LpError::MalformedHeader(String::new()))?;
    let expected: usize = header
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| LpError::MalformedHeader(header.to_string()))?;

    let mut entries = Vec::with_capacity(expected);
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(LpError::MalformedLine {
                line,
                text: text.to_string(),
            });
        }
        let mut xyz = [0.0; 3];
        for (slot, token) in xyz.iter_mut().zip(&fields[1..]) {
            *slot = token.parse().map_err(|_| LpError::UnparsableFloat {
                line,
                token: token.to_string(),
            })?;
        }
        entries.push(LpEntry {
            name: fields[0].to_string(),
            direction: LightDirection::new(xyz[0], xyz[1], xyz[2]),
        });
    }

    if entries.len() != expected {
        return Err(LpError::CountMismatch {
            expected,
            found: entries.len(),
        });
    }
    Ok(entries)
}

/// Writes entries in the layout [`parse_lp`] reads. Floats use the shortest
/// representation that parses back to the same value.
pub fn render_lp(entries: &[LpEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", entries.len());
    for e in entries {
        let d = e.direction;
        let _ = writeln!(out, "{} {} {} {}", e.name, d.x, d.y, d.z);
    }
    out
}
