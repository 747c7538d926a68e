//! Synthetic Lambertian scenes with known normals, used as ground truth for
//! fitting and normal extraction.
//!
//! Shading is attached only: `albedo * (ambient + (1 - ambient) * max(0, n.l))`.
//! No cast shadows, no specular term.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::lightgeom::{CaptureSet, LightDirection, LightError, LightSample, LpEntry, MIN_SAMPLES, render_lp};
use crate::ptm::{NormalMap, SurfaceNormal};
use crate::raster::RasterF;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("need at least {MIN_SAMPLES} lights, got {0}")]
    TooFewLights(usize),
    #[error(transparent)]
    Light(#[from] LightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    Plane,
    Hemisphere,
    Heightfield,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub kind: SceneKind,
    pub width: usize,
    pub height: usize,
    pub albedo: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    /// Pixels belonging to the object (all of them except outside the
    /// hemisphere's disk).
    pub footprint: Vec<bool>,
    pub ambient: f64,
}

const UP: [f64; 3] = [0.0, 0.0, 1.0];

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

impl SyntheticScene {
    /// A flat surface facing the camera.
    pub fn plane(width: usize, height: usize, albedo: [f64; 3], ambient: f64) -> Self {
        let n = width * height;
        Self {
            kind: SceneKind::Plane,
            width,
            height,
            albedo: vec![albedo; n],
            normals: vec![UP; n],
            footprint: vec![true; n],
            ambient,
        }
    }

    /// A hemisphere inscribed in the frame. Pixels outside its disk have
    /// zero albedo and an upward ground-truth normal.
    pub fn hemisphere(width: usize, height: usize, albedo: [f64; 3], ambient: f64) -> Self {
        let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
        let radius = cx.min(cy);
        let mut scene = Self::plane(width, height, albedo, ambient);
        scene.kind = SceneKind::Hemisphere;
        for row in 0..height {
            for col in 0..width {
                let i = row * width + col;
                let u = (col as f64 + 0.5 - cx) / radius;
                let v = -(row as f64 + 0.5 - cy) / radius;
                let r2 = u * u + v * v;
                if r2 < 1.0 {
                    scene.normals[i] = [u, v, (1.0 - r2).sqrt()];
                } else {
                    scene.albedo[i] = [0.0; 3];
                    scene.footprint[i] = false;
                }
            }
        }
        scene
    }

    /// Smooth sinusoidal relief, `h = 0.04 * sin(4πx) * cos(3πy)` over
    /// unit-normalized coordinates.
    pub fn heightfield(width: usize, height: usize, albedo: [f64; 3], ambient: f64) -> Self {
        let mut scene = Self::plane(width, height, albedo, ambient);
        scene.kind = SceneKind::Heightfield;
        let amp = 0.04;
        let (fu, fv) = (2.0 * TAU, 1.5 * TAU);
        for row in 0..height {
            for col in 0..width {
                let x = (col as f64 + 0.5) / width as f64;
                let y = 1.0 - (row as f64 + 0.5) / height as f64;
                let dhdx = amp * fu * (fu * x).cos() * (fv * y).cos();
                let dhdy = -amp * fv * (fu * x).sin() * (fv * y).sin();
                scene.normals[row * width + col] = normalize([-dhdx, -dhdy, 1.0]);
            }
        }
        scene
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Ground-truth normals as a [`NormalMap`].
    pub fn normal_map(&self) -> NormalMap {
        NormalMap {
            width: self.width,
            height: self.height,
            normals: self
                .normals
                .iter()
                .map(|n| SurfaceNormal {
                    nx: n[0],
                    ny: n[1],
                    nz: n[2],
                    degenerate: false,
                })
                .collect(),
        }
    }
}

/// Renders the scene under one light. The light is normalized first and
/// must lie in the upper hemisphere.
pub fn render(scene: &SyntheticScene, light: &LightDirection) -> Result<RasterF, LightError> {
    let l = light.normalized()?;
    if l.z < 0.0 {
        return Err(LightError::LowerHemisphere(l.z));
    }
    let a = scene.ambient;
    let pixels = scene
        .albedo
        .iter()
        .zip(&scene.normals)
        .map(|(alb, n)| {
            let shade = (n[0] * l.x + n[1] * l.y + n[2] * l.z).max(0.0);
            let k = a + (1.0 - a) * shade;
            alb.map(|c| c * k)
        })
        .collect();
    Ok(RasterF {
        width: scene.width,
        height: scene.height,
        pixels,
    })
}

/// A rendered capture: frames in light order plus the matching `.lp` file.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticStack {
    pub capture: CaptureSet,
    pub images: Vec<RasterF>,
    pub entries: Vec<LpEntry>,
    pub lp: String,
}

pub fn frame_name(index: usize) -> String {
    format!("frame_{index:03}.ppm")
}

/// Renders one frame per light, named `frame_000.ppm`, `frame_001.ppm`, ...
pub fn render_stack(scene: &SyntheticScene, lights: &[LightDirection]) -> Result<SyntheticStack, SynthError> {
    if lights.len() < MIN_SAMPLES {
        return Err(SynthError::TooFewLights(lights.len()));
    }
    let mut images = Vec::with_capacity(lights.len());
    let mut samples = Vec::with_capacity(lights.len());
    let mut entries = Vec::with_capacity(lights.len());
    for (i, light) in lights.iter().enumerate() {
        let name = frame_name(i);
        images.push(render(scene, light)?);
        samples.push(LightSample::new(light.project()?, name.clone()));
        entries.push(LpEntry {
            name,
            direction: *light,
        });
    }
    Ok(SyntheticStack {
        capture: CaptureSet::new(samples, scene.width, scene.height)?,
        images,
        lp: render_lp(&entries),
        entries,
    })
}

/// Ring elevations, in degrees, of the default light set.
pub const RING_ELEVATIONS_DEG: [f64; 3] = [30.0, 55.0, 80.0];

/// `n` lights on three rings (30°, 55°, 80° elevation). Each ring gets a
/// share of the lights proportional to its circumference and spaces them
/// evenly in azimuth; rings are rotated against each other.
pub fn default_light_set(n: usize) -> Result<Vec<LightDirection>, SynthError> {
    if n < MIN_SAMPLES {
        return Err(SynthError::TooFewLights(n));
    }
    let elevations = RING_ELEVATIONS_DEG.map(f64::to_radians);
    let weights = elevations.map(f64::cos);
    let total: f64 = weights.iter().sum();

    // Largest-remainder apportionment, at least one light per ring.
    let shares = weights.map(|w| n as f64 * w / total);
    let mut counts = shares.map(|s| (s.floor() as usize).max(1));
    while counts.iter().sum::<usize>() < n {
        let i = (0..3)
            .max_by(|&a, &b| (shares[a] - counts[a] as f64).total_cmp(&(shares[b] - counts[b] as f64)))
            .unwrap();
        counts[i] += 1;
    }
    while counts.iter().sum::<usize>() > n {
        let i = (0..3).max_by_key(|&i| counts[i]).unwrap();
        counts[i] -= 1;
    }

    let mut lights = Vec::with_capacity(n);
    for (ring, (&elev, &count)) in elevations.iter().zip(&counts).enumerate() {
        let step = TAU / count as f64;
        let offset = ring as f64 * PI / 5.0;
        for j in 0..count {
            lights.push(LightDirection::from_angles(elev, offset + j as f64 * step));
        }
    }
    Ok(lights)
}
