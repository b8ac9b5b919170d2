//! Seeded synthetic textures: Gaussian-smoothed white noise with a
//! per-class correlation length and orientation.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::grid::Grid;
use crate::raster::{scan_dataset, DatasetManifest, ImageSample};

/// Smoothing widths (in pixels) along rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureClass {
    pub name: &'static str,
    pub sigma_vertical: f64,
    pub sigma_horizontal: f64,
}

/// Four classes: fine isotropic, coarse isotropic, horizontal streaks,
/// vertical streaks.
pub fn benchmark_classes() -> [TextureClass; 4] {
    [
        TextureClass { name: "c0_fine", sigma_vertical: 0.8, sigma_horizontal: 0.8 },
        TextureClass { name: "c1_coarse", sigma_vertical: 3.0, sigma_horizontal: 3.0 },
        TextureClass { name: "c2_horizontal", sigma_vertical: 0.8, sigma_horizontal: 4.0 },
        TextureClass { name: "c3_vertical", sigma_vertical: 4.0, sigma_horizontal: 0.8 },
    ]
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let k: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|v| v / s).collect()
}

/// Circular separable blur.
fn blur(field: &Grid<f64>, sigma_vertical: f64, sigma_horizontal: f64) -> Grid<f64> {
    let (rows, cols) = field.dims();
    let kh = gaussian_kernel(sigma_horizontal);
    let kv = gaussian_kernel(sigma_vertical);
    let rh = (kh.len() / 2) as isize;
    let rv = (kv.len() / 2) as isize;
    let horiz = Grid::from_fn(rows, cols, |r, c| {
        kh.iter()
            .enumerate()
            .map(|(i, w)| w * field.get(r, (c as isize + i as isize - rh).rem_euclid(cols as isize) as usize))
            .sum::<f64>()
    });
    Grid::from_fn(rows, cols, |r, c| {
        kv.iter()
            .enumerate()
            .map(|(i, w)| w * horiz.get((r as isize + i as isize - rv).rem_euclid(rows as isize) as usize, c))
            .sum::<f64>()
    })
}

/// One channel: smoothed noise standardised to mean 128 and SD 40, clipped
/// to 8 bits.
fn texture_plane(class: &TextureClass, size: usize, rng: &mut ChaCha8Rng) -> Grid<u8> {
    let noise = Grid::from_fn(size, size, |_, _| -> f64 { StandardNormal.sample(rng) });
    let smooth = blur(&noise, class.sigma_vertical, class.sigma_horizontal);
    let n = smooth.len() as f64;
    let mean = smooth.as_slice().iter().sum::<f64>() / n;
    let sd = (smooth.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt().max(1e-12);
    smooth.map(|v| (128.0 + 40.0 * (v - mean) / sd).round().clamp(0.0, 255.0) as u8)
}

pub fn generate_texture(class: &TextureClass, size: usize, rng: &mut ChaCha8Rng) -> Result<ImageSample> {
    let planes = [texture_plane(class, size, rng), texture_plane(class, size, rng), texture_plane(class, size, rng)];
    let pixels = (0..size * size)
        .map(|i| [planes[0].as_slice()[i], planes[1].as_slice()[i], planes[2].as_slice()[i]])
        .collect();
    let mut sample = ImageSample::from_pixels(size, size, pixels)?;
    sample.label = class.name.to_owned();
    Ok(sample)
}

/// `per_class` images of `size x size` for each benchmark class, class-major.
pub fn texture_benchmark(per_class: usize, size: usize, seed: u64) -> Result<Vec<ImageSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(4 * per_class);
    for class in benchmark_classes() {
        for i in 0..per_class {
            let mut s = generate_texture(&class, size, &mut rng)?;
            s.path = format!("{}/{i:04}.png", class.name).into();
            out.push(s);
        }
    }
    Ok(out)
}

/// Write the benchmark as `root/<class>/<nnnn>.png` and return its manifest.
pub fn write_benchmark(root: &Path, per_class: usize, size: usize, seed: u64) -> Result<DatasetManifest> {
    for sample in texture_benchmark(per_class, size, seed)? {
        let path = root.join(&sample.path);
        std::fs::create_dir_all(path.parent().expect("class directory"))?;
        let raw: Vec<u8> = sample.pixels().iter().flatten().copied().collect();
        image::RgbImage::from_raw(size as u32, size as u32, raw)
            .expect("buffer matches dims")
            .save(&path)
            .map_err(|e| crate::error::Error::Io(std::io::Error::other(e)))?;
    }
    scan_dataset(root, Some("png"))
}
