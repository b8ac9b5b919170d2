//! The full BiTW descriptor.
//!
//! Layout: biodiversity features for R, G, B (9 each), then for each channel
//! in R, G, B and each subband in `h1, v1, d1, ..., hL, vL, dL, aL` the nine
//! taxonomic features of the quantized subband.

use rayon::prelude::*;

use crate::dwt::{decompose_pyramid, subband_names, WaveletConfig};
use crate::eco::{biodiversity_vector, BiodiversityVector};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::raster::{split_channels, DatasetManifest, ImageSample};
use crate::taxo::{taxonomic_vector, LevelDistance, TaxonomicVector};

pub const CHANNEL_NAMES: [&str; 3] = ["R", "G", "B"];

/// Default number of quantization bins for subband coefficients.
pub const DEFAULT_BINS: u32 = 256;

/// A real subband mapped onto integer levels `0..bins`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedSubband {
    pub levels: Grid<u32>,
    pub bins: u32,
    pub min_c: f64,
    pub max_c: f64,
}

/// Per-subband min-max map to `round((x - min) / (max - min) * (bins - 1))`,
/// rounding halves away from zero. A constant subband maps to all zeros.
pub fn quantize_subband(grid: &Grid<f64>, bins: u32) -> Result<QuantizedSubband> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!("bin count {bins} must be at least 2")));
    }
    let mut min_c = f64::INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    for &x in grid.as_slice() {
        if !x.is_finite() {
            return Err(Error::NonFiniteCoefficient);
        }
        min_c = min_c.min(x);
        max_c = max_c.max(x);
    }
    if grid.is_empty() {
        return Ok(QuantizedSubband { levels: grid.map(|_| 0), bins, min_c: 0.0, max_c: 0.0 });
    }
    let range = max_c - min_c;
    let top = f64::from(bins - 1);
    let levels = if range > 0.0 {
        grid.map(|x| ((x - min_c) / range * top).round().clamp(0.0, top) as u32)
    } else {
        grid.map(|_| 0)
    };
    Ok(QuantizedSubband { levels, bins, min_c, max_c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescriptorConfig {
    pub wavelet: WaveletConfig,
    pub bins: u32,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        Self { wavelet: WaveletConfig::default(), bins: DEFAULT_BINS }
    }
}

impl From<WaveletConfig> for DescriptorConfig {
    fn from(wavelet: WaveletConfig) -> Self {
        Self { wavelet, bins: DEFAULT_BINS }
    }
}

/// Descriptor length for `levels` decomposition levels: `27 + 27 (3L + 1)`.
pub fn feature_dimension(levels: usize) -> usize {
    9 * 3 + 9 * 3 * (3 * levels + 1)
}

/// Stable feature identifiers, e.g. `bio.R.d_Mg` or `taxo.G.h2.delta`.
pub fn feature_names(levels: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(feature_dimension(levels));
    for ch in CHANNEL_NAMES {
        names.extend(BiodiversityVector::NAMES.iter().map(|f| format!("bio.{ch}.{f}")));
    }
    let bands = subband_names(levels);
    for ch in CHANNEL_NAMES {
        for band in &bands {
            names.extend(TaxonomicVector::NAMES.iter().map(|f| format!("taxo.{ch}.{band}.{f}")));
        }
    }
    names
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub names: Vec<String>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    /// The 27 channel-level biodiversity values.
    pub fn biodiversity(&self) -> &[f64] {
        &self.values[..27]
    }

    pub fn taxonomic(&self) -> &[f64] {
        &self.values[27..]
    }
}

/// Extract with the default 256 quantization bins.
pub fn extract_bitw(sample: &ImageSample, config: &WaveletConfig) -> Result<FeatureVector> {
    extract_bitw_with(sample, &DescriptorConfig::from(*config))
}

pub fn extract_bitw_with(sample: &ImageSample, config: &DescriptorConfig) -> Result<FeatureVector> {
    config.wavelet.check_depth(sample.height(), sample.width())?;
    let channels = split_channels(sample);
    let mut values = Vec::with_capacity(feature_dimension(config.wavelet.levels));
    for ch in &channels {
        values.extend(biodiversity_vector(ch)?.to_array());
    }
    for ch in &channels {
        let pyramid = decompose_pyramid(ch, &config.wavelet)?;
        for (_, band) in pyramid.subbands() {
            let q = quantize_subband(band, config.bins)?;
            values.extend(taxonomic_vector(&q.levels, &LevelDistance).to_array());
        }
    }
    Ok(FeatureVector { values, names: feature_names(config.wavelet.levels) })
}

/// Outcome of extracting one manifest entry.
#[derive(Debug)]
pub struct BatchItem {
    pub index: usize,
    pub result: Result<FeatureVector>,
}

/// Load and extract every sample of `manifest`, in manifest order.
/// `threads == 0` uses rayon's default pool size.
pub fn extract_batch(manifest: &DatasetManifest, config: &DescriptorConfig, threads: usize) -> Result<Vec<BatchItem>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let items = pool.install(|| {
        (0..manifest.len())
            .into_par_iter()
            .map(|index| BatchItem {
                index,
                result: manifest.load(index).and_then(|s| extract_bitw_with(&s, config)),
            })
            .collect()
    });
    Ok(items)
}
