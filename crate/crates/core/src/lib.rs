//! BiTW texture descriptor.
//!
//! An image is treated as an ecosystem: pixels are individuals and gray
//! levels are species. Each colour channel yields nine biodiversity
//! features, and each wavelet subband of each channel yields nine taxonomic
//! features. With a three-level decomposition this gives a 297-dimensional
//! descriptor (27 + 270).
//!
//! Module map:
//!
//! - [`raster`]: image decoding, channel splitting, dataset enumeration
//! - [`dwt`]: separable 2-D discrete wavelet transform and pyramids
//! - [`eco`]: abundance histograms and biodiversity indices
//! - [`taxo`]: taxonomic indices over gray-level distances
//! - [`descriptor`]: subband quantization and the full feature vector
//! - [`eval`]: min-max scaling, stratified splits, LDA, k-NN, metrics
//! - [`features`]: CSV feature tables
//! - [`synth`]: seeded synthetic texture generator

pub mod descriptor;
pub mod dwt;
pub mod eco;
pub mod error;
pub mod eval;
pub mod features;
pub mod grid;
pub mod raster;
pub mod synth;
pub mod taxo;

pub use descriptor::{extract_bitw, feature_dimension, feature_names, FeatureVector};
pub use dwt::{Boundary, FilterBank, Wavelet, WaveletConfig};
pub use error::{Error, Result};
pub use grid::Grid;
pub use raster::{ChannelRaster, DatasetManifest, ImageSample};
