//! Image decoding, channel splitting and dataset enumeration.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Smallest side accepted; three dyadic halvings must leave at least one sample.
pub const MIN_SIDE: usize = 8;

/// Default gray-level count for 8-bit channels.
pub const DEFAULT_LEVELS: u32 = 256;

/// Extensions picked up by [`scan_dataset`] when no filter is given.
pub const DEFAULT_EXTENSIONS: &[&str] = &["png", "tif", "tiff", "jpg", "jpeg"];

/// A decoded 8-bit RGB image with its class label.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSample {
    pub path: PathBuf,
    pub label: String,
    height: usize,
    width: usize,
    pixels: Vec<[u8; 3]>,
}

impl ImageSample {
    /// Row-major pixels. Fails with [`Error::TooSmall`] below 8x8.
    pub fn new(
        path: impl Into<PathBuf>,
        label: impl Into<String>,
        height: usize,
        width: usize,
        pixels: Vec<[u8; 3]>,
    ) -> Result<Self> {
        if height < MIN_SIDE || width < MIN_SIDE {
            return Err(Error::TooSmall { height, width, min: MIN_SIDE });
        }
        if pixels.len() != height * width {
            return Err(Error::ShapeMismatch(format!(
                "{} pixels for a {height}x{width} image",
                pixels.len()
            )));
        }
        Ok(Self { path: path.into(), label: label.into(), height, width, pixels })
    }

    /// Unlabelled sample built in memory.
    pub fn from_pixels(height: usize, width: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        Self::new(PathBuf::new(), String::new(), height, width, pixels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, r: usize, c: usize) -> [u8; 3] {
        self.pixels[r * self.width + c]
    }

    /// Apply a spatial transform to all three planes at once.
    pub fn map_planes(&self, f: impl Fn(&Grid<[u8; 3]>) -> Grid<[u8; 3]>) -> Self {
        let g = f(&Grid::from_vec(self.height, self.width, self.pixels.clone()));
        let (height, width) = g.dims();
        Self { path: self.path.clone(), label: self.label.clone(), height, width, pixels: g.into_vec() }
    }
}

/// One colour plane with gray levels in `[0, levels)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRaster {
    values: Grid<u32>,
    levels: u32,
}

impl ChannelRaster {
    pub fn new(values: Grid<u32>, levels: u32) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidConfig(format!("gray-level count {levels} must be at least 2")));
        }
        if let Some(&value) = values.as_slice().iter().find(|&&v| v >= levels) {
            return Err(Error::LevelOutOfRange { value, bins: levels });
        }
        Ok(Self { values, levels })
    }

    /// 8-bit plane, `levels = 256`.
    pub fn from_u8(values: &Grid<u8>) -> Self {
        Self { values: values.map(u32::from), levels: DEFAULT_LEVELS }
    }

    pub fn values(&self) -> &Grid<u32> {
        &self.values
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn dims(&self) -> (usize, usize) {
        self.values.dims()
    }

    pub fn to_f64(&self) -> Grid<f64> {
        self.values.map(f64::from)
    }
}

/// Decode a PNG, TIFF or JPEG file. Alpha is dropped and grayscale is
/// replicated to three identical channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageSample> {
    load_labeled(path, "")
}

pub(crate) fn load_labeled(path: impl AsRef<Path>, label: &str) -> Result<ImageSample> {
    let path = path.as_ref();
    let img = image::ImageReader::open(path)
        .map_err(|e| Error::Decode { path: path.to_owned(), reason: e.to_string() })?
        .with_guessed_format()
        .map_err(|e| Error::Decode { path: path.to_owned(), reason: e.to_string() })?
        .decode()
        .map_err(|e| Error::Decode { path: path.to_owned(), reason: e.to_string() })?;
    let rgb = img.to_rgb8();
    let (width, height) = (rgb.width() as usize, rgb.height() as usize);
    let pixels = rgb.pixels().map(|p| p.0).collect();
    ImageSample::new(path, label, height, width, pixels)
}

/// Split into (R, G, B) rasters with 256 levels each.
pub fn split_channels(sample: &ImageSample) -> [ChannelRaster; 3] {
    let plane = |ch: usize| {
        let values = Grid::from_fn(sample.height, sample.width, |r, c| u32::from(sample.pixel(r, c)[ch]));
        ChannelRaster { values, levels: DEFAULT_LEVELS }
    };
    [plane(0), plane(1), plane(2)]
}

/// Inverse of [`split_channels`]. Fails if dims differ or a level exceeds 255.
pub fn merge_channels(planes: &[ChannelRaster; 3]) -> Result<ImageSample> {
    let dims = planes[0].dims();
    if planes.iter().any(|p| p.dims() != dims) {
        return Err(Error::ShapeMismatch("channel planes differ in size".into()));
    }
    let mut pixels = Vec::with_capacity(dims.0 * dims.1);
    for i in 0..dims.0 * dims.1 {
        let mut px = [0u8; 3];
        for (ch, plane) in planes.iter().enumerate() {
            let v = plane.values.as_slice()[i];
            px[ch] = u8::try_from(v).map_err(|_| Error::LevelOutOfRange { value: v, bins: 256 })?;
        }
        pixels.push(px);
    }
    ImageSample::from_pixels(dims.0, dims.1, pixels)
}

/// Labelled sample list, sorted by relative path.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub samples: Vec<ManifestEntry>,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: String,
}

impl DatasetManifest {
    /// Build from explicit entries; classes are the sorted distinct labels.
    pub fn from_entries(root: impl Into<PathBuf>, samples: Vec<ManifestEntry>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = samples.iter().find(|s| !seen.insert(s.path.clone())) {
            return Err(Error::InvalidConfig(format!("duplicate path {}", dup.path.display())));
        }
        let mut classes: Vec<String> = samples.iter().map(|s| s.label.clone()).collect();
        classes.sort();
        classes.dedup();
        Ok(Self { root: root.into(), samples, classes })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.samples.iter().map(|s| s.label.as_str()).collect()
    }

    /// Index of each sample's label in `classes`.
    pub fn class_indices(&self) -> Vec<usize> {
        self.samples
            .iter()
            .map(|s| self.classes.binary_search(&s.label).expect("label listed in classes"))
            .collect()
    }

    pub fn load(&self, index: usize) -> Result<ImageSample> {
        let entry = &self.samples[index];
        load_labeled(&entry.path, &entry.label)
    }
}

fn extension_matches(path: &Path, filter: &[String]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| filter.iter().any(|f| f.eq_ignore_ascii_case(e)))
        .unwrap_or(false)
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<fs::DirEntry>> {
    let unreadable = |e: std::io::Error| Error::UnreadableDirectory { path: dir.to_owned(), reason: e.to_string() };
    let mut entries = fs::read_dir(dir)
        .map_err(unreadable)?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(unreadable)?;
    entries.sort_by(|a, b| a.file_name().as_encoded_bytes().cmp(b.file_name().as_encoded_bytes()));
    Ok(entries)
}

/// Enumerate `root/<class>/<file>`.
///
/// `extension_filter` is a comma-separated, case-insensitive list such as
/// `"png"` or `"png,tif"`; `None` accepts [`DEFAULT_EXTENSIONS`]. Hidden
/// entries are skipped. Order is bytewise on the relative path.
pub fn scan_dataset(root: impl AsRef<Path>, extension_filter: Option<&str>) -> Result<DatasetManifest> {
    let root = root.as_ref();
    let filter: Vec<String> = match extension_filter {
        Some(f) => f.split(',').map(|s| s.trim().trim_start_matches('.').to_owned()).filter(|s| !s.is_empty()).collect(),
        None => DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
    };
    let mut samples = Vec::new();
    for class_dir in read_dir_sorted(root)? {
        let name = class_dir.file_name();
        let Some(label) = name.to_str() else { continue };
        if label.starts_with('.') || !class_dir.path().is_dir() {
            continue;
        }
        for file in read_dir_sorted(&class_dir.path())? {
            let path = file.path();
            let hidden = file.file_name().as_encoded_bytes().starts_with(b".");
            if !hidden && path.is_file() && extension_matches(&path, &filter) {
                samples.push(ManifestEntry { path, label: label.to_owned() });
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyDataset(root.to_owned()));
    }
    DatasetManifest::from_entries(root, samples)
}
