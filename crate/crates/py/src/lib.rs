//! Python module `bitw`: descriptor extraction, the individual indices, the
//! wavelet transform and the evaluation protocol.

use std::path::PathBuf;
use std::str::FromStr;

use bitw_core::descriptor::{self, DescriptorConfig};
use bitw_core::dwt::{dwt2_single_level, idwt2_single_level, Subbands};
use bitw_core::eco::{self, AbundanceHistogram, BiodiversityVector};
use bitw_core::eval::{make_splits, run_protocol, Classifier, SplitMode};
use bitw_core::raster::{load_image, ImageSample};
use bitw_core::taxo::{LevelDistance, TaxonomicVector};
use bitw_core::{Boundary, Grid, Wavelet, WaveletConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(bitw, BitwError, PyValueError, "Raised for invalid input or configuration.");

fn err(e: bitw_core::Error) -> PyErr {
    BitwError::new_err(e.to_string())
}

fn grid_from<T: Copy>(rows: Vec<Vec<T>>) -> PyResult<Grid<T>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(BitwError::new_err("expected a non-empty rectangular list of rows"));
    }
    Ok(Grid::from_rows(&rows))
}

fn grid_to<T: Copy>(g: &Grid<T>) -> Vec<Vec<T>> {
    (0..g.rows()).map(|r| g.row(r).to_vec()).collect()
}

fn wavelet_config(wavelet: &str, levels: usize, boundary: &str, bins: u32) -> PyResult<DescriptorConfig> {
    Ok(DescriptorConfig {
        wavelet: WaveletConfig {
            wavelet: Wavelet::from_str(wavelet).map_err(err)?,
            levels,
            boundary: Boundary::from_str(boundary).map_err(err)?,
        },
        bins,
    })
}

fn named<'py>(py: Python<'py>, names: &[&str], values: &[f64]) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (n, v) in names.iter().zip(values) {
        d.set_item(n, v)?;
    }
    Ok(d)
}

/// The 27 + 27(3L+1) descriptor of one image.
#[pyclass(frozen, name = "FeatureVector", module = "bitw")]
pub struct PyFeatureVector {
    inner: descriptor::FeatureVector,
}

#[pymethods]
impl PyFeatureVector {
    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names.clone()
    }

    /// Raw-channel biodiversity block (27 values).
    #[getter]
    fn biodiversity(&self) -> Vec<f64> {
        self.inner.biodiversity().to_vec()
    }

    /// Subband taxonomic block.
    #[getter]
    fn taxonomic(&self) -> Vec<f64> {
        self.inner.taxonomic().to_vec()
    }

    fn get(&self, name: &str) -> Option<f64> {
        self.inner.get(name)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let names: Vec<&str> = self.inner.names.iter().map(String::as_str).collect();
        named(py, &names, &self.inner.values)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FeatureVector(len={})", self.inner.len())
    }
}

#[pyfunction]
#[pyo3(signature = (levels = 3))]
fn feature_dimension(levels: usize) -> usize {
    descriptor::feature_dimension(levels)
}

#[pyfunction]
#[pyo3(signature = (levels = 3))]
fn feature_names(levels: usize) -> Vec<String> {
    descriptor::feature_names(levels)
}

/// Descriptor of an image file.
#[pyfunction]
#[pyo3(signature = (path, wavelet = "haar", levels = 3, boundary = "symmetric", bins = 256))]
fn extract(py: Python<'_>, path: PathBuf, wavelet: &str, levels: usize, boundary: &str, bins: u32) -> PyResult<PyFeatureVector> {
    let config = wavelet_config(wavelet, levels, boundary, bins)?;
    let inner = py
        .detach(|| load_image(&path).and_then(|s| descriptor::extract_bitw_with(&s, &config)))
        .map_err(err)?;
    Ok(PyFeatureVector { inner })
}

/// Descriptor of interleaved 8-bit RGB pixels in row-major order.
#[pyfunction]
#[pyo3(signature = (data, height, width, wavelet = "haar", levels = 3, boundary = "symmetric", bins = 256))]
#[allow(clippy::too_many_arguments)]
fn extract_pixels(
    py: Python<'_>,
    data: &[u8],
    height: usize,
    width: usize,
    wavelet: &str,
    levels: usize,
    boundary: &str,
    bins: u32,
) -> PyResult<PyFeatureVector> {
    if data.len() != height * width * 3 {
        return Err(BitwError::new_err(format!("expected {} bytes for {height}x{width} RGB, got {}", height * width * 3, data.len())));
    }
    let config = wavelet_config(wavelet, levels, boundary, bins)?;
    let pixels: Vec<[u8; 3]> = data.chunks_exact(3).map(|p| [p[0], p[1], p[2]]).collect();
    let inner = py
        .detach(|| ImageSample::from_pixels(height, width, pixels).and_then(|s| descriptor::extract_bitw_with(&s, &config)))
        .map_err(err)?;
    Ok(PyFeatureVector { inner })
}

/// The nine biodiversity indices of a list of gray levels.
#[pyfunction]
fn biodiversity<'py>(py: Python<'py>, levels: Vec<u32>) -> PyResult<Bound<'py, PyDict>> {
    let v = BiodiversityVector::from_histogram(&AbundanceHistogram::from_levels(&levels)).map_err(err)?;
    named(py, &BiodiversityVector::NAMES, &v.to_array())
}

/// The nine taxonomic indices of a quantized grid, with d(i, j) = |i - j|.
#[pyfunction]
fn taxonomic<'py>(py: Python<'py>, grid: Vec<Vec<u32>>) -> PyResult<Bound<'py, PyDict>> {
    let g = grid_from(grid)?;
    let v = TaxonomicVector::from_histogram(&AbundanceHistogram::from_grid(&g), &LevelDistance);
    named(py, &TaxonomicVector::NAMES, &v.to_array())
}

#[pyfunction]
fn fisher_alpha(richness: u64, total: u64) -> f64 {
    eco::fisher_alpha_from_counts(richness, total)
}

type Bands = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// One analysis level: returns `(a, h, v, d)`.
#[pyfunction]
#[pyo3(signature = (grid, wavelet = "haar", boundary = "symmetric"))]
fn dwt2(grid: Vec<Vec<f64>>, wavelet: &str, boundary: &str) -> PyResult<Bands> {
    let g = grid_from(grid)?;
    let w = Wavelet::from_str(wavelet).map_err(err)?;
    let s = dwt2_single_level(&g, &w.bank(), Boundary::from_str(boundary).map_err(err)?).map_err(err)?;
    Ok((grid_to(&s.a), grid_to(&s.h), grid_to(&s.v), grid_to(&s.d)))
}

/// Inverse of [`dwt2`] onto a `rows` x `cols` grid.
#[pyfunction]
#[pyo3(signature = (a, h, v, d, rows, cols, wavelet = "haar", boundary = "symmetric"))]
#[allow(clippy::too_many_arguments)]
fn idwt2(
    a: Vec<Vec<f64>>,
    h: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    d: Vec<Vec<f64>>,
    rows: usize,
    cols: usize,
    wavelet: &str,
    boundary: &str,
) -> PyResult<Vec<Vec<f64>>> {
    let bands = Subbands { a: grid_from(a)?, h: grid_from(h)?, v: grid_from(v)?, d: grid_from(d)? };
    let w = Wavelet::from_str(wavelet).map_err(err)?;
    let g = idwt2_single_level(&bands, (rows, cols), &w.bank(), Boundary::from_str(boundary).map_err(err)?).map_err(err)?;
    Ok(grid_to(&g))
}

/// Min-max quantization of a subband: returns `(levels, min, max)`.
#[pyfunction]
#[pyo3(signature = (grid, bins = 256))]
fn quantize(grid: Vec<Vec<f64>>, bins: u32) -> PyResult<(Vec<Vec<u32>>, f64, f64)> {
    let q = descriptor::quantize_subband(&grid_from(grid)?, bins).map_err(err)?;
    Ok((grid_to(&q.levels), q.min_c, q.max_c))
}

fn parse_split(split: &str) -> PyResult<SplitMode> {
    let bad = || BitwError::new_err(format!("bad split {split:?}; expected holdout:F or kfold:K"));
    match split.split_once(':').ok_or_else(bad)? {
        ("holdout", f) => Ok(SplitMode::Holdout { train_fraction: f.parse().map_err(|_| bad())? }),
        ("kfold", k) => Ok(SplitMode::KFold { k: k.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

/// Run the scaler + classifier protocol on feature rows.
///
/// Returns a dict with `classes`, `accuracy`, `accuracy_sd`, `auc`,
/// `confusion` and per-fold `fold_accuracy` / `fold_auc`.
#[pyfunction]
#[pyo3(signature = (rows, labels, split = "kfold:10", seed = 0, classifier = "lda"))]
fn evaluate<'py>(
    py: Python<'py>,
    rows: Vec<Vec<f64>>,
    labels: Vec<String>,
    split: &str,
    seed: u64,
    classifier: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = parse_split(split)?;
    let classifier = Classifier::from_str(classifier).map_err(err)?;
    let mut classes = labels.clone();
    classes.sort();
    classes.dedup();
    let y: Vec<usize> = labels.iter().map(|l| classes.binary_search(l).unwrap_or_default()).collect();
    let outcome = py
        .detach(|| make_splits(&y, classes.len(), mode, seed).and_then(|plan| run_protocol(&rows, &y, classes.len(), &plan, classifier)))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("classes", classes)?;
    d.set_item("accuracy", outcome.report.accuracy)?;
    d.set_item("accuracy_sd", outcome.report.accuracy_sd)?;
    d.set_item("auc", outcome.report.auc)?;
    d.set_item("confusion", outcome.report.confusion.clone())?;
    d.set_item("fold_accuracy", outcome.folds.iter().map(|f| f.report.accuracy).collect::<Vec<_>>())?;
    d.set_item("fold_auc", outcome.folds.iter().map(|f| f.report.auc).collect::<Vec<_>>())?;
    Ok(d)
}

/// Write the synthetic 4-class texture set as PNGs; returns the image count.
#[pyfunction]
#[pyo3(signature = (out, per_class = 50, size = 64, seed = 0))]
fn synth_benchmark(py: Python<'_>, out: PathBuf, per_class: usize, size: usize, seed: u64) -> PyResult<usize> {
    py.detach(|| bitw_core::synth::write_benchmark(&out, per_class, size, seed)).map(|m| m.len()).map_err(err)
}

#[pymodule]
fn bitw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BitwError", m.py().get_type::<BitwError>())?;
    m.add("BIODIVERSITY_NAMES", BiodiversityVector::NAMES.to_vec())?;
    m.add("TAXONOMIC_NAMES", TaxonomicVector::NAMES.to_vec())?;
    m.add_class::<PyFeatureVector>()?;
    m.add_function(wrap_pyfunction!(feature_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(extract_pixels, m)?)?;
    m.add_function(wrap_pyfunction!(biodiversity, m)?)?;
    m.add_function(wrap_pyfunction!(taxonomic, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(dwt2, m)?)?;
    m.add_function(wrap_pyfunction!(idwt2, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(synth_benchmark, m)?)?;
    Ok(())
}
