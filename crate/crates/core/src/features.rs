//! CSV feature tables.
//!
//! Layout: header `path,label,f000,...,fNNN`, one row per image, reals
//! written with 17 significant digits (`{:.16e}`). The mapping from column
//! ids to descriptor feature names lives in a sidecar file next to the table
//! (see [`names_sidecar_path`]) with header `column,name`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Column id for feature `index` of `total`, zero-padded to at least 3 digits.
pub fn column_id(index: usize, total: usize) -> String {
    let width = total.saturating_sub(1).to_string().len().max(3);
    format!("f{index:0width$}")
}

/// `features.csv` -> `features.csv.names`.
pub fn names_sidecar_path(table: &Path) -> PathBuf {
    let mut s = table.as_os_str().to_owned();
    s.push(".names");
    PathBuf::from(s)
}

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_names_sidecar(path: &Path, names: &[String]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["column", "name"])?;
    for (i, name) in names.iter().enumerate() {
        w.write_record([column_id(i, names.len()).as_str(), name.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Streaming writer for feature rows.
pub struct FeatureCsvWriter {
    inner: csv::Writer<BufWriter<File>>,
    n_features: usize,
}

impl FeatureCsvWriter {
    pub fn create(path: &Path, n_features: usize) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        let mut header = vec!["path".to_owned(), "label".to_owned()];
        header.extend((0..n_features).map(|i| column_id(i, n_features)));
        inner.write_record(&header)?;
        Ok(Self { inner, n_features })
    }

    pub fn write_row(&mut self, path: &str, label: &str, values: &[f64]) -> Result<()> {
        if values.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, got: values.len() });
        }
        let mut record = Vec::with_capacity(values.len() + 2);
        record.push(path.to_owned());
        record.push(label.to_owned());
        record.extend(values.iter().map(|&v| format_value(v)));
        self.inner.write_record(&record)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| Error::Io(e.into_error()))?.flush()?;
        Ok(())
    }
}

/// A feature table read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub paths: Vec<String>,
    pub labels: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> Vec<String> {
        let mut c = self.labels.clone();
        c.sort();
        c.dedup();
        c
    }

    /// Label index of every row into [`Self::classes`].
    pub fn class_indices(&self) -> Vec<usize> {
        let classes = self.classes();
        self.labels.iter().map(|l| classes.binary_search(l).expect("label in classes")).collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = FeatureCsvWriter::create(path, self.columns.len())?;
        for ((p, l), row) in self.paths.iter().zip(&self.labels).zip(&self.rows) {
            w.write_row(p, l, row)?;
        }
        w.finish()
    }
}

pub fn read_feature_csv(path: &Path) -> Result<FeatureTable> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    if header.len() < 3 || &header[0] != "path" || &header[1] != "label" {
        return Err(Error::FeatureTable("header must start with path,label and have a feature column".into()));
    }
    let columns: Vec<String> = header.iter().skip(2).map(str::to_owned).collect();
    let mut table = FeatureTable { paths: Vec::new(), labels: Vec::new(), columns, rows: Vec::new() };
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::FeatureTable(format!("row {} has {} fields, expected {}", line + 1, record.len(), header.len())));
        }
        let values = record
            .iter()
            .skip(2)
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::FeatureTable(format!("row {}: {e}", line + 1)))?;
        table.paths.push(record[0].to_owned());
        table.labels.push(record[1].to_owned());
        table.rows.push(values);
    }
    Ok(table)
}
