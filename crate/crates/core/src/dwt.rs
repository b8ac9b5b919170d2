//! Separable 2-D discrete wavelet transform over orthonormal
//! quadrature-mirror filter banks.
//!
//! Filtering is correlation with even-phase decimation:
//! `y[n] = sum_k f[k] * x_ext[2n + k - (L - 2)]`. For Haar this reads
//! `y[n] = f[0] x[2n] + f[1] x[2n + 1]`, so a constant signal has exactly zero
//! detail.
//!
//! Two boundary policies are supported:
//!
//! - [`Boundary::Symmetric`]: whole-sample symmetric extension, producing
//!   `floor((N + L - 1) / 2)` coefficients per axis. For Haar that is
//!   `ceil(N / 2)`; longer filters keep a few extra boundary coefficients so
//!   that reconstruction stays exact.
//! - [`Boundary::Periodic`]: periodization, `ceil(N / 2)` coefficients. Odd
//!   lengths are padded with a single zero first, which keeps the transform
//!   orthogonal (energy is preserved for every size).
//!
//! In 2-D, rows are filtered and decimated first, then columns. Subbands are
//! `a` = (row-low, col-low), `h` = (row-low, col-high), `v` = (row-high,
//! col-low), `d` = (row-high, col-high).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::raster::ChannelRaster;

/// Decomposition and reconstruction filters.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    pub name: String,
    pub lo_d: Vec<f64>,
    pub hi_d: Vec<f64>,
    pub lo_r: Vec<f64>,
    pub hi_r: Vec<f64>,
}

impl FilterBank {
    /// Orthonormal bank from a scaling filter. The high-pass filter is the
    /// quadrature mirror `hi[k] = (-1)^k lo[L-1-k]`; reconstruction filters
    /// are the time reverses.
    pub fn orthonormal(name: impl Into<String>, lo_d: Vec<f64>) -> Result<Self> {
        let len = lo_d.len();
        if len < 2 || !len.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("filter length {len} must be even and at least 2")));
        }
        let hi_d: Vec<f64> = (0..len)
            .map(|k| if k % 2 == 0 { lo_d[len - 1 - k] } else { -lo_d[len - 1 - k] })
            .collect();
        let lo_r = lo_d.iter().rev().copied().collect();
        let hi_r = hi_d.iter().rev().copied().collect();
        Ok(Self { name: name.into(), lo_d, hi_d, lo_r, hi_r })
    }

    pub fn haar() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::orthonormal("haar", vec![s, s]).expect("valid haar")
    }

    pub fn db2() -> Self {
        let r3 = 3f64.sqrt();
        let n = 4.0 * 2f64.sqrt();
        Self::orthonormal("db2", vec![(1.0 + r3) / n, (3.0 + r3) / n, (3.0 - r3) / n, (1.0 - r3) / n])
            .expect("valid db2")
    }

    pub fn db4() -> Self {
        Self::orthonormal(
            "db4",
            vec![
                0.230_377_813_308_855_23,
                0.714_846_570_552_541_5,
                0.630_880_767_929_590_4,
                -0.027_983_769_416_983_85,
                -0.187_034_811_718_881_14,
                0.030_841_381_835_986_965,
                0.032_883_011_666_982_945,
                -0.010_597_401_784_997_278,
            ],
        )
        .expect("valid db4")
    }

    pub fn len(&self) -> usize {
        self.lo_d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo_d.is_empty()
    }
}

/// Built-in filter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Wavelet {
    #[default]
    Haar,
    Db2,
    Db4,
}

impl Wavelet {
    pub const ALL: [Wavelet; 3] = [Wavelet::Haar, Wavelet::Db2, Wavelet::Db4];

    pub fn bank(self) -> FilterBank {
        match self {
            Wavelet::Haar => FilterBank::haar(),
            Wavelet::Db2 => FilterBank::db2(),
            Wavelet::Db4 => FilterBank::db4(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Wavelet::Haar => "haar",
            Wavelet::Db2 => "db2",
            Wavelet::Db4 => "db4",
        }
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Wavelet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(Wavelet::Haar),
            "db2" => Ok(Wavelet::Db2),
            "db4" => Ok(Wavelet::Db4),
            other => Err(Error::InvalidConfig(format!("unknown wavelet {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Symmetric,
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Symmetric => "symmetric",
            Boundary::Periodic => "periodic",
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" | "sym" => Ok(Boundary::Symmetric),
            "periodic" | "per" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidConfig(format!("unknown boundary {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaveletConfig {
    pub wavelet: Wavelet,
    pub levels: usize,
    pub boundary: Boundary,
}

impl Default for WaveletConfig {
    fn default() -> Self {
        Self { wavelet: Wavelet::Haar, levels: 3, boundary: Boundary::Symmetric }
    }
}

impl WaveletConfig {
    /// Checks `levels >= 1` and `min(rows, cols) >= 2^levels`.
    pub fn check_depth(&self, rows: usize, cols: usize) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::InvalidConfig("levels must be at least 1".into()));
        }
        let needed = 1usize.checked_shl(self.levels as u32).unwrap_or(usize::MAX);
        if rows.min(cols) < needed {
            return Err(Error::TooShallow { rows, cols, levels: self.levels });
        }
        Ok(())
    }
}

/// Number of coefficients per subband along an axis of length `n`.
pub fn coeff_len(n: usize, filter_len: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Symmetric => (n + filter_len - 1) / 2,
        Boundary::Periodic => n.div_ceil(2),
    }
}

fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// One-level 1-D analysis into (low, high).
pub fn analyze_1d(x: &[f64], bank: &FilterBank, boundary: Boundary) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let len = bank.len();
    let m = coeff_len(n, len, boundary);
    let offset = len as isize - 2;
    let padded = n + n % 2;
    let sample = |i: isize| -> f64 {
        match boundary {
            Boundary::Symmetric => x[reflect(i, n)],
            Boundary::Periodic => {
                let j = i.rem_euclid(padded as isize) as usize;
                if j < n {
                    x[j]
                } else {
                    0.0
                }
            }
        }
    };
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    for out in 0..m {
        let base = 2 * out as isize - offset;
        let (mut l, mut h) = (0.0, 0.0);
        for k in 0..len {
            let v = sample(base + k as isize);
            l += bank.lo_d[k] * v;
            h += bank.hi_d[k] * v;
        }
        lo.push(l);
        hi.push(h);
    }
    (lo, hi)
}

/// One-level 1-D synthesis back to length `n`. Exact inverse of
/// [`analyze_1d`] for orthonormal banks.
pub fn synthesize_1d(lo: &[f64], hi: &[f64], n: usize, bank: &FilterBank, boundary: Boundary) -> Result<Vec<f64>> {
    let len = bank.len();
    let m = coeff_len(n, len, boundary);
    if lo.len() != m || hi.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "{} low / {} high coefficients cannot rebuild length {n} (expected {m})",
            lo.len(),
            hi.len()
        )));
    }
    let offset = len as isize - 2;
    let padded = n + n % 2;
    let mut out = vec![0.0; padded.max(n)];
    for j in 0..m {
        let base = 2 * j as isize - offset;
        for k in 0..len {
            // lo_r / hi_r are time reversed, so tap k of the analysis filter is tap L-1-k here.
            let contrib = bank.lo_r[len - 1 - k] * lo[j] + bank.hi_r[len - 1 - k] * hi[j];
            let i = base + k as isize;
            match boundary {
                Boundary::Symmetric => {
                    if (0..n as isize).contains(&i) {
                        out[i as usize] += contrib;
                    }
                }
                Boundary::Periodic => out[i.rem_euclid(padded as isize) as usize] += contrib,
            }
        }
    }
    out.truncate(n);
    Ok(out)
}

/// The four subbands of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands {
    pub a: Grid<f64>,
    pub h: Grid<f64>,
    pub v: Grid<f64>,
    pub d: Grid<f64>,
}

fn transform_columns(grid: &Grid<f64>, mut f: impl FnMut(&[f64]) -> Result<(Vec<f64>, Vec<f64>)>) -> Result<(Grid<f64>, Grid<f64>)> {
    let (rows, cols) = grid.dims();
    let mut lows = Vec::with_capacity(cols);
    let mut highs = Vec::with_capacity(cols);
    let mut column = vec![0.0; rows];
    for c in 0..cols {
        for (r, slot) in column.iter_mut().enumerate() {
            *slot = grid.get(r, c);
        }
        let (l, h) = f(&column)?;
        lows.push(l);
        highs.push(h);
    }
    let out_rows = lows.first().map_or(0, Vec::len);
    Ok((
        Grid::from_fn(out_rows, cols, |r, c| lows[c][r]),
        Grid::from_fn(out_rows, cols, |r, c| highs[c][r]),
    ))
}

fn transform_rows(grid: &Grid<f64>, mut f: impl FnMut(&[f64]) -> Result<(Vec<f64>, Vec<f64>)>) -> Result<(Grid<f64>, Grid<f64>)> {
    let rows = grid.rows();
    let mut lows = Vec::new();
    let mut highs = Vec::new();
    let mut out_cols = 0;
    for r in 0..rows {
        let (l, h) = f(grid.row(r))?;
        out_cols = l.len();
        lows.extend(l);
        highs.extend(h);
    }
    Ok((Grid::from_vec(rows, out_cols, lows), Grid::from_vec(rows, out_cols, highs)))
}

/// Single-level 2-D analysis.
pub fn dwt2_single_level(grid: &Grid<f64>, bank: &FilterBank, boundary: Boundary) -> Result<Subbands> {
    let (rows, cols) = grid.dims();
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateGrid { rows, cols });
    }
    let (row_lo, row_hi) = transform_rows(grid, |x| Ok(analyze_1d(x, bank, boundary)))?;
    let (a, h) = transform_columns(&row_lo, |x| Ok(analyze_1d(x, bank, boundary)))?;
    let (v, d) = transform_columns(&row_hi, |x| Ok(analyze_1d(x, bank, boundary)))?;
    Ok(Subbands { a, h, v, d })
}

/// Single-level 2-D synthesis to a grid of `dims`.
pub fn idwt2_single_level(bands: &Subbands, dims: (usize, usize), bank: &FilterBank, boundary: Boundary) -> Result<Grid<f64>> {
    let (rows, cols) = dims;
    let expected = (coeff_len(rows, bank.len(), boundary), coeff_len(cols, bank.len(), boundary));
    for (name, g) in [("a", &bands.a), ("h", &bands.h), ("v", &bands.v), ("d", &bands.d)] {
        if g.dims() != expected {
            return Err(Error::ShapeMismatch(format!(
                "subband {name} is {}x{}, expected {}x{} for a {rows}x{cols} output",
                g.rows(),
                g.cols(),
                expected.0,
                expected.1
            )));
        }
    }
    let merge_columns = |lo: &Grid<f64>, hi: &Grid<f64>| -> Result<Grid<f64>> {
        let mut cols_out = Vec::with_capacity(lo.cols());
        for c in 0..lo.cols() {
            let l: Vec<f64> = (0..lo.rows()).map(|r| lo.get(r, c)).collect();
            let h: Vec<f64> = (0..hi.rows()).map(|r| hi.get(r, c)).collect();
            cols_out.push(synthesize_1d(&l, &h, rows, bank, boundary)?);
        }
        Ok(Grid::from_fn(rows, lo.cols(), |r, c| cols_out[c][r]))
    };
    let row_lo = merge_columns(&bands.a, &bands.h)?;
    let row_hi = merge_columns(&bands.v, &bands.d)?;
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        data.extend(synthesize_1d(row_lo.row(r), row_hi.row(r), cols, bank, boundary)?);
    }
    Ok(Grid::from_vec(rows, cols, data))
}

/// Detail subbands of one pyramid level, plus the size of that level's input.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailLevel {
    pub input_dims: (usize, usize),
    pub h: Grid<f64>,
    pub v: Grid<f64>,
    pub d: Grid<f64>,
}

/// Multi-level decomposition: detail bands per level and the final approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandPyramid {
    pub levels: Vec<DetailLevel>,
    pub final_a: Grid<f64>,
    pub source_dims: (usize, usize),
}

impl SubbandPyramid {
    /// Subbands in descriptor order: `h1, v1, d1, ..., hL, vL, dL, aL`.
    pub fn subbands(&self) -> Vec<(String, &Grid<f64>)> {
        let mut out = Vec::with_capacity(3 * self.levels.len() + 1);
        for (i, lvl) in self.levels.iter().enumerate() {
            let q = i + 1;
            out.push((format!("h{q}"), &lvl.h));
            out.push((format!("v{q}"), &lvl.v));
            out.push((format!("d{q}"), &lvl.d));
        }
        out.push((format!("a{}", self.levels.len()), &self.final_a));
        out
    }

    pub fn total_energy(&self) -> f64 {
        self.subbands().iter().map(|(_, g)| g.energy()).sum()
    }
}

/// Subband identifiers for a pyramid of `levels` levels.
pub fn subband_names(levels: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..=levels)
        .flat_map(|q| ["h", "v", "d"].map(|b| format!("{b}{q}")))
        .collect();
    out.push(format!("a{levels}"));
    out
}

/// Recursive decomposition of the approximation band.
pub fn decompose_grid(grid: &Grid<f64>, config: &WaveletConfig) -> Result<SubbandPyramid> {
    let (rows, cols) = grid.dims();
    config.check_depth(rows, cols)?;
    let bank = config.wavelet.bank();
    let mut levels = Vec::with_capacity(config.levels);
    let mut current = grid.clone();
    for _ in 0..config.levels {
        let input_dims = current.dims();
        let Subbands { a, h, v, d } = dwt2_single_level(&current, &bank, config.boundary)?;
        levels.push(DetailLevel { input_dims, h, v, d });
        current = a;
    }
    Ok(SubbandPyramid { levels, final_a: current, source_dims: (rows, cols) })
}

pub fn decompose_pyramid(channel: &ChannelRaster, config: &WaveletConfig) -> Result<SubbandPyramid> {
    decompose_grid(&channel.to_f64(), config)
}

/// Inverse of [`decompose_grid`].
pub fn reconstruct_pyramid(pyramid: &SubbandPyramid, wavelet: Wavelet, boundary: Boundary) -> Result<Grid<f64>> {
    let bank = wavelet.bank();
    let mut a = pyramid.final_a.clone();
    for lvl in pyramid.levels.iter().rev() {
        let bands = Subbands { a, h: lvl.h.clone(), v: lvl.v.clone(), d: lvl.d.clone() };
        a = idwt2_single_level(&bands, lvl.input_dims, &bank, boundary)?;
    }
    Ok(a)
}
