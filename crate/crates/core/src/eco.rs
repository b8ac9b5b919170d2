//! Abundance histograms and biodiversity indices.
//!
//! Pixels are individuals and gray levels are species. Every index here is a
//! functional of the histogram alone, so all of them are invariant to any
//! rearrangement of pixel positions. Logarithms are natural.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::raster::ChannelRaster;

/// Species abundances, sorted by gray level. Only levels present are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbundanceHistogram {
    counts: Vec<(u32, u64)>,
    total: u64,
}

impl AbundanceHistogram {
    /// From `(level, abundance)` pairs. Zero abundances are dropped and
    /// repeated levels are merged.
    pub fn from_counts(pairs: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut counts: Vec<(u32, u64)> = pairs.into_iter().filter(|&(_, n)| n > 0).collect();
        counts.sort_unstable_by_key(|&(l, _)| l);
        counts.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        let total = counts.iter().map(|&(_, n)| n).sum();
        Self { counts, total }
    }

    pub fn from_levels(levels: &[u32]) -> Self {
        let mut sorted = levels.to_vec();
        sorted.sort_unstable();
        let mut counts: Vec<(u32, u64)> = Vec::new();
        for level in sorted {
            match counts.last_mut() {
                Some((l, n)) if *l == level => *n += 1,
                _ => counts.push((level, 1)),
            }
        }
        Self { total: levels.len() as u64, counts }
    }

    pub fn from_grid(grid: &Grid<u32>) -> Self {
        Self::from_levels(grid.as_slice())
    }

    /// `(level, abundance)` pairs in increasing level order.
    pub fn counts(&self) -> &[(u32, u64)] {
        &self.counts
    }

    /// Total pixel count N.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Richness S.
    pub fn richness(&self) -> usize {
        self.counts.len()
    }

    pub fn abundances(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().map(|&(_, n)| n)
    }

    pub fn max_abundance(&self) -> u64 {
        self.abundances().max().unwrap_or(0)
    }

    pub fn proportions(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.total as f64;
        self.abundances().map(move |a| a as f64 / n)
    }
}

pub fn histogram(channel: &ChannelRaster) -> AbundanceHistogram {
    AbundanceHistogram::from_grid(channel.values())
}

/// `(S - 1) / ln N`.
pub fn margalef(hist: &AbundanceHistogram) -> Result<f64> {
    if hist.total() < 2 {
        return Err(Error::UndefinedForSinglePixel);
    }
    Ok((hist.richness() as f64 - 1.0) / (hist.total() as f64).ln())
}

/// `S / N`. Note this is the ratio form, not the `S / sqrt(N)` variant.
pub fn menhinick(hist: &AbundanceHistogram) -> f64 {
    if hist.total() == 0 {
        return 0.0;
    }
    hist.richness() as f64 / hist.total() as f64
}

/// Shannon-Wiener diversity `-sum p ln p`.
pub fn shannon_wiener(hist: &AbundanceHistogram) -> f64 {
    let h: f64 = hist.proportions().map(|p| p * p.ln()).sum();
    if h == 0.0 {
        0.0
    } else {
        -h
    }
}

/// `sqrt(sum n_i^2 / ((N - S + 1)^2 + S - 1))`.
pub fn mcintosh(hist: &AbundanceHistogram) -> f64 {
    let n = hist.total() as f64;
    let s = hist.richness() as f64;
    let sum_sq: f64 = hist.abundances().map(|a| (a as f64) * (a as f64)).sum();
    let denom = (n - s + 1.0).powi(2) + s - 1.0;
    if denom <= 0.0 {
        return 0.0;
    }
    (sum_sq / denom).sqrt()
}

/// Berger-Parker dominance `N_max / N`.
pub fn berger_parker(hist: &AbundanceHistogram) -> f64 {
    if hist.total() == 0 {
        return 0.0;
    }
    hist.max_abundance() as f64 / hist.total() as f64
}

/// Alpha reported when every pixel is its own species (the root diverges).
pub const FISHER_ALPHA_CAP: f64 = 1e6;

/// Fisher's alpha: the root of `S = alpha ln(1 + N / alpha)`.
///
/// `S = 1` gives 0 and `S = N` gives [`FISHER_ALPHA_CAP`].
pub fn fisher_alpha(hist: &AbundanceHistogram) -> f64 {
    fisher_alpha_from_counts(hist.richness() as u64, hist.total())
}

pub fn fisher_alpha_from_counts(richness: u64, total: u64) -> f64 {
    if richness <= 1 || total <= 1 {
        return 0.0;
    }
    if richness >= total {
        return FISHER_ALPHA_CAP;
    }
    solve_fisher(richness as f64, total as f64)
}

fn fisher_species(alpha: f64, n: f64) -> f64 {
    alpha * (n / alpha).ln_1p()
}

/// Safeguarded Newton on a doubling bracket. `alpha ln(1 + N/alpha)` grows
/// monotonically from 0 to N, so the root is unique for `0 < S < N`.
fn solve_fisher(s: f64, n: f64) -> f64 {
    let residual = |a: f64| fisher_species(a, n) - s;
    let mut lo = 0.0f64;
    let mut hi = s.max(1.0);
    while residual(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut alpha = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, alpha);
    for _ in 0..400 {
        let r = residual(alpha);
        if r.abs() < best.0 {
            best = (r.abs(), alpha);
        }
        if r.abs() <= f64::EPSILON * s {
            break;
        }
        if r < 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let slope = (n / alpha).ln_1p() - n / (alpha + n);
        let newton = alpha - r / slope;
        alpha = if slope > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    best.1
}

/// Kempton-Taylor Q over species ranked by increasing abundance.
///
/// The quartile abundances R1, R2 are those of the species at ranks
/// `ceil(S/4)` and `ceil(3S/4)`. The numerator counts species with abundance
/// strictly between R1 and R2 plus half of those at R1 and at R2. Returns 0
/// when `S < 4` or `R1 == R2`.
pub fn kempton_taylor(hist: &AbundanceHistogram) -> f64 {
    let s = hist.richness();
    if s < 4 {
        return 0.0;
    }
    let mut abundances: Vec<u64> = hist.abundances().collect();
    abundances.sort_unstable();
    let r1 = abundances[s.div_ceil(4) - 1];
    let r2 = abundances[(3 * s).div_ceil(4) - 1];
    if r1 == r2 {
        return 0.0;
    }
    let at_r1 = abundances.iter().filter(|&&a| a == r1).count() as f64;
    let at_r2 = abundances.iter().filter(|&&a| a == r2).count() as f64;
    let between = abundances.iter().filter(|&&a| a > r1 && a < r2).count() as f64;
    (0.5 * at_r1 + between + 0.5 * at_r2) / (r2 as f64 / r1 as f64).ln()
}

/// Extensive Shannon information `N * H` in nats.
pub fn total_information(hist: &AbundanceHistogram) -> f64 {
    hist.total() as f64 * shannon_wiener(hist)
}

/// The nine per-channel biodiversity features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiodiversityVector {
    pub d_mg: f64,
    pub d_mn: f64,
    pub d_sw: f64,
    pub e_m: f64,
    pub d_bp: f64,
    pub d_f: f64,
    pub d_kt: f64,
    pub h_shannon: f64,
    pub i_total: f64,
}

impl BiodiversityVector {
    pub const NAMES: [&'static str; 9] = ["d_Mg", "d_Mn", "d_SW", "e_M", "d_BP", "d_F", "d_KT", "H_shannon", "I_total"];

    pub fn from_histogram(hist: &AbundanceHistogram) -> Result<Self> {
        let h = shannon_wiener(hist);
        Ok(Self {
            d_mg: margalef(hist)?,
            d_mn: menhinick(hist),
            d_sw: h,
            e_m: mcintosh(hist),
            d_bp: berger_parker(hist),
            d_f: fisher_alpha(hist),
            d_kt: kempton_taylor(hist),
            h_shannon: h,
            i_total: total_information(hist),
        })
    }

    pub fn to_array(&self) -> [f64; 9] {
        [self.d_mg, self.d_mn, self.d_sw, self.e_m, self.d_bp, self.d_f, self.d_kt, self.h_shannon, self.i_total]
    }
}

pub fn biodiversity_vector(channel: &ChannelRaster) -> Result<BiodiversityVector> {
    BiodiversityVector::from_histogram(&histogram(channel))
}
