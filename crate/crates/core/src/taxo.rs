//! Taxonomic indices: abundance histograms combined with pairwise distances
//! between gray levels.
//!
//! Everything runs on the species histogram, O(S^2) with S at most the
//! number of gray levels. Degenerate inputs (one species, or a single
//! pixel for [`taxonomic_diversity`]) give 0 inside [`TaxonomicVector`].

use crate::eco::{shannon_wiener, total_information, AbundanceHistogram};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Distance between two gray levels.
pub trait TaxonomicDistance {
    fn distance(&self, i: u32, j: u32) -> f64;
}

/// `|i - j|` on the gray-level axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelDistance;

impl TaxonomicDistance for LevelDistance {
    fn distance(&self, i: u32, j: u32) -> f64 {
        f64::from(i.abs_diff(j))
    }
}

/// Sums over unordered species pairs: (sum d x_i x_j, sum x_i x_j).
fn weighted_pair_sums<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> (f64, f64) {
    let counts = hist.counts();
    let (mut weighted, mut plain) = (0.0, 0.0);
    for (a, &(li, xi)) in counts.iter().enumerate() {
        for &(lj, xj) in &counts[a + 1..] {
            let prod = xi as f64 * xj as f64;
            weighted += dist.distance(li, lj) * prod;
            plain += prod;
        }
    }
    (weighted, plain)
}

/// Sum of `d(i, j)` over ordered pairs of distinct species.
fn ordered_distance_sum<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    let counts = hist.counts();
    let mut sum = 0.0;
    for &(li, _) in counts {
        for &(lj, _) in counts {
            if li != lj {
                sum += dist.distance(li, lj);
            }
        }
    }
    sum
}

/// Taxonomic diversity: mean distance between two distinct pixels.
pub fn taxonomic_diversity<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> Result<f64> {
    let n = hist.total() as f64;
    if hist.total() < 2 {
        return Err(Error::UndefinedForSinglePixel);
    }
    let (weighted, _) = weighted_pair_sums(hist, dist);
    Ok(weighted / (n * (n - 1.0) / 2.0))
}

/// Taxonomic distinctness: mean distance between two pixels of different levels.
pub fn taxonomic_distinctness<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    if hist.richness() < 2 {
        return 0.0;
    }
    let (weighted, plain) = weighted_pair_sums(hist, dist);
    weighted / plain
}

/// Number of species pairs times the abundance-weighted mean pairwise distance.
pub fn sum_phylogenetic_distances<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    let s = hist.richness();
    if s < 2 {
        return 0.0;
    }
    let (weighted, plain) = weighted_pair_sums(hist, dist);
    (s * (s - 1)) as f64 / 2.0 * weighted / plain
}

/// Sum over species of the distance to the nearest other species.
pub fn nearest_neighbor_distance<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    let counts = hist.counts();
    if counts.len() < 2 {
        return 0.0;
    }
    counts
        .iter()
        .map(|&(li, _)| {
            counts
                .iter()
                .filter(|&&(lj, _)| lj != li)
                .map(|&(lj, _)| dist.distance(li, lj))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Extensive quadratic entropy: distances summed over ordered species pairs.
pub fn extensive_quadratic_entropy<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    ordered_distance_sum(hist, dist)
}

/// Intensive quadratic entropy: extensive entropy over `S^2`.
pub fn intensive_quadratic_entropy<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    let s = hist.richness();
    if s == 0 {
        return 0.0;
    }
    ordered_distance_sum(hist, dist) / (s * s) as f64
}

/// Total taxonomic distinctness: per-species mean distance to the others, summed.
pub fn total_taxonomic_distinctness<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> f64 {
    let s = hist.richness();
    if s < 2 {
        return 0.0;
    }
    ordered_distance_sum(hist, dist) / (s - 1) as f64
}

/// The nine per-subband taxonomic features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxonomicVector {
    pub delta: f64,
    pub delta_star: f64,
    pub s_pd: f64,
    pub d_nn: f64,
    pub e_eq: f64,
    pub e_iq: f64,
    pub d_tt: f64,
    pub h_shannon: f64,
    pub i_total: f64,
}

impl TaxonomicVector {
    pub const NAMES: [&'static str; 9] = ["delta", "delta_star", "s_PD", "d_NN", "e_EQ", "e_IQ", "d_TT", "H_shannon", "I_total"];

    pub fn from_histogram<D: TaxonomicDistance + ?Sized>(hist: &AbundanceHistogram, dist: &D) -> Self {
        Self {
            delta: taxonomic_diversity(hist, dist).unwrap_or(0.0),
            delta_star: taxonomic_distinctness(hist, dist),
            s_pd: sum_phylogenetic_distances(hist, dist),
            d_nn: nearest_neighbor_distance(hist, dist),
            e_eq: extensive_quadratic_entropy(hist, dist),
            e_iq: intensive_quadratic_entropy(hist, dist),
            d_tt: total_taxonomic_distinctness(hist, dist),
            h_shannon: shannon_wiener(hist),
            i_total: total_information(hist),
        }
    }

    pub fn to_array(&self) -> [f64; 9] {
        [self.delta, self.delta_star, self.s_pd, self.d_nn, self.e_eq, self.e_iq, self.d_tt, self.h_shannon, self.i_total]
    }
}

/// Taxonomic vector of a quantized grid.
pub fn taxonomic_vector<D: TaxonomicDistance + ?Sized>(levels: &Grid<u32>, dist: &D) -> TaxonomicVector {
    TaxonomicVector::from_histogram(&AbundanceHistogram::from_grid(levels), dist)
}
