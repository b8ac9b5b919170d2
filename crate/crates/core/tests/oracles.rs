//! Independent oracles: brute-force enumerations over pixels and species,
//! checked against the histogram-based implementations.

use bitw_core::descriptor::{extract_bitw, quantize_subband};
use bitw_core::dwt::{decompose_grid, decompose_pyramid, dwt2_single_level, idwt2_single_level, reconstruct_pyramid};
use bitw_core::eco::{self, AbundanceHistogram};
use bitw_core::eval::{apply_minmax, binary_auc, fit_minmax, knn_predict, lda_fit, lda_predict, make_splits, SplitMode};
use bitw_core::raster::{merge_channels, split_channels};
use bitw_core::taxo::{self, LevelDistance, TaxonomicVector};
use bitw_core::{Boundary, ChannelRaster, Grid, ImageSample, Wavelet, WaveletConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_image(rng: &mut ChaCha8Rng, h: usize, w: usize) -> ImageSample {
    let px = (0..h * w).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
    ImageSample::from_pixels(h, w, px).unwrap()
}

// ---- raster ----

#[test]
fn split_then_merge_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let img = random_image(&mut rng, 16, 16);
    let back = merge_channels(&split_channels(&img)).unwrap();
    assert_eq!(back.pixels(), img.pixels());
}

// ---- eco ----

fn kempton_taylor_brute(abundances: &[u64]) -> f64 {
    // Walk the ranked cumulative species curve one species at a time.
    let mut ranked = abundances.to_vec();
    ranked.sort();
    let s = ranked.len();
    if s < 4 {
        return 0.0;
    }
    let q1_target = (s as f64 * 0.25).ceil() as usize;
    let q3_target = (s as f64 * 0.75).ceil() as usize;
    let (mut r1, mut r2) = (0, 0);
    let mut cumulative = 0;
    for &a in &ranked {
        cumulative += 1;
        if cumulative == q1_target {
            r1 = a;
        }
        if cumulative == q3_target {
            r2 = a;
        }
    }
    if r1 == r2 {
        return 0.0;
    }
    let n_r = |r: u64| ranked.iter().filter(|&&a| a == r).count() as f64;
    let mut numerator = 0.5 * n_r(r1) + 0.5 * n_r(r2);
    for r in r1 + 1..r2 {
        numerator += n_r(r);
    }
    numerator / (r2 as f64 / r1 as f64).ln()
}

#[test]
fn kempton_taylor_fibonacci() {
    let abundances = [1, 1, 2, 3, 5, 8, 13, 21];
    let h = AbundanceHistogram::from_counts(abundances.iter().enumerate().map(|(i, &a)| (i as u32, a)));
    let expected = kempton_taylor_brute(&abundances);
    assert!((eco::kempton_taylor(&h) - expected).abs() < 1e-12);
    assert!((expected - 4.5 / 8f64.ln()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn kempton_taylor_matches_brute(abundances in prop::collection::vec(1u64..40, 1..30)) {
        let h = AbundanceHistogram::from_counts(abundances.iter().enumerate().map(|(i, &a)| (i as u32, a)));
        prop_assert!((eco::kempton_taylor(&h) - kempton_taylor_brute(&abundances)).abs() < 1e-12);
    }

    #[test]
    fn histogram_recount(values in prop::collection::vec(0u32..256, 256)) {
        let h = AbundanceHistogram::from_grid(&Grid::from_vec(16, 16, values.clone()));
        prop_assert_eq!(h.total(), 256);
        for &(level, n) in h.counts() {
            prop_assert_eq!(n, values.iter().filter(|&&v| v == level).count() as u64);
        }
    }

    #[test]
    fn eco_bounds(values in prop::collection::vec(0u32..32, 2..200)) {
        let h = AbundanceHistogram::from_levels(&values);
        let s = h.richness() as f64;
        let v = eco::BiodiversityVector::from_histogram(&h).unwrap();
        prop_assert!(v.to_array().iter().all(|x| x.is_finite()));
        prop_assert!(v.d_sw >= 0.0 && v.d_sw <= s.ln() + 1e-12);
        prop_assert!(v.d_bp >= 1.0 / s - 1e-15 && v.d_bp <= 1.0);
        prop_assert!(v.d_mn > 0.0 && v.d_mn <= 1.0);
    }

    #[test]
    fn eco_permutation_invariant(values in prop::collection::vec(0u32..256, 64), seed in any::<u64>()) {
        let mut shuffled = values.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(seed));
        let a = eco::biodiversity_vector(&ChannelRaster::new(Grid::from_vec(8, 8, values), 256).unwrap()).unwrap();
        let b = eco::biodiversity_vector(&ChannelRaster::new(Grid::from_vec(8, 8, shuffled), 256).unwrap()).unwrap();
        prop_assert_eq!(a.to_array(), b.to_array());
    }
}

#[test]
fn biodiversity_vector_is_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ch = ChannelRaster::new(Grid::from_fn(16, 16, |_, _| rng.random_range(0..40)), 256).unwrap();
    let h = eco::histogram(&ch);
    let v = eco::biodiversity_vector(&ch).unwrap().to_array();
    let expected = [
        eco::margalef(&h).unwrap(),
        eco::menhinick(&h),
        eco::shannon_wiener(&h),
        eco::mcintosh(&h),
        eco::berger_parker(&h),
        eco::fisher_alpha(&h),
        eco::kempton_taylor(&h),
        eco::shannon_wiener(&h),
        eco::total_information(&h),
    ];
    assert_eq!(v, expected);
}

// ---- taxo: brute force over pixels / species ----

fn pixel_pairs_mean(levels: &[u32]) -> f64 {
    let n = levels.len();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for p in 0..n {
        for q in p + 1..n {
            sum += f64::from(levels[p].abs_diff(levels[q]));
            pairs += 1;
        }
    }
    sum / pairs as f64
}

fn cross_level_pairs_mean(levels: &[u32]) -> f64 {
    let (mut sum, mut pairs) = (0.0, 0usize);
    for p in 0..levels.len() {
        for q in p + 1..levels.len() {
            if levels[p] != levels[q] {
                sum += f64::from(levels[p].abs_diff(levels[q]));
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum / pairs as f64
    }
}

fn species(levels: &[u32]) -> Vec<u32> {
    let mut s = levels.to_vec();
    s.sort();
    s.dedup();
    s
}

#[test]
fn taxo_small_examples_by_enumeration() {
    let px = [0, 0, 1, 2];
    assert!((pixel_pairs_mean(&px) - 7.0 / 6.0).abs() < 1e-15);
    assert!((cross_level_pairs_mean(&px) - 1.4).abs() < 1e-15);
}

proptest! {
    #[test]
    fn taxo_matches_enumeration(levels in prop::collection::vec(0u32..20, 2..=64)) {
        let h = AbundanceHistogram::from_levels(&levels);
        let sp = species(&levels);
        let s = sp.len();
        let d = |a: u32, b: u32| f64::from(a.abs_diff(b));

        let delta = taxo::taxonomic_diversity(&h, &LevelDistance).unwrap();
        prop_assert!((delta - pixel_pairs_mean(&levels)).abs() <= 1e-12 * delta.max(1.0));
        let star = taxo::taxonomic_distinctness(&h, &LevelDistance);
        prop_assert!((star - cross_level_pairs_mean(&levels)).abs() <= 1e-12 * star.max(1.0));
        let spd = if s < 2 { 0.0 } else { (s * (s - 1)) as f64 / 2.0 * cross_level_pairs_mean(&levels) };
        prop_assert!((taxo::sum_phylogenetic_distances(&h, &LevelDistance) - spd).abs() <= 1e-12 * spd.max(1.0));

        let mut nn = 0.0;
        let mut ordered = 0.0;
        let mut tt = 0.0;
        for &i in &sp {
            let others: Vec<f64> = sp.iter().filter(|&&j| j != i).map(|&j| d(i, j)).collect();
            if let Some(m) = others.iter().cloned().reduce(f64::min) {
                nn += m;
            }
            ordered += others.iter().sum::<f64>();
            if s > 1 {
                tt += others.iter().sum::<f64>() / (s - 1) as f64;
            }
        }
        prop_assert!((taxo::nearest_neighbor_distance(&h, &LevelDistance) - nn).abs() <= 1e-12 * nn.max(1.0));
        prop_assert!((taxo::extensive_quadratic_entropy(&h, &LevelDistance) - ordered).abs() <= 1e-12 * ordered.max(1.0));
        let iq = ordered / (s * s) as f64;
        prop_assert!((taxo::intensive_quadratic_entropy(&h, &LevelDistance) - iq).abs() <= 1e-12 * iq.max(1.0));
        prop_assert!((taxo::total_taxonomic_distinctness(&h, &LevelDistance) - tt).abs() <= 1e-12 * tt.max(1.0));
    }

    #[test]
    fn taxo_shift_invariant(levels in prop::collection::vec(0u32..100, 1..=64), shift in 0u32..150) {
        let a = taxo::taxonomic_vector(&Grid::from_vec(1, levels.len(), levels.clone()), &LevelDistance);
        let shifted: Vec<u32> = levels.iter().map(|l| l + shift).collect();
        let b = taxo::taxonomic_vector(&Grid::from_vec(1, shifted.len(), shifted), &LevelDistance);
        prop_assert_eq!(a.to_array(), b.to_array());
    }
}

#[test]
fn taxonomic_vector_rotation_and_reflection() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = Grid::from_fn(8, 8, |_, _| rng.random_range(0..256u32));
    let v = taxo::taxonomic_vector(&g, &LevelDistance).to_array();
    for t in [g.rot90(), g.rot180(), g.flip_horizontal(), g.flip_vertical()] {
        assert_eq!(taxo::taxonomic_vector(&t, &LevelDistance).to_array(), v);
    }
    let h = AbundanceHistogram::from_grid(&g);
    let parts = [
        taxo::taxonomic_diversity(&h, &LevelDistance).unwrap(),
        taxo::taxonomic_distinctness(&h, &LevelDistance),
        taxo::sum_phylogenetic_distances(&h, &LevelDistance),
        taxo::nearest_neighbor_distance(&h, &LevelDistance),
        taxo::extensive_quadratic_entropy(&h, &LevelDistance),
        taxo::intensive_quadratic_entropy(&h, &LevelDistance),
        taxo::total_taxonomic_distinctness(&h, &LevelDistance),
        eco::shannon_wiener(&h),
        eco::total_information(&h),
    ];
    assert_eq!(v, parts);
}

// ---- dwt ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pyramid_round_trip(rows in 8usize..40, cols in 8usize..40, seed in any::<u64>(), w in 0usize..3, periodic in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid::from_fn(rows, cols, |_, _| rng.random_range(-100.0..100.0));
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Symmetric };
        let cfg = WaveletConfig { wavelet: Wavelet::ALL[w], levels: 3, boundary };
        let p = decompose_grid(&g, &cfg).unwrap();
        let back = reconstruct_pyramid(&p, cfg.wavelet, boundary).unwrap();
        let err = back.as_slice().iter().zip(g.as_slice()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(err <= 1e-9 * g.max_abs());
    }
}

#[test]
fn haar_single_level_hand_cascade() {
    // Oracle: explicit 2x2 block formulas for orthonormal Haar.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = Grid::from_fn(6, 8, |_, _| rng.random_range(0.0..255.0f64));
    let s = dwt2_single_level(&g, &Wavelet::Haar.bank(), Boundary::Symmetric).unwrap();
    for r in 0..3 {
        for c in 0..4 {
            let (p, q, x, y) = (g.get(2 * r, 2 * c), g.get(2 * r, 2 * c + 1), g.get(2 * r + 1, 2 * c), g.get(2 * r + 1, 2 * c + 1));
            assert!((s.a.get(r, c) - (p + q + x + y) / 2.0).abs() < 1e-10);
            assert!((s.h.get(r, c) - (p + q - x - y) / 2.0).abs() < 1e-10);
            assert!((s.v.get(r, c) - (p - q + x - y) / 2.0).abs() < 1e-10);
            assert!((s.d.get(r, c) - (p - q - x + y) / 2.0).abs() < 1e-10);
        }
    }
    let back = idwt2_single_level(&s, (6, 8), &Wavelet::Haar.bank(), Boundary::Symmetric).unwrap();
    assert!(back.as_slice().iter().zip(g.as_slice()).all(|(a, b)| (a - b).abs() < 1e-9));
}

#[test]
fn haar_rotation_swaps_h_and_v() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = Grid::from_fn(16, 24, |_, _| rng.random_range(0.0..255.0f64));
    let bank = Wavelet::Haar.bank();
    let s = dwt2_single_level(&g, &bank, Boundary::Symmetric).unwrap();
    let r = dwt2_single_level(&g.rot90(), &bank, Boundary::Symmetric).unwrap();
    let abs = |x: &Grid<f64>| x.map(f64::abs);
    let close = |a: &Grid<f64>, b: &Grid<f64>| {
        a.dims() == b.dims() && a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| (x - y).abs() <= 1e-9)
    };
    assert!(close(&abs(&r.h), &abs(&s.v).rot90()));
    assert!(close(&abs(&r.v), &abs(&s.h).rot90()));
    assert!(close(&abs(&r.d), &abs(&s.d).rot90()));
}

// ---- descriptor ----

#[test]
fn descriptor_blocks_match_independent_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let img = random_image(&mut rng, 64, 64);
    let cfg = WaveletConfig::default();
    let f = extract_bitw(&img, &cfg).unwrap();
    let channels = split_channels(&img);
    for (ci, ch) in channels.iter().enumerate() {
        let bio = eco::biodiversity_vector(ch).unwrap().to_array();
        assert_eq!(&f.values[9 * ci..9 * ci + 9], bio);
        let pyr = decompose_pyramid(ch, &cfg).unwrap();
        for (si, (_, band)) in pyr.subbands().into_iter().enumerate() {
            let q = quantize_subband(band, 256).unwrap();
            let t = TaxonomicVector::from_histogram(&AbundanceHistogram::from_grid(&q.levels), &LevelDistance).to_array();
            let start = 27 + 90 * ci + 9 * si;
            assert_eq!(&f.values[start..start + 9], t);
        }
    }
    assert!(f.values.iter().all(|v| v.is_finite()));
}

// ---- eval ----

proptest! {
    #[test]
    fn minmax_inverse(rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 4), 2..20)) {
        let s = fit_minmax(&rows).unwrap();
        let t = apply_minmax(&s, &rows).unwrap();
        for (orig, scaled) in rows.iter().zip(&t) {
            let back = s.inverse_row(scaled).unwrap();
            for j in 0..4 {
                if s.maxs[j] > s.mins[j] {
                    prop_assert!((back[j] - orig[j]).abs() <= 1e-12 * orig[j].abs().max(1.0));
                }
            }
        }
        for j in 0..4 {
            let col: Vec<f64> = t.iter().map(|r| r[j]).collect();
            let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if s.maxs[j] > s.mins[j] {
                prop_assert_eq!((lo, hi), (0.0, 1.0));
            } else {
                prop_assert_eq!((lo, hi), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn auc_pair_counting(scores in prop::collection::vec(0u8..6, 10), pos in prop::collection::vec(any::<bool>(), 10)) {
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let auc = binary_auc(&scores, &pos);
        let (mut concordant, mut total) = (0.0, 0.0);
        for i in 0..10 {
            for j in 0..10 {
                if pos[i] && !pos[j] {
                    total += 1.0;
                    concordant += if scores[i] > scores[j] { 1.0 } else if scores[i] == scores[j] { 0.5 } else { 0.0 };
                }
            }
        }
        if total == 0.0 {
            prop_assert!(auc.is_none());
        } else {
            prop_assert!((auc.unwrap() - concordant / total).abs() < 1e-12);
            let warped: Vec<f64> = scores.iter().map(|s| (s * 0.7).exp() - 3.0).collect();
            prop_assert_eq!(binary_auc(&warped, &pos), auc);
        }
    }

    #[test]
    fn stratified_within_one(per_class in prop::collection::vec(2usize..40, 2..5), k in 2usize..8, seed in any::<u64>()) {
        let labels: Vec<usize> = per_class.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let plan = make_splits(&labels, per_class.len(), SplitMode::KFold { k }, seed).unwrap();
        for (c, &n) in per_class.iter().enumerate() {
            let counts: Vec<usize> = (0..k).map(|f| (0..labels.len()).filter(|&i| labels[i] == c && plan.assignments[i] == f).count()).collect();
            let (lo, hi) = (*counts.iter().min().unwrap(), *counts.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            prop_assert_eq!(counts.iter().sum::<usize>(), n);
        }
        prop_assert_eq!(&plan, &make_splits(&labels, per_class.len(), SplitMode::KFold { k }, seed).unwrap());
    }
}

#[test]
fn knn_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let train: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
    let labels: Vec<usize> = (0..20).map(|_| rng.random_range(0..3)).collect();
    let queries: Vec<Vec<f64>> = (0..30).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
    let pred = knn_predict(&train, &labels, 3, &queries).unwrap();
    for (q, &p) in queries.iter().zip(&pred) {
        let mut d: Vec<(f64, usize)> = train.iter().enumerate().map(|(i, t)| (((t[0] - q[0]).powi(2) + (t[1] - q[1]).powi(2)).sqrt(), i)).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut votes = [0usize; 3];
        let mut dist = [0.0f64; 3];
        for &(dd, i) in &d[..3] {
            votes[labels[i]] += 1;
            dist[labels[i]] += dd;
        }
        let best = (0..3)
            .filter(|&c| votes[c] > 0)
            .min_by(|&a, &b| votes[b].cmp(&votes[a]).then((dist[a] / votes[a] as f64).partial_cmp(&(dist[b] / votes[b] as f64)).unwrap()).then(a.cmp(&b)))
            .unwrap();
        assert_eq!(p, best);
    }
}

#[test]
fn lda_matches_closed_form_discriminant() {
    // Oracle: 2-D pooled covariance inverted by hand (adjugate formula).
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let centers = [[0.0, 0.0], [3.0, 1.0], [1.0, 4.0]];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, ctr) in centers.iter().enumerate() {
        for _ in 0..30 {
            rows.push(vec![ctr[0] + rng.random_range(-1.5..1.5), ctr[1] + rng.random_range(-1.5..1.5)]);
            labels.push(c);
        }
    }
    let model = lda_fit(&rows, &labels, 3).unwrap();
    let (pred, _) = lda_predict(&model, &rows).unwrap();

    let mut means = [[0.0f64; 2]; 3];
    for (r, &l) in rows.iter().zip(&labels) {
        means[l][0] += r[0] / 30.0;
        means[l][1] += r[1] / 30.0;
    }
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (r, &l) in rows.iter().zip(&labels) {
        let (dx, dy) = (r[0] - means[l][0], r[1] - means[l][1]);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let dof = (rows.len() - 3) as f64;
    let (a, b, d) = (sxx / dof + 1e-6, sxy / dof, syy / dof + 1e-6);
    let det = a * d - b * b;
    let inv = [[d / det, -b / det], [-b / det, a / det]];
    for (r, &p) in rows.iter().zip(&pred) {
        let score = |c: usize| {
            let w = [inv[0][0] * means[c][0] + inv[0][1] * means[c][1], inv[1][0] * means[c][0] + inv[1][1] * means[c][1]];
            r[0] * w[0] + r[1] * w[1] - 0.5 * (means[c][0] * w[0] + means[c][1] * w[1]) + (1.0f64 / 3.0).ln()
        };
        let best = (0..3).max_by(|&x, &y| score(x).partial_cmp(&score(y)).unwrap()).unwrap();
        assert_eq!(p, best);
    }
}
