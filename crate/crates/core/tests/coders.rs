mod common;

use common::{bsif_oracle, lbp_oracle, lpq_oracle, random_filters, random_image, uniform_bin, OracleCodes};
use kinvid_core::coders::{
    bsif_code, lbp_code, learn_bsif_filters, learn_bsif_filters_detailed, lpq_code, CodeImage, FilterBank, IcaConfig, LbpParams, LpqParams,
    UniformMapping,
};
use kinvid_core::rng::SplitMix64;
use kinvid_core::GrayImage;
use proptest::prelude::*;

fn assert_codes(found: &CodeImage, oracle: &OracleCodes, what: &str) {
    let w = found.width();
    let mut interior = 0;
    for (i, o) in oracle.iter().enumerate() {
        if let Some(o) = o {
            interior += 1;
            assert_eq!(found.get(i % w, i / w), *o, "{what} at ({}, {})", i % w, i / w);
        }
    }
    assert_eq!(found.valid_count(), interior, "{what}: interior size");
}

/// 12x12, or larger where the window would not fit.
fn side_for(window: usize) -> usize {
    12.max(window + 5)
}

#[test]
fn lbp_matches_oracle_at_every_paper_scale() {
    let mut rng = SplitMix64::new(1);
    for (p, r) in [(8, 1.0), (16, 2.0), (24, 3.0)] {
        let uniform = LbpParams::uniform(p, r).unwrap();
        let full = (p <= 16).then(|| LbpParams::full(p, r).unwrap());
        for _ in 0..100 {
            let img = random_image(12, 12, &mut rng);
            assert_codes(&lbp_code(&img, &uniform).unwrap(), &lbp_oracle(&img, p, r, true), "uniform");
            if let Some(full) = &full {
                assert_codes(&lbp_code(&img, full).unwrap(), &lbp_oracle(&img, p, r, false), "full");
            }
        }
    }
}

#[test]
fn lpq_matches_oracle_for_every_window() {
    let mut rng = SplitMix64::new(2);
    for win in (3..=17).step_by(2) {
        let params = LpqParams::new(win).unwrap();
        let side = side_for(win);
        for _ in 0..100 {
            let img = random_image(side, side, &mut rng);
            assert_codes(&lpq_code(&img, &params).unwrap(), &lpq_oracle(&img, win), "lpq");
        }
    }
}

#[test]
fn bsif_matches_oracle_for_every_window() {
    let mut rng = SplitMix64::new(3);
    for side in (3..=17).step_by(2) {
        let filters = random_filters(8, side, &mut rng);
        let bank = FilterBank::new(8, side, filters.concat()).unwrap();
        let img_side = side_for(side);
        for _ in 0..100 {
            let img = random_image(img_side, img_side, &mut rng);
            assert_codes(&bsif_code(&img, &bank).unwrap(), &bsif_oracle(&img, &filters, side), "bsif");
        }
    }
}

#[test]
fn uniform_mapping_enumeration() {
    for p in [8u32, 16] {
        let m = UniformMapping::new(p);
        let table = m.table();
        let uniform: Vec<u32> = (0..1u32 << p).filter(|&c| uniform_bin(c as u64, p) != p * (p - 1) + 2).collect();
        assert_eq!(uniform.len() as u32, p * (p - 1) + 2);
        let mut bins: Vec<u32> = uniform.iter().map(|&c| table[c as usize]).collect();
        bins.sort_unstable();
        bins.dedup();
        assert_eq!(bins.len(), uniform.len(), "uniform codes share a bin at P={p}");
        for c in 0..1u32 << p {
            assert_eq!(table[c as usize], uniform_bin(c as u64, p));
        }
    }
    assert_eq!(UniformMapping::new(8).bins(), 59);
    assert_eq!(UniformMapping::new(8).bin(0b0101_0101), 58);
}

#[test]
fn constant_images() {
    let img = GrayImage::filled(9, 9, 77);
    let lbp = lbp_code(&img, &LbpParams::full(8, 1.0).unwrap()).unwrap();
    assert!(lbp.valid_codes().all(|c| c == 255));
    let lpq = lpq_code(&img, &LpqParams::new(3).unwrap()).unwrap();
    assert!(lpq.valid_codes().all(|c| c == 255));
    let mut rng = SplitMix64::new(4);
    let bank = FilterBank::new(8, 3, random_filters(8, 3, &mut rng).concat()).unwrap();
    assert!(bsif_code(&img, &bank).unwrap().valid_codes().all(|c| c == 0));

    let mut spot = GrayImage::filled(5, 5, 0);
    spot.set(2, 2, 255);
    assert_eq!(lbp_code(&spot, &LbpParams::full(8, 1.0).unwrap()).unwrap().get(2, 2), 0);
}

#[test]
fn negated_image_complements_bsif_bits() {
    let mut rng = SplitMix64::new(5);
    let filters = random_filters(8, 3, &mut rng);
    let bank = FilterBank::new(8, 3, filters.concat()).unwrap();
    let img = random_image(8, 8, &mut rng);
    let neg = GrayImage::from_fn(8, 8, |x, y| 255 - img.get(x, y));
    let (a, b) = (bsif_code(&img, &bank).unwrap(), bsif_code(&neg, &bank).unwrap());
    for (ca, cb) in a.valid_codes().zip(b.valid_codes()) {
        assert_eq!(ca & cb, 0);
        assert_eq!(ca | cb, 255, "a zero response would leave a bit clear in both");
    }
}

#[test]
fn histogram_total_is_interior_size() {
    let mut rng = SplitMix64::new(6);
    let img = random_image(11, 9, &mut rng);
    let codes = lbp_code(&img, &LbpParams::full(8, 2.0).unwrap()).unwrap();
    let hist = codes.histogram();
    assert_eq!(hist.len(), 256);
    assert_eq!(hist.iter().sum::<u64>(), (11 - 4) * (9 - 4));
}

#[test]
fn learned_bank_is_deterministic_and_normalised() {
    let mut rng = SplitMix64::new(7);
    let w = 5;
    let patches: Vec<f64> = (0..60 * w * w * w * w)
        .map(|_| {
            let u = 1.0 - rng.next_f64();
            if rng.next_u64() & 1 == 0 {
                -u.ln()
            } else {
                u.ln()
            }
        })
        .collect();
    let a = learn_bsif_filters(&patches, w, 8, 3).unwrap();
    assert_eq!(learn_bsif_filters(&patches, w, 8, 3).unwrap(), a);
    assert_eq!((a.count(), a.side()), (8, w));
    for i in 0..8 {
        let f = a.filter(i);
        assert!(a.filter_mean(i).abs() < 1e-9);
        let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9, "filter {i} norm {norm}");
    }

    // whitened training components have identity covariance
    let out = learn_bsif_filters_detailed(&patches, w, 8, 3, &IcaConfig::default()).unwrap();
    let d = w * w;
    let n = patches.len() / d;
    let mut cov = [[0.0f64; 8]; 8];
    for p in patches.chunks_exact(d) {
        let dc = p.iter().sum::<f64>() / d as f64;
        let x: Vec<f64> = p.iter().zip(&out.mean).map(|(v, m)| v - dc - m).collect();
        let z: Vec<f64> = (0..8).map(|k| out.whitening[k * d..(k + 1) * d].iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        for i in 0..8 {
            for j in 0..8 {
                cov[i][j] += z[i] * z[j] / n as f64;
            }
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((cov[i][j] - expected).abs() < 1e-6, "cov[{i}][{j}] = {}", cov[i][j]);
        }
    }
}

fn image_strategy(side: usize) -> impl Strategy<Value = GrayImage> {
    proptest::collection::vec(any::<u8>(), side * side).prop_map(move |d| GrayImage::new(side, side, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codes_depend_only_on_their_neighbourhood(img in image_strategy(13), v in any::<u8>()) {
        let mut far = img.clone();
        far.set(12, 12, v);
        let mut rng = SplitMix64::new(8);
        let bank = FilterBank::new(4, 5, random_filters(4, 5, &mut rng).concat()).unwrap();
        let lbp = LbpParams::uniform(16, 2.0).unwrap();
        let lpq = LpqParams::new(5).unwrap();
        // (4, 4) is more than two pixels from (12, 12) in both axes
        prop_assert_eq!(lbp_code(&img, &lbp).unwrap().get(4, 4), lbp_code(&far, &lbp).unwrap().get(4, 4));
        prop_assert_eq!(lpq_code(&img, &lpq).unwrap().get(4, 4), lpq_code(&far, &lpq).unwrap().get(4, 4));
        prop_assert_eq!(bsif_code(&img, &bank).unwrap().get(4, 4), bsif_code(&far, &bank).unwrap().get(4, 4));
    }

    #[test]
    fn brightness_shift_leaves_codes_unchanged(d in proptest::collection::vec(0u8..200, 100), k in 1u8..56) {
        let img = GrayImage::new(10, 10, d.clone()).unwrap();
        let shifted = GrayImage::new(10, 10, d.iter().map(|v| v + k).collect()).unwrap();
        let lbp = LbpParams::uniform(8, 1.0).unwrap();
        let lpq = LpqParams::new(3).unwrap();
        let mut rng = SplitMix64::new(9);
        let bank = FilterBank::new(8, 3, random_filters(8, 3, &mut rng).concat()).unwrap();
        prop_assert_eq!(lbp_code(&img, &lbp).unwrap(), lbp_code(&shifted, &lbp).unwrap());
        prop_assert_eq!(lpq_code(&img, &lpq).unwrap(), lpq_code(&shifted, &lpq).unwrap());
        prop_assert_eq!(bsif_code(&img, &bank).unwrap(), bsif_code(&shifted, &bank).unwrap());
    }
}
