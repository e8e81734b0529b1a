mod common;

use common::validate_scene;
use detsieve::{
    dilate, generate_frames, generate_scene, prng_next, BinaryMask, CorruptionParams, Error, SceneParams, SplitMix64,
    StructuringElement,
};
use proptest::prelude::*;

/// Plain splitmix64 written from its published constants.
fn splitmix_oracle(seed: u64, n: usize) -> Vec<u64> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s = s.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^ (z >> 31)
        })
        .collect()
}

fn clean(params: SceneParams) -> SceneParams {
    SceneParams {
        corruption: CorruptionParams::none(),
        ..params
    }
}

fn difference(a: &BinaryMask, b: &BinaryMask) -> usize {
    a.as_slice().iter().zip(b.as_slice()).filter(|(x, y)| **x == 1 && **y == 0).count()
}

#[test]
fn generator_matches_reference_sequence() {
    let mut rng = SplitMix64::new(0);
    assert_eq!(rng.next_u64(), 0xE220A8397B1DCDAF);
    for seed in [0, 1, 42, u64::MAX] {
        let mut rng = SplitMix64::new(seed);
        let got: Vec<u64> = (0..1000).map(|_| rng.next_u64()).collect();
        assert_eq!(got, splitmix_oracle(seed, 1000));
    }
    let (state, value) = prng_next(0);
    assert_eq!(value, 0xE220A8397B1DCDAF);
    assert_eq!(SplitMix64::new(state).next_u64(), splitmix_oracle(0, 2)[1]);
}

#[test]
fn top_bit_is_balanced() {
    let mut rng = SplitMix64::new(1);
    let ones: u64 = (0..1_000_000).map(|_| rng.next_u64() >> 63).sum();
    let mean = ones as f64 / 1e6;
    assert!((mean - 0.5).abs() <= 0.01, "{mean}");
}

#[test]
fn scenes_satisfy_their_invariants() {
    for params in [SceneParams::default(), SceneParams::phoenix()] {
        for seed in 0..100 {
            let p = params.clone().with_seed(seed);
            let s = generate_scene(&p).unwrap();
            validate_scene(&s.gt_rects, &s.gt_mask, &p).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        }
    }
}

#[test]
fn same_seed_same_scene() {
    let p = SceneParams::default().with_seed(42);
    assert_eq!(generate_scene(&p).unwrap(), generate_scene(&p).unwrap());
    assert_ne!(generate_scene(&p).unwrap(), generate_scene(&p.clone().with_seed(43)).unwrap());
}

#[test]
fn frames_use_consecutive_seeds() {
    let p = SceneParams::default().with_seed(7);
    let frames = generate_frames(&p, 4).unwrap();
    for (i, f) in frames.iter().enumerate() {
        assert_eq!(f, &generate_scene(&p.clone().with_seed(7 + i as u64)).unwrap());
    }
}

#[test]
fn no_corruption_gives_exact_detections() {
    let s = generate_scene(&clean(SceneParams::default().with_seed(3))).unwrap();
    assert_eq!(s.det_mask, s.gt_mask);
}

#[test]
fn certain_miss_gives_empty_detections() {
    let mut p = clean(SceneParams::default().with_seed(3));
    p.corruption.p_miss = 1.0;
    assert!(generate_scene(&p).unwrap().det_mask.is_blank());
}

#[test]
fn jitter_stays_within_one_pixel() {
    let mut p = clean(SceneParams::default());
    p.corruption.boundary_jitter = 1;
    p.corruption.p_split = 0.5;
    for seed in 0..10 {
        let s = generate_scene(&p.clone().with_seed(seed)).unwrap();
        assert!(s.det_mask.is_subset_of(&dilate(&s.gt_mask, &StructuringElement::square(1))));
    }
}

#[test]
fn clutter_sizes() {
    for seed in 0..30 {
        let mut p = clean(SceneParams::default().with_seed(seed));
        p.corruption.n_small_clutter = 1;
        let s = generate_scene(&p).unwrap();
        let extra = difference(&s.det_mask, &s.gt_mask);
        assert!((1..=4).contains(&extra), "seed {seed}: {extra}");

        let mut p = clean(SceneParams::default().with_seed(seed));
        p.corruption.n_large_clutter = 1;
        let s = generate_scene(&p).unwrap();
        assert!(difference(&s.det_mask, &s.gt_mask) > 160);
    }
}

#[test]
fn impossible_packing_is_reported() {
    let p = SceneParams {
        width: 30,
        height: 30,
        n_vehicles: 40,
        ..SceneParams::default()
    };
    assert!(matches!(generate_scene(&p), Err(Error::Packing { .. })));
}

#[test]
fn invalid_parameters_are_rejected() {
    let mut p = SceneParams::default();
    p.corruption.p_miss = 1.5;
    assert!(matches!(generate_scene(&p), Err(Error::Param(_))));
    let p = SceneParams {
        vehicle_area_range: (50, 10),
        ..SceneParams::default()
    };
    assert!(matches!(generate_scene(&p), Err(Error::Param(_))));
}

proptest! {
    #[test]
    fn draws_stay_in_range(seed in any::<u64>(), n in 1u64..1000, lo in -50i64..50, span in 0i64..100) {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..50 {
            prop_assert!(rng.below(n) < n);
            let v = rng.range_inclusive(lo, lo + span);
            prop_assert!(v >= lo && v <= lo + span);
            let f = rng.next_f64();
            prop_assert!((0.0..1.0).contains(&f));
        }
        prop_assert!(!rng.chance(0.0));
        prop_assert!(rng.chance(1.0));
    }

    #[test]
    fn small_scenes_are_valid(seed in any::<u64>(), n in 0usize..8) {
        let p = SceneParams { width: 80, height: 60, n_vehicles: n, seed, ..SceneParams::default() };
        let s = generate_scene(&p).unwrap();
        prop_assert!(validate_scene(&s.gt_rects, &s.gt_mask, &p).is_ok());
        prop_assert_eq!(s.det_mask.dims(), (80, 60));
    }
}
