mod common;

use common::{aspect_oracle, flood_fill_partition, perimeter_oracle, random_sized_mask, rng, Partition};
use detsieve::{label_components, render_components, BinaryMask, ComponentSet, Connectivity};
use proptest::prelude::*;

fn partition_of(mask: &BinaryMask, conn: Connectivity) -> Partition {
    let (_, comps) = label_components(mask, conn);
    comps.iter().map(|c| c.pixels().to_vec()).collect()
}

fn arb_mask(max_side: usize) -> impl Strategy<Value = BinaryMask> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h)
            .prop_map(move |bits| BinaryMask::from_fn(w, h, |r, c| bits[r * w + c]))
    })
}

#[test]
fn matches_flood_fill_on_random_masks() {
    let mut rng = rng(7);
    for _ in 0..300 {
        let mask = random_sized_mask(&mut rng, 24);
        assert_eq!(partition_of(&mask, Connectivity::Four), flood_fill_partition(&mask, false));
        assert_eq!(partition_of(&mask, Connectivity::Eight), flood_fill_partition(&mask, true));
    }
}

#[test]
fn diagonal_pair_depends_on_connectivity() {
    let mask = BinaryMask::from_ascii("#.\n.#").unwrap();
    assert_eq!(label_components(&mask, Connectivity::Four).1.len(), 2);
    assert_eq!(label_components(&mask, Connectivity::Eight).1.len(), 1);
}

#[test]
fn labels_follow_raster_order() {
    let mask = BinaryMask::from_ascii(
        "...#\n\
         #..#\n\
         #...\n\
         ..##",
    )
    .unwrap();
    let (labels, comps) = label_components(&mask, Connectivity::Eight);
    assert_eq!(labels.component_count(), 3);
    assert_eq!(labels.get(0, 3), 1);
    assert_eq!(labels.get(1, 0), 2);
    assert_eq!(labels.get(3, 2), 3);
    assert_eq!(labels.get(0, 0), 0);
    let firsts: Vec<_> = comps.iter().map(|c| c.pixels()[0]).collect();
    assert_eq!(firsts, vec![(0, 3), (1, 0), (3, 2)]);
}

proptest! {
    #[test]
    fn label_map_agrees_with_component_pixels(mask in arb_mask(20)) {
        let (labels, comps) = label_components(&mask, Connectivity::Eight);
        let mut covered = 0;
        for c in &comps {
            for &(r, col) in c.pixels() {
                prop_assert_eq!(labels.get(r, col), c.label());
            }
            covered += c.area();
        }
        prop_assert_eq!(covered, mask.count_ones());
        for (r, col) in (0..mask.height()).flat_map(|r| (0..mask.width()).map(move |c| (r, c))) {
            prop_assert_eq!(labels.get(r, col) != 0, mask.get(r, col));
        }
    }

    #[test]
    fn render_round_trips(mask in arb_mask(20)) {
        let set = ComponentSet::from_mask(&mask);
        prop_assert_eq!(set.to_mask().unwrap(), mask.clone());
        let (_, comps) = label_components(&mask, Connectivity::Four);
        prop_assert_eq!(render_components(comps.iter(), mask.width(), mask.height()).unwrap(), mask);
    }

    #[test]
    fn eight_connectivity_never_has_more_components(mask in arb_mask(20)) {
        let four = label_components(&mask, Connectivity::Four).1.len();
        let eight = label_components(&mask, Connectivity::Eight).1.len();
        prop_assert!(eight <= four);
    }

    #[test]
    fn four_components_refine_eight_components(mask in arb_mask(16)) {
        let (eight_map, _) = label_components(&mask, Connectivity::Eight);
        let (_, four) = label_components(&mask, Connectivity::Four);
        for c in &four {
            let l = eight_map.get(c.pixels()[0].0, c.pixels()[0].1);
            prop_assert!(c.pixels().iter().all(|&(r, col)| eight_map.get(r, col) == l));
        }
    }

    #[test]
    fn component_statistics_match_definitions(mask in arb_mask(16)) {
        for c in label_components(&mask, Connectivity::Eight).1 {
            prop_assert_eq!(c.perimeter(), perimeter_oracle(c.pixels()));
            prop_assert!((c.aspect_ratio() - aspect_oracle(c.pixels())).abs() < 1e-12);
            prop_assert!(c.perimeter() <= c.area());
            let b = c.bbox();
            prop_assert!(c.area() <= b.height() * b.width());
        }
    }
}
