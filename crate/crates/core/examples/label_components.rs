//! Labels a small mask under both connectivities and prints per-object
//! statistics.

use detsieve::{label_components, shape_index, BinaryMask, Connectivity};

fn main() -> detsieve::Result<()> {
    let mask = BinaryMask::from_ascii(
        "##......#.
         ##.....#..
         ......#...
         .####.....
         .####...##",
    )?;
    println!("{mask:?}");

    for conn in [Connectivity::Four, Connectivity::Eight] {
        let (labels, components) = label_components(&mask, conn);
        println!("{conn:?}: {} objects", labels.component_count());
        for c in &components {
            let b = c.bbox();
            println!(
                "  #{} area {:2} bbox {}x{} at ({}, {}) perimeter {:2} aspect {:.2} SI {:.3}",
                c.label(),
                c.area(),
                b.height(),
                b.width(),
                b.min_row,
                b.min_col,
                c.perimeter(),
                c.aspect_ratio(),
                shape_index(c),
            );
        }
    }
    Ok(())
}
