//! The four morphological operators and the median filter on a noisy blob.

use detsieve::{close, dilate, erode, median_filter, open, BinaryMask, StructuringElement};

fn main() -> detsieve::Result<()> {
    let mask = BinaryMask::from_ascii(
        "............
         .######.....
         .##.###...#.
         .######.....
         .######.....
         ............
         ....#.......",
    )?;
    let se = StructuringElement::square(1);
    let cross = StructuringElement::disk(1);

    println!("input\n{mask:?}");
    println!("dilate square(1)\n{:?}", dilate(&mask, &se));
    println!("erode square(1)\n{:?}", erode(&mask, &se));
    println!("open disk(1)\n{:?}", open(&mask, &cross));
    println!("close square(1)\n{:?}", close(&mask, &se));
    println!("median 3x3\n{:?}", median_filter(&mask, 3)?);

    for r in 0..=3 {
        println!(
            "radius {r}: square has {:2} offsets, disk {:2}",
            StructuringElement::square(r).len(),
            StructuringElement::disk(r).len()
        );
    }
    Ok(())
}
