//! Area sieve followed by closing on a hand-built detection mask: a vehicle
//! split in two, a pinholed vehicle, specks and a building-sized blob.

use detsieve::{apply_proposed, sieve_area, BinaryMask, ComponentSet, ProposedParams, Rect};

fn main() -> detsieve::Result<()> {
    let mut det = BinaryMask::new(48, 24);
    det.fill_rect(&Rect::new(2, 2, 5, 6), true);
    det.fill_rect(&Rect::new(2, 9, 5, 5), true);
    det.fill_rect(&Rect::new(12, 4, 6, 10), true);
    det.set(14, 8, false);
    for (r, c) in [(20, 2), (9, 20), (21, 17), (3, 30)] {
        det.set(r, c, true);
    }
    det.fill_rect(&Rect::new(8, 28, 14, 16), true);

    let params = ProposedParams::tucson();
    let sieved = sieve_area(&det, params.t_low, params.t_high)?;
    let out = apply_proposed(&det, &params)?;

    println!("detections ({} objects)\n{det:?}", ComponentSet::from_mask(&det).len());
    println!("after sieve [{}, {}] ({} objects)\n{sieved:?}", params.t_low, params.t_high, ComponentSet::from_mask(&sieved).len());
    println!("after closing ({} objects)\n{out:?}", ComponentSet::from_mask(&out).len());
    Ok(())
}
