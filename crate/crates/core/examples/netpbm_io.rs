//! Writes a mask as plain and packed PBM, shows the bytes, reads both back,
//! and round-trips a ground-truth CSV.

use detsieve::io::ground_truth::{parse_csv, to_csv};
use detsieve::io::netpbm::{decode_mask, encode_p1, encode_p4};
use detsieve::{BinaryMask, Rect};

fn main() -> detsieve::Result<()> {
    let mask = BinaryMask::from_ascii(
        "#.........#
         .###...##..
         .###.......",
    )?;

    let p1 = encode_p1(&mask);
    let p4 = encode_p4(&mask);
    println!("P1, {} bytes:\n{}", p1.len(), String::from_utf8_lossy(&p1));
    println!("P4, {} bytes: {:02x?}", p4.len(), p4);
    assert_eq!(decode_mask(&p1, false)?, mask);
    assert_eq!(decode_mask(&p4, false)?, mask);
    assert_eq!(decode_mask(&p4, true)?, mask.complement());

    let rects = [Rect::new(1, 1, 2, 3), Rect::new(1, 7, 1, 2)];
    let csv = to_csv([(0, &rects[..]), (3, &rects[..1])]);
    print!("{csv}");
    let gt = parse_csv(&csv, mask.width(), mask.height())?;
    for (frame, set) in &gt.frames {
        println!("frame {frame}: objects {}, pixels {}", set.len(), set.to_mask()?.count_ones());
    }
    Ok(())
}
