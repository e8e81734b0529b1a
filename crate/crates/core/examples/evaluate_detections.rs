//! Classifies detections against ground truth and prints counts, metrics and
//! the individual pairs.

use detsieve::{match_detections, BinaryMask, ComponentSet, Rect};

fn main() -> detsieve::Result<()> {
    let (w, h) = (60, 30);
    let gt = ComponentSet::from_rects(
        w,
        h,
        &[Rect::new(2, 2, 5, 9), Rect::new(2, 20, 5, 9), Rect::new(15, 5, 9, 4), Rect::new(15, 40, 6, 10)],
    )?;

    let mut det = BinaryMask::new(w, h);
    det.fill_rect(&Rect::new(3, 3, 4, 9), true); // shifted hit
    det.fill_rect(&Rect::new(2, 20, 5, 4), true); // first half of a split vehicle
    det.fill_rect(&Rect::new(2, 25, 5, 4), true); // second half
    det.fill_rect(&Rect::new(25, 25, 2, 2), true); // clutter
    // Both lower vehicles are missed entirely.

    let m = match_detections(&ComponentSet::from_mask(&det), &gt)?;
    let c = m.counts();
    let metrics = m.metrics();
    println!("tp {} fn {} fp {}", c.tp, c.fn_, c.fp);
    println!(
        "precision {:.3} recall {:.3} F {:.3} PWC {:.1}%",
        metrics.precision, metrics.recall, metrics.fscore, metrics.pwc
    );
    for p in &m.pairs {
        println!("detection {} -> object {} ({} px overlap)", p.det_label, p.gt_label, p.overlap);
    }
    println!("uncredited fragments: {:?}", m.unmatched_overlapping);
    println!("missed objects: {:?}", m.false_negatives);
    Ok(())
}
