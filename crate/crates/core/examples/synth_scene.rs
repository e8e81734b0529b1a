//! Generates one synthetic frame, prints what the corruption did, and writes
//! the ground truth and detection bitmaps to a directory.
//!
//! `cargo run --example synth_scene -- [seed] [out-dir]`

use detsieve::io::netpbm::write_mask;
use detsieve::{generate_scene, ComponentSet, SceneParams};

fn main() -> detsieve::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(42, |a| a.parse().expect("seed"));
    let out = args.next().map_or_else(std::env::temp_dir, Into::into);

    let params = SceneParams::default().with_seed(seed);
    let scene = generate_scene(&params)?;
    let det = ComponentSet::from_mask(&scene.det_mask);

    println!("{}x{} frame, seed {seed}", params.width, params.height);
    println!("{} vehicles, {} ground-truth pixels", scene.gt_rects.len(), scene.gt_mask.count_ones());
    for r in scene.gt_rects.iter().take(5) {
        println!("  vehicle {}x{} at ({}, {})", r.height, r.width, r.row, r.col);
    }
    let mut areas: Vec<usize> = det.components.iter().map(|c| c.area()).collect();
    areas.sort_unstable();
    println!("{} detected objects, areas {:?} .. {:?}", det.len(), &areas[..5.min(areas.len())], &areas[areas.len().saturating_sub(3)..]);

    let gt_path = out.join(format!("gt_{seed}.pbm"));
    let det_path = out.join(format!("det_{seed}.pbm"));
    write_mask(&scene.gt_mask, &gt_path)?;
    write_mask(&scene.det_mask, &det_path)?;
    println!("wrote {} and {}", gt_path.display(), det_path.display());
    Ok(())
}
