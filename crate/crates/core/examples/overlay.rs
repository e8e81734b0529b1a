//! Renders a color-coded classification of one synthetic frame after the
//! proposed scheme and writes it as a PPM.
//!
//! `cargo run --example overlay -- [out.ppm]`

use detsieve::io::overlay::{
    render_overlay, write_overlay, FALSE_NEGATIVE, FALSE_POSITIVE, TRUE_POSITIVE, UNMATCHED_OVERLAPPING,
};
use detsieve::pipeline::evaluate_frame;
use detsieve::{generate_scene, ComponentSet, ProposedParams, SceneParams, SchemeSpec};

fn main() -> detsieve::Result<()> {
    let path = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("overlay.ppm"), Into::into);
    let params = SceneParams::default().with_seed(7);
    let scene = generate_scene(&params)?;
    let gt = ComponentSet::from_rects(params.width, params.height, &scene.gt_rects)?;

    for spec in [SchemeSpec::NoOp, SchemeSpec::Proposed(ProposedParams::tucson())] {
        let (processed, m) = evaluate_frame(&scene.det_mask, &gt, &spec)?;
        let img = render_overlay(&processed, &gt, &m)?;
        println!(
            "{:<8} TP {:5} px, FP {:5} px, FN {:5} px, uncredited {:4} px",
            spec.name(),
            img.count(TRUE_POSITIVE),
            img.count(FALSE_POSITIVE),
            img.count(FALSE_NEGATIVE),
            img.count(UNMATCHED_OVERLAPPING)
        );
        if spec != SchemeSpec::NoOp {
            write_overlay(&processed, &gt, &m, &path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
