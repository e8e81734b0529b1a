//! Runs all six schemes over synthetic frames and prints mean ± 95% CI for
//! each metric, plus total counts.
//!
//! `cargo run --release --example compare_schemes -- [frames] [seed]`

use detsieve::io::ground_truth::GroundTruth;
use detsieve::pipeline::compare_schemes;
use detsieve::{generate_frames, ComponentSet, Metrics, SceneParams, SchemeSpec};

fn main() -> detsieve::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20, |a| a.parse().expect("frame count"));
    let seed: u64 = args.next().map_or(42, |a| a.parse().expect("seed"));

    let params = SceneParams::default().with_seed(seed);
    let scenes = generate_frames(&params, n)?;
    let frames: Vec<_> = scenes.iter().enumerate().map(|(i, s)| (i, s.det_mask.clone())).collect();
    let gt = GroundTruth {
        width: params.width,
        height: params.height,
        frames: scenes
            .iter()
            .enumerate()
            .map(|(i, s)| Ok((i, ComponentSet::from_rects(params.width, params.height, &s.gt_rects)?)))
            .collect::<detsieve::Result<_>>()?,
    };
    let schemes = SchemeSpec::NAMES
        .iter()
        .map(|name| SchemeSpec::default_for(name))
        .collect::<detsieve::Result<Vec<_>>>()?;

    let report = compare_schemes(&frames, &gt, &schemes)?;
    println!("{n} frames, seed {seed}");
    print!("{:<18} {:>7} {:>7} {:>7}", "scheme", "tp", "fn", "fp");
    for metric in Metrics::NAMES {
        print!(" {metric:>17}");
    }
    println!();
    for spec in &schemes {
        let c = report.total_counts(spec.name());
        print!("{:<18} {:>7} {:>7} {:>7}", spec.name(), c.tp, c.fn_, c.fp);
        for metric in Metrics::NAMES {
            let s = report.summary_for(spec.name(), metric).expect("summarized");
            print!(" {:>8.3} ± {:<6.3}", s.mean, s.ci95_halfwidth);
        }
        println!();
    }
    Ok(())
}
