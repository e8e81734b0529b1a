//! Detection post-processing schemes.
//!
//! Every scheme maps a binary detection mask to a new binary mask. The
//! two-stage scheme ([`apply_proposed`]) sieves 8-connected objects by area
//! and then closes the result; the other four reproduce the comparison
//! schemes: median+dilation, area/aspect filtering, shape-index filtering,
//! and large-object sieving followed by opening.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mask::{label_components, render_components, BinaryMask, Component, ComponentSet, Connectivity};
use crate::morphology::{close, dilate, median_filter, open, StructuringElement};

/// Area range used for the 720x480 Tucson-like imagery.
pub const TUCSON_AREA_RANGE: (usize, usize) = (5, 160);
/// Area range used for the slightly finer Phoenix-like imagery.
pub const PHOENIX_AREA_RANGE: (usize, usize) = (5, 180);

#[derive(Clone, Debug, PartialEq)]
pub struct ProposedParams {
    pub t_low: usize,
    pub t_high: usize,
    pub se: StructuringElement,
}

impl ProposedParams {
    pub fn tucson() -> Self {
        Self {
            t_low: TUCSON_AREA_RANGE.0,
            t_high: TUCSON_AREA_RANGE.1,
            se: StructuringElement::square(1),
        }
    }

    pub fn phoenix() -> Self {
        Self {
            t_low: PHOENIX_AREA_RANGE.0,
            t_high: PHOENIX_AREA_RANGE.1,
            se: StructuringElement::square(1),
        }
    }
}

impl Default for ProposedParams {
    fn default() -> Self {
        Self::tucson()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilteredDilationParams {
    pub median_window: usize,
    pub dilation_se: StructuringElement,
}

impl Default for FilteredDilationParams {
    fn default() -> Self {
        Self {
            median_window: 3,
            dilation_se: StructuringElement::square(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicParams {
    /// Fraction of the largest ground-truth area below which detections are dropped.
    pub area_fraction: f64,
    /// Detections with a smaller bbox aspect ratio are dropped.
    pub aspect_min: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        Self {
            area_fraction: 0.05,
            aspect_min: 0.2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShapeIndexParams {
    /// Explicit cutoff; when `None` the lowest ground-truth shape index is used.
    pub si_min: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveOpenParams {
    pub area_max: usize,
    pub open_se: StructuringElement,
}

impl Default for SieveOpenParams {
    fn default() -> Self {
        Self {
            area_max: 2000,
            open_se: StructuringElement::disk(5),
        }
    }
}

/// One of the five post-processing schemes, or none at all.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeSpec {
    NoOp,
    Proposed(ProposedParams),
    FilteredDilation(FilteredDilationParams),
    HeuristicFiltering(HeuristicParams),
    ShapeIndexFiltering(ShapeIndexParams),
    SieveAndOpen(SieveOpenParams),
}

impl SchemeSpec {
    /// Command-line names, in the order the schemes are usually tabulated.
    pub const NAMES: [&'static str; 6] = [
        "noop",
        "filtered-dilation",
        "heuristic",
        "shape-index",
        "sieve-open",
        "proposed",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeSpec::NoOp => "noop",
            SchemeSpec::Proposed(_) => "proposed",
            SchemeSpec::FilteredDilation(_) => "filtered-dilation",
            SchemeSpec::HeuristicFiltering(_) => "heuristic",
            SchemeSpec::ShapeIndexFiltering(_) => "shape-index",
            SchemeSpec::SieveAndOpen(_) => "sieve-open",
        }
    }

    /// Default parameters for a scheme given its command-line name.
    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "noop" => SchemeSpec::NoOp,
            "proposed" => SchemeSpec::Proposed(ProposedParams::default()),
            "filtered-dilation" => SchemeSpec::FilteredDilation(FilteredDilationParams::default()),
            "heuristic" => SchemeSpec::HeuristicFiltering(HeuristicParams::default()),
            "shape-index" => SchemeSpec::ShapeIndexFiltering(ShapeIndexParams::default()),
            "sieve-open" => SchemeSpec::SieveAndOpen(SieveOpenParams::default()),
            other => {
                return Err(Error::Param(format!(
                    "unknown scheme {other:?} (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    /// True if applying the scheme needs ground-truth statistics.
    pub fn requires_context(&self) -> bool {
        match self {
            SchemeSpec::HeuristicFiltering(_) => true,
            SchemeSpec::ShapeIndexFiltering(p) => p.si_min.is_none(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SchemeSpec::NoOp => Ok(()),
            SchemeSpec::Proposed(p) => check_area_range(p.t_low, p.t_high),
            SchemeSpec::FilteredDilation(p) => check_window(p.median_window),
            SchemeSpec::HeuristicFiltering(p) => {
                if !(p.area_fraction > 0.0 && p.area_fraction < 1.0) {
                    return Err(Error::Param(format!(
                        "area fraction must be in (0, 1), got {}",
                        p.area_fraction
                    )));
                }
                if !(0.0..=1.0).contains(&p.aspect_min) {
                    return Err(Error::Param(format!(
                        "minimum aspect ratio must be in [0, 1], got {}",
                        p.aspect_min
                    )));
                }
                Ok(())
            }
            SchemeSpec::ShapeIndexFiltering(p) => match p.si_min {
                Some(si) if !(si.is_finite() && si >= 0.0) => Err(Error::Param(format!(
                    "shape-index cutoff must be finite and >= 0, got {si}"
                ))),
                _ => Ok(()),
            },
            SchemeSpec::SieveAndOpen(_) => Ok(()),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::default_for(s)
    }
}

fn check_area_range(t_low: usize, t_high: usize) -> Result<()> {
    if t_low > t_high {
        return Err(Error::Param(format!(
            "area range is empty: low {t_low} > high {t_high}"
        )));
    }
    Ok(())
}

fn check_window(window: usize) -> Result<()> {
    if window.is_multiple_of(2) {
        return Err(Error::Param(format!(
            "median window must be odd and >= 1, got {window}"
        )));
    }
    Ok(())
}

/// Ground-truth objects whose statistics drive some of the schemes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroundTruthContext {
    pub components: Vec<Component>,
}

impl GroundTruthContext {
    pub fn new(components: Vec<Component>) -> Self {
        Self { components }
    }

    pub fn max_area(&self) -> Option<usize> {
        self.components.iter().map(Component::area).max()
    }

    pub fn min_shape_index(&self) -> Option<f64> {
        self.components.iter().map(shape_index).min_by(f64::total_cmp)
    }
}

impl From<ComponentSet> for GroundTruthContext {
    fn from(set: ComponentSet) -> Self {
        Self::new(set.components)
    }
}

/// Keeps the 8-connected components for which `keep` returns true.
fn select_components(mask: &BinaryMask, mut keep: impl FnMut(&Component) -> bool) -> BinaryMask {
    let (_, components) = label_components(mask, Connectivity::Eight);
    render_components(components.iter().filter(|c| keep(c)), mask.width(), mask.height())
        .expect("labeled components lie inside their mask")
}

/// Keeps the 8-connected objects whose area lies in `[t_low, t_high]`.
pub fn sieve_area(mask: &BinaryMask, t_low: usize, t_high: usize) -> Result<BinaryMask> {
    check_area_range(t_low, t_high)?;
    Ok(select_components(mask, |c| (t_low..=t_high).contains(&c.area())))
}

/// Area sieve, then closing. Closing may merge survivors into objects
/// larger than `t_high`; they are not sieved again.
pub fn apply_proposed(mask: &BinaryMask, params: &ProposedParams) -> Result<BinaryMask> {
    let sieved = sieve_area(mask, params.t_low, params.t_high)?;
    Ok(close(&sieved, &params.se))
}

pub fn apply_filtered_dilation(mask: &BinaryMask, params: &FilteredDilationParams) -> Result<BinaryMask> {
    let smoothed = median_filter(mask, params.median_window)?;
    Ok(dilate(&smoothed, &params.dilation_se))
}

/// Drops objects smaller than `area_fraction` of the largest ground-truth
/// object, or flatter than `aspect_min`. Objects exactly at the area cutoff
/// are kept.
pub fn apply_heuristic_filtering(
    mask: &BinaryMask,
    params: &HeuristicParams,
    ctx: &GroundTruthContext,
) -> Result<BinaryMask> {
    SchemeSpec::HeuristicFiltering(params.clone()).validate()?;
    let max_gt = ctx
        .max_area()
        .ok_or_else(|| Error::Context("heuristic filtering needs at least one ground-truth object".into()))?;
    let cutoff = params.area_fraction * max_gt as f64;
    Ok(select_components(mask, |c| {
        c.area() as f64 >= cutoff && c.aspect_ratio() >= params.aspect_min
    }))
}

/// Perimeter over four times the square root of the area.
pub fn shape_index(component: &Component) -> f64 {
    component.perimeter() as f64 / (4.0 * (component.area() as f64).sqrt())
}

pub fn apply_shape_index_filtering(
    mask: &BinaryMask,
    params: &ShapeIndexParams,
    ctx: Option<&GroundTruthContext>,
) -> Result<BinaryMask> {
    SchemeSpec::ShapeIndexFiltering(params.clone()).validate()?;
    let si_min = match params.si_min {
        Some(si) => si,
        None => ctx.and_then(GroundTruthContext::min_shape_index).ok_or_else(|| {
            Error::Context("shape-index filtering needs ground truth or an explicit cutoff".into())
        })?,
    };
    Ok(select_components(mask, |c| shape_index(c) >= si_min))
}

/// Drops objects larger than `area_max`, then opens.
pub fn apply_sieve_and_open(mask: &BinaryMask, params: &SieveOpenParams) -> Result<BinaryMask> {
    let sieved = select_components(mask, |c| c.area() <= params.area_max);
    Ok(open(&sieved, &params.open_se))
}

pub fn apply_scheme(
    mask: &BinaryMask,
    spec: &SchemeSpec,
    ctx: Option<&GroundTruthContext>,
) -> Result<BinaryMask> {
    spec.validate()?;
    match spec {
        SchemeSpec::NoOp => Ok(mask.clone()),
        SchemeSpec::Proposed(p) => apply_proposed(mask, p),
        SchemeSpec::FilteredDilation(p) => apply_filtered_dilation(mask, p),
        SchemeSpec::HeuristicFiltering(p) => {
            let ctx = ctx.ok_or_else(|| Error::Context("heuristic filtering needs ground truth".into()))?;
            apply_heuristic_filtering(mask, p, ctx)
        }
        SchemeSpec::ShapeIndexFiltering(p) => apply_shape_index_filtering(mask, p, ctx),
        SchemeSpec::SieveAndOpen(p) => apply_sieve_and_open(mask, p),
    }
}
