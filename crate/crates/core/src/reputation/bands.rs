use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{Points, ReputationError};

/// Local trust level of a sender, derived from its position in the LRL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrustLevel {
    Low,
    Medium,
    Top,
}

impl TrustLevel {
    pub const ALL: [TrustLevel; 3] = [TrustLevel::Low, TrustLevel::Medium, TrustLevel::Top];
}

/// Three equal-width trust bands spanning the observed reputation range.
///
/// The threshold length is `(max - min) / 3`. Classification is done in
/// integer arithmetic on `3 * (p - min)` so band edges are exact even when
/// the span is not divisible by three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrustBands {
    pub min_points: Points,
    pub max_points: Points,
}

impl TrustBands {
    pub fn new(min_points: Points, max_points: Points) -> Self {
        debug_assert!(max_points >= min_points);
        TrustBands {
            min_points,
            max_points,
        }
    }

    /// Threshold length `(max - min) / 3`.
    pub fn th(&self) -> f64 {
        f64::from(self.span()) / 3.0
    }

    fn span(&self) -> u32 {
        self.max_points - self.min_points
    }

    pub fn is_degenerate(&self) -> bool {
        self.span() == 0
    }

    /// Inclusive integer point ranges covered by each level inside
    /// `[min, max]`, in `Low, Medium, Top` order. A level whose range is
    /// empty is reported as `None`.
    pub fn level_ranges(&self) -> [(TrustLevel, Option<RangeInclusive<Points>>); 3] {
        let mut ranges: [Option<(Points, Points)>; 3] = [None; 3];
        for p in self.min_points..=self.max_points {
            let slot = &mut ranges[classify_trust(p, self) as usize];
            *slot = match *slot {
                None => Some((p, p)),
                Some((lo, _)) => Some((lo, p)),
            };
        }
        let as_range = |r: Option<(Points, Points)>| r.map(|(lo, hi)| lo..=hi);
        [
            (TrustLevel::Low, as_range(ranges[0])),
            (TrustLevel::Medium, as_range(ranges[1])),
            (TrustLevel::Top, as_range(ranges[2])),
        ]
    }
}

/// Builds the trust bands for a set of reputation points.
pub fn compute_trust_bands<I>(points: I) -> Result<TrustBands, ReputationError>
where
    I: IntoIterator<Item = Points>,
{
    let mut iter = points.into_iter();
    let first = iter.next().ok_or(ReputationError::NoReputationData)?;
    let (min, max) = iter.fold((first, first), |(lo, hi), p| (lo.min(p), hi.max(p)));
    Ok(TrustBands::new(min, max))
}

/// Low below `min + th`, Medium on `[min + th, min + 2th]`, Top above.
/// With a zero-width span everything is Medium.
pub fn classify_trust(points: Points, bands: &TrustBands) -> TrustLevel {
    let span = i64::from(bands.span());
    if span == 0 {
        return TrustLevel::Medium;
    }
    let scaled = 3 * (i64::from(points) - i64::from(bands.min_points));
    if scaled < span {
        TrustLevel::Low
    } else if scaled <= 2 * span {
        TrustLevel::Medium
    } else {
        TrustLevel::Top
    }
}

/// Distance class of a sender relative to the reported event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeuristicBand {
    Near,
    Middle,
    Away,
}

/// One heuristic unit per ten meters of straight-line distance.
pub const METERS_PER_HEURISTIC: f64 = 10.0;

pub fn heuristic_from_distance(distance_m: f64) -> Result<f64, ReputationError> {
    if !distance_m.is_finite() || distance_m < 0.0 {
        return Err(ReputationError::InvalidDistance(distance_m));
    }
    Ok(distance_m / METERS_PER_HEURISTIC)
}

/// Heuristic band width `w = (max_h - min_h) / 3` and the evaluation
/// threshold `h_eval = 2w` that separates Near from Middle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicBands {
    pub w: f64,
    pub h_eval: f64,
}

impl HeuristicBands {
    pub fn from_width(w: f64) -> Self {
        HeuristicBands { w, h_eval: 2.0 * w }
    }
}

pub fn compute_heuristic_bands<I>(hs: I) -> Result<HeuristicBands, ReputationError>
where
    I: IntoIterator<Item = f64>,
{
    let mut bounds: Option<(f64, f64)> = None;
    for h in hs {
        if !h.is_finite() || h < 0.0 {
            return Err(ReputationError::InvalidHeuristic(h));
        }
        bounds = Some(match bounds {
            None => (h, h),
            Some((lo, hi)) => (lo.min(h), hi.max(h)),
        });
    }
    let (min_h, max_h) = bounds.ok_or(ReputationError::NoNeighborHeuristics)?;
    Ok(HeuristicBands::from_width((max_h - min_h) / 3.0))
}

/// Thresholds are absolute in `h`: Near below `2w`, Middle on `[2w, 3w)`,
/// Away from `3w`. A zero width maps everything to Middle.
pub fn classify_heuristic(h: f64, bands: &HeuristicBands) -> HeuristicBand {
    let w = bands.w;
    if w <= 0.0 {
        return HeuristicBand::Middle;
    }
    if h < bands.h_eval {
        HeuristicBand::Near
    } else if h < 3.0 * w {
        HeuristicBand::Middle
    } else {
        HeuristicBand::Away
    }
}
