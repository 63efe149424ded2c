use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::attacker::AttackerProfile;
use crate::protocol::ProtocolConfig;
use crate::reputation::DEFAULT_INITIAL_POINTS;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse scenario file {path}: {message}")]
    Parse { path: String, message: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::InvalidField {
        field,
        reason: reason.into(),
    }
}

/// Experiment input. Defaults follow the two-way highway setup: a
/// 1000 m x 1000 m grid, 300 s, 100 vehicles on 3 lanes per direction at
/// 15-45 m/s, 300 m radio range and 100-500 ms beaconing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Width (along the highway) and height in meters.
    pub grid: (f64, f64),
    pub duration: f64,
    pub vehicle_count: usize,
    pub attacker_count: usize,
    pub attacker_profile: AttackerProfile,
    pub lanes_per_direction: u32,
    /// Uniform speed range in m/s.
    pub speed_range: (f64, f64),
    pub transmission_range: f64,
    pub delivery_loss_probability: f64,
    /// Minimum and maximum beacon interval in seconds; beacons go out at
    /// the minimum interval.
    pub beacon_interval: (f64, f64),
    pub rsu_positions: Vec<(f64, f64)>,
    pub seed: u64,
    pub pending_ttl: f64,
    pub neighbor_ttl: f64,
    pub suspicion_ttl: f64,
    pub broadcast_period: f64,
    /// Genuine hazards per minute, spawned as a Poisson process.
    pub hazard_rate_per_minute: f64,
    /// Standard deviation (m) of the receiver's estimate of a sender's position.
    pub position_noise_sigma: f64,
    pub corroboration_tolerance: f64,
    pub strict_heuristic: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            grid: (1000.0, 1000.0),
            duration: 300.0,
            vehicle_count: 100,
            attacker_count: 0,
            attacker_profile: AttackerProfile::default(),
            lanes_per_direction: 3,
            speed_range: (15.0, 45.0),
            transmission_range: 300.0,
            delivery_loss_probability: 0.05,
            beacon_interval: (0.1, 0.5),
            rsu_positions: vec![(250.0, 500.0), (750.0, 500.0)],
            seed: 0,
            pending_ttl: 2.0,
            neighbor_ttl: 1.5,
            suspicion_ttl: 30.0,
            broadcast_period: 1.0,
            hazard_rate_per_minute: 2.0,
            position_noise_sigma: 5.0,
            corroboration_tolerance: 20.0,
            strict_heuristic: false,
        }
    }
}

fn positive(field: &'static str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be a finite value > 0, got {v}")))
    }
}

fn non_negative(field: &'static str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be a finite value >= 0, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, ScenarioError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ScenarioError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        positive("grid", self.grid.0)?;
        positive("grid", self.grid.1)?;
        positive("duration", self.duration)?;
        if self.attacker_count > self.vehicle_count {
            return Err(invalid(
                "attacker_count",
                format!(
                    "{} attackers exceed {} vehicles",
                    self.attacker_count, self.vehicle_count
                ),
            ));
        }
        self.attacker_profile.validate()?;
        if self.lanes_per_direction == 0 {
            return Err(invalid("lanes_per_direction", "must be at least 1"));
        }
        let (lo, hi) = self.speed_range;
        non_negative("speed_range", lo)?;
        non_negative("speed_range", hi)?;
        if lo > hi {
            return Err(invalid("speed_range", format!("min {lo} exceeds max {hi}")));
        }
        positive("transmission_range", self.transmission_range)?;
        let p = self.delivery_loss_probability;
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(
                "delivery_loss_probability",
                format!("must lie in [0, 1], got {p}"),
            ));
        }
        let (bmin, bmax) = self.beacon_interval;
        positive("beacon_interval", bmin)?;
        positive("beacon_interval", bmax)?;
        if bmin > bmax {
            return Err(invalid(
                "beacon_interval",
                format!("min {bmin} exceeds max {bmax}"),
            ));
        }
        for &(x, y) in &self.rsu_positions {
            if !(x.is_finite() && y.is_finite())
                || !(0.0..=self.grid.0).contains(&x)
                || !(0.0..=self.grid.1).contains(&y)
            {
                return Err(invalid(
                    "rsu_positions",
                    format!("({x}, {y}) lies outside the grid"),
                ));
            }
        }
        positive("pending_ttl", self.pending_ttl)?;
        positive("neighbor_ttl", self.neighbor_ttl)?;
        positive("suspicion_ttl", self.suspicion_ttl)?;
        positive("broadcast_period", self.broadcast_period)?;
        non_negative("hazard_rate_per_minute", self.hazard_rate_per_minute)?;
        non_negative("position_noise_sigma", self.position_noise_sigma)?;
        non_negative("corroboration_tolerance", self.corroboration_tolerance)?;
        let lanes_height = 2.0 * f64::from(self.lanes_per_direction) * super::mobility::LANE_WIDTH;
        if lanes_height > self.grid.1 {
            return Err(invalid(
                "lanes_per_direction",
                format!("{lanes_height} m of lanes do not fit the grid height"),
            ));
        }
        Ok(())
    }

    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            pending_ttl: self.pending_ttl,
            neighbor_ttl: self.neighbor_ttl,
            suspicion_ttl: self.suspicion_ttl,
            broadcast_period: self.broadcast_period,
            plausibility_radius: self.transmission_range,
            corroboration_tolerance: self.corroboration_tolerance,
            strict_heuristic: self.strict_heuristic,
            initial_points: DEFAULT_INITIAL_POINTS,
            grid: Some(self.grid),
        }
    }

    /// Short stable digest of every field except the seed.
    pub fn config_hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.seed = 0;
        let json = serde_json::to_vec(&canonical).expect("scenario config serializes");
        let digest = Sha256::digest(&json);
        digest[..6].iter().map(|b| format!("{b:02x}")).collect()
    }
}
