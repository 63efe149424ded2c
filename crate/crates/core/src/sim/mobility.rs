use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::Position;

pub const LANE_WIDTH: f64 = 4.0;

/// Straight two-way highway along the x axis, centered vertically in the
/// grid. Eastbound lanes sit above the center line, westbound below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Highway {
    pub length: f64,
    pub center_y: f64,
    pub lanes_per_direction: u32,
}

impl Highway {
    pub fn new(grid: (f64, f64), lanes_per_direction: u32) -> Self {
        Highway {
            length: grid.0,
            center_y: grid.1 / 2.0,
            lanes_per_direction,
        }
    }

    pub fn lane_y(&self, direction: Direction, lane: u32) -> f64 {
        let offset = (f64::from(lane) + 0.5) * LANE_WIDTH;
        match direction {
            Direction::East => self.center_y + offset,
            Direction::West => self.center_y - offset,
        }
    }

    /// Wraps an along-road coordinate onto `[0, length)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let w = x.rem_euclid(self.length);
        // rem_euclid can round up to exactly `length` for tiny negatives.
        if w >= self.length {
            0.0
        } else {
            w
        }
    }

    /// Uniformly random point on a random lane.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Position {
        let x = rng.random_range(0.0..self.length);
        let direction = if rng.random_bool(0.5) {
            Direction::East
        } else {
            Direction::West
        };
        let lane = rng.random_range(0..self.lanes_per_direction);
        Position::new(x, self.lane_y(direction, lane))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    East,
    West,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::East => 1.0,
            Direction::West => -1.0,
        }
    }
}

/// Constant-speed lane following with wrap-around at the highway ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub start_x: f64,
    pub lane_y: f64,
    pub direction: Direction,
    pub speed: f64,
}

impl Motion {
    pub fn position(&self, highway: &Highway, t: f64) -> Position {
        let x = highway.wrap(self.start_x + self.direction.sign() * self.speed * t);
        Position::new(x, self.lane_y)
    }

    pub fn heading(&self) -> (f64, f64) {
        (self.direction.sign(), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_at_highway_ends() {
        let hw = Highway::new((1000.0, 1000.0), 3);
        let m = Motion {
            start_x: 990.0,
            lane_y: hw.lane_y(Direction::East, 0),
            direction: Direction::East,
            speed: 20.0,
        };
        let p = m.position(&hw, 1.0);
        assert!((p.x - 10.0).abs() < 1e-9);
        let back = Motion {
            direction: Direction::West,
            start_x: 5.0,
            ..m
        };
        assert!((back.position(&hw, 1.0).x - 985.0).abs() < 1e-9);
        assert_eq!(hw.wrap(-1e-18), 0.0);
    }

    #[test]
    fn lanes_are_symmetric() {
        let hw = Highway::new((1000.0, 1000.0), 3);
        assert_eq!(hw.lane_y(Direction::East, 0), 502.0);
        assert_eq!(hw.lane_y(Direction::West, 2), 490.0);
    }
}
