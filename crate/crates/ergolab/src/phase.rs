//! Phase-space geometry: the unit interval and the unit disc.
//!
//! A `Phase` names the space, a `Point` is a location in it. The disc is
//! handled in polar coordinates (phi, radius) with phi kept in [0, 2π)
//! and radius in [0, 1]; its metric is the Euclidean distance between
//! Cartesian images.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * PI;

/// The two supported phase spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// The unit interval [0, 1] with metric |x - y|.
    Interval01,
    /// The closed unit disc in polar coordinates with the Euclidean metric.
    Disc,
}

/// A point of one of the two phase spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    /// x in [0, 1].
    X(f64),
    /// (phi, radius) with phi in [0, 2π), radius in [0, 1].
    Polar { phi: f64, radius: f64 },
}

/// Reduce an angle into [0, 2π).
///
/// `rem_euclid` alone is not enough: for tiny negative inputs it can round
/// up to exactly 2π, which would violate the half-open convention.
pub fn wrap_angle(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(TWO_PI);
    if w >= TWO_PI {
        w = 0.0;
    }
    w
}

/// Reduce a real into [0, 1), guarding the same rounding edge as `wrap_angle`.
pub fn mod1(x: f64) -> f64 {
    let mut w = x.rem_euclid(1.0);
    if w >= 1.0 {
        w = 0.0;
    }
    w
}

impl Phase {
    /// Largest distance between two points of the space.
    pub fn diameter(self) -> f64 {
        match self {
            Phase::Interval01 => 1.0,
            Phase::Disc => 2.0,
        }
    }

    pub fn contains(self, p: Point) -> bool {
        match (self, p) {
            (Phase::Interval01, Point::X(x)) => x.is_finite() && (0.0..=1.0).contains(&x),
            (Phase::Disc, Point::Polar { phi, radius }) => {
                phi.is_finite()
                    && radius.is_finite()
                    && (0.0..TWO_PI).contains(&phi)
                    && (0.0..=1.0).contains(&radius)
            }
            _ => false,
        }
    }

    /// Validate a point against this phase, reducing phi mod 2π.
    /// Out-of-range coordinates other than the angle are an error, never
    /// silently clamped.
    pub fn normalize(self, p: Point) -> Result<Point> {
        match (self, p) {
            (Phase::Interval01, Point::X(x)) => {
                if x.is_finite() && (0.0..=1.0).contains(&x) {
                    Ok(p)
                } else {
                    Err(Error::invalid(format!("x = {x} outside [0,1]")))
                }
            }
            (Phase::Disc, Point::Polar { phi, radius }) => {
                if !phi.is_finite() {
                    return Err(Error::invalid(format!("phi = {phi} not finite")));
                }
                if !radius.is_finite() || !(0.0..=1.0).contains(&radius) {
                    return Err(Error::invalid(format!("radius = {radius} outside [0,1]")));
                }
                Ok(Point::Polar {
                    phi: wrap_angle(phi),
                    radius,
                })
            }
            _ => Err(Error::PhaseMismatch(format!(
                "point {p:?} does not belong to phase {self:?}"
            ))),
        }
    }

    /// Metric of the space: |x-y| on the interval, Euclidean distance
    /// between Cartesian images on the disc.
    pub fn distance(self, a: Point, b: Point) -> Result<f64> {
        match (self, a, b) {
            (Phase::Interval01, Point::X(x), Point::X(y)) => Ok((x - y).abs()),
            (
                Phase::Disc,
                Point::Polar {
                    phi: p1,
                    radius: r1,
                },
                Point::Polar {
                    phi: p2,
                    radius: r2,
                },
            ) => {
                let (x1, y1) = (r1 * p1.cos(), r1 * p1.sin());
                let (x2, y2) = (r2 * p2.cos(), r2 * p2.sin());
                Ok(((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt())
            }
            _ => Err(Error::PhaseMismatch(
                "distance between points of different phases".into(),
            )),
        }
    }
}

impl Point {
    /// Interval coordinate; panics on a disc point (internal misuse).
    pub fn x(self) -> f64 {
        match self {
            Point::X(x) => x,
            Point::Polar { .. } => panic!("interval coordinate requested from a disc point"),
        }
    }

    pub fn polar(self) -> (f64, f64) {
        match self {
            Point::Polar { phi, radius } => (phi, radius),
            Point::X(_) => panic!("polar coordinates requested from an interval point"),
        }
    }
}
