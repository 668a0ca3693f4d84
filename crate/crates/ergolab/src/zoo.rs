//! The map catalog: every dynamical system known to the lab, autonomous
//! and measure-dependent, behind one evaluation interface.
//!
//! # Branch sets and floating point
//!
//! Several maps here are deliberately discontinuous on a measure-zero set
//! (a single point, or one circle of the disc) and branch on *exact*
//! floating equality with that set. The exact dynamics of every such map
//! keeps generic orbits off the branch set forever, but naive double
//! arithmetic does not: quadratic contraction, underflow, or absorption
//! of a tiny increment can round an interior value exactly onto the set
//! within a few dozen steps, silently switching the orbit onto the other
//! branch. Where that would happen, the evaluator parks the output at the
//! nearest representable value on the correct side instead:
//!
//! * `GiGi` — the interior branch maps (0,1) into (0,1); outputs are kept
//!   inside the open interval.
//! * `SquareJump` — x² for x > 0 never reaches 0; underflow is parked at
//!   the smallest positive normal.
//! * `DiscNoRotation`, `DiscJump` — the radial contraction γ(R−r)+r never
//!   reaches r from R ≠ r; a collapse onto the circle is parked one ulp
//!   off it, on the same side.
//!
//! `DiscRotation`, `Halving`, `DiscontInterval` and `Doubling` need no
//! guard: wherever their orbits can round onto a special point, the map is
//! continuous there, so the absorbed orbit shadows the true one.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::phase::{mod1, wrap_angle, Phase, Point, TWO_PI};

/// Default angle for irrational-rotation experiments: √2 − 1 at full
/// double precision. Finite-precision equidistribution is validated
/// empirically by the diagnostics, never assumed.
pub const DEFAULT_IRRATIONAL_ALPHA: f64 = SQRT_2 - 1.0;

/// Map family tags, one per system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Halving,
    DiscRotation,
    DiscNoRotation,
    DiscJump,
    SquareJump,
    GiGi,
    DiscontInterval,
    Doubling,
    TentAdditive,
    MultA,
    MultB,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Halving,
        Family::DiscRotation,
        Family::DiscNoRotation,
        Family::DiscJump,
        Family::SquareJump,
        Family::GiGi,
        Family::DiscontInterval,
        Family::Doubling,
        Family::TentAdditive,
        Family::MultA,
        Family::MultB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Halving => "Halving",
            Family::DiscRotation => "DiscRotation",
            Family::DiscNoRotation => "DiscNoRotation",
            Family::DiscJump => "DiscJump",
            Family::SquareJump => "SquareJump",
            Family::GiGi => "GiGi",
            Family::DiscontInterval => "DiscontInterval",
            Family::Doubling => "Doubling",
            Family::TentAdditive => "TentAdditive",
            Family::MultA => "MultA",
            Family::MultB => "MultB",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown system family {name:?}")))
    }
}

/// Parameters of the rotating disc families, all in (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub r: f64,
}

impl DiscParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, r: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("r", r)] {
            check_open_unit(name, v)?;
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            r,
        })
    }
}

/// Parameters of the no-rotation disc family (no angular shear term).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoRotationParams {
    pub alpha: f64,
    pub gamma: f64,
    pub r: f64,
}

impl NoRotationParams {
    pub fn new(alpha: f64, gamma: f64, r: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("gamma", gamma), ("r", r)] {
            check_open_unit(name, v)?;
        }
        Ok(Self { alpha, gamma, r })
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("parameter {name} = {v} outside (0,1)")))
    }
}

/// A fully parameterized dynamical system; the single source of truth for
/// dynamics. Parameters are validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SystemSpec {
    /// x ↦ x/2 on \[0,1\]: uniformly contracting, fixed point 0.
    Halving,
    /// (φ,R) ↦ (φ + 2πα + β(R−r) mod 2π, γ(R−r) + r): rotation with an
    /// attracting circle {R = r}.
    DiscRotation(DiscParams),
    /// Same radial contraction, but the angle advances only on the circle
    /// itself: (φ,R) ↦ (φ + 2πα if R = r else φ, γ(R−r) + r).
    DiscNoRotation(NoRotationParams),
    /// DiscRotation off the circle; points on {R = r} jump outward:
    /// (φ,R) ↦ (φ + 2πα mod 2π, (1+r)/2) when R = r.
    DiscJump(DiscParams),
    /// x ↦ x² on (0,1), with the origin kicked to 1−c: x ↦ 1−c if x = 0.
    SquareJump { c: f64 },
    /// x ↦ (1 − sin(πx − π/2))/2 on (0,1); 0 and 1 are fixed points.
    GiGi,
    /// x ↦ x/2 + 1/4 on [0,1/2], 2x − 1 above: attracting fixed point 1/2
    /// approached from the left, expanding branch on the right.
    DiscontInterval,
    /// x ↦ 2x mod 1.
    Doubling,
    /// Mean-coupled tent map: x ↦ 1 − 2|x − 1/2| + ε·E\[μ\] mod 1.
    TentAdditive { epsilon: f64 },
    /// Mean-coupled contraction: x ↦ x · E\[μ\] mod 1.
    MultA,
    /// Mean-coupled expansion: x ↦ x / E\[μ\] mod 1, with 1/0 mod 1 = 0.
    MultB,
}

impl SystemSpec {
    pub fn halving() -> Self {
        SystemSpec::Halving
    }

    pub fn disc_rotation(alpha: f64, beta: f64, gamma: f64, r: f64) -> Result<Self> {
        Ok(SystemSpec::DiscRotation(DiscParams::new(
            alpha, beta, gamma, r,
        )?))
    }

    pub fn disc_no_rotation(alpha: f64, gamma: f64, r: f64) -> Result<Self> {
        Ok(SystemSpec::DiscNoRotation(NoRotationParams::new(
            alpha, gamma, r,
        )?))
    }

    pub fn disc_jump(alpha: f64, beta: f64, gamma: f64, r: f64) -> Result<Self> {
        Ok(SystemSpec::DiscJump(DiscParams::new(alpha, beta, gamma, r)?))
    }

    pub fn square_jump(c: f64) -> Result<Self> {
        if c.is_finite() && (0.0..1.0).contains(&c) {
            Ok(SystemSpec::SquareJump { c })
        } else {
            Err(Error::invalid(format!("parameter c = {c} outside [0,1)")))
        }
    }

    pub fn gigi() -> Self {
        SystemSpec::GiGi
    }

    pub fn discont_interval() -> Self {
        SystemSpec::DiscontInterval
    }

    pub fn doubling() -> Self {
        SystemSpec::Doubling
    }

    pub fn tent_additive(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && (0.0..=1.0).contains(&epsilon) {
            Ok(SystemSpec::TentAdditive { epsilon })
        } else {
            Err(Error::invalid(format!(
                "parameter epsilon = {epsilon} outside [0,1]"
            )))
        }
    }

    pub fn mult_a() -> Self {
        SystemSpec::MultA
    }

    pub fn mult_b() -> Self {
        SystemSpec::MultB
    }

    /// Build from a family name and a flat parameter map; unknown or
    /// missing parameter names are hard errors.
    pub fn from_params(family: Family, params: &BTreeMap<String, f64>) -> Result<Self> {
        let expected: &[&str] = match family {
            Family::DiscRotation | Family::DiscJump => &["alpha", "beta", "gamma", "r"],
            Family::DiscNoRotation => &["alpha", "gamma", "r"],
            Family::SquareJump => &["c"],
            Family::TentAdditive => &["epsilon"],
            _ => &[],
        };
        for key in params.keys() {
            if !expected.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "unknown parameter {key:?} for family {}",
                    family.name()
                )));
            }
        }
        let get = |name: &str| -> Result<f64> {
            params.get(name).copied().ok_or_else(|| {
                Error::Config(format!(
                    "family {} requires parameter {name:?}",
                    family.name()
                ))
            })
        };
        match family {
            Family::Halving => Ok(SystemSpec::Halving),
            Family::DiscRotation => {
                SystemSpec::disc_rotation(get("alpha")?, get("beta")?, get("gamma")?, get("r")?)
            }
            Family::DiscNoRotation => {
                SystemSpec::disc_no_rotation(get("alpha")?, get("gamma")?, get("r")?)
            }
            Family::DiscJump => {
                SystemSpec::disc_jump(get("alpha")?, get("beta")?, get("gamma")?, get("r")?)
            }
            Family::SquareJump => SystemSpec::square_jump(get("c")?),
            Family::GiGi => Ok(SystemSpec::GiGi),
            Family::DiscontInterval => Ok(SystemSpec::DiscontInterval),
            Family::Doubling => Ok(SystemSpec::Doubling),
            Family::TentAdditive => SystemSpec::tent_additive(get("epsilon")?),
            Family::MultA => Ok(SystemSpec::MultA),
            Family::MultB => Ok(SystemSpec::MultB),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            SystemSpec::Halving => Family::Halving,
            SystemSpec::DiscRotation(_) => Family::DiscRotation,
            SystemSpec::DiscNoRotation(_) => Family::DiscNoRotation,
            SystemSpec::DiscJump(_) => Family::DiscJump,
            SystemSpec::SquareJump { .. } => Family::SquareJump,
            SystemSpec::GiGi => Family::GiGi,
            SystemSpec::DiscontInterval => Family::DiscontInterval,
            SystemSpec::Doubling => Family::Doubling,
            SystemSpec::TentAdditive { .. } => Family::TentAdditive,
            SystemSpec::MultA => Family::MultA,
            SystemSpec::MultB => Family::MultB,
        }
    }

    pub fn phase(&self) -> Phase {
        match self {
            SystemSpec::DiscRotation(_) | SystemSpec::DiscNoRotation(_) | SystemSpec::DiscJump(_) => {
                Phase::Disc
            }
            _ => Phase::Interval01,
        }
    }

    /// True for the mean-coupled families that need an ensemble to evolve.
    pub fn is_measure_dependent(&self) -> bool {
        matches!(
            self,
            SystemSpec::TentAdditive { .. } | SystemSpec::MultA | SystemSpec::MultB
        )
    }

    /// Named parameter values, for config echoes and catalogs.
    pub fn param_list(&self) -> Vec<(&'static str, f64)> {
        match *self {
            SystemSpec::DiscRotation(p) | SystemSpec::DiscJump(p) => vec![
                ("alpha", p.alpha),
                ("beta", p.beta),
                ("gamma", p.gamma),
                ("r", p.r),
            ],
            SystemSpec::DiscNoRotation(p) => {
                vec![("alpha", p.alpha), ("gamma", p.gamma), ("r", p.r)]
            }
            SystemSpec::SquareJump { c } => vec![("c", c)],
            SystemSpec::TentAdditive { epsilon } => vec![("epsilon", epsilon)],
            _ => vec![],
        }
    }

    /// Apply an autonomous map to a point.
    pub fn eval_map(&self, point: Point) -> Result<Point> {
        if self.is_measure_dependent() {
            return Err(Error::WrongEvaluator(format!(
                "{} is measure-dependent; use eval_selfconsistent",
                self.family().name()
            )));
        }
        let point = self.phase().normalize(point)?;
        Ok(self.step_autonomous(point))
    }

    /// Apply a measure-dependent map with the ensemble mean frozen at
    /// `current_mean`.
    pub fn eval_selfconsistent(&self, point: Point, current_mean: f64) -> Result<Point> {
        if !self.is_measure_dependent() {
            return Err(Error::WrongEvaluator(format!(
                "{} is autonomous; use eval_map",
                self.family().name()
            )));
        }
        if !current_mean.is_finite() || !(0.0..=1.0).contains(&current_mean) {
            return Err(Error::invalid(format!(
                "ensemble mean {current_mean} outside [0,1]"
            )));
        }
        let point = self.phase().normalize(point)?;
        Ok(self.step_coupled(point, current_mean))
    }

    /// The first `n` orbit points [x0, Tx0, ..., T^{n-1}x0].
    pub fn orbit(&self, x0: Point, n: usize) -> Result<Vec<Point>> {
        if self.is_measure_dependent() {
            return Err(Error::WrongEvaluator(
                "measure-dependent systems have no single-point orbits; evolve an ensemble".into(),
            ));
        }
        let mut x = self.phase().normalize(x0)?;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(x);
            x = self.step_autonomous(x);
        }
        Ok(out)
    }

    /// One autonomous step without revalidation; orbit outputs stay in
    /// the domain by construction.
    pub(crate) fn step_autonomous(&self, point: Point) -> Point {
        match *self {
            SystemSpec::Halving => Point::X(point.x() / 2.0),
            SystemSpec::DiscRotation(p) => {
                let (phi, radius) = point.polar();
                Point::Polar {
                    phi: wrap_angle(phi + TWO_PI * p.alpha + p.beta * (radius - p.r)),
                    radius: p.gamma * (radius - p.r) + p.r,
                }
            }
            SystemSpec::DiscNoRotation(p) => {
                let (phi, radius) = point.polar();
                if radius == p.r {
                    Point::Polar {
                        phi: wrap_angle(phi + TWO_PI * p.alpha),
                        radius: p.r,
                    }
                } else {
                    Point::Polar {
                        phi,
                        radius: contract_off_circle(p.gamma, p.r, radius),
                    }
                }
            }
            SystemSpec::DiscJump(p) => {
                let (phi, radius) = point.polar();
                if radius == p.r {
                    Point::Polar {
                        phi: wrap_angle(phi + TWO_PI * p.alpha),
                        radius: (1.0 + p.r) / 2.0,
                    }
                } else {
                    Point::Polar {
                        phi: wrap_angle(phi + TWO_PI * p.alpha + p.beta * (radius - p.r)),
                        radius: contract_off_circle(p.gamma, p.r, radius),
                    }
                }
            }
            SystemSpec::SquareJump { c } => {
                let x = point.x();
                if x == 0.0 {
                    // mod 1 resolves c = 0: the kick to 1 wraps to 0.
                    Point::X(mod1(1.0 - c))
                } else {
                    Point::X(clamp_above_zero(x * x))
                }
            }
            SystemSpec::GiGi => {
                let x = point.x();
                if x == 0.0 || x == 1.0 {
                    point
                } else {
                    let y = (1.0 - (PI * x - FRAC_PI_2).sin()) / 2.0;
                    Point::X(clamp_open_unit(y))
                }
            }
            SystemSpec::DiscontInterval => {
                let x = point.x();
                if x <= 0.5 {
                    Point::X(x / 2.0 + 0.25)
                } else {
                    Point::X(2.0 * x - 1.0)
                }
            }
            SystemSpec::Doubling => Point::X(mod1(2.0 * point.x())),
            _ => unreachable!("measure-dependent spec reached step_autonomous"),
        }
    }

    pub(crate) fn step_coupled(&self, point: Point, mean: f64) -> Point {
        let x = point.x();
        match *self {
            SystemSpec::TentAdditive { epsilon } => {
                let tent = 1.0 - 2.0 * (x - 0.5).abs();
                Point::X(mod1(tent + epsilon * mean))
            }
            SystemSpec::MultA => Point::X(wrap_keeping_one(x * mean, mean)),
            SystemSpec::MultB => {
                if mean == 0.0 {
                    // Convention: 1/0 mod 1 = 0.
                    Point::X(0.0)
                } else {
                    Point::X(wrap_keeping_one(x / mean, mean))
                }
            }
            _ => unreachable!("autonomous spec reached step_coupled"),
        }
    }
}

/// mod-1 wrap for the multiplicative families, with one documented
/// exception: at mean exactly 1 a pre-wrap value of exactly 1 is returned
/// unwrapped, so that the Dirac mass at 1 is a fixed ensemble.
fn wrap_keeping_one(y: f64, mean: f64) -> f64 {
    if mean == 1.0 && y == 1.0 {
        1.0
    } else {
        mod1(y)
    }
}

/// Keep the interior branch of a map of (0,1) inside the open interval.
fn clamp_open_unit(y: f64) -> f64 {
    if y <= 0.0 {
        f64::MIN_POSITIVE
    } else if y >= 1.0 {
        1.0 - f64::EPSILON
    } else {
        y
    }
}

/// x² never reaches 0 from x > 0; park underflow at the smallest normal.
fn clamp_above_zero(y: f64) -> f64 {
    if y < f64::MIN_POSITIVE {
        f64::MIN_POSITIVE
    } else {
        y
    }
}

/// γ(R−r) + r for R ≠ r, parked one ulp off the circle if the sum rounds
/// exactly onto it.
fn contract_off_circle(gamma: f64, r: f64, radius: f64) -> f64 {
    let out = gamma * (radius - r) + r;
    if out == r {
        if radius > r {
            r.next_up()
        } else {
            r.next_down()
        }
    } else {
        out
    }
}

/// One catalog row: family name, parameters with ranges, the defining
/// formula, and whether an ensemble is required.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub measure_dependent: bool,
    pub phase: Phase,
    pub formula: &'static str,
}

/// Every family, once, with its parameter contract.
pub fn catalog() -> Vec<FamilyInfo> {
    Family::ALL
        .into_iter()
        .map(|family| match family {
            Family::Halving => FamilyInfo {
                name: "Halving",
                params: &[],
                measure_dependent: false,
                phase: Phase::Interval01,
                formula: "T(x) = x/2",
            },
            Family::DiscRotation => FamilyInfo {
                name: "DiscRotation",
                params: &[
                    ("alpha", "(0,1)"),
                    ("beta", "(0,1)"),
                    ("gamma", "(0,1)"),
                    ("r", "(0,1)"),
                ],
                measure_dependent: false,
                phase: Phase::Disc,
                formula: "T(phi,R) = (phi + 2*pi*alpha + beta*(R-r) mod 2pi, gamma*(R-r) + r)",
            },
            Family::DiscNoRotation => FamilyInfo {
                name: "DiscNoRotation",
                params: &[("alpha", "(0,1)"), ("gamma", "(0,1)"), ("r", "(0,1)")],
                measure_dependent: false,
                phase: Phase::Disc,
                formula: "T(phi,R) = (phi + 2*pi*alpha if R = r else phi, gamma*(R-r) + r)",
            },
            Family::DiscJump => FamilyInfo {
                name: "DiscJump",
                params: &[
                    ("alpha", "(0,1)"),
                    ("beta", "(0,1)"),
                    ("gamma", "(0,1)"),
                    ("r", "(0,1)"),
                ],
                measure_dependent: false,
                phase: Phase::Disc,
                formula: "T(phi,R) = (phi + 2*pi*alpha mod 2pi, (1+r)/2) if R = r, \
                          else (phi + 2*pi*alpha + beta*(R-r) mod 2pi, gamma*(R-r) + r)",
            },
            Family::SquareJump => FamilyInfo {
                name: "SquareJump",
                params: &[("c", "[0,1)")],
                measure_dependent: false,
                phase: Phase::Interval01,
                formula: "T(x) = 1-c if x = 0, else x^2",
            },
            Family::GiGi => FamilyInfo {
                name: "GiGi",
                params: &[],
                measure_dependent: false,
                phase: Phase::Interval01,
                formula: "T(x) = (1 - sin(pi*x - pi/2))/2 on (0,1); T(0) = 0, T(1) = 1",
            },
            Family::DiscontInterval => FamilyInfo {
                name: "DiscontInterval",
                params: &[],
                measure_dependent: false,
                phase: Phase::Interval01,
                formula: "T(x) = x/2 + 1/4 if x <= 1/2, else 2x - 1",
            },
            Family::Doubling => FamilyInfo {
                name: "Doubling",
                params: &[],
                measure_dependent: false,
                phase: Phase::Interval01,
                formula: "T(x) = 2x mod 1",
            },
            Family::TentAdditive => FamilyInfo {
                name: "TentAdditive",
                params: &[("epsilon", "[0,1]")],
                measure_dependent: true,
                phase: Phase::Interval01,
                formula: "T_mu(x) = 1 - 2|x - 1/2| + epsilon*E[mu] mod 1",
            },
            Family::MultA => FamilyInfo {
                name: "MultA",
                params: &[],
                measure_dependent: true,
                phase: Phase::Interval01,
                formula: "T_mu(x) = x * E[mu] mod 1",
            },
            Family::MultB => FamilyInfo {
                name: "MultB",
                params: &[],
                measure_dependent: true,
                phase: Phase::Interval01,
                formula: "T_mu(x) = x / E[mu] mod 1, with 1/0 mod 1 = 0",
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn disc_point(phi: f64, radius: f64) -> Point {
        Point::Polar { phi, radius }
    }

    #[test]
    fn halving_step() {
        let t = SystemSpec::halving();
        assert_eq!(t.eval_map(Point::X(0.8)).unwrap(), Point::X(0.4));
    }

    #[test]
    fn gigi_fixed_points_are_exact() {
        let t = SystemSpec::gigi();
        for x in [0.0, 0.5, 1.0] {
            assert_eq!(t.eval_map(Point::X(x)).unwrap(), Point::X(x), "x = {x}");
        }
    }

    #[test]
    fn gigi_interior_stays_interior() {
        // The interior branch swaps neighborhoods of 0 and 1; without the
        // open-interval guard an orbit rounds onto a fixed endpoint within
        // ~8 steps and the two-sided limit statistics are destroyed.
        let t = SystemSpec::gigi();
        let mut x = Point::X(0.3);
        for k in 0..200 {
            x = t.eval_map(x).unwrap();
            let v = x.x();
            assert!(v > 0.0 && v < 1.0, "orbit left (0,1) at step {k}: {v}");
        }
    }

    #[test]
    fn square_jump_kick() {
        let t = SystemSpec::square_jump(0.25).unwrap();
        assert_eq!(t.eval_map(Point::X(0.0)).unwrap(), Point::X(0.75));
        // c = 0: the kick to 1 wraps to 0, so the origin is fixed.
        let t0 = SystemSpec::square_jump(0.0).unwrap();
        assert_eq!(t0.eval_map(Point::X(0.0)).unwrap(), Point::X(0.0));
    }

    #[test]
    fn square_jump_orbit_fires_only_at_exact_zero() {
        let t = SystemSpec::square_jump(0.5).unwrap();
        let orbit = t.orbit(Point::X(0.0), 5000).unwrap();
        assert_eq!(orbit[0], Point::X(0.0));
        assert_eq!(orbit[1], Point::X(0.5));
        assert_eq!(orbit[2], Point::X(0.25));
        assert_eq!(orbit[3], Point::X(0.0625));
        for (k, p) in orbit.iter().enumerate().skip(1) {
            assert!(p.x() > 0.0, "orbit returned to 0 at step {k}");
        }
    }

    #[test]
    fn disc_rotation_on_circle() {
        let t = SystemSpec::disc_rotation(0.3, 0.3, 0.5, 0.5).unwrap();
        let out = t.eval_map(disc_point(0.0, 0.5)).unwrap();
        let (phi, radius) = out.polar();
        assert!((phi - TWO_PI * 0.3).abs() < 1e-15);
        assert_eq!(radius, 0.5);
    }

    #[test]
    fn disc_rotation_radial_closed_form() {
        // Dyadic data: gamma = 1/2, R0 - r = 1/4, so every iterate is
        // exactly representable and must match the closed form bitwise.
        let t = SystemSpec::disc_rotation(DEFAULT_IRRATIONAL_ALPHA, 0.3, 0.5, 0.5).unwrap();
        let orbit = t.orbit(disc_point(1.0, 0.75), 51).unwrap();
        for (k, p) in orbit.iter().enumerate() {
            let (_, radius) = p.polar();
            let expected = 0.5f64.powi(k as i32) * 0.25 + 0.5;
            assert_eq!(radius, expected, "radial law broke at step {k}");
        }
    }

    #[test]
    fn disc_no_rotation_freezes_angle_off_circle() {
        let t = SystemSpec::disc_no_rotation(0.3, 0.5, 0.5).unwrap();
        let mut p = disc_point(1.234, 0.9);
        for k in 0..100_000 {
            let q = t.step_autonomous(p);
            let (phi, radius) = q.polar();
            assert_eq!(phi, 1.234, "angle moved off-circle at step {k}");
            assert!(radius != 0.5, "orbit collapsed onto the circle at step {k}");
            p = q;
        }
        // On the circle the angle rotates.
        let on = t.eval_map(disc_point(0.0, 0.5)).unwrap();
        let (phi, radius) = on.polar();
        assert!((phi - TWO_PI * 0.3).abs() < 1e-15);
        assert_eq!(radius, 0.5);
    }

    #[test]
    fn disc_jump_fires_only_on_circle() {
        let t = SystemSpec::disc_jump(0.3, 0.3, 0.5, 0.5).unwrap();
        let out = t.eval_map(disc_point(0.0, 0.5)).unwrap();
        let (phi, radius) = out.polar();
        assert!((phi - TWO_PI * 0.3).abs() < 1e-15);
        assert_eq!(radius, 0.75);

        // Off the circle: plain contraction, and no spurious re-jump even
        // after the radius has contracted to within one ulp of r.
        let mut p = disc_point(0.0, 0.75);
        for k in 0..1000 {
            p = t.step_autonomous(p);
            let (_, radius) = p.polar();
            assert!(radius != 0.5, "spurious jump trigger at step {k}");
            assert!(radius > 0.5 && radius <= 0.75);
        }
    }

    #[test]
    fn discont_interval_attracts_to_the_half_point() {
        // The left branch contracts toward 1/2, which is fixed; the right
        // branch expands and re-injects below. The map value at 1/2 (from
        // the left branch) differs from the right-branch limit 0, so the
        // map is one-sidedly discontinuous exactly at its fixed point.
        let t = SystemSpec::discont_interval();
        assert_eq!(t.eval_map(Point::X(0.5)).unwrap(), Point::X(0.5));
        let orbit = t.orbit(Point::X(0.9), 200).unwrap();
        let last = orbit.last().unwrap().x();
        assert!((last - 0.5).abs() < 1e-9, "orbit settled at {last}");
        // One ulp above the fixed point the other branch applies.
        let above = t.eval_map(Point::X(0.5f64.next_up())).unwrap().x();
        assert!(above < 1e-12, "right branch maps 1/2+ to {above}");
    }

    #[test]
    fn orbit_prefix_halving() {
        let t = SystemSpec::halving();
        let orbit = t.orbit(Point::X(1.0), 3).unwrap();
        assert_eq!(orbit, vec![Point::X(1.0), Point::X(0.5), Point::X(0.25)]);
    }

    #[test]
    fn self_consistent_examples() {
        let b = SystemSpec::mult_b();
        assert_eq!(
            b.eval_selfconsistent(Point::X(0.3), 0.5).unwrap(),
            Point::X(0.6)
        );
        assert_eq!(
            b.eval_selfconsistent(Point::X(0.77), 0.0).unwrap(),
            Point::X(0.0)
        );
        let a = SystemSpec::mult_a();
        assert_eq!(
            a.eval_selfconsistent(Point::X(0.8), 0.5).unwrap(),
            Point::X(0.4)
        );
        let tent = SystemSpec::tent_additive(0.1).unwrap();
        let out = tent.eval_selfconsistent(Point::X(0.25), 0.5).unwrap();
        assert!((out.x() - 0.55).abs() < 1e-15);
    }

    #[test]
    fn dirac_at_one_is_fixed_at_mean_one() {
        for spec in [SystemSpec::mult_a(), SystemSpec::mult_b()] {
            assert_eq!(
                spec.eval_selfconsistent(Point::X(1.0), 1.0).unwrap(),
                Point::X(1.0)
            );
        }
    }

    #[test]
    fn doubling_equals_mult_b_frozen_at_half() {
        let d = SystemSpec::doubling();
        let b = SystemSpec::mult_b();
        let mut rng = crate::rng::task_rng(3, "doubling-vs-multb", 0);
        for _ in 0..10_000 {
            let x: f64 = rng.gen();
            let via_d = d.eval_map(Point::X(x)).unwrap();
            let via_b = b.eval_selfconsistent(Point::X(x), 0.5).unwrap();
            assert_eq!(via_d, via_b, "mismatch at x = {x}");
        }
        for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert_eq!(
                d.eval_map(Point::X(x)).unwrap(),
                b.eval_selfconsistent(Point::X(x), 0.5).unwrap()
            );
        }
    }

    #[test]
    fn wrong_evaluator_both_ways() {
        assert!(matches!(
            SystemSpec::mult_a().eval_map(Point::X(0.5)),
            Err(Error::WrongEvaluator(_))
        ));
        assert!(matches!(
            SystemSpec::halving().eval_selfconsistent(Point::X(0.5), 0.5),
            Err(Error::WrongEvaluator(_))
        ));
        assert!(matches!(
            SystemSpec::mult_b().orbit(Point::X(0.5), 10),
            Err(Error::WrongEvaluator(_))
        ));
    }

    #[test]
    fn out_of_domain_rejected() {
        assert!(SystemSpec::halving().eval_map(Point::X(1.5)).is_err());
        assert!(SystemSpec::gigi()
            .eval_map(disc_point(0.0, 0.5))
            .is_err());
    }

    #[test]
    fn domain_closure_for_every_family() {
        let mut rng = crate::rng::task_rng(17, "domain-closure", 0);
        let autonomous: Vec<SystemSpec> = vec![
            SystemSpec::halving(),
            SystemSpec::disc_rotation(0.41, 0.3, 0.5, 0.5).unwrap(),
            SystemSpec::disc_no_rotation(0.41, 0.5, 0.5).unwrap(),
            SystemSpec::disc_jump(0.41, 0.3, 0.5, 0.5).unwrap(),
            SystemSpec::square_jump(0.5).unwrap(),
            SystemSpec::gigi(),
            SystemSpec::discont_interval(),
            SystemSpec::doubling(),
        ];
        for spec in &autonomous {
            let phase = spec.phase();
            for _ in 0..100_000 {
                let p = match phase {
                    Phase::Interval01 => Point::X(rng.gen()),
                    Phase::Disc => disc_point(
                        rng.gen::<f64>() * TWO_PI,
                        rng.gen::<f64>().sqrt(),
                    ),
                };
                let out = spec.step_autonomous(p);
                assert!(
                    phase.contains(out),
                    "{:?} left the domain: {p:?} -> {out:?}",
                    spec.family()
                );
            }
        }
        let coupled = [
            SystemSpec::tent_additive(0.3).unwrap(),
            SystemSpec::mult_a(),
            SystemSpec::mult_b(),
        ];
        for spec in &coupled {
            for _ in 0..100_000 {
                let p = Point::X(rng.gen());
                let mean: f64 = rng.gen();
                let out = spec.step_coupled(p, mean);
                assert!(
                    Phase::Interval01.contains(out),
                    "{:?} left the domain at mean {mean}",
                    spec.family()
                );
            }
        }
    }

    #[test]
    fn catalog_is_exhaustive_and_unique() {
        let cat = catalog();
        assert_eq!(cat.len(), Family::ALL.len());
        for family in Family::ALL {
            assert_eq!(
                cat.iter().filter(|i| i.name == family.name()).count(),
                1,
                "{} must appear exactly once",
                family.name()
            );
        }
    }

    #[test]
    fn from_params_is_strict() {
        let mut params = BTreeMap::new();
        params.insert("alpha".to_string(), 0.3);
        params.insert("beta".to_string(), 0.3);
        params.insert("gamma".to_string(), 0.5);
        params.insert("r".to_string(), 0.5);
        assert!(SystemSpec::from_params(Family::DiscRotation, &params).is_ok());

        params.insert("alpha_".to_string(), 0.1);
        let err = SystemSpec::from_params(Family::DiscRotation, &params);
        match err {
            Err(Error::Config(msg)) => assert!(msg.contains("alpha_"), "message: {msg}"),
            other => panic!("expected config error, got {other:?}"),
        }

        let missing = BTreeMap::new();
        assert!(SystemSpec::from_params(Family::SquareJump, &missing).is_err());
        assert!(SystemSpec::from_params(Family::Halving, &missing).is_ok());
    }

    #[test]
    fn params_validated_at_construction() {
        assert!(SystemSpec::disc_rotation(0.0, 0.3, 0.5, 0.5).is_err());
        assert!(SystemSpec::disc_rotation(0.3, 0.3, 0.5, 1.0).is_err());
        assert!(SystemSpec::square_jump(1.0).is_err());
        assert!(SystemSpec::tent_additive(1.5).is_err());
        assert!(SystemSpec::tent_additive(0.0).is_ok());
    }
}
