//! Fixed test-function dictionaries.
//!
//! Weak-star convergence of measures is quantified against a finite family
//! of bounded test functions with known sup bounds: the dictionary
//! discrepancy `max_f |∫f dμ − ∫f dν|` is a cheap pseudo-metric standing
//! in for the full space of continuous functions. Its adequacy for a given
//! map is an empirical matter recorded per experiment, not a theorem.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measure::PointCloudMeasure;
use crate::phase::{Phase, Point};

/// Closed-form test functions; all have sup bound 1 on their domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// f ≡ 1.
    One,
    /// x^p on the interval (p = 1, 2).
    XPow(u8),
    /// cos(2πk x) on the interval.
    CosX(u8),
    /// sin(2πk x) on the interval.
    SinX(u8),
    /// R^p on the disc (p = 1, 2).
    RadiusPow(u8),
    /// cos(k phi) on the disc.
    CosPhi(u8),
    /// sin(k phi) on the disc.
    SinPhi(u8),
    /// R cos(phi): the Cartesian x coordinate.
    RCosPhi,
    /// R sin(phi): the Cartesian y coordinate.
    RSinPhi,
}

impl Basis {
    pub fn eval(self, p: Point) -> f64 {
        match (self, p) {
            (Basis::One, _) => 1.0,
            (Basis::XPow(k), Point::X(x)) => x.powi(k as i32),
            (Basis::CosX(k), Point::X(x)) => (2.0 * PI * k as f64 * x).cos(),
            (Basis::SinX(k), Point::X(x)) => (2.0 * PI * k as f64 * x).sin(),
            (Basis::RadiusPow(k), Point::Polar { radius, .. }) => radius.powi(k as i32),
            (Basis::CosPhi(k), Point::Polar { phi, .. }) => (k as f64 * phi).cos(),
            (Basis::SinPhi(k), Point::Polar { phi, .. }) => (k as f64 * phi).sin(),
            (Basis::RCosPhi, Point::Polar { phi, radius }) => radius * phi.cos(),
            (Basis::RSinPhi, Point::Polar { phi, radius }) => radius * phi.sin(),
            _ => panic!("basis function evaluated on a point of the wrong phase"),
        }
    }
}

/// A labelled test function with its sup bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub label: String,
    pub basis: Basis,
    pub sup_bound: f64,
}

/// An ordered finite family of test functions on one phase space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dictionary {
    phase: Phase,
    functions: Vec<TestFunction>,
}

/// Highest harmonic in the default dictionaries.
pub const DEFAULT_MAX_HARMONIC: u8 = 8;

impl Dictionary {
    /// The default dictionary of a phase:
    /// interval — {1, x, x², cos(2πkx), sin(2πkx): k = 1..8};
    /// disc — {1, R, R², cos(kφ), sin(kφ): k = 1..8, R·cos(φ), R·sin(φ)}.
    pub fn default_for(phase: Phase) -> Self {
        let mut functions = vec![TestFunction {
            label: "1".into(),
            basis: Basis::One,
            sup_bound: 1.0,
        }];
        match phase {
            Phase::Interval01 => {
                for p in 1..=2u8 {
                    functions.push(TestFunction {
                        label: if p == 1 { "x".into() } else { format!("x^{p}") },
                        basis: Basis::XPow(p),
                        sup_bound: 1.0,
                    });
                }
                for k in 1..=DEFAULT_MAX_HARMONIC {
                    functions.push(TestFunction {
                        label: format!("cos(2pi*{k}*x)"),
                        basis: Basis::CosX(k),
                        sup_bound: 1.0,
                    });
                    functions.push(TestFunction {
                        label: format!("sin(2pi*{k}*x)"),
                        basis: Basis::SinX(k),
                        sup_bound: 1.0,
                    });
                }
            }
            Phase::Disc => {
                for p in 1..=2u8 {
                    functions.push(TestFunction {
                        label: if p == 1 { "R".into() } else { format!("R^{p}") },
                        basis: Basis::RadiusPow(p),
                        sup_bound: 1.0,
                    });
                }
                for k in 1..=DEFAULT_MAX_HARMONIC {
                    functions.push(TestFunction {
                        label: format!("cos({k}*phi)"),
                        basis: Basis::CosPhi(k),
                        sup_bound: 1.0,
                    });
                    functions.push(TestFunction {
                        label: format!("sin({k}*phi)"),
                        basis: Basis::SinPhi(k),
                        sup_bound: 1.0,
                    });
                }
                functions.push(TestFunction {
                    label: "R*cos(phi)".into(),
                    basis: Basis::RCosPhi,
                    sup_bound: 1.0,
                });
                functions.push(TestFunction {
                    label: "R*sin(phi)".into(),
                    basis: Basis::RSinPhi,
                    sup_bound: 1.0,
                });
            }
        }
        Self { phase, functions }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn functions(&self) -> &[TestFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn max_sup_bound(&self) -> f64 {
        self.functions
            .iter()
            .map(|f| f.sup_bound)
            .fold(0.0, f64::max)
    }

    /// Evaluate every function at one point into `out` (len must match).
    ///
    /// The harmonics are produced by the angle-addition recurrence from a
    /// single cos/sin pair, which keeps orbit-statistics loops out of the
    /// libm trig path. The recurrence is exact enough for test functions
    /// (error ~ k·ulp) and is covered against direct evaluation in tests.
    pub fn eval_all(&self, p: Point, out: &mut [f64]) {
        assert_eq!(out.len(), self.functions.len());
        match (self.phase, p) {
            (Phase::Interval01, Point::X(x)) => {
                let (s1, c1) = (2.0 * PI * x).sin_cos();
                let (mut ck, mut sk) = (1.0, 0.0);
                let mut harmonics = [(0.0, 0.0); DEFAULT_MAX_HARMONIC as usize];
                for h in &mut harmonics {
                    let c = ck * c1 - sk * s1;
                    let s = sk * c1 + ck * s1;
                    *h = (c, s);
                    ck = c;
                    sk = s;
                }
                for (f, o) in self.functions.iter().zip(out.iter_mut()) {
                    *o = match f.basis {
                        Basis::One => 1.0,
                        Basis::XPow(1) => x,
                        Basis::XPow(k) => x.powi(k as i32),
                        Basis::CosX(k) if k as usize <= harmonics.len() => {
                            harmonics[k as usize - 1].0
                        }
                        Basis::SinX(k) if k as usize <= harmonics.len() => {
                            harmonics[k as usize - 1].1
                        }
                        other => other.eval(p),
                    };
                }
            }
            (Phase::Disc, Point::Polar { phi, radius }) => {
                let (s1, c1) = phi.sin_cos();
                let (mut ck, mut sk) = (1.0, 0.0);
                let mut harmonics = [(0.0, 0.0); DEFAULT_MAX_HARMONIC as usize];
                for h in &mut harmonics {
                    let c = ck * c1 - sk * s1;
                    let s = sk * c1 + ck * s1;
                    *h = (c, s);
                    ck = c;
                    sk = s;
                }
                for (f, o) in self.functions.iter().zip(out.iter_mut()) {
                    *o = match f.basis {
                        Basis::One => 1.0,
                        Basis::RadiusPow(1) => radius,
                        Basis::RadiusPow(k) => radius.powi(k as i32),
                        Basis::CosPhi(k) if k as usize <= harmonics.len() => {
                            harmonics[k as usize - 1].0
                        }
                        Basis::SinPhi(k) if k as usize <= harmonics.len() => {
                            harmonics[k as usize - 1].1
                        }
                        Basis::RCosPhi => radius * c1,
                        Basis::RSinPhi => radius * s1,
                        other => other.eval(p),
                    };
                }
            }
            _ => panic!("dictionary evaluated on a point of the wrong phase"),
        }
    }

    /// ∫f dμ for every dictionary function.
    pub fn integrals(&self, mu: &PointCloudMeasure) -> Result<Vec<f64>> {
        if mu.phase() != self.phase {
            return Err(Error::PhaseMismatch(
                "dictionary and measure phases differ".into(),
            ));
        }
        let mut sums = vec![0.0; self.len()];
        let mut vals = vec![0.0; self.len()];
        for a in mu.atoms() {
            self.eval_all(a.point, &mut vals);
            for (s, v) in sums.iter_mut().zip(&vals) {
                *s += a.weight * v;
            }
        }
        Ok(sums)
    }
}

/// max over dictionary functions of |∫f dμ − ∫f dν|: a pseudo-metric,
/// always bounded by 2 · max sup bound.
pub fn dict_discrepancy(
    mu: &PointCloudMeasure,
    nu: &PointCloudMeasure,
    dict: &Dictionary,
) -> Result<f64> {
    if mu.phase() != nu.phase() {
        return Err(Error::PhaseMismatch(
            "discrepancy between measures of different phases".into(),
        ));
    }
    let a = dict.integrals(mu)?;
    let b = dict.integrals(nu)?;
    Ok(discrepancy_between(&a, &b))
}

/// max_i |a_i − b_i| between two integral vectors.
pub fn discrepancy_between(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs())
        .fold(0.0, f64::max)
}
