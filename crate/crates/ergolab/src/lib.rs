//! ergolab — a numerical laboratory for ergodic averaging.
//!
//! The crate simulates a small zoo of interval and disc maps (including
//! mean-field coupled ones), computes time averages along orbits and
//! Cesaro averages of pushforward measures, discretizes the transfer
//! operator on a grid, and turns limit-behavior claims — typicality,
//! weak ergodicity, naturality, invariance, wandering, tracing — into
//! seeded, reproducible numerical probes with explicit tolerances.
//!
//! Layout:
//! * [`phase`], [`measure`], [`dict`] — phase spaces, measure
//!   representations, metrics and test-function discrepancies;
//! * [`zoo`] — the map catalog;
//! * [`averaging`] — orbit statistics, Cesaro pushforwards, ensembles;
//! * [`ulam`] — transfer-operator discretization;
//! * [`diagnostics`], [`report`] — the probes and their reports;
//! * [`config`], [`runner`], [`suite`] — the experiment front end.

pub mod averaging;
pub mod config;
pub mod diagnostics;
pub mod dict;
pub mod error;
pub mod measure;
pub mod phase;
pub mod report;
pub mod rng;
pub mod runner;
pub mod suite;
pub mod ulam;
pub mod zoo;

pub use error::{Error, Result};
pub use measure::{
    conditional_on_circle, dirac, uniform_cloud, w1_interval, GridMeasure, PointCloudMeasure,
    Resolution,
};
pub use phase::{Phase, Point};
pub use zoo::{Family, SystemSpec};
