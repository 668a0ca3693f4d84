//! Transfer-operator discretization on a uniform partition.
//!
//! Each source cell is mapped by sampling: a row-stochastic matrix entry
//! P(i→j) estimates the fraction of cell i whose image lands in cell j,
//! with in-cell samples stratified to cut the row-estimate variance.
//! Iterating Cesaro averages of matrix powers on the uniform density gives
//! the operator-level analogue of the Cesaro pushforward limit; plain
//! power iteration is deliberately avoided since it need not converge for
//! maps with rotational factors.
//!
//! Caveat recorded in every report that uses this module: cell sampling
//! almost surely never hits a measure-zero branch set (an exact-0 kick, an
//! exact-circle jump), so Ulam densities approximate Cesaro limits of
//! absolutely continuous measures — by design.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{GridMeasure, Resolution};
use crate::phase::{wrap_angle, Point, TWO_PI};
use crate::rng::task_rng;
use crate::zoo::SystemSpec;
use rand::Rng;

/// Sparse row-stochastic cell-transition matrix for one autonomous map.
#[derive(Debug, Clone)]
pub struct UlamMatrix {
    spec: SystemSpec,
    resolution: Resolution,
    /// Per source cell: sorted (target cell, probability) pairs.
    rows: Vec<Vec<(u32, f64)>>,
    samples_per_cell: usize,
    seed: u64,
}

/// Estimate the transition matrix by mapping `samples_per_cell` stratified
/// points from every cell. Interval cells are stratified directly; disc
/// cells stratify the angle and draw the radius area-weighted within the
/// annular sector (the in-cell reference measure is area, not dR).
pub fn build_ulam(
    spec: &SystemSpec,
    resolution: Resolution,
    samples_per_cell: usize,
    seed: u64,
) -> Result<UlamMatrix> {
    if spec.is_measure_dependent() {
        return Err(Error::WrongEvaluator(format!(
            "{} is measure-dependent; the transfer operator is not autonomous",
            spec.family().name()
        )));
    }
    if samples_per_cell == 0 {
        return Err(Error::invalid("build_ulam needs samples_per_cell >= 1"));
    }
    resolution.validate()?;
    if resolution.phase() != spec.phase() {
        return Err(Error::PhaseMismatch(format!(
            "resolution {resolution:?} does not match the {:?} map",
            spec.phase()
        )));
    }

    let cells = resolution.cell_count();
    let rows: Vec<Vec<(u32, f64)>> = (0..cells)
        .into_par_iter()
        .map(|i| build_row(spec, resolution, samples_per_cell, seed, i))
        .collect();

    Ok(UlamMatrix {
        spec: *spec,
        resolution,
        rows,
        samples_per_cell,
        seed,
    })
}

fn build_row(
    spec: &SystemSpec,
    resolution: Resolution,
    samples: usize,
    seed: u64,
    cell: usize,
) -> Vec<(u32, f64)> {
    let mut rng = task_rng(seed, "ulam-row", cell as u64);
    let mut counts = std::collections::BTreeMap::<u32, u32>::new();
    for q in 0..samples {
        let stratum = (q as f64 + rng.gen::<f64>()) / samples as f64;
        let p = match resolution {
            Resolution::Interval(n) => Point::X((cell as f64 + stratum) / n as f64),
            Resolution::Disc { n_phi, n_r } => {
                let ip = cell / n_r;
                let ir = cell % n_r;
                let phi = TWO_PI * (ip as f64 + stratum) / n_phi as f64;
                let (r_lo, r_hi) = (ir as f64 / n_r as f64, (ir + 1) as f64 / n_r as f64);
                let v: f64 = rng.gen();
                let radius = (r_lo * r_lo + v * (r_hi * r_hi - r_lo * r_lo)).sqrt();
                Point::Polar {
                    phi: wrap_angle(phi),
                    radius: radius.min(1.0),
                }
            }
        };
        let image = spec.step_autonomous(p);
        *counts.entry(resolution.cell_index(image) as u32).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(j, c)| (j, c as f64 / samples as f64))
        .collect()
}

impl UlamMatrix {
    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn samples_per_cell(&self) -> usize {
        self.samples_per_cell
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> &[Vec<(u32, f64)>] {
        &self.rows
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.rows[i].iter().map(|&(_, p)| p).sum()
    }

    /// v ↦ vP on a raw mass vector.
    pub(crate) fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let m = v[i];
            if m == 0.0 {
                continue;
            }
            for &(j, p) in row {
                out[j as usize] += m * p;
            }
        }
        out
    }

    /// CSV triples `row,col,prob`, one per nonzero entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,prob\n");
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                out.push_str(&format!("{i},{j},{p:.16e}\n"));
            }
        }
        out
    }
}

/// Mass-conserving application of the matrix to a density.
pub fn ulam_push(matrix: &UlamMatrix, density: &GridMeasure) -> Result<GridMeasure> {
    if density.resolution() != matrix.resolution {
        return Err(Error::ResolutionMismatch(format!(
            "density {:?} vs matrix {:?}",
            density.resolution(),
            matrix.resolution
        )));
    }
    GridMeasure::from_masses(
        density.phase(),
        density.resolution(),
        matrix.apply(density.masses()),
    )
}

/// Result of the Cesaro fixed-density iteration.
#[derive(Debug, Clone)]
pub struct CesaroDensity {
    pub density: GridMeasure,
    pub converged: bool,
    pub iterations: usize,
    /// L1 distance between the last two Cesaro averages.
    pub last_delta: f64,
}

/// Iterate Cesaro averages of matrix powers applied to the uniform
/// (reference) density until successive averages differ by less than
/// `tol` in L1, or `n_max` is reached. Non-convergence is a reported
/// flag, not an error.
pub fn ulam_cesaro_fixed_density(
    matrix: &UlamMatrix,
    n_max: usize,
    tol: f64,
) -> Result<CesaroDensity> {
    if n_max < 2 {
        return Err(Error::invalid("ulam_cesaro_fixed_density needs n_max >= 2"));
    }
    let reference = GridMeasure::reference(matrix.resolution);
    let mut v = reference.masses().to_vec();
    let mut avg = v.clone();
    let mut iterations = 1usize;
    let mut converged = false;
    let mut last_delta = f64::INFINITY;
    while iterations < n_max {
        v = matrix.apply(&v);
        let k = iterations as f64;
        let mut delta = 0.0;
        for (a, &x) in avg.iter_mut().zip(&v) {
            let next = (*a * k + x) / (k + 1.0);
            delta += (next - *a).abs();
            *a = next;
        }
        iterations += 1;
        last_delta = delta;
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(CesaroDensity {
        density: GridMeasure::from_masses(matrix.resolution.phase(), matrix.resolution, avg)?,
        converged,
        iterations,
        last_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;

    #[test]
    fn rows_are_stochastic() {
        for spec in [
            SystemSpec::halving(),
            SystemSpec::doubling(),
            SystemSpec::square_jump(0.5).unwrap(),
        ] {
            let m = build_ulam(&spec, Resolution::Interval(10), 64, 7).unwrap();
            for i in 0..10 {
                let s = m.row_sum(i);
                assert!((s - 1.0).abs() < 1e-9, "{:?} row {i} sums to {s}", spec.family());
                for &(_, p) in &m.rows()[i] {
                    assert!(p >= 0.0);
                }
            }
        }
    }

    #[test]
    fn halving_row_is_deterministic_transport() {
        // Cell [0.8, 0.9) maps into [0.40, 0.45) ⊂ cell 4.
        let m = build_ulam(&SystemSpec::halving(), Resolution::Interval(10), 100, 3).unwrap();
        assert_eq!(m.rows()[8], vec![(4u32, 1.0)]);
    }

    #[test]
    fn doubling_row_splits_exactly_in_half() {
        // Cell [0, 0.1) maps onto [0, 0.2); 100 strata split 50/50 across
        // cells 0 and 1 regardless of the in-stratum jitter.
        let m = build_ulam(&SystemSpec::doubling(), Resolution::Interval(10), 100, 3).unwrap();
        assert_eq!(m.rows()[0], vec![(0u32, 0.5), (1u32, 0.5)]);
    }

    #[test]
    fn power_rows_stay_stochastic() {
        let m = build_ulam(&SystemSpec::doubling(), Resolution::Interval(50), 50, 5).unwrap();
        for power in [2usize, 4, 8] {
            for i in 0..50 {
                let mut e = vec![0.0; 50];
                e[i] = 1.0;
                for _ in 0..power {
                    e = m.apply(&e);
                }
                let s: f64 = e.iter().sum();
                assert!(
                    (s - 1.0).abs() < 1e-9,
                    "power {power} row {i} mass {s}"
                );
            }
        }
    }

    #[test]
    fn push_conserves_mass_and_moves_delta_cells() {
        let res = Resolution::Interval(10);
        let m = build_ulam(&SystemSpec::halving(), res, 100, 3).unwrap();
        let mut masses = vec![0.0; 10];
        masses[8] = 1.0;
        let d = GridMeasure::from_masses(Phase::Interval01, res, masses).unwrap();
        let out = ulam_push(&m, &d).unwrap();
        assert!((out.total_mass() - 1.0).abs() < 1e-12);
        assert_eq!(out.masses()[4], 1.0);

        let wrong = GridMeasure::reference(Resolution::Interval(20));
        assert!(ulam_push(&m, &wrong).is_err());
    }

    #[test]
    fn doubling_preserves_uniform_within_sampling_error() {
        // N chosen so cells do not split exactly at stratum boundaries.
        let s = 100;
        let m = build_ulam(&SystemSpec::doubling(), Resolution::Interval(7), s, 11).unwrap();
        let u = GridMeasure::reference(Resolution::Interval(7));
        let out = ulam_push(&m, &u).unwrap();
        for (i, &mass) in out.masses().iter().enumerate() {
            assert!(
                (mass - 1.0 / 7.0).abs() <= 2.0 / s as f64,
                "cell {i} mass {mass}"
            );
        }
    }

    #[test]
    fn cesaro_doubling_converges_to_uniform() {
        let m = build_ulam(&SystemSpec::doubling(), Resolution::Interval(100), 200, 5).unwrap();
        let out = ulam_cesaro_fixed_density(&m, 500, 0.01).unwrap();
        assert!(out.converged);
        let uniform = GridMeasure::reference(Resolution::Interval(100));
        let l1 = out.density.l1_distance(&uniform).unwrap();
        assert!(l1 < 0.05, "L1 to uniform {l1}");
    }

    #[test]
    fn cesaro_halving_drains_into_cell_zero() {
        let m = build_ulam(&SystemSpec::halving(), Resolution::Interval(100), 100, 5).unwrap();
        let out = ulam_cesaro_fixed_density(&m, 2000, 1e-6).unwrap();
        assert!(
            out.density.masses()[0] >= 0.99,
            "cell 0 mass {}",
            out.density.masses()[0]
        );
    }

    #[test]
    fn cesaro_square_jump_is_blind_to_the_exact_zero_kick() {
        // Cell sampling never hits x = 0, so the Ulam Cesaro density sees
        // only the contraction toward 0 — the limit of absolutely
        // continuous measures, not of the Dirac at 0.
        let m = build_ulam(
            &SystemSpec::square_jump(0.5).unwrap(),
            Resolution::Interval(100),
            100,
            5,
        )
        .unwrap();
        let out = ulam_cesaro_fixed_density(&m, 2000, 1e-6).unwrap();
        assert!(
            out.density.masses()[0] >= 0.95,
            "cell 0 mass {}",
            out.density.masses()[0]
        );
    }

    #[test]
    fn ulam_is_deterministic_per_seed() {
        let a = build_ulam(&SystemSpec::doubling(), Resolution::Interval(20), 33, 9).unwrap();
        let b = build_ulam(&SystemSpec::doubling(), Resolution::Interval(20), 33, 9).unwrap();
        assert_eq!(a.rows(), b.rows());
        let c = build_ulam(&SystemSpec::doubling(), Resolution::Interval(20), 33, 10).unwrap();
        assert_ne!(a.rows(), c.rows(), "different seeds should jitter differently");
    }

    #[test]
    fn measure_dependent_maps_are_rejected() {
        assert!(matches!(
            build_ulam(&SystemSpec::mult_b(), Resolution::Interval(10), 10, 0),
            Err(Error::WrongEvaluator(_))
        ));
    }

    #[test]
    fn disc_matrix_contracts_to_circle_band() {
        let spec = SystemSpec::disc_rotation(0.3, 0.3, 0.5, 0.5).unwrap();
        let res = Resolution::Disc { n_phi: 16, n_r: 16 };
        let m = build_ulam(&spec, res, 64, 7).unwrap();
        let out = ulam_cesaro_fixed_density(&m, 300, 1e-4).unwrap();
        // r = 0.5 sits exactly on the edge between radial cells 7 and 8:
        // mass contracting from below stays in cell 7, from above in cell 8.
        let radial = out.density.radial_marginal().unwrap();
        assert!(
            radial[7] + radial[8] > 0.95,
            "mass near the invariant circle {radial:?}"
        );
        let csv = m.to_csv();
        assert!(csv.starts_with("row,col,prob\n"));
    }
}
