//! Probability-measure representations and the metric layer.
//!
//! Two concrete representations are used everywhere:
//!
//! * [`PointCloudMeasure`] — a weighted finite atom set. Dirac measures,
//!   empirical occupation measures and sampled reference measures are all
//!   clouds; pushforwards move atoms and keep weights.
//! * [`GridMeasure`] — a histogram over a uniform partition of the phase
//!   space, used for overlap/singularity tests and operator densities.
//!
//! Weak-star proximity is probed through two channels: the exact
//! 1-Wasserstein distance on the interval ([`w1_interval`]) and a
//! test-function discrepancy on either space (see [`crate::dict`]). No
//! single cheap exact metric exists on the disc, so both channels are
//! recorded in reports.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{wrap_angle, Phase, Point, TWO_PI};

/// Atoms lighter than this are dropped (and the rest renormalized) so that
/// long Cesaro accumulations cannot grow unbounded tails of dust.
pub const WEIGHT_FLOOR: f64 = 1e-15;

/// Total-mass bookkeeping tolerance quoted in the type invariants.
pub const MASS_TOL: f64 = 1e-12;

/// One weighted atom of a point-cloud measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Point,
    pub weight: f64,
}

/// A probability measure represented as a finite weighted atom set.
///
/// Invariants established at construction: all atoms lie in the phase
/// domain (angles reduced mod 2π), weights are positive, and the weights
/// sum to 1 within `MASS_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloudMeasure {
    phase: Phase,
    atoms: Vec<Atom>,
}

/// Weighted coordinate averages of a cloud.
///
/// On the disc the angle is averaged as a unit vector (circular mean),
/// because the arithmetic mean of angles is meaningless across the 0/2π
/// cut; the mean radius is reported alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanValue {
    Interval(f64),
    Disc {
        /// Mean of cos(phi), weighted.
        vx: f64,
        /// Mean of sin(phi), weighted.
        vy: f64,
        mean_radius: f64,
    },
}

impl MeanValue {
    /// Interval mean, or an error on a disc value.
    pub fn interval(self) -> Result<f64> {
        match self {
            MeanValue::Interval(x) => Ok(x),
            MeanValue::Disc { .. } => Err(Error::PhaseMismatch(
                "interval mean requested from a disc measure".into(),
            )),
        }
    }
}

impl PointCloudMeasure {
    /// Build a cloud from raw atoms: validates domains, drops atoms below
    /// `WEIGHT_FLOOR` (relative to the total) and normalizes to mass 1.
    pub fn from_atoms(phase: Phase, atoms: Vec<(Point, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        let mut total = 0.0;
        for &(_, w) in &atoms {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(format!("atom weight {w} is not admissible")));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::invalid("total weight must be positive"));
        }
        let mut dropped = false;
        let mut kept = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if w / total < WEIGHT_FLOOR {
                dropped = true;
                continue;
            }
            kept.push(Atom {
                point: phase.normalize(p)?,
                weight: w,
            });
        }
        if kept.is_empty() {
            return Err(Error::invalid("all atoms fell below the weight floor"));
        }
        // Renormalize only when needed: atoms that already sum to 1 within
        // the mass tolerance pass through bit-identical (CSV round-trips).
        let kept_total: f64 = kept.iter().map(|a| a.weight).sum();
        if dropped || (kept_total - 1.0).abs() > MASS_TOL {
            for a in &mut kept {
                a.weight /= kept_total;
            }
        }
        Ok(Self { phase, atoms: kept })
    }

    /// Equal-weight cloud on the given points.
    pub fn equal_weights(phase: Phase, points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        let w = 1.0 / n as f64;
        let atoms = points
            .into_iter()
            .map(|p| Ok(Atom {
                point: phase.normalize(p)?,
                weight: w,
            }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { phase, atoms })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Weighted coordinate average.
    pub fn mean(&self) -> MeanValue {
        match self.phase {
            Phase::Interval01 => {
                let m = self
                    .atoms
                    .iter()
                    .map(|a| a.weight * a.point.x())
                    .sum::<f64>();
                MeanValue::Interval(m)
            }
            Phase::Disc => {
                let (mut vx, mut vy, mut mr) = (0.0, 0.0, 0.0);
                for a in &self.atoms {
                    let (phi, r) = a.point.polar();
                    vx += a.weight * phi.cos();
                    vy += a.weight * phi.sin();
                    mr += a.weight * r;
                }
                MeanValue::Disc {
                    vx,
                    vy,
                    mean_radius: mr,
                }
            }
        }
    }

    /// Histogram the cloud on a uniform partition. Total mass is preserved
    /// exactly up to summation rounding.
    pub fn bin(&self, resolution: Resolution) -> Result<GridMeasure> {
        resolution.check_phase(self.phase)?;
        let mut masses = vec![0.0; resolution.cell_count()];
        for a in &self.atoms {
            masses[resolution.cell_index(a.point)] += a.weight;
        }
        GridMeasure::from_masses(self.phase, resolution, masses)
    }

    /// Draw `count` points from the cloud, atoms resampled by weight.
    pub fn resample(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
        let mut cdf = Vec::with_capacity(self.atoms.len());
        let mut acc = 0.0;
        for a in &self.atoms {
            acc += a.weight;
            cdf.push(acc);
        }
        (0..count)
            .map(|_| {
                let u: f64 = rng.gen();
                let idx = cdf.partition_point(|&c| c < u).min(self.atoms.len() - 1);
                self.atoms[idx].point
            })
            .collect()
    }

    /// CSV form: header `x,weight` or `phi,r,weight`, one row per atom,
    /// floats at 17 significant digits for a bit-faithful round-trip.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.phase {
            Phase::Interval01 => {
                out.push_str("x,weight\n");
                for a in &self.atoms {
                    out.push_str(&format!("{:.16e},{:.16e}\n", a.point.x(), a.weight));
                }
            }
            Phase::Disc => {
                out.push_str("phi,r,weight\n");
                for a in &self.atoms {
                    let (phi, r) = a.point.polar();
                    out.push_str(&format!("{phi:.16e},{r:.16e},{:.16e}\n", a.weight));
                }
            }
        }
        out
    }

    /// Parse the CSV form written by [`Self::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid("empty measure CSV"))?;
        let phase = match header.trim() {
            "x,weight" => Phase::Interval01,
            "phi,r,weight" => Phase::Disc,
            other => return Err(Error::invalid(format!("unknown measure CSV header {other:?}"))),
        };
        let mut atoms = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::invalid(format!("CSV line {}: {e}", lineno + 2)))
                })
                .collect::<Result<_>>()?;
            match phase {
                Phase::Interval01 => {
                    if fields.len() != 2 {
                        return Err(Error::invalid(format!("CSV line {}: want 2 fields", lineno + 2)));
                    }
                    atoms.push((Point::X(fields[0]), fields[1]));
                }
                Phase::Disc => {
                    if fields.len() != 3 {
                        return Err(Error::invalid(format!("CSV line {}: want 3 fields", lineno + 2)));
                    }
                    atoms.push((
                        Point::Polar {
                            phi: fields[0],
                            radius: fields[1],
                        },
                        fields[2],
                    ));
                }
            }
        }
        Self::from_atoms(phase, atoms)
    }
}

/// `n` equal-weight atoms drawn uniformly with respect to the reference
/// measure: Lebesgue on the interval, normalized area on the disc. The
/// area measure makes the radius CDF R², so R is drawn as sqrt(u); naive
/// uniform-R sampling would silently bias every disc experiment.
pub fn uniform_cloud(phase: Phase, n: usize, seed: u64) -> Result<PointCloudMeasure> {
    if n == 0 {
        return Err(Error::invalid("uniform_cloud needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| match phase {
            Phase::Interval01 => Point::X(rng.gen::<f64>()),
            Phase::Disc => {
                let u: f64 = rng.gen();
                let v: f64 = rng.gen();
                Point::Polar {
                    phi: wrap_angle(TWO_PI * u),
                    radius: v.sqrt(),
                }
            }
        })
        .collect();
    PointCloudMeasure::equal_weights(phase, points)
}

/// The Dirac measure at a point: a single atom of weight 1.
pub fn dirac(phase: Phase, point: Point) -> Result<PointCloudMeasure> {
    PointCloudMeasure::from_atoms(phase, vec![(point, 1.0)])
}

/// The uniform measure on the circle {radius = r}, realized as `n`
/// equispaced atoms (deterministic, no sampling noise). This is the
/// conditional reference measure for circle supports: the normalized
/// restriction of the area measure to the circle.
pub fn conditional_on_circle(r: f64, n: usize) -> Result<PointCloudMeasure> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("circle radius {r} outside (0,1)")));
    }
    if n == 0 {
        return Err(Error::invalid("conditional_on_circle needs n >= 1"));
    }
    let points = (0..n)
        .map(|j| Point::Polar {
            phi: wrap_angle(TWO_PI * j as f64 / n as f64),
            radius: r,
        })
        .collect();
    PointCloudMeasure::equal_weights(Phase::Disc, points)
}

/// Exact 1-Wasserstein distance between two atomic interval measures,
/// computed by CDF-difference integration over the merged sorted atoms.
pub fn w1_interval(mu: &PointCloudMeasure, nu: &PointCloudMeasure) -> Result<f64> {
    if mu.phase() != Phase::Interval01 || nu.phase() != Phase::Interval01 {
        return Err(Error::PhaseMismatch(
            "w1_interval is defined for interval measures only".into(),
        ));
    }
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(mu.atoms.len() + nu.atoms.len());
    events.extend(mu.atoms.iter().map(|a| (a.point.x(), a.weight)));
    events.extend(nu.atoms.iter().map(|a| (a.point.x(), -a.weight)));
    events.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("atom coordinates are finite"));
    let mut dist = 0.0_f64;
    let mut cdf_gap = 0.0_f64;
    let mut prev = events[0].0;
    for (x, dw) in events {
        dist += cdf_gap.abs() * (x - prev);
        cdf_gap += dw;
        prev = x;
    }
    Ok(dist)
}

/// Uniform-partition resolution: cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolution {
    /// N cells over \[0,1\].
    Interval(usize),
    /// n_phi × n_r cells over the disc (angle × radius).
    Disc { n_phi: usize, n_r: usize },
}

impl Resolution {
    pub fn cell_count(self) -> usize {
        match self {
            Resolution::Interval(n) => n,
            Resolution::Disc { n_phi, n_r } => n_phi * n_r,
        }
    }

    pub fn phase(self) -> Phase {
        match self {
            Resolution::Interval(_) => Phase::Interval01,
            Resolution::Disc { .. } => Phase::Disc,
        }
    }

    fn check_phase(self, phase: Phase) -> Result<()> {
        if self.phase() == phase {
            Ok(())
        } else {
            Err(Error::PhaseMismatch(format!(
                "resolution {self:?} does not match phase {phase:?}"
            )))
        }
    }

    pub fn validate(self) -> Result<()> {
        let ok = match self {
            Resolution::Interval(n) => n >= 1,
            Resolution::Disc { n_phi, n_r } => n_phi >= 1 && n_r >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("resolution needs at least one cell per axis"))
        }
    }

    /// Cell of a point. Cells are [left, right) with the last cell closed,
    /// fixing which cell receives atoms at exact edges.
    pub fn cell_index(self, p: Point) -> usize {
        match (self, p) {
            (Resolution::Interval(n), Point::X(x)) => ((x * n as f64) as usize).min(n - 1),
            (Resolution::Disc { n_phi, n_r }, Point::Polar { phi, radius }) => {
                let ip = ((phi / TWO_PI * n_phi as f64) as usize).min(n_phi - 1);
                let ir = ((radius * n_r as f64) as usize).min(n_r - 1);
                ip * n_r + ir
            }
            _ => panic!("cell_index: point/resolution phase mismatch"),
        }
    }

    /// Center of a cell, used when a histogram has to act as a cloud.
    pub fn cell_center(self, idx: usize) -> Point {
        match self {
            Resolution::Interval(n) => Point::X((idx as f64 + 0.5) / n as f64),
            Resolution::Disc { n_phi, n_r } => {
                let ip = idx / n_r;
                let ir = idx % n_r;
                Point::Polar {
                    phi: wrap_angle(TWO_PI * (ip as f64 + 0.5) / n_phi as f64),
                    radius: (ir as f64 + 0.5) / n_r as f64,
                }
            }
        }
    }
}

/// A probability measure represented as a histogram over a uniform
/// partition: nonnegative masses summing to 1 within `MASS_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeasure {
    phase: Phase,
    resolution: Resolution,
    masses: Vec<f64>,
}

impl GridMeasure {
    pub fn from_masses(phase: Phase, resolution: Resolution, masses: Vec<f64>) -> Result<Self> {
        resolution.validate()?;
        resolution.check_phase(phase)?;
        if masses.len() != resolution.cell_count() {
            return Err(Error::ResolutionMismatch(format!(
                "{} masses for {} cells",
                masses.len(),
                resolution.cell_count()
            )));
        }
        let mut total = 0.0;
        for &m in &masses {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::invalid(format!("cell mass {m} is not admissible")));
            }
            total += m;
        }
        if total <= 0.0 {
            return Err(Error::invalid("total grid mass must be positive"));
        }
        let masses = masses.into_iter().map(|m| m / total).collect();
        Ok(Self {
            phase,
            resolution,
            masses,
        })
    }

    /// The reference measure binned at this resolution: uniform masses on
    /// the interval; cell-area masses on the disc (annular sector areas).
    pub fn reference(resolution: Resolution) -> Self {
        let masses = match resolution {
            Resolution::Interval(n) => vec![1.0 / n as f64; n],
            Resolution::Disc { n_phi, n_r } => {
                let mut m = vec![0.0; n_phi * n_r];
                for ip in 0..n_phi {
                    for ir in 0..n_r {
                        // Area of the annular sector, normalized: ((ir+1)² - ir²)/n_r² / n_phi.
                        m[ip * n_r + ir] = (2 * ir + 1) as f64 / (n_r * n_r) as f64 / n_phi as f64;
                    }
                }
                m
            }
        };
        Self {
            phase: resolution.phase(),
            resolution,
            masses,
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mass_at(&self, p: Point) -> f64 {
        self.masses[self.resolution.cell_index(p)]
    }

    /// Σ_cells min(a, b): 1 for identical histograms, 0 for disjoint
    /// supports at this resolution. A finite-resolution proxy for mutual
    /// singularity (overlap of singular pairs tends to 0 under refinement).
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch(format!(
                "{:?} vs {:?}",
                self.resolution, other.resolution
            )));
        }
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(&a, &b)| a.min(b))
            .sum())
    }

    /// L1 distance between the mass vectors.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch(format!(
                "{:?} vs {:?}",
                self.resolution, other.resolution
            )));
        }
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(&a, &b)| (a - b).abs())
            .sum())
    }

    /// The histogram as a cloud of cell-center atoms.
    pub fn to_cloud(&self) -> Result<PointCloudMeasure> {
        let atoms = self
            .masses
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(i, &m)| (self.resolution.cell_center(i), m))
            .collect();
        PointCloudMeasure::from_atoms(self.phase, atoms)
    }

    /// Angle marginal of a disc grid (sums over radial cells per angular cell).
    pub fn angular_marginal(&self) -> Result<Vec<f64>> {
        match self.resolution {
            Resolution::Disc { n_phi, n_r } => Ok((0..n_phi)
                .map(|ip| (0..n_r).map(|ir| self.masses[ip * n_r + ir]).sum())
                .collect()),
            Resolution::Interval(_) => Err(Error::PhaseMismatch(
                "angular marginal of an interval grid".into(),
            )),
        }
    }

    /// Radius marginal of a disc grid.
    pub fn radial_marginal(&self) -> Result<Vec<f64>> {
        match self.resolution {
            Resolution::Disc { n_phi, n_r } => Ok((0..n_r)
                .map(|ir| (0..n_phi).map(|ip| self.masses[ip * n_r + ir]).sum())
                .collect()),
            Resolution::Interval(_) => Err(Error::PhaseMismatch(
                "radial marginal of an interval grid".into(),
            )),
        }
    }

    /// CSV form: header `cell_index,mass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_index,mass\n");
        for (i, m) in self.masses.iter().enumerate() {
            out.push_str(&format!("{i},{m:.16e}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(xs: &[(f64, f64)]) -> PointCloudMeasure {
        PointCloudMeasure::from_atoms(
            Phase::Interval01,
            xs.iter().map(|&(x, w)| (Point::X(x), w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_cloud_weights_normalize() {
        let c = uniform_cloud(Phase::Interval01, 4, 7).unwrap();
        assert_eq!(c.atoms().len(), 4);
        for a in c.atoms() {
            assert!((a.weight - 0.25).abs() < 1e-15);
        }
        assert!((c.total_mass() - 1.0).abs() < MASS_TOL);
    }

    #[test]
    fn uniform_cloud_rejects_empty() {
        assert!(uniform_cloud(Phase::Interval01, 0, 1).is_err());
    }

    #[test]
    fn interval_sample_mean_matches_lebesgue() {
        // Oracle: the analytic mean of Lebesgue on [0,1] is 1/2.
        let c = uniform_cloud(Phase::Interval01, 100_000, 1).unwrap();
        let m = c.mean().interval().unwrap();
        assert!((m - 0.5).abs() < 0.01, "sample mean {m}");
    }

    #[test]
    fn disc_sample_mean_radius_matches_area_measure() {
        // Oracle: ∫ R dm over the unit disc with normalized area measure,
        // i.e. ∫₀¹ R · 2R dR, evaluated by trapezoid quadrature.
        let k = 100_000;
        let quad: f64 = (0..=k)
            .map(|i| {
                let r = i as f64 / k as f64;
                let f = 2.0 * r * r;
                let w = if i == 0 || i == k { 0.5 } else { 1.0 };
                f * w / k as f64
            })
            .sum();
        assert!((quad - 2.0 / 3.0).abs() < 1e-8, "quadrature sanity {quad}");

        let c = uniform_cloud(Phase::Disc, 100_000, 1).unwrap();
        match c.mean() {
            MeanValue::Disc { mean_radius, .. } => {
                assert!((mean_radius - quad).abs() < 0.01, "mean radius {mean_radius}")
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn dirac_basics() {
        let d = dirac(Phase::Interval01, Point::X(0.5)).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert_eq!(d.atoms()[0].weight, 1.0);
        for x in [0.0, 0.25, 1.0] {
            let d = dirac(Phase::Interval01, Point::X(x)).unwrap();
            assert_eq!(d.mean().interval().unwrap(), x);
        }
        assert!(dirac(Phase::Interval01, Point::X(1.5)).is_err());
        assert!(dirac(
            Phase::Disc,
            Point::Polar {
                phi: 0.0,
                radius: 0.5
            }
        )
        .is_ok());
    }

    #[test]
    fn mean_of_two_point_cloud() {
        let c = cloud(&[(0.0, 0.5), (1.0, 0.5)]);
        assert_eq!(c.mean().interval().unwrap(), 0.5);
        assert_eq!(cloud(&[(0.3, 1.0)]).mean().interval().unwrap(), 0.3);
    }

    #[test]
    fn bin_boundary_convention() {
        let res = Resolution::Interval(10);
        let d = dirac(Phase::Interval01, Point::X(0.0)).unwrap();
        let g = d.bin(res).unwrap();
        assert_eq!(g.masses()[0], 1.0);

        // Last cell is closed: an atom at exactly 1.0 lands in cell 9.
        let d1 = dirac(Phase::Interval01, Point::X(1.0)).unwrap();
        assert_eq!(d1.bin(res).unwrap().masses()[9], 1.0);

        let c = cloud(&[(0.05, 0.5), (0.15, 0.5)]);
        let g = c.bin(res).unwrap();
        assert_eq!(g.masses()[0], 0.5);
        assert_eq!(g.masses()[1], 0.5);
        assert!((g.total_mass() - 1.0).abs() < MASS_TOL);
    }

    #[test]
    fn bin_of_large_uniform_cloud_is_flat() {
        // Binomial concentration: per-cell sd = sqrt(0.1*0.9/1e6) ≈ 3e-4.
        let c = uniform_cloud(Phase::Interval01, 1_000_000, 3).unwrap();
        let g = c.bin(Resolution::Interval(10)).unwrap();
        for (i, &m) in g.masses().iter().enumerate() {
            assert!((m - 0.1).abs() < 0.005, "cell {i} mass {m}");
        }
    }

    #[test]
    fn bin_preserves_mean_within_cell_width() {
        let c = uniform_cloud(Phase::Interval01, 10_000, 11).unwrap();
        for n in [4usize, 16, 64] {
            let g = c.bin(Resolution::Interval(n)).unwrap();
            let gm = g.to_cloud().unwrap().mean().interval().unwrap();
            let cm = c.mean().interval().unwrap();
            assert!(
                (gm - cm).abs() <= 1.0 / n as f64,
                "n={n}: grid mean {gm} vs cloud mean {cm}"
            );
        }
    }

    #[test]
    fn w1_simple_transports() {
        let d0 = dirac(Phase::Interval01, Point::X(0.0)).unwrap();
        let d5 = dirac(Phase::Interval01, Point::X(0.5)).unwrap();
        assert!((w1_interval(&d0, &d5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(w1_interval(&d0, &d0).unwrap(), 0.0);

        // Brute-force optimal transport on two atoms: keep half the mass
        // at 0, move half a distance of 0.5 -> cost 0.25.
        let two = cloud(&[(0.0, 0.5), (0.5, 0.5)]);
        assert!((w1_interval(&d0, &two).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn w1_rejects_disc() {
        let c = conditional_on_circle(0.5, 8).unwrap();
        let d = dirac(Phase::Interval01, Point::X(0.0)).unwrap();
        assert!(w1_interval(&c, &d).is_err());
    }

    #[test]
    fn overlap_basics() {
        let res = Resolution::Interval(10);
        let u = GridMeasure::reference(res);
        assert!((u.overlap(&u).unwrap() - 1.0).abs() < 1e-15);

        let mut a = vec![0.0; 10];
        a[3] = 1.0;
        let spike = GridMeasure::from_masses(Phase::Interval01, res, a).unwrap();
        assert!((u.overlap(&spike).unwrap() - 0.1).abs() < 1e-15);

        let mut b = vec![0.0; 10];
        b[7] = 1.0;
        let other = GridMeasure::from_masses(Phase::Interval01, res, b).unwrap();
        assert_eq!(spike.overlap(&other).unwrap(), 0.0);

        let coarse = GridMeasure::reference(Resolution::Interval(5));
        assert!(u.overlap(&coarse).is_err());
    }

    #[test]
    fn conditional_circle_is_equispaced() {
        let c = conditional_on_circle(0.5, 4).unwrap();
        let expected = [0.0, TWO_PI / 4.0, TWO_PI / 2.0, 3.0 * TWO_PI / 4.0];
        for (a, &phi) in c.atoms().iter().zip(&expected) {
            let (p, r) = a.point.polar();
            assert!((p - phi).abs() < 1e-15);
            assert_eq!(r, 0.5);
        }
        match c.mean() {
            MeanValue::Disc { mean_radius, .. } => assert_eq!(mean_radius, 0.5),
            _ => unreachable!(),
        }
        assert!(conditional_on_circle(0.0, 4).is_err());
        assert!(conditional_on_circle(1.0, 4).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_faithful() {
        let c = uniform_cloud(Phase::Disc, 50, 13).unwrap();
        let back = PointCloudMeasure::from_csv(&c.to_csv()).unwrap();
        assert_eq!(c.atoms().len(), back.atoms().len());
        for (a, b) in c.atoms().iter().zip(back.atoms()) {
            assert_eq!(a.point, b.point, "atom coordinates must round-trip bitwise");
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn reference_grid_masses_sum_to_one() {
        let g = GridMeasure::reference(Resolution::Disc { n_phi: 16, n_r: 8 });
        assert!((g.total_mass() - 1.0).abs() < MASS_TOL);
        // Outer annuli carry more area than inner ones.
        let rm = g.radial_marginal().unwrap();
        assert!(rm[7] > rm[0]);
    }

    #[test]
    fn weight_floor_drops_dust() {
        let c = cloud(&[(0.1, 1.0), (0.9, 1e-17)]);
        assert_eq!(c.atoms().len(), 1);
        assert!((c.total_mass() - 1.0).abs() < MASS_TOL);
    }

    #[test]
    fn resample_is_deterministic_and_weighted() {
        let c = cloud(&[(0.0, 0.9), (1.0, 0.1)]);
        let mut rng = crate::rng::task_rng(5, "resample", 0);
        let pts = c.resample(10_000, &mut rng);
        let ones = pts.iter().filter(|p| p.x() == 1.0).count();
        assert!((ones as f64 / 10_000.0 - 0.1).abs() < 0.02, "ones {ones}");

        let mut rng2 = crate::rng::task_rng(5, "resample", 0);
        assert_eq!(pts, c.resample(10_000, &mut rng2));
    }
}
