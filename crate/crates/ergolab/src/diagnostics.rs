//! Numerical probes for limit behavior: typicality, weak ergodicity,
//! naturality, invariance, wandering, and weak tracing.
//!
//! Every probe samples with seeds derived from one master seed, records
//! all tolerances, and parallelizes only over sampled initial points with
//! a fixed-order reduction, so identical inputs give identical results.
//!
//! Verdict semantics: finite-resolution, finite-horizon evidence. A probe
//! can falsify a limit claim, never certify it; report wording sticks to
//! "consistent with" / "inconsistent with". The typicality predicate
//! always carries a two-point Cauchy guard (statistics at n and n/2 must
//! agree) so that slow transients cannot masquerade as convergence.

use rayon::prelude::*;
use serde::Serialize;

use crate::averaging::{push_cloud, CesaroAccumulator, OCCUPATION_CLOUD_LIMIT};
use crate::dict::{dict_discrepancy, discrepancy_between, Dictionary};
use crate::error::{Error, Result};
use crate::measure::{uniform_cloud, w1_interval, GridMeasure, PointCloudMeasure, Resolution};
use crate::phase::{wrap_angle, Phase, Point, TWO_PI};
use crate::rng::task_rng;
use crate::zoo::SystemSpec;
use rand::Rng;

/// How measure proximity is scored: exact 1-Wasserstein on the interval,
/// or the test-function discrepancy (the only cheap channel on the disc).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistanceChannel {
    W1,
    Dict,
}

impl DistanceChannel {
    pub fn default_for(phase: Phase) -> Self {
        match phase {
            Phase::Interval01 => DistanceChannel::W1,
            Phase::Disc => DistanceChannel::Dict,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceChannel::W1 => "w1",
            DistanceChannel::Dict => "dict",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "w1" => Ok(DistanceChannel::W1),
            "dict" => Ok(DistanceChannel::Dict),
            other => Err(Error::Config(format!("unknown distance channel {other:?}"))),
        }
    }
}

/// Where probe initial points are sampled from.
#[derive(Debug, Clone)]
pub enum ReferenceMeasure {
    /// Lebesgue on \[0,1\].
    LebesgueInterval,
    /// Normalized area on the disc.
    AreaDisc,
    /// Uniform length measure on the circle {radius = r}.
    CircleConditional { r: f64 },
    /// Any atomic measure, resampled by weight.
    Custom(PointCloudMeasure),
    /// A histogram: a cell is drawn by mass, then a point inside it
    /// (area-weighted radius on the disc).
    CustomGrid(GridMeasure),
}

impl ReferenceMeasure {
    pub fn phase(&self) -> Phase {
        match self {
            ReferenceMeasure::LebesgueInterval => Phase::Interval01,
            ReferenceMeasure::AreaDisc | ReferenceMeasure::CircleConditional { .. } => Phase::Disc,
            ReferenceMeasure::Custom(c) => c.phase(),
            ReferenceMeasure::CustomGrid(g) => g.phase(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ReferenceMeasure::LebesgueInterval => "lebesgue".into(),
            ReferenceMeasure::AreaDisc => "area".into(),
            ReferenceMeasure::CircleConditional { r } => format!("circle(r={r})"),
            ReferenceMeasure::Custom(_) => "custom".into(),
            ReferenceMeasure::CustomGrid(_) => "custom-grid".into(),
        }
    }

    /// Draw `count` points, seeded.
    pub fn sample(&self, count: usize, master_seed: u64, tag: &str) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::invalid("cannot sample zero initial points"));
        }
        let mut rng = task_rng(master_seed, tag, 0);
        Ok(match self {
            ReferenceMeasure::LebesgueInterval => {
                (0..count).map(|_| Point::X(rng.gen())).collect()
            }
            ReferenceMeasure::AreaDisc => (0..count)
                .map(|_| Point::Polar {
                    phi: wrap_angle(TWO_PI * rng.gen::<f64>()),
                    radius: rng.gen::<f64>().sqrt(),
                })
                .collect(),
            ReferenceMeasure::CircleConditional { r } => (0..count)
                .map(|_| Point::Polar {
                    phi: wrap_angle(TWO_PI * rng.gen::<f64>()),
                    radius: *r,
                })
                .collect(),
            ReferenceMeasure::Custom(cloud) => cloud.resample(count, &mut rng),
            ReferenceMeasure::CustomGrid(grid) => {
                let masses = grid.masses();
                let mut cdf = Vec::with_capacity(masses.len());
                let mut acc = 0.0;
                for &m in masses {
                    acc += m;
                    cdf.push(acc);
                }
                (0..count)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        let cell = cdf.partition_point(|&c| c < u).min(masses.len() - 1);
                        match grid.resolution() {
                            crate::measure::Resolution::Interval(n) => {
                                Point::X((cell as f64 + rng.gen::<f64>()) / n as f64)
                            }
                            crate::measure::Resolution::Disc { n_phi, n_r } => {
                                let ip = cell / n_r;
                                let ir = cell % n_r;
                                let phi =
                                    TWO_PI * (ip as f64 + rng.gen::<f64>()) / n_phi as f64;
                                let (lo, hi) =
                                    (ir as f64 / n_r as f64, (ir + 1) as f64 / n_r as f64);
                                let v: f64 = rng.gen();
                                let radius =
                                    (lo * lo + v * (hi * hi - lo * lo)).sqrt().min(1.0);
                                Point::Polar {
                                    phi: wrap_angle(phi),
                                    radius,
                                }
                            }
                        }
                    })
                    .collect()
            }
        })
    }
}

/// Orbit statistics at one horizon: exact dictionary averages and, when
/// the orbit fits in memory, the occupation cloud itself.
pub struct SnapshotStats {
    pub dict: Vec<f64>,
    pub cloud: Option<PointCloudMeasure>,
}

/// Statistics of a single orbit at n/2 and n.
pub struct OrbitStats {
    pub half: SnapshotStats,
    pub full: SnapshotStats,
}

/// One pass over the orbit of `x0`: dictionary sums snapshotted at
/// max(1, n/2) and n, occupation clouds kept while the orbit is short
/// enough for exact transport distances.
pub fn orbit_stats(spec: &SystemSpec, x0: Point, n: usize, dict: &Dictionary) -> Result<OrbitStats> {
    if n == 0 {
        return Err(Error::invalid("orbit statistics need n >= 1"));
    }
    let mut x = spec.phase().normalize(x0)?;
    let half = (n / 2).max(1);
    let keep_points = n <= OCCUPATION_CLOUD_LIMIT;
    let mut points: Vec<Point> = if keep_points { Vec::with_capacity(n) } else { Vec::new() };
    let mut sums = vec![0.0; dict.len()];
    let mut vals = vec![0.0; dict.len()];
    let mut half_dict = vec![0.0; dict.len()];
    for k in 0..n {
        dict.eval_all(x, &mut vals);
        for (s, v) in sums.iter_mut().zip(&vals) {
            *s += v;
        }
        if keep_points {
            points.push(x);
        }
        if k + 1 == half {
            for (h, s) in half_dict.iter_mut().zip(&sums) {
                *h = s / half as f64;
            }
        }
        x = spec.step_autonomous(x);
    }
    let full_dict: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    let (half_cloud, full_cloud) = if keep_points {
        (
            Some(PointCloudMeasure::equal_weights(
                spec.phase(),
                points[..half].to_vec(),
            )?),
            Some(PointCloudMeasure::equal_weights(spec.phase(), points)?),
        )
    } else {
        (None, None)
    };
    Ok(OrbitStats {
        half: SnapshotStats {
            dict: half_dict,
            cloud: half_cloud,
        },
        full: SnapshotStats {
            dict: full_dict,
            cloud: full_cloud,
        },
    })
}

/// Statistics of an explicit target measure, comparable to orbit snapshots.
pub fn measure_stats(target: &PointCloudMeasure, dict: &Dictionary) -> Result<SnapshotStats> {
    Ok(SnapshotStats {
        dict: dict.integrals(target)?,
        cloud: Some(target.clone()),
    })
}

/// Distance between two snapshots through the chosen channel.
pub fn snapshot_distance(
    channel: DistanceChannel,
    a: &SnapshotStats,
    b: &SnapshotStats,
) -> Result<f64> {
    match channel {
        DistanceChannel::Dict => Ok(discrepancy_between(&a.dict, &b.dict)),
        DistanceChannel::W1 => match (&a.cloud, &b.cloud) {
            (Some(ca), Some(cb)) => w1_interval(ca, cb),
            _ => Err(Error::invalid(
                "w1 channel needs occupation clouds; the horizon exceeded the cloud limit",
            )),
        },
    }
}

/// Per-initial-point verdict of a fraction probe.
#[derive(Debug, Clone, Serialize)]
pub struct PointVerdict {
    pub index: usize,
    pub x0: Point,
    /// Distance of the n-step occupation to the target.
    pub dist_full: f64,
    /// Distance of the n/2-step occupation to the target.
    pub dist_half: f64,
    /// Distance between the two occupations (the Cauchy guard).
    pub cauchy: f64,
    pub typical: bool,
}

/// Result of the typicality / weak-ergodicity fraction probes.
#[derive(Debug, Clone, Serialize)]
pub struct FractionProbe {
    pub fraction: f64,
    /// 95% Wilson interval for the fraction.
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub n: usize,
    pub tol: f64,
    pub channel: DistanceChannel,
    pub master_seed: u64,
    pub per_point: Vec<PointVerdict>,
}

fn fraction_probe(
    spec: &SystemSpec,
    target: &PointCloudMeasure,
    starts: Vec<Point>,
    n: usize,
    tol: f64,
    channel: Option<DistanceChannel>,
    master_seed: u64,
) -> Result<FractionProbe> {
    if target.phase() != spec.phase() {
        return Err(Error::PhaseMismatch(
            "target measure is not on the system's phase space".into(),
        ));
    }
    let channel = channel.unwrap_or_else(|| DistanceChannel::default_for(spec.phase()));
    let dict = Dictionary::default_for(spec.phase());
    let target_stats = measure_stats(target, &dict)?;

    let per_point: Vec<PointVerdict> = starts
        .into_par_iter()
        .enumerate()
        .map(|(index, x0)| -> Result<PointVerdict> {
            let stats = orbit_stats(spec, x0, n, &dict)?;
            let dist_full = snapshot_distance(channel, &stats.full, &target_stats)?;
            let dist_half = snapshot_distance(channel, &stats.half, &target_stats)?;
            let cauchy = snapshot_distance(channel, &stats.full, &stats.half)?;
            let typical = dist_full <= tol && dist_half <= tol && cauchy <= tol;
            Ok(PointVerdict {
                index,
                x0,
                dist_full,
                dist_half,
                cauchy,
                typical,
            })
        })
        .collect::<Result<_>>()?;

    let successes = per_point.iter().filter(|v| v.typical).count();
    let trials = per_point.len();
    let (wilson_low, wilson_high) = wilson_interval(successes, trials);
    Ok(FractionProbe {
        fraction: successes as f64 / trials as f64,
        wilson_low,
        wilson_high,
        n,
        tol,
        channel,
        master_seed,
        per_point,
    })
}

/// Estimate the reference mass of the target's typical set: sample
/// `count` initial points from `reference`, and count a point as typical
/// when its occupation measures at n and n/2 are both within `tol` of the
/// target and within `tol` of each other.
#[allow(clippy::too_many_arguments)]
pub fn typical_set_fraction(
    spec: &SystemSpec,
    target: &PointCloudMeasure,
    reference: &ReferenceMeasure,
    count: usize,
    n: usize,
    tol: f64,
    channel: Option<DistanceChannel>,
    master_seed: u64,
) -> Result<FractionProbe> {
    if reference.phase() != spec.phase() {
        return Err(Error::PhaseMismatch(
            "reference measure is not on the system's phase space".into(),
        ));
    }
    let starts = reference.sample(count, master_seed, "typical-x0")?;
    fraction_probe(spec, target, starts, n, tol, channel, master_seed)
}

/// Estimate μ(Z_μ): sample initial points from μ itself (atoms resampled
/// by weight) and return the fraction whose occupations converge to μ.
#[allow(clippy::too_many_arguments)]
pub fn weak_ergodicity_fraction(
    spec: &SystemSpec,
    mu: &PointCloudMeasure,
    samples: usize,
    n: usize,
    tol: f64,
    channel: Option<DistanceChannel>,
    master_seed: u64,
) -> Result<FractionProbe> {
    let reference = ReferenceMeasure::Custom(mu.clone());
    let starts = reference.sample(samples, master_seed, "weak-erg-x0")?;
    fraction_probe(spec, mu, starts, n, tol, channel, master_seed)
}

/// Per-seed outcome of a naturality check.
#[derive(Debug, Clone, Serialize)]
pub struct SeedVerdict {
    pub label: String,
    /// Distance of the n-step Cesaro average to the candidate.
    pub discrepancy: f64,
    /// Distance between the Cesaro averages at n/2 and n.
    pub cauchy: f64,
}

/// Result of a naturality check.
#[derive(Debug, Clone, Serialize)]
pub struct NaturalityOutcome {
    pub pass: bool,
    pub worst: f64,
    pub tol: f64,
    pub n: usize,
    pub channel: DistanceChannel,
    pub per_seed: Vec<SeedVerdict>,
    /// Final Cesaro histograms, one per seed, in seed order.
    #[serde(skip)]
    pub grids: Vec<GridMeasure>,
}

/// Check whether the Cesaro pushforward averages of every seed measure
/// land within `tol` of the candidate. Passing from smooth seeds is the
/// operational evidence that the candidate is the natural measure.
pub fn naturality_check(
    spec: &SystemSpec,
    candidate: &PointCloudMeasure,
    seeds: &[(String, PointCloudMeasure)],
    n: usize,
    resolution: Resolution,
    tol: f64,
    channel: Option<DistanceChannel>,
) -> Result<NaturalityOutcome> {
    if seeds.is_empty() {
        return Err(Error::invalid("naturality_check needs at least one seed"));
    }
    if n < 2 {
        return Err(Error::invalid("naturality_check needs n >= 2"));
    }
    let channel = channel.unwrap_or_else(|| DistanceChannel::default_for(spec.phase()));
    let dict = Dictionary::default_for(spec.phase());
    let candidate_stats = measure_stats(candidate, &dict)?;
    // Exact Cesaro dictionary integrals are only paid for when they score.
    let tracked = match channel {
        DistanceChannel::Dict => Some(dict.clone()),
        DistanceChannel::W1 => None,
    };

    let per: Vec<(SeedVerdict, GridMeasure)> = seeds
        .par_iter()
        .map(|(label, seed)| -> Result<(SeedVerdict, GridMeasure)> {
            let mut acc =
                CesaroAccumulator::new(*spec, seed.clone(), tracked.clone(), resolution)?;
            let half = (n / 2).max(1);
            acc.run(half)?;
            let half_stats = SnapshotStats {
                dict: acc.dict_averages(),
                cloud: Some(acc.cesaro_grid()?.to_cloud()?),
            };
            acc.run(n - half)?;
            let grid = acc.cesaro_grid()?;
            let full_stats = SnapshotStats {
                dict: acc.dict_averages(),
                cloud: Some(grid.to_cloud()?),
            };
            let discrepancy = snapshot_distance(channel, &full_stats, &candidate_stats)?;
            let cauchy = snapshot_distance(channel, &full_stats, &half_stats)?;
            Ok((
                SeedVerdict {
                    label: label.clone(),
                    discrepancy,
                    cauchy,
                },
                grid,
            ))
        })
        .collect::<Result<_>>()?;

    let (per_seed, grids): (Vec<_>, Vec<_>) = per.into_iter().unzip();
    let worst = per_seed
        .iter()
        .map(|v| v.discrepancy)
        .fold(0.0_f64, f64::max);
    Ok(NaturalityOutcome {
        pass: worst <= tol,
        worst,
        tol,
        n,
        channel,
        per_seed,
        grids,
    })
}

/// The default seed family for naturality checks: the reference measure,
/// three smooth low-harmonic perturbations of it, and (when supplied) the
/// conditional measure on the candidate's support. Perturbation densities
/// use angular/space harmonics 1 and 2 only: the smoothest tilts, and free
/// of resonance with the small rotation denominators probed here.
pub fn default_seed_measures(
    phase: Phase,
    conditional: Option<PointCloudMeasure>,
    atoms: usize,
    master_seed: u64,
) -> Result<Vec<(String, PointCloudMeasure)>> {
    let mut seeds = vec![(
        "reference".to_string(),
        uniform_cloud(phase, atoms, crate::rng::derive_seed(master_seed, "nat-seed-ref", 0))?,
    )];
    for i in 0..3u64 {
        let mut rng = task_rng(master_seed, "nat-seed-perturbed", i);
        let k = 1 + (rng.gen::<u64>() % 2) as u8;
        let amp = 0.2 + 0.3 * rng.gen::<f64>();
        let shift = TWO_PI * rng.gen::<f64>();
        let cloud = perturbed_cloud(phase, atoms, k, amp, shift, &mut rng)?;
        seeds.push((format!("perturbed-{}(k={k})", i + 1), cloud));
    }
    if let Some(cond) = conditional {
        seeds.push(("conditional".to_string(), cond));
    }
    Ok(seeds)
}

/// Rejection-sample a cloud with density ∝ reference × (1 + a cos(k·θ + ψ)),
/// where θ is x on the interval (period 1) and the angle on the disc.
fn perturbed_cloud(
    phase: Phase,
    atoms: usize,
    k: u8,
    amp: f64,
    shift: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<PointCloudMeasure> {
    let mut points = Vec::with_capacity(atoms);
    while points.len() < atoms {
        let (p, theta) = match phase {
            Phase::Interval01 => {
                let x: f64 = rng.gen();
                (Point::X(x), TWO_PI * x)
            }
            Phase::Disc => {
                let phi = wrap_angle(TWO_PI * rng.gen::<f64>());
                let radius = rng.gen::<f64>().sqrt();
                (Point::Polar { phi, radius }, phi)
            }
        };
        let density = 1.0 + amp * (k as f64 * theta + shift).cos();
        if rng.gen::<f64>() * (1.0 + amp) <= density {
            points.push(p);
        }
    }
    PointCloudMeasure::equal_weights(phase, points)
}

/// Distance between μ and its one-step pushforward T_*μ; zero for an
/// invariant measure.
pub fn invariance_residual(
    spec: &SystemSpec,
    mu: &PointCloudMeasure,
    channel: Option<DistanceChannel>,
) -> Result<f64> {
    let channel = channel.unwrap_or_else(|| DistanceChannel::default_for(spec.phase()));
    let pushed = push_cloud(spec, mu)?;
    match channel {
        DistanceChannel::W1 => w1_interval(mu, &pushed),
        DistanceChannel::Dict => {
            let dict = Dictionary::default_for(spec.phase());
            dict_discrepancy(mu, &pushed, &dict)
        }
    }
}

/// Overlap table of one wandering check resolution.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapTable {
    pub resolution: Resolution,
    /// (k_max+1)×(k_max+1), symmetric, unit diagonal.
    pub overlaps: Vec<Vec<f64>>,
}

/// Result of a wandering check.
#[derive(Debug, Clone, Serialize)]
pub struct WanderingOutcome {
    pub wandering: bool,
    /// Largest off-diagonal overlap at the finest resolution.
    pub max_offdiag_finest: f64,
    /// Whether every pairwise overlap is non-increasing along the
    /// resolution ladder.
    pub monotone: bool,
    pub threshold: f64,
    pub tables: Vec<OverlapTable>,
}

/// Probe mutual singularity of the pushforward sequence: bin T_*^j μ for
/// 0 ≤ j ≤ k_max at every resolution and tabulate pairwise overlaps.
/// Flags wandering when the largest off-diagonal overlap at the finest
/// resolution is below `threshold` and no pairwise overlap increases
/// under refinement. Mutual singularity is undecidable at finite
/// resolution; the full table is always reported alongside the flag.
pub fn wandering_check(
    spec: &SystemSpec,
    mu: &PointCloudMeasure,
    k_max: usize,
    resolutions: &[Resolution],
    threshold: f64,
) -> Result<WanderingOutcome> {
    if resolutions.is_empty() {
        return Err(Error::invalid("wandering_check needs at least one resolution"));
    }
    if k_max == 0 {
        return Err(Error::invalid("wandering_check needs k_max >= 1"));
    }
    let mut clouds = Vec::with_capacity(k_max + 1);
    clouds.push(mu.clone());
    for _ in 0..k_max {
        let next = push_cloud(spec, clouds.last().expect("nonempty"))?;
        clouds.push(next);
    }

    let mut tables = Vec::with_capacity(resolutions.len());
    for &res in resolutions {
        let grids: Vec<GridMeasure> = clouds
            .iter()
            .map(|c| c.bin(res))
            .collect::<Result<_>>()?;
        let m = k_max + 1;
        let mut overlaps = vec![vec![0.0; m]; m];
        for j in 0..m {
            for k in j..m {
                let o = grids[j].overlap(&grids[k])?;
                overlaps[j][k] = o;
                overlaps[k][j] = o;
            }
        }
        tables.push(OverlapTable {
            resolution: res,
            overlaps,
        });
    }

    let finest = tables.last().expect("nonempty tables");
    let mut max_offdiag_finest = 0.0_f64;
    for j in 0..=k_max {
        for k in (j + 1)..=k_max {
            max_offdiag_finest = max_offdiag_finest.max(finest.overlaps[j][k]);
        }
    }
    let mut monotone = true;
    for w in tables.windows(2) {
        for j in 0..=k_max {
            for k in (j + 1)..=k_max {
                if w[1].overlaps[j][k] > w[0].overlaps[j][k] + 1e-12 {
                    monotone = false;
                }
            }
        }
    }
    Ok(WanderingOutcome {
        wandering: max_offdiag_finest < threshold && monotone,
        max_offdiag_finest,
        monotone,
        threshold,
        tables,
    })
}

/// One candidate's score in a trace-match search.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCandidate {
    pub point: Point,
    pub distance: f64,
}

/// Result of a trace-match search.
#[derive(Debug, Clone, Serialize)]
pub struct TraceMatchOutcome {
    /// The best candidate, if its occupation statistics come within tol.
    pub matched: Option<TraceCandidate>,
    pub per_candidate: Vec<TraceCandidate>,
    pub tol: f64,
    pub n: usize,
}

/// Search the support samples for a point whose occupation statistics
/// coincide with those of `x` (a weak tracing point). A `None` verdict is
/// evidence, not proof: the finite candidate list can miss tracing points.
pub fn trace_match(
    spec: &SystemSpec,
    x: Point,
    support_samples: &[Point],
    n: usize,
    tol: f64,
    channel: Option<DistanceChannel>,
) -> Result<TraceMatchOutcome> {
    if support_samples.is_empty() {
        return Err(Error::invalid("trace_match needs candidate support samples"));
    }
    let channel = channel.unwrap_or_else(|| DistanceChannel::default_for(spec.phase()));
    let dict = Dictionary::default_for(spec.phase());
    let x_stats = orbit_stats(spec, x, n, &dict)?;

    let per_candidate: Vec<TraceCandidate> = support_samples
        .par_iter()
        .map(|&y| -> Result<TraceCandidate> {
            let y_stats = orbit_stats(spec, y, n, &dict)?;
            let distance = snapshot_distance(channel, &x_stats.full, &y_stats.full)?;
            Ok(TraceCandidate { point: y, distance })
        })
        .collect::<Result<_>>()?;

    let mut matched: Option<TraceCandidate> = None;
    for c in &per_candidate {
        if c.distance <= tol && matched.as_ref().is_none_or(|b| c.distance < b.distance) {
            matched = Some(c.clone());
        }
    }
    Ok(TraceMatchOutcome {
        matched,
        per_candidate,
        tol,
        n,
    })
}

/// 95% Wilson score interval for a binomial fraction.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let margin = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - margin) / denom).max(0.0),
        ((center + margin) / denom).min(1.0),
    )
}
