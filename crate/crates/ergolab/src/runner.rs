//! Experiment dispatch: resolve a config, run the pipeline or probe it
//! names, and write the report plus CSV artifacts into the output
//! directory.

use std::fs;
use std::path::{Path, PathBuf};

use crate::averaging::{evolve_ensemble, CesaroAccumulator};
use crate::config::{ExperimentConfig, ExperimentKind, MeasureConfig, MeasuresConfig};
use crate::diagnostics::{
    self, default_seed_measures, DistanceChannel, FractionProbe, ReferenceMeasure,
};
use crate::error::{Error, Result};
use crate::measure::{GridMeasure, PointCloudMeasure, Resolution};
use crate::phase::{Phase, Point};
use crate::report::{fmt_f64, DiagnosticsReport};
use crate::rng::derive_seed;
use crate::ulam::{build_ulam, ulam_cesaro_fixed_density};
use crate::zoo::SystemSpec;

/// Everything a finished run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: DiagnosticsReport,
    pub artifacts: Vec<PathBuf>,
    /// Expectation violations (empty when every declared expectation held).
    pub check_failures: Vec<String>,
}

/// Run one experiment and write its artifacts. The run itself succeeds or
/// fails on config/runtime errors only; declared expectations are
/// evaluated afterwards and reported in `check_failures`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    let spec = config.system.resolve()?;
    let out_dir = config.resolved_output_dir();
    fs::create_dir_all(&out_dir)?;

    let mut artifacts = Vec::new();
    let report = dispatch(config, &spec, &out_dir, &mut artifacts)?;

    write_artifact(&out_dir, "report.txt", report.to_text(), &mut artifacts)?;
    write_artifact(&out_dir, "report.json", report.to_json(), &mut artifacts)?;
    write_artifact(
        &out_dir,
        "config.resolved.json",
        config.to_json(),
        &mut artifacts,
    )?;

    let check_failures = evaluate_expectations(config, &report);
    Ok(RunOutcome {
        report,
        artifacts,
        check_failures,
    })
}

fn write_artifact(
    dir: &Path,
    name: &str,
    contents: String,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    artifacts.push(path);
    Ok(())
}

fn evaluate_expectations(config: &ExperimentConfig, report: &DiagnosticsReport) -> Vec<String> {
    let mut failures = Vec::new();
    for e in &config.expect {
        let Some(value) = report.get_verdict(&e.verdict) else {
            failures.push(format!("expectation on unknown verdict {:?}", e.verdict));
            continue;
        };
        if let Some(expected) = &e.equals {
            if value != expected {
                failures.push(format!(
                    "verdict {} = {value}, expected exactly {expected}",
                    e.verdict
                ));
            }
        }
        if e.min.is_some() || e.max.is_some() {
            match value.parse::<f64>() {
                Ok(v) => {
                    if let Some(min) = e.min {
                        if v < min {
                            failures.push(format!("verdict {} = {v} below min {min}", e.verdict));
                        }
                    }
                    if let Some(max) = e.max {
                        if v > max {
                            failures.push(format!("verdict {} = {v} above max {max}", e.verdict));
                        }
                    }
                }
                Err(_) => failures.push(format!(
                    "verdict {} = {value} is not numeric",
                    e.verdict
                )),
            }
        }
    }
    failures
}

fn dispatch(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    match config.kind {
        ExperimentKind::Orbit => run_orbit(config, spec, out_dir, artifacts),
        ExperimentKind::Cesaro => run_cesaro(config, spec, out_dir, artifacts),
        ExperimentKind::Ulam => run_ulam(config, spec, out_dir, artifacts),
        ExperimentKind::Ensemble => run_ensemble(config, spec, out_dir, artifacts),
        ExperimentKind::TypicalSetFraction => run_typical(config, spec),
        ExperimentKind::WeakErgodicityFraction => run_weak_ergodicity(config, spec),
        ExperimentKind::NaturalityCheck => run_naturality(config, spec, out_dir, artifacts),
        ExperimentKind::InvarianceResidual => run_invariance(config, spec),
        ExperimentKind::WanderingCheck => run_wandering(config, spec),
        ExperimentKind::TraceMatch => run_trace_match(config, spec),
    }
}

fn require_target<'a>(measures: &'a MeasuresConfig, kind: &str) -> Result<&'a MeasureConfig> {
    measures
        .target
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{kind} requires measures.target")))
}

fn single_point(m: &MeasureConfig, phase: Phase, seed: u64) -> Result<Point> {
    let cloud = m.resolve(phase, 1, seed)?;
    if cloud.atoms().len() != 1 {
        return Err(Error::Config(
            "an initial point must resolve to a single atom (use a dirac measure)".into(),
        ));
    }
    Ok(cloud.atoms()[0].point)
}

fn point_csv_header(phase: Phase) -> &'static str {
    match phase {
        Phase::Interval01 => "step,x",
        Phase::Disc => "step,phi,r",
    }
}

fn point_csv_row(step: usize, p: Point) -> String {
    match p {
        Point::X(x) => format!("{step},{x:.16e}"),
        Point::Polar { phi, radius } => format!("{step},{phi:.16e},{radius:.16e}"),
    }
}

fn require_steps(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config("knobs.n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn run_orbit(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    require_steps(knobs.n)?;
    let x0_cfg = config
        .measures
        .x0
        .as_ref()
        .ok_or_else(|| Error::Config("orbit requires measures.x0".into()))?;
    let x0 = single_point(x0_cfg, spec.phase(), derive_seed(config.seed, "x0", 0))?;
    let orbit = spec.orbit(x0, knobs.n)?;

    let mut csv = String::from(point_csv_header(spec.phase()));
    csv.push('\n');
    for (k, p) in orbit.iter().enumerate() {
        csv.push_str(&point_csv_row(k, *p));
        csv.push('\n');
    }
    write_artifact(out_dir, "orbit.csv", csv, artifacts)?;

    let report = DiagnosticsReport::new("orbit", spec, config.seed)
        .setting("n", knobs.n)
        .verdict("steps", knobs.n)
        .verdict("first", format!("{:?}", orbit.first().expect("n >= 1")))
        .verdict("last", format!("{:?}", orbit.last().expect("n >= 1")));
    Ok(report)
}

fn run_cesaro(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    require_steps(knobs.n)?;
    let resolution = knobs.grid_resolution(spec.phase());
    let initial = config
        .measures
        .initial
        .clone()
        .unwrap_or(MeasureConfig::Uniform { atoms: None });
    let mu0 = initial.resolve(spec.phase(), knobs.atoms, derive_seed(config.seed, "initial", 0))?;

    let mut acc = CesaroAccumulator::new(*spec, mu0, None, resolution)?;
    let half = (knobs.n / 2).max(1);
    let mut half_grid = None;
    let mut prev: Option<GridMeasure> = None;
    let mut cauchy_trace = String::from("step,value\n");
    for k in 0..knobs.n {
        acc.step()?;
        let cur = acc.cesaro_grid()?;
        if let Some(p) = &prev {
            cauchy_trace.push_str(&format!("{k},{:.16e}\n", cur.l1_distance(p)?));
        }
        if k + 1 == half {
            half_grid = Some(cur.clone());
        }
        prev = Some(cur);
    }
    let grid = prev.expect("n >= 1");
    let cauchy = grid.l1_distance(&half_grid.expect("half <= n"))?;

    write_artifact(out_dir, "cesaro_density.csv", grid.to_csv(), artifacts)?;
    write_artifact(out_dir, "cesaro_cauchy.csv", cauchy_trace, artifacts)?;
    let reference = GridMeasure::reference(resolution);
    let report = DiagnosticsReport::new("cesaro", spec, config.seed)
        .setting("n", knobs.n)
        .setting("atoms", knobs.atoms)
        .setting("resolution", format!("{resolution:?}"))
        .verdict_f64("cauchy_l1_half_vs_full", cauchy)
        .verdict_f64("l1_to_reference", grid.l1_distance(&reference)?)
        .verdict_f64(
            "max_cell_mass",
            grid.masses().iter().copied().fold(0.0, f64::max),
        );
    Ok(report)
}

fn run_ulam(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let resolution = knobs.grid_resolution(spec.phase());
    let matrix = build_ulam(
        spec,
        resolution,
        knobs.samples_per_cell,
        derive_seed(config.seed, "ulam", 0),
    )?;
    let out = ulam_cesaro_fixed_density(&matrix, knobs.n_max, knobs.ulam_tol)?;

    write_artifact(out_dir, "ulam_matrix.csv", matrix.to_csv(), artifacts)?;
    write_artifact(out_dir, "ulam_density.csv", out.density.to_csv(), artifacts)?;

    let reference = GridMeasure::reference(resolution);
    let report = DiagnosticsReport::new("ulam", spec, config.seed)
        .setting("resolution", format!("{resolution:?}"))
        .setting("samples_per_cell", knobs.samples_per_cell)
        .setting("n_max", knobs.n_max)
        .setting_f64("ulam_tol", knobs.ulam_tol)
        // Cell sampling cannot see measure-zero branch sets; this density
        // approximates the Cesaro limit of absolutely continuous measures.
        .setting("caveat", "rows are blind to measure-zero branch sets")
        .verdict("converged", out.converged)
        .verdict("iterations", out.iterations)
        .verdict_f64("last_delta", out.last_delta)
        .verdict_f64("l1_to_reference", out.density.l1_distance(&reference)?)
        .verdict_f64("cell0_mass", out.density.masses()[0]);
    Ok(report)
}

fn run_ensemble(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let initial = config
        .measures
        .initial
        .clone()
        .unwrap_or(MeasureConfig::Uniform { atoms: None });
    let cloud0 = initial.resolve(
        Phase::Interval01,
        knobs.atoms,
        derive_seed(config.seed, "initial", 0),
    )?;
    let resolution = Resolution::Interval(knobs.resolution);
    let run = evolve_ensemble(spec, &cloud0, knobs.n, resolution)?;

    let mut trace_csv = String::from("step,value\n");
    for (k, v) in run.mean_trace.iter().enumerate() {
        trace_csv.push_str(&format!("{k},{v:.16e}\n"));
    }
    write_artifact(out_dir, "mean_trace.csv", trace_csv, artifacts)?;
    write_artifact(
        out_dir,
        "ensemble_histogram.csv",
        run.time_avg_grid.to_csv(),
        artifacts,
    )?;

    let uniform = GridMeasure::reference(resolution);
    let (min_mean, max_mean) = run
        .mean_trace
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let report = DiagnosticsReport::new("ensemble", spec, config.seed)
        .setting("n", knobs.n)
        .setting("atoms", knobs.atoms)
        .setting("resolution", knobs.resolution)
        .verdict_f64("final_mean", run.final_cloud.mean().interval()?)
        .verdict_f64("min_mean", min_mean)
        .verdict_f64("max_mean", max_mean)
        .verdict_f64(
            "hist_l1_to_uniform",
            run.time_avg_grid.l1_distance(&uniform)?,
        );
    Ok(report)
}

fn fraction_report(
    probe_name: &str,
    spec: &SystemSpec,
    config: &ExperimentConfig,
    probe: &FractionProbe,
    extra_settings: &[(&str, String)],
) -> DiagnosticsReport {
    let mut report = DiagnosticsReport::new(probe_name, spec, config.seed)
        .setting("n", probe.n)
        .setting_f64("tol", probe.tol)
        .setting("channel", probe.channel.name())
        .setting("points", probe.per_point.len());
    for (k, v) in extra_settings {
        report = report.setting(k, v);
    }
    let rows = probe
        .per_point
        .iter()
        .map(|v| {
            vec![
                v.index.to_string(),
                format!("{:?}", v.x0),
                fmt_f64(v.dist_full),
                fmt_f64(v.dist_half),
                fmt_f64(v.cauchy),
                v.typical.to_string(),
            ]
        })
        .collect();
    report
        .verdict_f64("fraction", probe.fraction)
        .verdict_f64("wilson_low", probe.wilson_low)
        .verdict_f64("wilson_high", probe.wilson_high)
        .with_table(
            &["index", "x0", "dist_full", "dist_half", "cauchy", "typical"],
            rows,
        )
}

fn run_typical(config: &ExperimentConfig, spec: &SystemSpec) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let target = require_target(&config.measures, "typical_set_fraction")?.resolve(
        spec.phase(),
        knobs.atoms,
        derive_seed(config.seed, "target", 0),
    )?;
    let reference = match &config.measures.reference {
        Some(m) => m.resolve_reference(
            spec.phase(),
            knobs.atoms,
            derive_seed(config.seed, "reference", 0),
        )?,
        None => match spec.phase() {
            Phase::Interval01 => ReferenceMeasure::LebesgueInterval,
            Phase::Disc => ReferenceMeasure::AreaDisc,
        },
    };
    let probe = diagnostics::typical_set_fraction(
        spec,
        &target,
        &reference,
        knobs.points,
        knobs.n,
        knobs.tol,
        knobs.channel()?,
        config.seed,
    )?;
    Ok(fraction_report(
        "typical_set_fraction",
        spec,
        config,
        &probe,
        &[("reference", reference.label())],
    ))
}

fn run_weak_ergodicity(config: &ExperimentConfig, spec: &SystemSpec) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let mu = require_target(&config.measures, "weak_ergodicity_fraction")?.resolve(
        spec.phase(),
        knobs.atoms,
        derive_seed(config.seed, "target", 0),
    )?;
    let probe = diagnostics::weak_ergodicity_fraction(
        spec,
        &mu,
        knobs.points,
        knobs.n,
        knobs.tol,
        knobs.channel()?,
        config.seed,
    )?;
    Ok(fraction_report(
        "weak_ergodicity_fraction",
        spec,
        config,
        &probe,
        &[],
    ))
}

/// The conditional reference measure on the support of a configured
/// candidate, when that support is analytic: a circle, a point, or a
/// finite atom set.
fn conditional_for(
    target: &MeasureConfig,
    phase: Phase,
    atoms: usize,
    seed: u64,
) -> Result<Option<PointCloudMeasure>> {
    Ok(match target {
        MeasureConfig::Circle { radius, .. } => {
            Some(crate::measure::conditional_on_circle(*radius, atoms)?)
        }
        MeasureConfig::DiracX { .. }
        | MeasureConfig::DiracDisc { .. }
        | MeasureConfig::TwoPoint { .. } => Some(target.resolve(phase, atoms, seed)?),
        _ => None,
    })
}

fn run_naturality(
    config: &ExperimentConfig,
    spec: &SystemSpec,
    out_dir: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let target_cfg = require_target(&config.measures, "naturality_check")?;
    let candidate = target_cfg.resolve(
        spec.phase(),
        knobs.atoms,
        derive_seed(config.seed, "target", 0),
    )?;

    let seeds: Vec<(String, PointCloudMeasure)> = match &config.measures.seeds {
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, m)| -> Result<(String, PointCloudMeasure)> {
                Ok((
                    format!("seed-{i}"),
                    m.resolve(spec.phase(), knobs.atoms, derive_seed(config.seed, "seed", i as u64))?,
                ))
            })
            .collect::<Result<_>>()?,
        None => {
            let conditional = conditional_for(
                target_cfg,
                spec.phase(),
                knobs.atoms,
                derive_seed(config.seed, "conditional", 0),
            )?;
            default_seed_measures(spec.phase(), conditional, knobs.atoms, config.seed)?
        }
    };

    let resolution = knobs.grid_resolution(spec.phase());
    let out = diagnostics::naturality_check(
        spec,
        &candidate,
        &seeds,
        knobs.n,
        resolution,
        knobs.tol,
        knobs.channel()?,
    )?;

    for (i, grid) in out.grids.iter().enumerate() {
        write_artifact(
            out_dir,
            &format!("cesaro_seed{i}.csv"),
            grid.to_csv(),
            artifacts,
        )?;
    }

    let rows = out
        .per_seed
        .iter()
        .map(|v| {
            vec![
                v.label.clone(),
                fmt_f64(v.discrepancy),
                fmt_f64(v.cauchy),
            ]
        })
        .collect();
    let reading = if out.pass {
        "consistent with the candidate being the natural measure over these seeds"
    } else {
        "inconsistent with the candidate being the natural measure"
    };
    Ok(DiagnosticsReport::new("naturality_check", spec, config.seed)
        .setting("n", out.n)
        .setting_f64("tol", out.tol)
        .setting("channel", out.channel.name())
        .setting("seeds", out.per_seed.len())
        .setting("resolution", format!("{resolution:?}"))
        .verdict("pass", out.pass)
        .verdict_f64("worst_discrepancy", out.worst)
        .verdict("reading", reading)
        .with_table(&["seed", "discrepancy", "cauchy"], rows))
}

fn run_invariance(config: &ExperimentConfig, spec: &SystemSpec) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let mu = require_target(&config.measures, "invariance_residual")?.resolve(
        spec.phase(),
        knobs.atoms,
        derive_seed(config.seed, "target", 0),
    )?;
    let channel = knobs
        .channel()?
        .unwrap_or_else(|| DistanceChannel::default_for(spec.phase()));
    let residual = diagnostics::invariance_residual(spec, &mu, Some(channel))?;
    Ok(DiagnosticsReport::new("invariance_residual", spec, config.seed)
        .setting("channel", channel.name())
        .setting("atoms", mu.atoms().len())
        .verdict_f64("residual", residual))
}

fn run_wandering(config: &ExperimentConfig, spec: &SystemSpec) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let mu = require_target(&config.measures, "wandering_check")?.resolve(
        spec.phase(),
        knobs.atoms,
        derive_seed(config.seed, "target", 0),
    )?;
    let resolutions: Vec<Resolution> = match spec.phase() {
        Phase::Interval01 => knobs
            .resolutions_r
            .iter()
            .map(|&n| Resolution::Interval(n))
            .collect(),
        Phase::Disc => knobs
            .resolutions_r
            .iter()
            .map(|&n_r| Resolution::Disc {
                n_phi: knobs.resolution_phi,
                n_r,
            })
            .collect(),
    };
    let out = diagnostics::wandering_check(spec, &mu, knobs.k_max, &resolutions, knobs.threshold)?;

    let mut rows = Vec::new();
    for table in &out.tables {
        for j in 0..table.overlaps.len() {
            for k in j..table.overlaps.len() {
                rows.push(vec![
                    format!("{:?}", table.resolution),
                    j.to_string(),
                    k.to_string(),
                    fmt_f64(table.overlaps[j][k]),
                ]);
            }
        }
    }
    let reading = if out.wandering {
        "consistent with mutually singular pushforwards (wandering measure)"
    } else {
        "inconsistent with wandering: pushforwards overlap at this depth"
    };
    Ok(DiagnosticsReport::new("wandering_check", spec, config.seed)
        .setting("k_max", knobs.k_max)
        .setting_f64("threshold", knobs.threshold)
        .setting("resolutions", format!("{:?}", knobs.resolutions_r))
        .verdict("wandering", out.wandering)
        .verdict_f64("max_offdiag_finest", out.max_offdiag_finest)
        .verdict("monotone_under_refinement", out.monotone)
        .verdict("reading", reading)
        .with_table(&["resolution", "j", "k", "overlap"], rows))
}

fn run_trace_match(config: &ExperimentConfig, spec: &SystemSpec) -> Result<DiagnosticsReport> {
    let knobs = &config.knobs;
    let x0_cfg = config
        .measures
        .x0
        .as_ref()
        .ok_or_else(|| Error::Config("trace_match requires measures.x0".into()))?;
    let x = single_point(x0_cfg, spec.phase(), derive_seed(config.seed, "x0", 0))?;
    let support = require_target(&config.measures, "trace_match")?.resolve(
        spec.phase(),
        knobs.points,
        derive_seed(config.seed, "support", 0),
    )?;
    let candidates: Vec<Point> = support
        .atoms()
        .iter()
        .take(knobs.points)
        .map(|a| a.point)
        .collect();
    let out = diagnostics::trace_match(spec, x, &candidates, knobs.n, knobs.tol, knobs.channel()?)?;

    let rows = out
        .per_candidate
        .iter()
        .map(|c| vec![format!("{:?}", c.point), fmt_f64(c.distance)])
        .collect();
    let mut report = DiagnosticsReport::new("trace_match", spec, config.seed)
        .setting("n", knobs.n)
        .setting_f64("tol", knobs.tol)
        .setting("candidates", out.per_candidate.len())
        .verdict("matched", out.matched.is_some());
    if let Some(m) = &out.matched {
        report = report
            .verdict("match_point", format!("{:?}", m.point))
            .verdict_f64("match_distance", m.distance);
    }
    Ok(report.with_table(&["candidate", "distance"], rows))
}
