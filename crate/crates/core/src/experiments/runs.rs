//! The experiment drivers behind the CLI subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Kind};
use super::fit::{fit_soliton, SolitonFit};
use super::plot::{emit_plot, PlotSpec};
use super::table::{write_table, Cell};
use crate::delta_linear::{extension_tail, hv_split_residual};
use crate::grid_field::{fmt_sig, half_line_mass, l2_norm_sq, Grid, Side, WaveField};
use crate::nls_evolution::{evolve, evolve_monitored, make_soliton, ConservedSample, EvolutionConfig, SolitonParams};
use crate::soliton_theory::{outgoing_prediction, transmission_theory, wrap_phase, OutgoingPrediction, Phase};
use crate::{Error, Result};

/// Window exponent used to classify sweep records when the configuration
/// gives none.
pub const DEFAULT_DELTA: f64 = 0.9;

/// Distance packets must keep from the domain edge at measurement time.
pub const BOUNDARY_MARGIN: f64 = 20.0;

/// Packet widths between the origin and each packet center at the fallback
/// measurement time.
pub const SEPARATION_WIDTHS: f64 = 8.0;

fn kind_check(cfg: &ExperimentConfig, kind: Kind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::Config(format!("expected kind `{}`, got `{}`", kind.name(), cfg.kind.name())));
    }
    Ok(())
}

fn unit_soliton(grid: &std::sync::Arc<Grid>, v: f64, x0: f64) -> Result<WaveField> {
    make_soliton(&SolitonParams::new(1.0, v, x0, 0.0), grid)
}

/// Frames and conserved series of a snapshot run.
#[derive(Debug, Clone)]
pub struct SnapshotOutput {
    pub frames: Vec<(f64, WaveField)>,
    pub series: Vec<ConservedSample>,
    /// `(t, left, right)` half-line masses per frame.
    pub half_masses: Vec<(f64, f64, f64)>,
    /// For `q = 0`: the largest `| |u| − |u_exact| |` over all frames.
    pub exact_error: Option<f64>,
    pub warnings: Vec<String>,
}

/// Evolves a unit soliton from `x0` with velocity `v` through the frame
/// times. Stability failures are reported with the frame being computed.
pub fn run_snapshot(cfg: &ExperimentConfig) -> Result<SnapshotOutput> {
    kind_check(cfg, Kind::Snapshot)?;
    let v = cfg.v[0];
    let q = cfg.coupling(v);
    let grid = cfg.grid.build()?;
    let u0 = unit_soliton(&grid, v, cfg.x0)?;
    let t_end = *cfg.times.last().expect("validated");
    let ecfg = EvolutionConfig::new(cfg.time_step(v), t_end, q, cfg.times.clone())?;
    let mut warnings: Vec<String> = ecfg.guideline_warning(v, 1.0).into_iter().collect();
    let tail = extension_tail(q, &grid);
    if tail > 1e-8 {
        warnings.push(format!("q·x_max = {:.3} is small: delta step errors of order {tail:.1e}", q * grid.x_max()));
    }
    let evo = evolve_monitored(&u0, &ecfg, cfg.monitor_every).map_err(|e| match e {
        Error::Stability { time, .. } => {
            let frame = cfg.times.iter().position(|&t| t >= time - 1e-12).unwrap_or(cfg.times.len() - 1);
            Error::InFrame { frame, time: cfg.times[frame], source: Box::new(e) }
        }
        e => e,
    })?;
    let mut half_masses = Vec::new();
    for (t, f) in &evo.snapshots {
        half_masses.push((*t, half_line_mass(f, Side::Left)?, half_line_mass(f, Side::Right)?));
    }
    let exact_error = (q == 0.0).then(|| {
        let p = SolitonParams::new(1.0, v, cfg.x0, 0.0);
        evo.snapshots
            .iter()
            .flat_map(|(t, f)| {
                let g = f.grid().clone();
                f.values().iter().enumerate().map(move |(j, u)| (u.norm() - p.exact(g.x(j), *t).norm()).abs())
            })
            .fold(0.0, f64::max)
    });
    let edge = boundary_fraction(&evo.snapshots.last().expect("non-empty").1);
    if edge > 1e-8 {
        warnings.push(format!("mass within {BOUNDARY_MARGIN} of the boundary: {edge:.2e} of total"));
    }
    Ok(SnapshotOutput { frames: evo.snapshots, series: evo.series, half_masses, exact_error, warnings })
}

/// Fraction of mass closer than [`BOUNDARY_MARGIN`] to either domain end.
pub fn boundary_fraction(field: &WaveField) -> f64 {
    let g = field.grid();
    let total = l2_norm_sq(field);
    if total == 0.0 {
        return 0.0;
    }
    let edge: f64 = field
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            let x = g.x(*j);
            x < g.x_min() + BOUNDARY_MARGIN || x > g.x_max() - BOUNDARY_MARGIN
        })
        .map(|(_, u)| u.norm_sqr())
        .sum();
    g.dx() * edge / total
}

/// Writes `frame_XX.csv` per frame, `conserved.csv` (`t,E0,E2`), the
/// manifest and, with `plot`, one SVG per frame. Returns written paths.
pub fn write_snapshot(out: &SnapshotOutput, cfg: &ExperimentConfig, dir: &Path, plot: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = vec![write_manifest(cfg, dir)?];
    for (i, (t, f)) in out.frames.iter().enumerate() {
        let p = dir.join(format!("frame_{i:02}.csv"));
        f.write_csv(fs::File::create(&p)?)?;
        paths.push(p.clone());
        if plot {
            let mut spec = PlotSpec::new("x", &["abs"]);
            spec.title = format!("|u| at t = {}", fmt_sig(*t));
            spec.markers = false;
            let svg = p.with_extension("svg");
            emit_plot(&p, &spec, &svg)?;
            paths.push(svg);
        }
    }
    let rows: Vec<Vec<Cell>> = out.series.iter().map(|s| vec![s.t.into(), s.mass.into(), s.energy.into()]).collect();
    let p = dir.join("conserved.csv");
    write_table(fs::File::create(&p)?, &["t", "E0", "E2"], &rows)?;
    paths.push(p);
    let rows: Vec<Vec<Cell>> =
        out.half_masses.iter().map(|&(t, l, r)| vec![t.into(), l.into(), r.into()]).collect();
    let p = dir.join("half_masses.csv");
    write_table(fs::File::create(&p)?, &["t", "left", "right"], &rows)?;
    paths.push(p);
    Ok(paths)
}

/// Writes `manifest.txt` into `dir`.
pub fn write_manifest(cfg: &ExperimentConfig, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let p = dir.join("manifest.txt");
    fs::write(&p, cfg.manifest())?;
    Ok(p)
}

/// One transmission measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord {
    pub alpha: f64,
    pub v: f64,
    pub q: f64,
    pub t_measure: f64,
    /// Measured inside the window `[|x0|/v + v^{−δ}, (1−δ)log v]`.
    pub window: bool,
    pub t_sim: f64,
    pub left_fraction: f64,
    pub t_theory: f64,
    pub residual: f64,
    pub error: Option<String>,
}

/// Measurement time for velocity `v`: the latest window time that keeps
/// packets [`BOUNDARY_MARGIN`] from the edge, or when the window is empty
/// the time at which the packet centers are [`SEPARATION_WIDTHS`] from the
/// origin. The flag says which.
pub fn measurement_time(v: f64, x0: f64, delta: f64, grid: &Grid) -> (f64, bool) {
    let t_bound = (grid.x_max() - BOUNDARY_MARGIN + x0).min(-x0 - (grid.x_min() + BOUNDARY_MARGIN)) / v;
    let start = x0.abs() / v + v.powf(-delta);
    let end = ((1.0 - delta) * v.ln()).min(t_bound);
    if end >= start {
        (end, true)
    } else {
        ((x0.abs() + SEPARATION_WIDTHS) / v, false)
    }
}

fn transmission_job(cfg: &ExperimentConfig, grid: &std::sync::Arc<Grid>, alpha: f64, v: f64) -> TransmissionRecord {
    let q = alpha * v;
    let delta = cfg.delta.unwrap_or(DEFAULT_DELTA);
    let (t_measure, window) = measurement_time(v, cfg.x0, delta, grid);
    let t_theory = transmission_theory(q, v).unwrap_or(f64::NAN);
    let mut rec = TransmissionRecord {
        alpha,
        v,
        q,
        t_measure,
        window,
        t_sim: f64::NAN,
        left_fraction: f64::NAN,
        t_theory,
        residual: f64::NAN,
        error: None,
    };
    let run = || -> Result<(f64, f64)> {
        let u0 = unit_soliton(grid, v, cfg.x0)?;
        let ecfg = EvolutionConfig::new(cfg.time_step(v), t_measure, q, vec![t_measure])?;
        let frames = evolve(&u0, &ecfg)?;
        let f = &frames[0].1;
        let total = l2_norm_sq(f);
        Ok((half_line_mass(f, Side::Right)? / total, half_line_mass(f, Side::Left)? / total))
    };
    match run() {
        Ok((r, l)) => {
            rec.t_sim = r;
            rec.left_fraction = l;
            rec.residual = (r - t_theory).abs();
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

fn run_records(cfg: &ExperimentConfig, pairs: Vec<(f64, f64)>) -> Result<Vec<TransmissionRecord>> {
    let grid = cfg.grid.build()?;
    let mut recs: Vec<TransmissionRecord> =
        pool(cfg.jobs)?.install(|| pairs.par_iter().map(|&(a, v)| transmission_job(cfg, &grid, a, v)).collect());
    recs.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.v.total_cmp(&b.v)));
    Ok(recs)
}

/// `T_sim` for every `(α, v)` pair with `q = α·v`, one independent job
/// each on a pool of `cfg.jobs` workers (0 = all cores). Failed jobs keep
/// their record with `error` set.
pub fn run_transmission_sweep(cfg: &ExperimentConfig) -> Result<Vec<TransmissionRecord>> {
    kind_check(cfg, Kind::Sweep)?;
    let pairs = cfg.alpha.iter().flat_map(|&a| cfg.v.iter().map(move |&v| (a, v))).collect();
    run_records(cfg, pairs)
}

const SWEEP_HEADER: [&str; 10] =
    ["alpha", "v", "q", "t_measure", "window", "T_sim", "left_fraction", "T_theory", "residual", "error"];

fn record_row(r: &TransmissionRecord) -> Vec<Cell> {
    vec![
        r.alpha.into(),
        r.v.into(),
        r.q.into(),
        r.t_measure.into(),
        r.window.into(),
        r.t_sim.into(),
        r.left_fraction.into(),
        r.t_theory.into(),
        r.residual.into(),
        r.error.clone().unwrap_or_default().into(),
    ]
}

/// Writes `sweep.csv`, the manifest and optionally `sweep.svg`.
pub fn write_sweep(recs: &[TransmissionRecord], cfg: &ExperimentConfig, dir: &Path, plot: bool) -> Result<Vec<PathBuf>> {
    let mut paths = vec![write_manifest(cfg, dir)?];
    let p = dir.join("sweep.csv");
    write_table(fs::File::create(&p)?, &SWEEP_HEADER, &recs.iter().map(record_row).collect::<Vec<_>>())?;
    paths.push(p.clone());
    if plot {
        let mut spec = PlotSpec::new("v", &["T_sim"]);
        spec.group_by = Some("alpha".into());
        spec.title = "transmitted mass fraction".into();
        let mut alphas: Vec<f64> = recs.iter().map(|r| r.alpha).collect();
        alphas.dedup();
        spec.reference_lines = alphas.iter().map(|a| (1.0 / (1.0 + a * a), format!("1/(1+{}²)", fmt_sig(*a)))).collect();
        let svg = p.with_extension("svg");
        emit_plot(&p, &spec, &svg)?;
        paths.push(svg);
    }
    Ok(paths)
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than
/// three usable (positive, finite) points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Residuals of a scaling study and their log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStudy {
    pub records: Vec<TransmissionRecord>,
    pub slope: Option<f64>,
}

/// Transmission residuals `|T_sim − T_theory|` at fixed `α` (or fixed `q`)
/// over the velocity list.
pub fn run_scaling_study(cfg: &ExperimentConfig) -> Result<ScalingStudy> {
    kind_check(cfg, Kind::Scaling)?;
    let records = match cfg.q {
        Some(q) => {
            let grid = cfg.grid.build()?;
            let mut recs: Vec<TransmissionRecord> = pool(cfg.jobs)?.install(|| {
                cfg.v
                    .par_iter()
                    .map(|&v| {
                        let mut r = transmission_job(cfg, &grid, q / v, v);
                        r.q = q;
                        r
                    })
                    .collect()
            });
            recs.sort_by(|a, b| a.v.total_cmp(&b.v));
            recs
        }
        None => run_records(cfg, cfg.v.iter().map(|&v| (cfg.alpha[0], v)).collect())?,
    };
    let slope = loglog_slope(&records.iter().map(|r| (r.v, r.residual)).collect::<Vec<_>>());
    Ok(ScalingStudy { records, slope })
}

/// Writes `scaling.csv`, `slope.txt`, the manifest and optionally
/// `scaling.svg` (log-log).
pub fn write_scaling(study: &ScalingStudy, cfg: &ExperimentConfig, dir: &Path, plot: bool) -> Result<Vec<PathBuf>> {
    let mut paths = vec![write_manifest(cfg, dir)?];
    let p = dir.join("scaling.csv");
    write_table(fs::File::create(&p)?, &SWEEP_HEADER, &study.records.iter().map(record_row).collect::<Vec<_>>())?;
    paths.push(p.clone());
    let s = dir.join("slope.txt");
    fs::write(&s, slope_text(study.slope))?;
    paths.push(s);
    if plot {
        let mut spec = PlotSpec::new("v", &["residual"]);
        spec.log_x = true;
        spec.log_y = true;
        spec.title = "|T_sim - T_theory|".into();
        let svg = p.with_extension("svg");
        emit_plot(&p, &spec, &svg)?;
        paths.push(svg);
    }
    Ok(paths)
}

fn slope_text(slope: Option<f64>) -> String {
    match slope {
        Some(s) => format!("slope={}\n", fmt_sig(s)),
        None => "slope=\nnote=fewer than 3 usable points\n".to_string(),
    }
}

/// One outgoing channel of a resolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub predicted_amplitude: f64,
    pub predicted_phase: Phase,
    pub predicted_center: f64,
    pub window: (f64, f64),
    pub window_mass: f64,
    /// `None` when no soliton is predicted (radiation-only channel) or the
    /// window holds too little mass.
    pub fit: Option<SolitonFit>,
    /// Center velocity between the two fit times.
    pub velocity: Option<f64>,
    /// `|A_fit − A_pred| / A_pred`.
    pub amplitude_error: Option<f64>,
    /// Same with the peak modulus as the amplitude estimate.
    pub peak_amplitude_error: Option<f64>,
    /// Predicted phase including the bulk term `(A² − v²)t/2`, wrapped.
    pub expected_phase: Option<f64>,
    /// `|fitted − expected|` mod 2π, in `[0, π]`.
    pub phase_error: Option<f64>,
    pub radiation_only: bool,
}

/// Outcome of a resolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionReport {
    pub q: f64,
    pub v: f64,
    pub x0: f64,
    pub t: f64,
    pub prediction: OutgoingPrediction,
    pub transmitted: ChannelReport,
    pub reflected: ChannelReport,
    pub total_mass: f64,
    /// Mass outside both fit windows.
    pub radiation_mass: f64,
    /// `2A_T + 2A_R` over the channels that were fitted.
    pub soliton_mass: f64,
    /// `|radiation + soliton − total| / total`.
    pub mass_closure: f64,
    /// `v^{−δ}`, added to phase tolerances.
    pub phase_slack: f64,
}

/// Gap between the two fit times used for the velocity estimate.
pub const VELOCITY_BASELINE: f64 = 0.5;

fn fit_window(center: f64, amplitude: f64, grid: &Grid) -> (f64, f64) {
    let half = if amplitude > 0.0 { 15.0 / amplitude } else { 15.0 };
    ((center - half).max(grid.x_min()), (center + half).min(grid.x_max() - grid.dx()))
}

fn window_mass(field: &WaveField, w: (f64, f64)) -> f64 {
    let g = field.grid();
    g.dx() * field.values().iter().enumerate().filter(|(j, _)| (w.0..=w.1).contains(&g.x(*j))).map(|(_, u)| u.norm_sqr()).sum::<f64>()
}

#[allow(clippy::too_many_arguments)]
fn channel_report(
    early: &WaveField,
    late: &WaveField,
    amplitude: f64,
    phase: Phase,
    center: f64,
    carrier: f64,
    t: f64,
    v: f64,
) -> Result<ChannelReport> {
    let grid = late.grid();
    let window = fit_window(center, amplitude, grid);
    let wmass = window_mass(late, window);
    let radiation_only = amplitude == 0.0;
    let mut rep = ChannelReport {
        predicted_amplitude: amplitude,
        predicted_phase: phase,
        predicted_center: center,
        window,
        window_mass: wmass,
        fit: None,
        velocity: None,
        amplitude_error: None,
        peak_amplitude_error: None,
        expected_phase: None,
        phase_error: None,
        radiation_only,
    };
    if radiation_only {
        return Ok(rep);
    }
    let fit = match fit_soliton(late, window, carrier) {
        Ok(f) => f,
        Err(Error::NoSoliton(_)) => return Ok(rep),
        Err(e) => return Err(e),
    };
    let w_early = fit_window(center - carrier * VELOCITY_BASELINE, amplitude, grid);
    if let Ok(f0) = fit_soliton(early, w_early, carrier) {
        rep.velocity = Some((fit.center - f0.center) / VELOCITY_BASELINE);
    }
    rep.amplitude_error = Some((fit.amplitude - amplitude).abs() / amplitude);
    rep.peak_amplitude_error = Some((fit.peak_amplitude - amplitude).abs() / amplitude);
    if let Some(phi) = phase.value() {
        let expected = wrap_phase(phi + (amplitude * amplitude - v * v) * t / 2.0);
        rep.expected_phase = Some(expected);
        rep.phase_error = Some(wrap_phase(fit.phase - expected).abs());
    }
    rep.fit = Some(fit);
    Ok(rep)
}

/// Evolves a unit soliton through the delta and fits the outgoing packets
/// at `t = |x0|/v + t_after`, windows `±15/A` around `x0 + vt` (carrier
/// `+v`) and `−x0 − vt` (carrier `−v`).
pub fn run_resolution(cfg: &ExperimentConfig) -> Result<ResolutionReport> {
    kind_check(cfg, Kind::Resolution)?;
    let v = cfg.v[0];
    let q = cfg.coupling(v);
    let x0 = cfg.x0;
    let delta = cfg.delta.expect("validated");
    let prediction = outgoing_prediction(q, v, x0)?;
    if prediction.a_t == 0.0 && prediction.a_r == 0.0 {
        return Err(Error::Precondition(format!("no outgoing soliton predicted at q = {q}, v = {v}")));
    }
    let grid = cfg.grid.build()?;
    let t = x0.abs() / v + cfg.t_after;
    let t_early = (t - VELOCITY_BASELINE).max(0.0);
    let u0 = unit_soliton(&grid, v, x0)?;
    let ecfg = EvolutionConfig::new(cfg.time_step(v), t, q, vec![t_early, t])?;
    let frames = evolve(&u0, &ecfg)?;
    let (early, late) = (&frames[0].1, &frames[1].1);
    let transmitted =
        channel_report(early, late, prediction.a_t, prediction.phi_t, x0 + v * t, v, t, v)?;
    let reflected =
        channel_report(early, late, prediction.a_r, prediction.phi_r, -x0 - v * t, -v, t, v)?;
    let total_mass = l2_norm_sq(late);
    let radiation_mass = total_mass - transmitted.window_mass - reflected.window_mass;
    let soliton_mass: f64 =
        [&transmitted, &reflected].iter().filter_map(|c| c.fit.map(|f| 2.0 * f.amplitude)).sum();
    let unfitted: f64 = [&transmitted, &reflected].iter().filter(|c| c.fit.is_none()).map(|c| c.window_mass).sum();
    let mass_closure = ((radiation_mass + unfitted + soliton_mass) - total_mass).abs() / total_mass;
    Ok(ResolutionReport {
        q,
        v,
        x0,
        t,
        prediction,
        transmitted,
        reflected,
        total_mass,
        radiation_mass: radiation_mass + unfitted,
        soliton_mass,
        mass_closure,
        phase_slack: v.powf(-delta),
    })
}

fn opt_cell(v: Option<f64>) -> Cell {
    v.map(Cell::Num).unwrap_or(Cell::Text(String::new()))
}

/// Writes `resolution.csv` (one row per channel), the manifest and the
/// final frame.
pub fn write_resolution(rep: &ResolutionReport, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = vec![write_manifest(cfg, dir)?];
    let header = [
        "channel", "t", "A_pred", "A_fit", "A_peak", "amplitude_error", "center_pred", "center_fit", "velocity",
        "phase_pred", "phase_fit", "phase_error", "phase_slack", "window_mass", "residual", "radiation_only",
        "radiation_mass", "total_mass", "mass_closure",
    ];
    let row = |name: &str, c: &ChannelReport| -> Vec<Cell> {
        vec![
            name.into(),
            rep.t.into(),
            c.predicted_amplitude.into(),
            opt_cell(c.fit.map(|f| f.amplitude)),
            opt_cell(c.fit.map(|f| f.peak_amplitude)),
            opt_cell(c.amplitude_error),
            c.predicted_center.into(),
            opt_cell(c.fit.map(|f| f.center)),
            opt_cell(c.velocity),
            opt_cell(c.expected_phase),
            opt_cell(c.fit.map(|f| f.phase)),
            opt_cell(c.phase_error),
            rep.phase_slack.into(),
            c.window_mass.into(),
            opt_cell(c.fit.map(|f| f.residual)),
            c.radiation_only.into(),
            rep.radiation_mass.into(),
            rep.total_mass.into(),
            rep.mass_closure.into(),
        ]
    };
    let p = dir.join("resolution.csv");
    write_table(
        fs::File::create(&p)?,
        &header,
        &[row("transmitted", &rep.transmitted), row("reflected", &rep.reflected)],
    )?;
    paths.push(p);
    Ok(paths)
}

/// Linear splitting residuals per velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProbe {
    /// `(v, q, residual)`.
    pub rows: Vec<(f64, f64, f64)>,
    /// Skipped velocities and why.
    pub skipped: Vec<(f64, String)>,
    pub slope: Option<f64>,
}

/// `hv_split_residual` of `e^{ivx}sech(x − x0)` at time `cfg.t` for each
/// velocity; velocities violating `2|x0|/v ≤ t ≤ 1` are skipped with a note.
pub fn run_linear_probe(cfg: &ExperimentConfig) -> Result<LinearProbe> {
    kind_check(cfg, Kind::LinearProbe)?;
    let grid = cfg.grid.build()?;
    let t = cfg.t.expect("validated");
    let mut out = LinearProbe { rows: Vec::new(), skipped: Vec::new(), slope: None };
    for &v in &cfg.v {
        let q = cfg.coupling(v);
        if t < 2.0 * cfg.x0.abs() / v || t > 1.0 {
            out.skipped.push((v, format!("t = {t} outside [2|x0|/v, 1] = [{}, 1]", 2.0 * cfg.x0.abs() / v)));
            continue;
        }
        let profile = WaveField::from_fn(&grid, |x| {
            Complex64::from_polar(1.0 / (x - cfg.x0).cosh(), v * x)
        })?;
        out.rows.push((v, q, hv_split_residual(q, v, cfg.x0, t, &profile)?));
    }
    out.slope = loglog_slope(&out.rows.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>());
    Ok(out)
}

/// Writes `linear.csv`, `slope.txt` (with skip notes), the manifest and
/// optionally `linear.svg`.
pub fn write_linear_probe(probe: &LinearProbe, cfg: &ExperimentConfig, dir: &Path, plot: bool) -> Result<Vec<PathBuf>> {
    let mut paths = vec![write_manifest(cfg, dir)?];
    let p = dir.join("linear.csv");
    let rows: Vec<Vec<Cell>> = probe.rows.iter().map(|&(v, q, r)| vec![v.into(), q.into(), r.into()]).collect();
    write_table(fs::File::create(&p)?, &["v", "q", "residual"], &rows)?;
    paths.push(p.clone());
    let mut text = slope_text(probe.slope);
    for (v, why) in &probe.skipped {
        text.push_str(&format!("skipped v={}: {why}\n", fmt_sig(*v)));
    }
    let s = dir.join("slope.txt");
    fs::write(&s, text)?;
    paths.push(s);
    if plot {
        let mut spec = PlotSpec::new("v", &["residual"]);
        spec.log_x = true;
        spec.log_y = true;
        spec.title = "linear splitting residual".into();
        let svg = p.with_extension("svg");
        emit_plot(&p, &spec, &svg)?;
        paths.push(svg);
    }
    Ok(paths)
}
