//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Diagnostics are printed indented under their criterion.

mod common;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solsplit_core::delta_linear::{delta_propagate, hv_split_residual};
use solsplit_core::experiments::runs::loglog_slope;
use solsplit_core::experiments::{
    run_resolution, run_scaling_study, run_snapshot, run_transmission_sweep, ExperimentConfig,
};
use solsplit_core::grid_field::{l2_norm_sq, make_grid, WaveField};
use solsplit_core::nls_evolution::{
    conserved_hierarchy, evolve, kink_aware_mass, make_soliton, EvolutionConfig, SolitonParams,
};
use solsplit_core::soliton_theory::*;
use solsplit_core::{Complex64, Result};

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), notes: Vec::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

fn config(name: &str) -> ExperimentConfig {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let mut cfg = ExperimentConfig::from_path(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    cfg.jobs = 0;
    cfg
}

fn l2_dist(a: &[Complex64], b: &[Complex64], dx: f64) -> f64 {
    (dx * a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>()).sqrt()
}

fn sweep() -> Result<Outcome> {
    let recs = run_transmission_sweep(&config("sweep.cfg"))?;
    let mut pass = true;
    let mut notes = Vec::new();
    for r in &recs {
        notes.push(format!(
            "alpha={} v={:>2} t={:.4} window={} T_sim={:.6} T_theory={:.6} residual={:.3e}{}",
            r.alpha,
            r.v,
            r.t_measure,
            r.window,
            r.t_sim,
            r.t_theory,
            r.residual,
            r.error.as_deref().map(|e| format!(" error: {e}")).unwrap_or_default()
        ));
    }
    for a in [0.6, 1.0, 1.4] {
        let at = |v: f64| recs.iter().find(|r| r.alpha == a && r.v == v).map(|r| r.residual).unwrap_or(f64::NAN);
        let (r3, r10) = (at(3.0), at(10.0));
        if !(r10 <= 0.05 && r10 <= r3) {
            pass = false;
        }
    }
    let mut o = Outcome::new(pass, "|T_sim - 1/(1+a^2)| <= 0.05 at v=10 and no larger than at v=3, a in {0.6,1,1.4}");
    o.notes = notes;
    Ok(o)
}

fn snapshot_and_conservation() -> Result<(Outcome, Outcome)> {
    let mut cfg = config("fig1.cfg");
    cfg.grid.n_points = 1 << 16;
    let out = run_snapshot(&cfg)?;
    let &(t, left, right) = out.half_masses.last().expect("frames");
    let fig = Outcome::new(
        (left - 1.0).abs() <= 0.1 && (right - 1.0).abs() <= 0.1 && t == 4.0,
        format!("half-line masses at t={t}: left={left:.6} right={right:.6} (each 1 +- 0.1)"),
    );
    let s0 = out.series[0];
    let (mut dm, mut de) = (0.0f64, 0.0f64);
    for s in &out.series {
        dm = dm.max(((s.mass - s0.mass) / s0.mass).abs());
        de = de.max(((s.energy - s0.energy) / s0.energy).abs());
    }
    let g = make_grid(4096, -50.0, 50.0)?;
    let sech = make_soliton(&SolitonParams::new(1.0, 0.0, 0.0, 0.0), &g)?;
    let rep = conserved_hierarchy(&sech, 2)?;
    let dh = (rep.hierarchy[2] - Complex64::new(2.0 / 3.0, 0.0)).norm();
    let cons = Outcome::new(
        dm < 1e-8 && de < 1e-6 && dh < 1e-6,
        format!("mass drift {dm:.2e} (< 1e-8), energy drift {de:.2e} (< 1e-6), |E2 - 2/3| = {dh:.2e} (< 1e-6)"),
    )
    .note(format!(
        "grid n={} on [{}, {}], dt={}, {} samples",
        cfg.grid.n_points,
        cfg.grid.x_min,
        cfg.grid.x_max,
        cfg.time_step(3.0),
        out.series.len()
    ));
    Ok((fig, cons))
}

fn linear_oracle() -> Result<Outcome> {
    let l = 32.0;
    let g = make_grid(4096, -l, l)?;
    let f = |x: f64| Complex64::from_polar((-(x + 3.0) * (x + 3.0) / 0.5).exp(), 6.0 * x);
    let u0 = WaveField::from_fn(&g, f)?;
    let spec = delta_propagate(&u0, 0.5, 1.0)?;
    let mut levels = Vec::new();
    for (ratio, steps) in [(4usize, 1250usize), (8, 2500)] {
        let cn = common::cn::CrankNicolson::new(l, 2048 * ratio, 1.0);
        let mut u: Vec<Complex64> = cn.x.iter().map(|&x| f(x)).collect();
        cn.run(&mut u, 0.5 / steps as f64, steps);
        levels.push((0..4096).map(|j| u[j * ratio]).collect::<Vec<_>>());
    }
    let rich: Vec<Complex64> = levels[1].iter().zip(&levels[0]).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    let d = l2_dist(spec.values(), &rich, g.dx());
    let d_fine = l2_dist(spec.values(), &levels[1], g.dx());

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    let g = make_grid(2048, -64.0, 64.0)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (c, s, k) = (rng.random_range(-10.0..-5.0), rng.random_range(0.5..1.0), rng.random_range(-4.0..4.0));
        let (q, t) = (rng.random_range(0.35..4.0), rng.random_range(0.05..1.0));
        let u = WaveField::from_fn(&g, |x| {
            let y: f64 = (x - c) / s;
            Complex64::from_polar((-0.5 * y * y).exp(), k * x)
        })?;
        let m0 = l2_norm_sq(&u);
        let m1 = kink_aware_mass(&delta_propagate(&u, t, q)?, q)?;
        worst = worst.max(((m1 - m0) / m0).abs());
    }
    Ok(Outcome::new(
        d < 1e-4 && worst < 1e-6,
        format!("L2 vs Crank-Nicolson {d:.2e} (< 1e-4); worst relative mass change over 20 fields {worst:.2e} (< 1e-6)"),
    )
    .note(format!("finest Crank-Nicolson level alone differs by {d_fine:.2e}")))
}

fn residuals(x0: f64, t: f64, vs: &[f64], n: usize) -> Result<Vec<(f64, f64)>> {
    let g = make_grid(n, -64.0, 64.0)?;
    vs.iter()
        .map(|&v| {
            let p = WaveField::from_fn(&g, |x| Complex64::from_polar(1.0 / (x - x0).cosh(), v * x))?;
            Ok((v, hv_split_residual(v, v, x0, t, &p)?))
        })
        .collect()
}

fn linear_rate() -> Result<Outcome> {
    let pts = residuals(-2.0, 0.5, &[10.0, 20.0, 40.0], 16384)?;
    let slope = loglog_slope(&pts).unwrap_or(f64::NAN);
    let g = make_grid(16384, -64.0, 64.0)?;
    let p = WaveField::from_fn(&g, |x| Complex64::from_polar(1.0 / (x + 2.0).cosh(), 10.0 * x))?;
    let r0 = hv_split_residual(0.0, 10.0, -2.0, 0.5, &p)?;
    let sep = residuals(-8.0, 0.8, &[20.0, 40.0, 80.0], 16384)?;
    let sep_slope = loglog_slope(&sep).unwrap_or(f64::NAN);
    let show = |v: &[(f64, f64)]| v.iter().map(|(v, r)| format!("v={v}: {r:.4e}")).collect::<Vec<_>>().join(", ");
    let tail: f64 = g.dx() * g.points().iter().filter(|&&x| x > 0.0).map(|&x| (1.0 / (x + 2.0).cosh()).powi(2)).sum::<f64>();
    Ok(Outcome::new(
        (-1.3..=-0.7).contains(&slope) && r0 < 1e-10,
        format!("x0=-2, t=0.5: slope {slope:.3} (in [-1.3, -0.7]); q=0 residual {r0:.2e} (< 1e-10)"),
    )
    .note(show(&pts))
    .note(format!("mass of sech(x+2) on x>0: {tail:.4}; this part of the profile is not split by velocity"))
    .note(format!("separated data x0=-8, t=0.8: {}; slope {sep_slope:.3}", show(&sep))))
}

fn scaling() -> Result<Outcome> {
    let study = run_scaling_study(&config("scaling.cfg"))?;
    let res: Vec<f64> = study.records.iter().map(|r| r.residual).collect();
    let decreasing = res.windows(2).all(|w| w[1] < w[0]);
    let slope = study.slope.unwrap_or(f64::NAN);
    let mut o = Outcome::new(
        decreasing && slope <= -0.5,
        format!("residuals strictly decreasing: {decreasing}; log-log slope {slope:.3} (<= -0.5)"),
    );
    for r in &study.records {
        o = o.note(format!(
            "v={:>2} t={:.4} window={} T_sim={:.8} residual={:.3e}",
            r.v, r.t_measure, r.window, r.t_sim, r.residual
        ));
    }
    Ok(o)
}

fn resolution() -> Result<Outcome> {
    let rep = run_resolution(&config("resolution.cfg"))?;
    let (tr, rf) = (&rep.transmitted, &rep.reflected);
    let amp_ok = [tr, rf].iter().all(|c| c.amplitude_error.is_some_and(|e| e <= 0.1));
    let tol = 0.3 + rep.phase_slack;
    let phase_err = tr.phase_error.unwrap_or(f64::NAN);
    let mass_ok = rep.mass_closure <= 0.02;
    let mut o = Outcome::new(
        amp_ok && phase_err <= tol && mass_ok,
        format!(
            "amplitudes within 10% of sqrt2-1: {amp_ok}; transmitted phase error {phase_err:.3} (<= {tol:.3}); mass closure {:.2e} (<= 0.02)",
            rep.mass_closure
        ),
    );
    for (name, c) in [("transmitted", tr), ("reflected", rf)] {
        if let Some(f) = c.fit {
            o = o.note(format!(
                "{name}: A_fit={:.5} (error {:.1}%), peak |u|={:.5} (error {:.1}%), center {:.3} vs {:.3}, velocity {:.3}, phase {:.4} vs {:.4}",
                f.amplitude,
                100.0 * c.amplitude_error.unwrap_or(f64::NAN),
                f.peak_amplitude,
                100.0 * c.peak_amplitude_error.unwrap_or(f64::NAN),
                f.center,
                c.predicted_center,
                c.velocity.unwrap_or(f64::NAN),
                f.phase,
                c.expected_phase.unwrap_or(f64::NAN)
            ));
        } else {
            o = o.note(format!("{name}: no fit"));
        }
    }
    Ok(o.note(format!(
        "t={:.4}; total mass {:.6}, soliton mass {:.6}, radiation (outside windows) {:.3e}",
        rep.t, rep.total_mass, rep.soliton_mass, rep.radiation_mass
    )))
}

/// Composite Simpson in the original variable, independent of the adaptive
/// rule inside `phi0`.
fn phi0_simpson(w: f64) -> f64 {
    let s2 = (PI * w).sin().powi(2);
    let m2 = (2.0 * w - 1.0).powi(2);
    let f = |z: f64| (s2 / (PI * z).cosh().powi(2)).ln_1p() * z / (z * z + m2);
    let n = 400_000;
    let h = 14.0 / n as f64;
    let mut s = f(0.0) + f(14.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

fn spectral_suite() -> Result<Outcome> {
    let mut unit = 0.0f64;
    for alpha in [0.25, 0.6, 0.9] {
        for lam in [0.0, 0.5, -0.5, 2.0, -2.0] {
            let d = zs_scattering_data(alpha, Complex64::new(lam, 0.0))?;
            unit = unit.max((d.a.norm_sqr() + d.b.norm_sqr() - 1.0).abs());
        }
    }
    let mut gam = 0.0f64;
    for i in 0..9 {
        let alpha = 0.55 + 0.05 * i as f64;
        gam = gam.max((zs_discrete_data(alpha)?.gamma0 - Complex64::i()).norm());
    }
    let at_one = phi0(1.0, 1e-12)?;
    let small = phi0(1e-6, 1e-12)?;
    let dual = (phi0(0.8, 1e-12)? - phi0_simpson(0.8)).abs();
    let checks = phi0_cross_check(&[0.6, 0.7, 0.8, 0.9])?;
    let verdict = cross_check_verdict(&checks, 1e-3);
    let mut o = Outcome::new(
        unit < 1e-10 && gam < 1e-10 && at_one == 0.0 && small < 1e-5 && dual < 1e-8,
        format!(
            "| |a|^2+|b|^2-1 | {unit:.1e}; |gamma0 - i| {gam:.1e}; phi0(1)={at_one}; phi0(1e-6)={small:.2e}; dual quadrature {dual:.1e}"
        ),
    );
    for c in &checks {
        o = o.note(format!(
            "alpha={}: phi0={:.6} integral(zeta)={:.6} integral(2 zeta)={:.6}",
            c.alpha, c.phi0, c.integral_zeta, c.integral_two_zeta
        ));
    }
    Ok(o.note(format!("phase formula cross-check verdict: {verdict:?}")))
}

fn free_soliton() -> Result<Outcome> {
    let g = make_grid(4096, -64.0, 64.0)?;
    let p = SolitonParams::new(1.0, 3.0, -10.0, 0.0);
    let u = make_soliton(&p, &g)?;
    let err_at = |f: &WaveField, t: f64| {
        f.values().iter().enumerate().map(|(j, z)| (z - p.exact(g.x(j), t)).norm()).fold(0.0, f64::max)
    };
    let times: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    let frames = evolve(&u, &EvolutionConfig::new(1e-3, 4.0, 0.0, times)?)?;
    let worst = frames.iter().map(|(t, f)| err_at(f, *t)).fold(0.0, f64::max);
    let e = |dt: f64| -> Result<f64> {
        let f = evolve(&u, &EvolutionConfig::new(dt, 4.0, 0.0, vec![])?)?;
        Ok(err_at(&f[0].1, 4.0))
    };
    let (e1, e2) = (e(0.02)?, e(0.01)?);
    let ratio = e1 / e2;
    Ok(Outcome::new(
        worst < 1e-5 && (3.5..=4.5).contains(&ratio),
        format!("max error over t in [0,4]: {worst:.2e} (< 1e-5); error ratio for dt 0.02 -> 0.01: {ratio:.3} (about 4)"),
    )
    .note(format!("errors at t=4: {e1:.3e}, {e2:.3e}")))
}

fn main() {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, r: Result<Outcome>, secs: f64| {
        let o = r.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!("[{n}] {} {name}: {} ({secs:.1} s)", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for s in &o.notes {
            println!("      {s}");
        }
    };
    let timed = |f: &dyn Fn() -> Result<Outcome>| {
        let t = Instant::now();
        let r = f();
        (r, t.elapsed().as_secs_f64())
    };

    let (r, s) = timed(&spectral_suite);
    report(8, "scattering data and phase integrals", r, s);
    let (r, s) = timed(&free_soliton);
    report(9, "free soliton", r, s);
    let (r, s) = timed(&linear_oracle);
    report(4, "linear propagator", r, s);
    let (r, s) = timed(&linear_rate);
    report(5, "linear splitting rate", r, s);
    let (r, s) = timed(&sweep);
    report(1, "transmission sweep", r, s);
    let t = Instant::now();
    let both = snapshot_and_conservation();
    let s = t.elapsed().as_secs_f64();
    match both {
        Ok((fig, cons)) => {
            report(2, "collision snapshots", Ok(fig), s);
            report(3, "conservation", Ok(cons), 0.0);
        }
        Err(e) => {
            let msg = format!("error: {e}");
            report(2, "collision snapshots", Ok(Outcome::new(false, msg.clone())), s);
            report(3, "conservation", Ok(Outcome::new(false, msg)), 0.0);
        }
    }
    let (r, s) = timed(&scaling);
    report(6, "transmission scaling", r, s);
    let (r, s) = timed(&resolution);
    report(7, "outgoing solitons", r, s);

    println!("{failed} of 9 criteria failed ({:.0} s)", start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
