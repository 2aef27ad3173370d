use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use solsplit_core::experiments::config::{ExperimentConfig, Kind};
use solsplit_core::experiments::runs;
use solsplit_core::experiments::{evaluate, write_table, Cell};
use solsplit_core::grid_field::fmt_sig;
use solsplit_core::{Error, Result};

/// Soliton splitting by a delta impurity: simulations and theory
/// evaluators.
#[derive(Parser)]
#[command(name = "solsplit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one soliton and write frames plus the conserved series.
    Snapshot(Common),
    /// Transmitted mass fraction over (alpha, v) pairs.
    Sweep(Common),
    /// Transmission residual against v and its log-log slope.
    Scaling(Common),
    /// Fit the outgoing transmitted and reflected solitons.
    Resolve(Common),
    /// Linear splitting residual against v.
    Linear(Common),
    /// Evaluate phi0(omega).
    Phi0(Common),
    /// Zakharov-Shabat scattering data of alpha sech x.
    Zs(Common),
    /// Predicted outgoing soliton amplitudes and phases.
    Predict(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render SVG plots.
    #[arg(long)]
    plot: bool,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn split(&self) -> (Kind, &Common) {
        match self {
            Command::Snapshot(c) => (Kind::Snapshot, c),
            Command::Sweep(c) => (Kind::Sweep, c),
            Command::Scaling(c) => (Kind::Scaling, c),
            Command::Resolve(c) => (Kind::Resolution, c),
            Command::Linear(c) => (Kind::LinearProbe, c),
            Command::Phi0(c) => (Kind::Phi0, c),
            Command::Zs(c) => (Kind::Zs, c),
            Command::Predict(c) => (Kind::Predict, c),
        }
    }
}

fn load(kind: Kind, args: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if cfg.kind != kind {
        return Err(Error::Config(format!(
            "{}: kind `{}` does not match subcommand `{}`",
            args.config.display(),
            cfg.kind.name(),
            kind.name()
        )));
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.plot |= args.plot;
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(kind: Kind, args: &Common) -> Result<()> {
    let cfg = load(kind, args)?;
    let dir: &Path = &cfg.out_dir;
    match kind {
        Kind::Snapshot => {
            let out = runs::run_snapshot(&cfg)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for (t, l, r) in &out.half_masses {
                println!("t={} left={} right={}", fmt_sig(*t), fmt_sig(*l), fmt_sig(*r));
            }
            if let Some(e) = out.exact_error {
                println!("max modulus error vs exact soliton: {e:.3e}");
            }
            report(&runs::write_snapshot(&out, &cfg, dir, cfg.plot)?);
        }
        Kind::Sweep => {
            let recs = runs::run_transmission_sweep(&cfg)?;
            for r in recs.iter().filter(|r| r.error.is_some()) {
                eprintln!("warning: alpha={} v={}: {}", r.alpha, r.v, r.error.as_deref().unwrap_or(""));
            }
            report(&runs::write_sweep(&recs, &cfg, dir, cfg.plot)?);
        }
        Kind::Scaling => {
            let study = runs::run_scaling_study(&cfg)?;
            match study.slope {
                Some(s) => println!("slope={}", fmt_sig(s)),
                None => println!("slope omitted: fewer than 3 usable points"),
            }
            report(&runs::write_scaling(&study, &cfg, dir, cfg.plot)?);
        }
        Kind::Resolution => {
            let rep = runs::run_resolution(&cfg)?;
            for (name, c) in [("transmitted", &rep.transmitted), ("reflected", &rep.reflected)] {
                match (c.radiation_only, c.fit) {
                    (true, _) => println!("{name}: radiation only, window mass {}", fmt_sig(c.window_mass)),
                    (false, None) => println!("{name}: no soliton in window"),
                    (false, Some(f)) => println!(
                        "{name}: A={} (predicted {}) peak={} phase={}",
                        fmt_sig(f.amplitude),
                        fmt_sig(c.predicted_amplitude),
                        fmt_sig(f.peak_amplitude),
                        fmt_sig(f.phase)
                    ),
                }
            }
            println!("radiation mass={}", fmt_sig(rep.radiation_mass));
            report(&runs::write_resolution(&rep, &cfg, dir)?);
        }
        Kind::LinearProbe => {
            let probe = runs::run_linear_probe(&cfg)?;
            for (v, why) in &probe.skipped {
                eprintln!("note: skipped v={v}: {why}");
            }
            report(&runs::write_linear_probe(&probe, &cfg, dir, cfg.plot)?);
        }
        Kind::Phi0 | Kind::Zs | Kind::Predict => {
            let rec = evaluate(&cfg)?;
            print!("{}", rec.to_csv()?);
            if args.out.is_some() {
                runs::write_manifest(&cfg, dir)?;
                let p = dir.join(format!("{}.csv", kind.name()));
                write_table(std::fs::File::create(&p)?, &rec.header, &[rec.row.iter().cloned().collect::<Vec<Cell>>()])?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, args) = cli.command.split();
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
