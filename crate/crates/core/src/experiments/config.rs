//! `key = value` experiment configuration files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::grid_field::{fmt_sig, make_grid, Grid};
use crate::{Error, Result};

/// Which experiment a configuration describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Snapshot,
    Sweep,
    Scaling,
    Resolution,
    LinearProbe,
    Phi0,
    Zs,
    Predict,
}

impl Kind {
    fn parse(s: &str) -> Result<Kind> {
        Ok(match s {
            "snapshot" => Kind::Snapshot,
            "sweep" => Kind::Sweep,
            "scaling" => Kind::Scaling,
            "resolution" | "resolve" => Kind::Resolution,
            "linear_probe" | "linear" => Kind::LinearProbe,
            "phi0" => Kind::Phi0,
            "zs" => Kind::Zs,
            "predict" => Kind::Predict,
            other => return Err(Error::Config(format!("unknown kind `{other}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Snapshot => "snapshot",
            Kind::Sweep => "sweep",
            Kind::Scaling => "scaling",
            Kind::Resolution => "resolution",
            Kind::LinearProbe => "linear_probe",
            Kind::Phi0 => "phi0",
            Kind::Zs => "zs",
            Kind::Predict => "predict",
        }
    }

    fn needs_window(&self) -> bool {
        matches!(self, Kind::Scaling | Kind::Resolution)
    }
}

/// Spatial grid of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridSpec {
    /// `[−400, 400]` with `2¹⁵` points.
    pub const DEFAULT: GridSpec = GridSpec { n_points: 1 << 15, x_min: -400.0, x_max: 400.0 };

    pub fn build(&self) -> Result<std::sync::Arc<Grid>> {
        make_grid(self.n_points, self.x_min, self.x_max)
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub q: Option<f64>,
    pub alpha: Vec<f64>,
    pub v: Vec<f64>,
    pub x0: f64,
    pub delta: Option<f64>,
    pub grid: GridSpec,
    /// Absolute time step; when absent `dt_scale·2.5e-4·(3/v)²` is used.
    pub dt: Option<f64>,
    pub dt_scale: f64,
    pub times: Vec<f64>,
    /// Resolution runs: time after the crossing `|x0|/v` at which to fit.
    pub t_after: f64,
    /// Linear probe evaluation time.
    pub t: Option<f64>,
    pub monitor_every: usize,
    pub omega: Option<f64>,
    pub tol: f64,
    pub lambda: (f64, f64),
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
    pub plot: bool,
}

const KEYS: &[&str] = &[
    "kind", "q", "alpha", "v", "v_list", "x0", "delta", "n_points", "x_min", "x_max", "dt",
    "dt_scale", "times", "t_after", "t", "monitor_every", "omega", "tol", "lambda_re",
    "lambda_im", "out_dir", "seed", "jobs", "plot",
];

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("`{key}`: `{s}` is not a finite number")))
}

/// Comma list, `a..b` (inclusive, step 1) or `a..b:step`.
fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (b, parse_f64(key, st)?),
            None => (rest, 1.0),
        };
        let (a, b) = (parse_f64(key, a)?, parse_f64(key, b)?);
        if !(step > 0.0) || b < a {
            return Err(Error::Config(format!("`{key}`: bad range `{s}`")));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * step).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_f64(key, t)).collect()
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Error::Config(format!("`{key}`: `{other}` is not a boolean"))),
    }
}

impl ExperimentConfig {
    /// Reads and validates a configuration file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
    /// keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", i + 1)));
            }
            let k = if k == "v_list" { "v" } else { k };
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: `{k}` given twice", i + 1)));
            }
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let num = |k: &str| get(k).map(|s| parse_f64(k, s)).transpose();
        let kind = Kind::parse(get("kind").ok_or_else(|| Error::Config("missing key `kind`".into()))?)?;
        let grid = GridSpec {
            n_points: match get("n_points") {
                Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("`n_points`: `{s}`")))?,
                None => GridSpec::DEFAULT.n_points,
            },
            x_min: num("x_min")?.unwrap_or(GridSpec::DEFAULT.x_min),
            x_max: num("x_max")?.unwrap_or(GridSpec::DEFAULT.x_max),
        };
        let cfg = ExperimentConfig {
            kind,
            q: num("q")?,
            alpha: get("alpha").map(|s| parse_list("alpha", s)).transpose()?.unwrap_or_default(),
            v: get("v").map(|s| parse_list("v", s)).transpose()?.unwrap_or_default(),
            x0: num("x0")?.unwrap_or(-10.0),
            delta: num("delta")?,
            grid,
            dt: num("dt")?,
            dt_scale: num("dt_scale")?.unwrap_or(1.0),
            times: get("times").map(|s| parse_list("times", s)).transpose()?.unwrap_or_default(),
            t_after: num("t_after")?.unwrap_or(8.0),
            t: num("t")?,
            monitor_every: match get("monitor_every") {
                Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("`monitor_every`: `{s}`")))?,
                None => 0,
            },
            omega: num("omega")?,
            tol: num("tol")?.unwrap_or(1e-10),
            lambda: (num("lambda_re")?.unwrap_or(0.0), num("lambda_im")?.unwrap_or(0.0)),
            out_dir: PathBuf::from(get("out_dir").unwrap_or("out")),
            seed: match get("seed") {
                Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("`seed`: `{s}`")))?,
                None => 0,
            },
            jobs: match get("jobs") {
                Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("`jobs`: `{s}`")))?,
                None => 0,
            },
            plot: get("plot").map(|s| parse_bool("plot", s)).transpose()?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn require(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("kind `{}` requires {what}", self.kind.name())))
        }
    }

    /// Checks kind-specific requirements and the measurement window
    /// preconditions `2/3 < δ < 1` and `x0 ≤ −v^{1−δ}`.
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.delta {
            if !(d > 2.0 / 3.0 && d < 1.0) {
                return Err(Error::Config(format!("delta = {d} is outside (2/3, 1)")));
            }
        }
        if self.v.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Config("velocities must be positive".into()));
        }
        if self.q.is_some_and(|q| q < 0.0) || self.alpha.iter().any(|&a| a < 0.0) {
            return Err(Error::Config("q and alpha must be non-negative".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::Config(format!("dt = {dt} must be positive")));
            }
        }
        if !(self.dt_scale > 0.0) {
            return Err(Error::Config("dt_scale must be positive".into()));
        }
        if !(self.grid.n_points >= 2 && self.grid.n_points.is_power_of_two()) {
            return Err(Error::Config(format!("n_points = {} is not a power of two", self.grid.n_points)));
        }
        if !(self.grid.x_max > self.grid.x_min) {
            return Err(Error::Config("x_max must exceed x_min".into()));
        }
        let has_coupling = self.q.is_some() || !self.alpha.is_empty();
        match self.kind {
            Kind::Snapshot => {
                self.require(self.q.is_some() && self.v.len() == 1, "`q` and a single `v`")?;
                self.require(!self.times.is_empty(), "`times`")?;
                if self.times.windows(2).any(|w| w[1] < w[0]) || self.times[0] < 0.0 {
                    return Err(Error::Config("`times` must be sorted and non-negative".into()));
                }
            }
            Kind::Sweep => self.require(!self.alpha.is_empty() && !self.v.is_empty(), "`alpha` and `v`")?,
            Kind::Scaling => {
                self.require(self.alpha.len() == 1 || self.q.is_some(), "a single `alpha` (or `q`)")?;
                self.require(!self.v.is_empty() && self.delta.is_some(), "`v` and `delta`")?;
            }
            Kind::Resolution => {
                self.require(self.v.len() == 1 && has_coupling, "a single `v` and `q` or `alpha`")?;
                self.require(self.delta.is_some(), "`delta`")?;
            }
            Kind::LinearProbe => {
                self.require(!self.v.is_empty() && has_coupling, "`v` and `q` or `alpha`")?;
                self.require(self.t.is_some(), "`t`")?;
            }
            Kind::Phi0 => self.require(self.omega.is_some(), "`omega`")?,
            Kind::Zs => self.require(self.alpha.len() == 1, "a single `alpha`")?,
            Kind::Predict => self.require(self.q.is_some() && self.v.len() == 1, "`q` and a single `v`")?,
        }
        if self.kind.needs_window() {
            let d = self.delta.expect("checked above");
            for &v in &self.v {
                let bound = -v.powf(1.0 - d);
                if self.x0 > bound {
                    return Err(Error::Config(format!(
                        "window precondition x0 <= -v^(1-delta) fails: x0 = {} > {bound:.6} at v = {v}",
                        self.x0
                    )));
                }
            }
        }
        Ok(())
    }

    /// `q` for velocity `v`: the explicit `q` or `alpha·v`.
    pub fn coupling(&self, v: f64) -> f64 {
        self.q.unwrap_or_else(|| self.alpha.first().copied().unwrap_or(0.0) * v)
    }

    /// The configured `dt`, or `dt_scale·2.5e-4·(3/v)²`.
    pub fn time_step(&self, v: f64) -> f64 {
        self.dt.unwrap_or_else(|| self.dt_scale * default_dt(v))
    }

    /// `key=value` lines of the resolved configuration plus the tool
    /// version.
    pub fn manifest(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(",");
        let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
        let mut s = String::new();
        let _ = writeln!(s, "tool=solsplit {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "kind={}", self.kind.name());
        let _ = writeln!(s, "q={}", opt(self.q));
        let _ = writeln!(s, "alpha={}", list(&self.alpha));
        let _ = writeln!(s, "v={}", list(&self.v));
        let _ = writeln!(s, "x0={}", fmt_sig(self.x0));
        let _ = writeln!(s, "delta={}", opt(self.delta));
        let _ = writeln!(s, "n_points={}", self.grid.n_points);
        let _ = writeln!(s, "x_min={}", fmt_sig(self.grid.x_min));
        let _ = writeln!(s, "x_max={}", fmt_sig(self.grid.x_max));
        let _ = writeln!(s, "dt={}", opt(self.dt));
        let _ = writeln!(s, "dt_scale={}", fmt_sig(self.dt_scale));
        let _ = writeln!(s, "times={}", list(&self.times));
        let _ = writeln!(s, "t_after={}", fmt_sig(self.t_after));
        let _ = writeln!(s, "t={}", opt(self.t));
        let _ = writeln!(s, "monitor_every={}", self.monitor_every);
        let _ = writeln!(s, "omega={}", opt(self.omega));
        let _ = writeln!(s, "tol={}", fmt_sig(self.tol));
        let _ = writeln!(s, "lambda_re={}", fmt_sig(self.lambda.0));
        let _ = writeln!(s, "lambda_im={}", fmt_sig(self.lambda.1));
        let _ = writeln!(s, "out_dir={}", self.out_dir.display());
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "jobs={}", self.jobs);
        let _ = writeln!(s, "plot={}", self.plot);
        s
    }
}

/// `2.5·10⁻⁴·(3/v)²`.
pub fn default_dt(v: f64) -> f64 {
    2.5e-4 * (3.0 / v).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_list("v", "3..6").unwrap(), vec![3.0, 4.0, 5.0, 6.0]);
        assert_eq!(parse_list("v", "1..2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_list("v", "0.6, 1.0,1.4").unwrap(), vec![0.6, 1.0, 1.4]);
        assert!(parse_list("v", "4..3").is_err());
    }

    #[test]
    fn comments_and_unknown_keys() {
        let c = ExperimentConfig::parse("kind = phi0 # trailing\n# whole line\nomega = 0.8\n").unwrap();
        assert_eq!(c.omega, Some(0.8));
        let e = ExperimentConfig::parse("kind = phi0\nomgea = 0.8\n").unwrap_err();
        assert!(e.to_string().contains("omgea"));
        assert!(ExperimentConfig::parse("kind = phi0\nomega = 1\nomega = 2\n").is_err());
    }
}
