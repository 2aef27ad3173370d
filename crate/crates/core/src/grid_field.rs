//! Uniform periodic grids, complex fields on them, and the spectral
//! operations everything else is built from.
//!
//! A [`Grid`] owns its FFT plans; a [`WaveField`] holds an `Arc<Grid>` and one
//! complex sample per node. All operations return fresh fields. Transform
//! scratch space lives in a per-caller [`Transform`], so grids can be shared
//! freely between threads.

use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Uniform periodic grid `x_j = x_min + j·dx`, `j = 0..n`.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    k: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("x_min", &self.x_min)
            .field("x_max", &self.x_max)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.x_min == other.x_min && self.x_max == other.x_max
    }
}

/// Builds a grid with `n_points` nodes on `[x_min, x_max)`.
///
/// Wavenumbers follow the FFT layout: `k_j = 2πj/L` for `j ≤ n/2` (the
/// Nyquist entry is positive) and `2π(j−n)/L` above.
///
/// ```
/// use solsplit_core::grid_field::make_grid;
/// let g = make_grid(2, 0.0, 2.0).unwrap();
/// assert_eq!(g.dx(), 1.0);
/// assert_eq!(g.wavenumbers(), &[0.0, std::f64::consts::PI]);
/// ```
pub fn make_grid(n_points: usize, x_min: f64, x_max: f64) -> Result<Arc<Grid>> {
    if n_points < 2 || !n_points.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n_points must be a power of two >= 2, got {n_points}"
        )));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
        return Err(Error::InvalidArgument(format!(
            "degenerate extent [{x_min}, {x_max}]"
        )));
    }
    let len = x_max - x_min;
    let dx = len / n_points as f64;
    let base = 2.0 * PI / len;
    let k = (0..n_points)
        .map(|j| {
            if j <= n_points / 2 {
                base * j as f64
            } else {
                base * (j as f64 - n_points as f64)
            }
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n_points);
    let inv = planner.plan_fft_inverse(n_points);
    Ok(Arc::new(Grid { n: n_points, x_min, x_max, dx, k, fwd, inv }))
}

impl Grid {
    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// True when `x_min = −x_max`; then `x = 0` is node `n/2` and the mirror
    /// `x ↦ −x` is the index map `j ↦ (n − j) mod n`.
    pub fn is_symmetric(&self) -> bool {
        self.x_min == -self.x_max
    }

    /// Index of the node at `x = 0` on a symmetric grid.
    pub fn origin_index(&self) -> Option<usize> {
        self.is_symmetric().then_some(self.n / 2)
    }

    pub fn contains_origin(&self) -> bool {
        self.x_min < 0.0 && 0.0 < self.x_max
    }

    /// `(n − j) mod n`: the node of `−x_j` on a symmetric grid.
    pub fn mirror_index(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    /// Index of the node nearest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let j = ((x - self.x_min) / self.dx).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Fresh transform workspace bound to this grid's plans.
    pub fn transform(&self) -> Transform {
        let len = self
            .fwd
            .get_inplace_scratch_len()
            .max(self.inv.get_inplace_scratch_len());
        Transform {
            fwd: Arc::clone(&self.fwd),
            inv: Arc::clone(&self.inv),
            scratch: vec![Complex64::new(0.0, 0.0); len],
            scale: 1.0 / self.n as f64,
        }
    }

    /// Closed form of `Σ_j k_j²` for this layout.
    pub fn wavenumber_square_sum(&self) -> f64 {
        let m = (self.n / 2) as f64;
        let base = 2.0 * PI / self.length();
        // 2·Σ_{j=1}^{m−1} j² + m²
        base * base * ((m - 1.0) * m * (2.0 * m - 1.0) / 3.0 + m * m)
    }
}

/// In-place forward/inverse FFT with owned scratch space. The inverse is
/// normalized so that `inverse(forward(x)) == x`.
pub struct Transform {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    scale: f64,
}

impl Transform {
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, &mut self.scratch);
    }

    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inv.process_with_scratch(buf, &mut self.scratch);
        for z in buf.iter_mut() {
            *z *= self.scale;
        }
    }
}

/// Which half-line of the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Complex samples of `u(·, t)` on a grid.
#[derive(Clone, Debug)]
pub struct WaveField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(j) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("non-finite amplitude at node {j}")));
        }
        Ok(WaveField { grid, values })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        WaveField { grid: Arc::clone(grid), values: vec![Complex64::new(0.0, 0.0); grid.n_points()] }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..grid.n_points()).map(|j| f(grid.x(j))).collect();
        WaveField::new(Arc::clone(grid), values)
    }

    /// Skips the finiteness scan; used on solver outputs that are finite by
    /// construction.
    pub(crate) fn from_parts(grid: Arc<Grid>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        WaveField { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Pointwise map, keeping the grid.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &z)| f(self.grid.x(j), z))
            .collect();
        WaveField { grid: Arc::clone(&self.grid), values }
    }

    /// `e^{iθ}·u`.
    pub fn rotate(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, theta);
        self.map(|_, z| z * w)
    }

    /// `self − other`; both fields must share a grid.
    pub fn sub(&self, other: &WaveField) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(WaveField { grid: Arc::clone(&self.grid), values })
    }

    /// `self + other`; both fields must share a grid.
    pub fn add(&self, other: &WaveField) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(WaveField { grid: Arc::clone(&self.grid), values })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, z| z * c)
    }

    /// `u(−x)`, requires a symmetric grid.
    pub fn mirror(&self) -> Result<Self> {
        if !self.grid.is_symmetric() {
            return Err(Error::Domain("mirror needs a grid symmetric about 0".into()));
        }
        let values = (0..self.values.len())
            .map(|j| self.values[self.grid.mirror_index(j)])
            .collect();
        Ok(WaveField { grid: Arc::clone(&self.grid), values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_same_grid(&self, other: &WaveField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("fields live on different grids".into()));
        }
        Ok(())
    }

    /// Writes `x,re,im,abs` rows with 15 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "re", "im", "abs"])?;
        for (j, z) in self.values.iter().enumerate() {
            out.write_record([fmt_sig(self.grid.x(j)), fmt_sig(z.re), fmt_sig(z.im), fmt_sig(z.norm())])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a field written by [`WaveField::write_csv`]. The `x` column must
    /// match the grid nodes to within `1e-9·dx`.
    pub fn read_csv<R: Read>(grid: &Arc<Grid>, r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let header: Vec<&str> = rd.headers()?.iter().collect();
        if header != ["x", "re", "im", "abs"] {
            return Err(Error::Csv(format!("unexpected header `{}`", header.join(","))));
        }
        let mut values = Vec::with_capacity(grid.n_points());
        for (row, rec) in rd.records().enumerate() {
            let cols: Vec<f64> = rec?
                .iter()
                .map(str::parse::<f64>)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Csv(format!("row {}: {e}", row + 2)))?;
            let j = values.len();
            if j >= grid.n_points() || (cols[0] - grid.x(j)).abs() > 1e-9 * grid.dx() {
                return Err(Error::Csv(format!("row {}: x does not match the grid", row + 2)));
            }
            values.push(Complex64::new(cols[1], cols[2]));
        }
        WaveField::new(Arc::clone(grid), values).map_err(|e| Error::Csv(e.to_string()))
    }
}

/// Formats with 15 significant digits, the crate-wide CSV convention.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{:.14e}", v);
    // shortest round-trip of the 15-digit value, for readable files
    let parsed: f64 = s.parse().unwrap_or(v);
    if (1e-5..1e15).contains(&parsed.abs()) {
        format!("{parsed}")
    } else {
        format!("{parsed:e}")
    }
}

/// `dx·Σ|u_j|²`.
pub fn l2_norm_sq(field: &WaveField) -> f64 {
    field.grid.dx() * field.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `dx·Σ|u_j|²` over nodes with `x_j > 0` (right) or `x_j < 0` (left); a node
/// at exactly `x = 0` counts half to each side.
pub fn half_line_mass(field: &WaveField, side: Side) -> Result<f64> {
    let g = &field.grid;
    if !g.contains_origin() {
        return Err(Error::Domain(format!(
            "x = 0 is outside [{}, {})",
            g.x_min(),
            g.x_max()
        )));
    }
    let eps = 1e-12 * g.dx();
    let mut s = 0.0;
    for (j, z) in field.values.iter().enumerate() {
        let x = g.x(j);
        let w = if x.abs() <= eps {
            0.5
        } else if (x > 0.0) == (side == Side::Right) {
            1.0
        } else {
            0.0
        };
        s += w * z.norm_sqr();
    }
    Ok(s * g.dx())
}

/// Multiplies the Fourier coefficients by `(ik)^order`. The Nyquist
/// coefficient is dropped for odd orders so that real data stays real.
pub fn spectral_derivative(field: &WaveField, order: u32) -> WaveField {
    let g = &field.grid;
    let n = g.n_points();
    let mut buf = field.values.clone();
    let mut tr = g.transform();
    tr.forward(&mut buf);
    let ik_pow = |k: f64| Complex64::new(0.0, k).powu(order);
    for (j, z) in buf.iter_mut().enumerate() {
        if order % 2 == 1 && j == n / 2 {
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z *= ik_pow(g.wavenumbers()[j]);
        }
    }
    tr.inverse(&mut buf);
    WaveField::from_parts(Arc::clone(g), buf)
}

/// Forward transform, pointwise multiplication by `symbol(k_j)`, inverse
/// transform.
pub fn free_fourier_multiply(
    field: &WaveField,
    symbol: impl Fn(f64) -> Complex64,
) -> Result<WaveField> {
    let g = &field.grid;
    let sym: Vec<Complex64> = g.wavenumbers().iter().map(|&k| symbol(k)).collect();
    if let Some(j) = sym.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "symbol is not finite at k = {}",
            g.wavenumbers()[j]
        )));
    }
    let mut buf = field.values.clone();
    let mut tr = g.transform();
    tr.forward(&mut buf);
    for (z, s) in buf.iter_mut().zip(&sym) {
        *z *= s;
    }
    tr.inverse(&mut buf);
    Ok(WaveField::from_parts(Arc::clone(g), buf))
}

/// Integral over one half-line of the trigonometric interpolant of the
/// periodic samples `f`. Exact for band-limited data, and unlike the
/// node-sum it does not need `f` to be smooth at `x = 0` on the other side.
/// `tr` must belong to `grid`.
pub fn spectral_half_line_integral(grid: &Grid, tr: &mut Transform, f: &[f64], side: Side) -> f64 {
    let n = grid.n_points();
    let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    tr.forward(&mut buf);
    let inv_n = 1.0 / n as f64;
    let x0 = grid.x_min();
    let k = grid.wavenumbers();
    // ∫_0^{x_max} e^{ik(x−x_min)} dx = (1 − e^{−ik·x_min})/(ik) using e^{ikL} = 1
    let mut right = buf[0].re * inv_n * grid.x_max();
    for j in 1..n {
        let c = buf[j] * inv_n;
        if j == n / 2 {
            // real cosine mode at Nyquist
            right += c.re * (-(k[j] * x0)).sin() / k[j] * -1.0;
            continue;
        }
        let e = Complex64::from_polar(1.0, -k[j] * x0);
        right += (c * (Complex64::new(1.0, 0.0) - e) / Complex64::new(0.0, k[j])).re;
    }
    match side {
        Side::Right => right,
        Side::Left => buf[0].re * inv_n * grid.length() - right,
    }
}
