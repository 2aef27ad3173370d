//! Fitting a single moving soliton inside a window.

use num_complex::Complex64;

use crate::grid_field::WaveField;
use crate::soliton_theory::wrap_phase;
use crate::{Error, Result};

/// Parameters of `e^{i·phase} e^{i v x} A sech(A(x − center))` fitted to a
/// field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonFit {
    /// `window mass / 2`.
    pub amplitude: f64,
    pub center: f64,
    /// `arg u − v·x` at the peak, in `(−π, π]`.
    pub phase: f64,
    /// `‖u − model‖² / window mass` over the window.
    pub residual: f64,
    /// Interpolated maximum of `|u|`; an amplitude estimate that is not
    /// biased by radiation sharing the window.
    pub peak_amplitude: f64,
    pub window_mass: f64,
}

/// Smallest window mass accepted as a soliton candidate.
pub const MIN_WINDOW_MASS: f64 = 1e-3;

/// Fits a soliton with carrier `e^{i·carrier_v·x}` to `field` on the node
/// set `window.0 ≤ x_j ≤ window.1`.
pub fn fit_soliton(field: &WaveField, window: (f64, f64), carrier_v: f64) -> Result<SolitonFit> {
    let g = field.grid();
    let (a, b) = window;
    if !(a < b) || a < g.x_min() || b > g.x_max() {
        return Err(Error::Domain(format!(
            "fit window [{a}, {b}] not inside [{}, {})",
            g.x_min(),
            g.x_max()
        )));
    }
    let u = field.values();
    let idx: Vec<usize> = (0..g.n_points()).filter(|&j| (a..=b).contains(&g.x(j))).collect();
    if idx.len() < 3 {
        return Err(Error::Domain("fit window holds fewer than 3 nodes".into()));
    }
    let dx = g.dx();
    let mass = dx * idx.iter().map(|&j| u[j].norm_sqr()).sum::<f64>();
    if mass < MIN_WINDOW_MASS {
        return Err(Error::NoSoliton(format!("window mass {mass:.3e} below {MIN_WINDOW_MASS:e}")));
    }
    let amplitude = 0.5 * mass;
    let jp = *idx
        .iter()
        .max_by(|&&i, &&j| u[i].norm().total_cmp(&u[j].norm()))
        .expect("non-empty window");
    let (mut center, mut peak) = (g.x(jp), u[jp].norm());
    // quadratic through ln|u|
    if jp > idx[0] && jp < idx[idx.len() - 1] && u[jp - 1].norm() > 0.0 && u[jp + 1].norm() > 0.0 {
        let (fm, f0, fp) = (u[jp - 1].norm().ln(), u[jp].norm().ln(), u[jp + 1].norm().ln());
        let den = fm - 2.0 * f0 + fp;
        if den < 0.0 {
            let d = 0.5 * (fm - fp) / den;
            center += d * dx;
            peak = (f0 - 0.25 * (fm - fp) * d).exp();
        }
    }
    let phase = wrap_phase(u[jp].arg() - carrier_v * g.x(jp));
    let w = Complex64::from_polar(1.0, phase);
    let err: f64 = idx
        .iter()
        .map(|&j| {
            let x = g.x(j);
            let model = w * Complex64::from_polar(amplitude / (amplitude * (x - center)).cosh(), carrier_v * x);
            (u[j] - model).norm_sqr()
        })
        .sum();
    Ok(SolitonFit { amplitude, center, phase, residual: dx * err / mass, peak_amplitude: peak, window_mass: mass })
}
