//! Fast soliton scattering by a repulsive delta impurity in the 1D focusing
//! cubic NLS
//!
//! ```text
//! i u_t + ½ u_xx − q δ₀(x) u + |u|² u = 0
//! ```
//!
//! The crate is organized bottom-up:
//!
//! * [`grid_field`]: periodic grids, complex fields, spectral derivatives,
//!   half-line masses and CSV I/O.
//! * [`delta_linear`]: the linear operator `H_q = −½∂² + qδ₀`, its
//!   scattering coefficients and its exact propagator.
//! * [`nls_evolution`]: Strang split-step evolution with the exact delta
//!   substep, soliton data and conserved quantities.
//! * [`soliton_theory`]: closed-form predictions (transmission rate,
//!   outgoing soliton parameters, Zakharov–Shabat data for `α sech`).
//! * [`experiments`]: configuration, measurement protocols, fitting, CSV
//!   and SVG output used by the `solsplit` command-line tool.
//!
//! ```
//! use solsplit_core::grid_field::{make_grid, l2_norm_sq};
//! use solsplit_core::nls_evolution::{make_soliton, SolitonParams};
//!
//! let grid = make_grid(1024, -50.0, 50.0).unwrap();
//! let u = make_soliton(&SolitonParams::new(1.0, 3.0, -10.0, 0.0), &grid).unwrap();
//! assert!((l2_norm_sq(&u) - 2.0).abs() < 1e-10);
//! ```

pub mod delta_linear;
mod error;
pub mod experiments;
pub mod grid_field;
pub mod nls_evolution;
pub mod quadrature;
pub mod soliton_theory;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
