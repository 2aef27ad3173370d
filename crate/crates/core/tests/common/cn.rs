//! Crank–Nicolson reference solver for `i u_t = −½u'' + qδ₀u` on a fine
//! uniform grid with Dirichlet ends. The delta enters as `(q/h)u` at the
//! node on `x = 0`.

use num_complex::Complex64;

pub struct CrankNicolson {
    pub x: Vec<f64>,
    h: f64,
    q: f64,
    origin: usize,
}

impl CrankNicolson {
    /// Nodes `−l + j·h` for `j = 0..=2m` with `h = l/m`; node `m` is 0.
    pub fn new(l: f64, m: usize, q: f64) -> Self {
        let h = l / m as f64;
        let x = (0..=2 * m).map(|j| -l + j as f64 * h).collect();
        CrankNicolson { x, h, q, origin: m }
    }

    fn diag(&self, j: usize) -> f64 {
        1.0 / (self.h * self.h) + if j == self.origin { self.q / self.h } else { 0.0 }
    }

    /// Advances `u` by `steps` steps of size `dt`.
    pub fn run(&self, u: &mut [Complex64], dt: f64, steps: usize) {
        let n = u.len();
        let i = Complex64::i();
        let off = -0.5 / (self.h * self.h);
        let a = 0.5 * dt * i * off;
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        let mut cp = vec![Complex64::new(0.0, 0.0); n];
        let mut dp = vec![Complex64::new(0.0, 0.0); n];
        for _ in 0..steps {
            for j in 0..n {
                let left = if j > 0 { u[j - 1] } else { Complex64::new(0.0, 0.0) };
                let right = if j + 1 < n { u[j + 1] } else { Complex64::new(0.0, 0.0) };
                rhs[j] = (1.0 - 0.5 * dt * i * self.diag(j)) * u[j] - a * (left + right);
            }
            // Thomas sweep for (1 + ½dt·iH) u_new = rhs.
            let b0 = 1.0 + 0.5 * dt * i * self.diag(0);
            cp[0] = a / b0;
            dp[0] = rhs[0] / b0;
            for j in 1..n {
                let den = 1.0 + 0.5 * dt * i * self.diag(j) - a * cp[j - 1];
                cp[j] = a / den;
                dp[j] = (rhs[j] - a * dp[j - 1]) / den;
            }
            u[n - 1] = dp[n - 1];
            for j in (0..n - 1).rev() {
                u[j] = dp[j] - cp[j] * u[j + 1];
            }
        }
    }
}
