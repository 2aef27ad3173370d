//! Complex log-Gamma, reciprocal Gamma and digamma.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const G: f64 = 7.0;
const P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `log Γ(z)` by the Lanczos approximation (g = 7, 9 coefficients), with
/// the reflection formula for `Re z < ½`. On `Re z ≥ ½` this is the
/// principal branch; in the reflected half-plane the imaginary part is
/// determined modulo `2π`.
///
/// ```
/// use solsplit_core::special::complex_log_gamma;
/// use num_complex::Complex64;
/// let v = complex_log_gamma(Complex64::new(0.5, 0.0)).unwrap();
/// assert!((v.re - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
/// ```
pub fn complex_log_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_unchecked(1.0 - z);
    }
    let z = z - 1.0;
    let (a, t) = lanczos_sum(z);
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

fn lanczos_sum(z: Complex64) -> (Complex64, Complex64) {
    let mut a = Complex64::new(P[0], 0.0);
    for (i, &p) in P.iter().enumerate().skip(1) {
        a += p / (z + i as f64);
    }
    (a, z + G + 0.5)
}

/// `1/Γ(z)`, entire: exactly zero at the poles of `Γ`.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma_unchecked(z)).exp()
}

/// `ψ(z) = Γ′(z)/Γ(z)` from the derivative of the Lanczos form, with
/// `ψ(z) = ψ(1−z) − π cot(πz)` for `Re z < ½`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pz = Complex64::new(PI, 0.0) * z;
        return digamma_unchecked(1.0 - z) - PI * pz.cos() / pz.sin();
    }
    // ψ(w+1) with w = z − 1, then ψ(z) = ψ(w+1)
    let w = z - 1.0;
    let (a, t) = lanczos_sum(w);
    let mut da = Complex64::new(0.0, 0.0);
    for (i, &p) in P.iter().enumerate().skip(1) {
        let d = w + i as f64;
        da -= p / (d * d);
    }
    t.ln() + (w + 0.5) / t - 1.0 + da / a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!(complex_log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(complex_log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let v = complex_log_gamma(c(10.0, 0.0)).unwrap();
        assert!((v.re - 362_880f64.ln()).abs() < 1e-12);
        let v = complex_log_gamma(c(-0.5, 0.0)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(complex_log_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(complex_log_gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
        assert_eq!(reciprocal_gamma(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn modulus_identity_on_the_critical_line() {
        for &x in &[0.0, 0.3, 2.0, 5.5, 11.0] {
            let v = complex_log_gamma(c(0.5, x)).unwrap();
            let lhs = (2.0 * v.re).exp();
            let rhs = PI / (PI * x).cosh();
            assert!(((lhs - rhs) / rhs).abs() < 1e-12, "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &z in &[c(0.3, 1.7), c(-2.4, 0.9), c(7.0, -12.0), c(0.01, 0.02)] {
            let lhs = (complex_log_gamma(z + 1.0).unwrap() - complex_log_gamma(z).unwrap()).exp();
            assert!((lhs - z).norm() < 1e-12 * z.norm().max(1.0), "{z}: {lhs}");
        }
    }

    #[test]
    fn digamma_matches_central_difference_of_log_gamma() {
        for &z in &[c(0.7, 0.2), c(3.0, -4.0), c(-1.3, 0.5), c(0.5, 8.0)] {
            let h = 1e-5;
            let fd = (complex_log_gamma(z + h).unwrap() - complex_log_gamma(z - h).unwrap()) / (2.0 * h);
            let d = digamma(z).unwrap();
            assert!((d - fd).norm() < 1e-8, "{z}: {d} vs {fd}");
        }
        // ψ(1) = −γ
        let g = digamma(c(1.0, 0.0)).unwrap();
        assert!((g.re + 0.577_215_664_901_532_9).abs() < 1e-13);
    }
}
