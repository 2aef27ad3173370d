//! Gauss–Legendre rules and adaptive Gauss–Kronrod integration.

use crate::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive G7K15 on `[a, b]`: bisects the panel with the largest
/// error estimate until the summed estimate is below `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Divergence(format!(
                "adaptive quadrature did not reach tol {tol:e} (error estimate {total_err:e})"
            )));
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (pa, pb, _, _) = panels.swap_remove(i);
        let m = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&f, pa, m);
        let (v2, e2) = gk15(&f, m, pb);
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
    // sum small panels first
    let mut vals: Vec<f64> = panels.iter().map(|p| p.2).collect();
    vals.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(vals.iter().sum())
}
