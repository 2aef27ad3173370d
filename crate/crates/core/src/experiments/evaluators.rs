//! Single-record evaluators: `φ₀(ω)`, Zakharov–Shabat data, outgoing
//! soliton prediction.

use num_complex::Complex64;

use super::config::{ExperimentConfig, Kind};
use super::table::Cell;
use crate::soliton_theory::{outgoing_prediction, phi0, zs_discrete_data, zs_scattering_data, Phase};
use crate::{Error, Result};

/// A header and one row.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub header: Vec<&'static str>,
    pub row: Vec<Cell>,
}

impl Record {
    /// Header line and record line, 15 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        super::table::write_table(&mut buf, &self.header, std::slice::from_ref(&self.row))?;
        Ok(String::from_utf8(buf).expect("ascii"))
    }
}

fn phase_cell(p: Phase) -> Cell {
    match p {
        Phase::Defined(v) => Cell::Num(v),
        Phase::Absent => Cell::Text("absent".into()),
        Phase::UndefinedAtThreshold => Cell::Text("threshold".into()),
    }
}

/// Dispatches on `cfg.kind` (`phi0`, `zs` or `predict`).
pub fn evaluate(cfg: &ExperimentConfig) -> Result<Record> {
    match cfg.kind {
        Kind::Phi0 => {
            let w = cfg.omega.expect("validated");
            Ok(Record { header: vec!["omega", "phi0"], row: vec![w.into(), phi0(w, cfg.tol)?.into()] })
        }
        Kind::Zs => {
            let alpha = cfg.alpha[0];
            let lambda = Complex64::new(cfg.lambda.0, cfg.lambda.1);
            let d = zs_scattering_data(alpha, lambda)?;
            let mut row: Vec<Cell> = vec![
                alpha.into(),
                lambda.re.into(),
                lambda.im.into(),
                d.a.re.into(),
                d.a.im.into(),
                d.b.re.into(),
                d.b.im.into(),
                d.r.re.into(),
                d.r.im.into(),
                (d.a.norm_sqr() + d.b.norm_sqr()).into(),
            ];
            match zs_discrete_data(alpha) {
                Ok(e) => row.extend([e.lambda0.im.into(), e.gamma0.re.into(), e.gamma0.im.into()]),
                Err(Error::NoEigenvalue(_)) => row.extend((0..3).map(|_| Cell::Text(String::new()))),
                Err(e) => return Err(e),
            }
            Ok(Record {
                header: vec![
                    "alpha", "lambda_re", "lambda_im", "a_re", "a_im", "b_re", "b_im", "r_re", "r_im", "abs_a2_plus_abs_b2",
                    "lambda0_im", "gamma0_re", "gamma0_im",
                ],
                row,
            })
        }
        Kind::Predict => {
            let v = cfg.v[0];
            let q = cfg.q.expect("validated");
            let p = outgoing_prediction(q, v, cfg.x0)?;
            Ok(Record {
                header: vec!["q", "v", "x0", "A_T", "A_R", "phi_T", "phi_R", "t_re", "t_im", "r_re", "r_im"],
                row: vec![
                    q.into(),
                    v.into(),
                    cfg.x0.into(),
                    p.a_t.into(),
                    p.a_r.into(),
                    phase_cell(p.phi_t),
                    phase_cell(p.phi_r),
                    p.t_coeff.re.into(),
                    p.t_coeff.im.into(),
                    p.r_coeff.re.into(),
                    p.r_coeff.im.into(),
                ],
            })
        }
        k => Err(Error::Config(format!("kind `{}` is not a single-record evaluator", k.name()))),
    }
}
