//! Table of dimension-dependent constants.

use std::io::Write;

use membrane_iso::bounds::{omega, reciprocal_sum_rhs, stability_constants, SumVariant};
use membrane_iso::specfun::{mu1_ball, p_zero};
use membrane_iso::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub n: usize,
    pub omega: f64,
    pub p: f64,
    /// `μ₁` of the unit ball.
    pub mu1_ball: f64,
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
    /// Lower bound on `Σ_{i<n} 1/μ_i` at `|Ω| = ω_n`.
    pub thm11_rhs: f64,
}

pub fn constants_table(n_min: usize, n_max: usize) -> Result<Vec<ConstantsRow>> {
    if !(2 <= n_min && n_min <= n_max && n_max <= 20) {
        return Err(Error::Domain(format!(
            "need 2 <= n_min <= n_max <= 20, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let c = stability_constants(n)?;
            Ok(ConstantsRow {
                n,
                omega: omega(n),
                p: p_zero(n)?,
                mu1_ball: mu1_ball(n, 1.0)?,
                alpha: c.alpha,
                beta: c.beta,
                d: c.d,
                thm11_rhs: reciprocal_sum_rhs(omega(n), n, SumVariant::Thm11)?,
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ConstantsRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "omega", "p", "mu1_ball", "alpha", "beta", "d", "thm11_rhs"])?;
    for r in rows {
        let mut rec = vec![r.n.to_string()];
        rec.extend([r.omega, r.p, r.mu1_ball, r.alpha, r.beta, r.d, r.thm11_rhs].map(crate::plot::num));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_range() {
        let rows = constants_table(2, 10).unwrap();
        assert_eq!(rows.len(), 9);
        assert!((rows[0].p - 1.841184).abs() < 1e-6);
        assert!((rows[0].mu1_ball - 3.389958).abs() < 1e-6);
        assert!((rows[0].d - 0.278506).abs() < 1e-6);
        assert!((rows[1].p - 2.081576).abs() < 1e-6);
        assert!(rows.iter().all(|r| r.d > 0.0));
        assert!(constants_table(1, 4).is_err());
        assert!(constants_table(5, 4).is_err());
        assert!(constants_table(2, 21).is_err());
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 10);
    }
}
