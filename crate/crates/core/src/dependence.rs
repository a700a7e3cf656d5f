//! Tail-dependence functionals on the copula diagonal: the exact pipeline
//! `u -> F1^{-1}(u) -> P(X1 <= q, X2 <= q)`, its asymptotic counterpart, the
//! empirical (rank-based) diagonal, and the tail-order regression
//! `ln C(u,u) ~ tau ln u + c ln|ln u| + d`.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{
    compute_constants, joint_log_cdf_diagonal_asymptotic, quantile_asymptotic,
};
use crate::error::{Error, Result};
use crate::skew_gh::{
    joint_log_cdf_diagonal, marginal_quantile, EquiSkewGHParams, SampleBatch,
};

/// One row of a diagonal tail experiment. The asymptotic joint value is the
/// deep-tail expansion evaluated at the *exact* quantile, so `ratio_log_gap`
/// isolates the joint-CDF expansion error from the quantile expansion error.
/// Asymptotic columns are NaN for u >= 0.1 (outside the asymptotic regime).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailCurvePoint {
    pub u: f64,
    pub quantile_exact: f64,
    #[serde(serialize_with = "null_if_not_finite")]
    pub quantile_asymptotic: f64,
    #[serde(rename = "log_C_exact")]
    pub log_c_exact: f64,
    #[serde(rename = "log_C_asymptotic", serialize_with = "null_if_not_finite")]
    pub log_c_asymptotic: f64,
    #[serde(rename = "lambda_L")]
    pub lambda_l: f64,
    #[serde(serialize_with = "null_if_not_finite")]
    pub ratio_log_gap: f64,
}

fn null_if_not_finite<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// Result of the tail-order regression.
#[derive(Debug, Clone, Serialize)]
pub struct TailOrderFit {
    pub tau_hat: f64,
    /// Fitted coefficient of the `ln|ln u|` regressor.
    pub svf_exponent_hat: f64,
    /// `(p-1)(1 - tau_hat) - 1/2`, the exponent the fitted tail order implies.
    pub svf_exponent_predicted: f64,
    pub residual_max: f64,
    pub grid: Vec<f64>,
}

/// `ln C(u,u) = ln P(X1 <= F1^{-1}(u), X2 <= F1^{-1}(u))`, all exact.
pub fn copula_diag_exact(u: f64, params: &EquiSkewGHParams) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!(
            "copula_diag_exact requires 0 < u < 1, got {u}"
        )));
    }
    let q = marginal_quantile(u, params)?;
    joint_log_cdf_diagonal(q, params)
}

/// Evaluate the exact and asymptotic diagonal at each grid point. The grid
/// must be strictly decreasing with every `u` in (0, 0.5]. Points are
/// computed in parallel and returned in grid order.
pub fn lambda_l_curve(u_grid: &[f64], params: &EquiSkewGHParams) -> Result<Vec<TailCurvePoint>> {
    if u_grid.is_empty() {
        return Err(Error::InvalidParams("empty u grid".into()));
    }
    if !u_grid.iter().all(|&u| u > 0.0 && u <= 0.5) {
        return Err(Error::InvalidParams("u grid values must lie in (0, 0.5]".into()));
    }
    if !u_grid.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("u grid must be strictly decreasing".into()));
    }
    let consts = compute_constants(params)?;
    let tag = |u: f64| {
        move |e: Error| match e {
            Error::NonConvergence(m) => Error::NonConvergence(format!("at u={u}: {m}")),
            other => other,
        }
    };
    u_grid
        .par_iter()
        .map(|&u| {
            let q = marginal_quantile(u, params).map_err(tag(u))?;
            let log_c = joint_log_cdf_diagonal(q, params).map_err(tag(u))?;
            let (qa, lca) = if u < 0.1 {
                (
                    quantile_asymptotic(u, &consts, params)?,
                    joint_log_cdf_diagonal_asymptotic(q, &consts, params),
                )
            } else {
                (f64::NAN, f64::NAN)
            };
            Ok(TailCurvePoint {
                u,
                quantile_exact: q,
                quantile_asymptotic: qa,
                log_c_exact: log_c,
                log_c_asymptotic: lca,
                lambda_l: (log_c - u.ln()).exp(),
                ratio_log_gap: log_c - lca,
            })
        })
        .collect()
}

/// Least-squares fit of `ln C(u,u) ~ tau ln u + c ln|ln u| + d` on the curve
/// points with `u <= 1e-4` (at least four required). The `ln|ln u|`
/// regressor absorbs the slowly varying factor, whose exact form is a power
/// of `|ln u|`; omitting it would bias `tau_hat` by O(1/|ln u|).
pub fn tail_order_fit(curve: &[TailCurvePoint], p: f64) -> Result<TailOrderFit> {
    let pts: Vec<&TailCurvePoint> = curve
        .iter()
        .filter(|c| c.u <= 1e-4 && c.log_c_exact.is_finite())
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "tail_order_fit needs >= 4 points with u <= 1e-4, got {}",
            pts.len()
        )));
    }
    // normal equations for the 3-column design [ln u, ln|ln u|, 1]
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for c in &pts {
        let x = [c.u.ln(), c.u.ln().abs().ln(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += x[i] * x[j];
            }
            atb[i] += x[i] * c.log_c_exact;
        }
    }
    let sol = solve3(&ata, &atb).ok_or_else(|| {
        Error::InsufficientData("singular design matrix in tail_order_fit".into())
    })?;
    let residual_max = pts
        .iter()
        .map(|c| {
            let fit = sol[0] * c.u.ln() + sol[1] * c.u.ln().abs().ln() + sol[2];
            (c.log_c_exact - fit).abs()
        })
        .fold(0.0, f64::max);
    Ok(TailOrderFit {
        tau_hat: sol[0],
        svf_exponent_hat: sol[1],
        svf_exponent_predicted: (p - 1.0) * (1.0 - sol[0]) - 0.5,
        residual_max,
        grid: pts.iter().map(|c| c.u).collect(),
    })
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = *a;
        for row in 0..3 {
            m[row][k] = b[row];
        }
        let dk = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        out[k] = dk / det;
    }
    Some(out)
}

/// Average ranks (ties share the mean rank), scaled to (0, 1].
fn scaled_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0; // mean of ranks start+1 ..= end
        for &k in &idx[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks.iter().map(|r| r / n as f64).collect()
}

/// Rank-based estimate of the copula diagonal: the fraction of pairs whose
/// scaled ranks both sit at or below `u`. Requires `u * n >= 20` so the
/// estimate has some mass behind it.
pub fn empirical_copula_diag(batch: &SampleBatch, u: f64) -> Result<f64> {
    let n = batch.n();
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!(
            "empirical_copula_diag requires 0 < u <= 1, got {u}"
        )));
    }
    if (u * n as f64) < 20.0 {
        return Err(Error::InsufficientData(format!(
            "empirical_copula_diag needs u*n >= 20, got {}",
            u * n as f64
        )));
    }
    let xs: Vec<f64> = batch.pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = batch.pairs.iter().map(|p| p.1).collect();
    let rx = scaled_ranks(&xs);
    let ry = scaled_ranks(&ys);
    let hits = rx
        .iter()
        .zip(&ry)
        .filter(|(a, b)| **a <= u && **b <= u)
        .count();
    Ok(hits as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gig::GIGParams;
    use crate::skew_gh::sample_bivariate;

    fn canonical() -> EquiSkewGHParams {
        EquiSkewGHParams::new(GIGParams::vg(1.0).unwrap(), 0.0, 0.0).unwrap()
    }

    #[test]
    fn copula_diag_closed_cases() {
        // u = 1/2, theta = 0: quantile 0, orthant probability
        let got = copula_diag_exact(0.5, &canonical()).unwrap();
        assert!((got - 0.25_f64.ln()).abs() < 1e-8);
        let params = EquiSkewGHParams::new(GIGParams::vg(1.0).unwrap(), 0.0, 0.5).unwrap();
        let got = copula_diag_exact(0.5, &params).unwrap();
        assert!((got - (1.0 / 3.0_f64).ln()).abs() < 1e-8);
    }

    #[test]
    fn curve_shape_and_bounds() {
        let grid = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let curve = lambda_l_curve(&grid, &canonical()).unwrap();
        assert_eq!(curve.len(), grid.len());
        for w in curve.windows(2) {
            assert!(w[1].lambda_l < w[0].lambda_l, "lambda_L not decreasing");
        }
        for c in &curve {
            // Frechet-Hoeffding: max(2u-1, 0) <= C(u,u) <= u
            let cu = c.log_c_exact.exp();
            assert!(cu <= c.u * (1.0 + 1e-9));
            assert!(cu >= (2.0 * c.u - 1.0).max(0.0));
            assert!(c.lambda_l <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(lambda_l_curve(&[], &canonical()).is_err());
        assert!(lambda_l_curve(&[0.7], &canonical()).is_err());
        assert!(lambda_l_curve(&[1e-3, 1e-2], &canonical()).is_err());
    }

    #[test]
    fn fit_recovers_synthetic_power_law() {
        let grid: Vec<f64> = (4..=12).map(|k| 10f64.powi(-k)).collect();
        let curve: Vec<TailCurvePoint> = grid
            .iter()
            .map(|&u| TailCurvePoint {
                u,
                quantile_exact: 0.0,
                quantile_asymptotic: 0.0,
                log_c_exact: 1.7 * u.ln(),
                log_c_asymptotic: 0.0,
                lambda_l: 0.0,
                ratio_log_gap: 0.0,
            })
            .collect();
        let fit = tail_order_fit(&curve, 0.5).unwrap();
        assert!((fit.tau_hat - 1.7).abs() < 1e-10);
        assert!(fit.svf_exponent_hat.abs() < 1e-9);
        assert!(fit.residual_max < 1e-10);
    }

    #[test]
    fn fit_requires_enough_deep_points() {
        let curve: Vec<TailCurvePoint> = [1e-2, 1e-3]
            .iter()
            .map(|&u| TailCurvePoint {
                u,
                quantile_exact: 0.0,
                quantile_asymptotic: 0.0,
                log_c_exact: u.ln(),
                log_c_asymptotic: 0.0,
                lambda_l: 0.0,
                ratio_log_gap: 0.0,
            })
            .collect();
        assert!(tail_order_fit(&curve, 0.5).is_err());
    }

    #[test]
    fn empirical_diag_comonotone_and_orthant() {
        // comonotone input: C(u,u) = u up to rank granularity
        let params = canonical();
        let n = 10_000;
        let base = sample_bivariate(&params, n, 3).unwrap();
        let comon = SampleBatch {
            pairs: base.pairs.iter().map(|p| (p.0, p.0)).collect(),
            seed: base.seed,
            params,
        };
        for &u in &[0.01, 0.25, 0.5] {
            let c = empirical_copula_diag(&comon, u).unwrap();
            assert!((c - u).abs() <= 1.0 / n as f64 + 1e-12, "u={u}: {c}");
        }
        // independent-ish orthant
        let batch = sample_bivariate(&params, 1_000_000, 11).unwrap();
        let c = empirical_copula_diag(&batch, 0.5).unwrap();
        let se = (0.25_f64 * 0.75 / 1e6).sqrt() * std::f64::consts::SQRT_2;
        assert!((c - 0.25).abs() < 4.0 * se, "c={c}");
    }

    #[test]
    fn empirical_diag_guards() {
        let batch = sample_bivariate(&canonical(), 100, 1).unwrap();
        assert!(empirical_copula_diag(&batch, 0.01).is_err());
        assert!(empirical_copula_diag(&batch, 0.0).is_err());
    }
}
