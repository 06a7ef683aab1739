//! Sparsity diagnostics for a held portfolio: projected variances of the
//! cost-neutral exchange actions, marginal costs of sparsity, relative
//! sparsity cost index, directional derivatives with optimal step sizes,
//! projected correlation / Sharpe ratio, and the sparsity bound checks for
//! certified solutions.
//!
//! All bound checks are specific to the square-root penalty (p = 1/2);
//! diagnostics of a portfolio itself are penalty-free.

use crate::error::{Error, Result};
use crate::market::MarketEstimate;
use crate::model::{ModelSpec, ModelVariant};
use crate::solver::SolveResult;
use nalgebra::{DMatrix, DVector};

/// Projected variances of the cost-neutral actions `e^i - e^0` over a
/// support submatrix: `L_i = Qbar_ii - (2/K)(Qbar e)_i + (e'Qbar e)/K^2`.
pub fn projected_variances(qbar: &DMatrix<f64>) -> DVector<f64> {
    let k = qbar.nrows();
    if k == 0 {
        return DVector::zeros(0);
    }
    let e = DVector::from_element(k, 1.0);
    let qe = qbar * &e;
    let total = e.dot(&qe);
    let kf = k as f64;
    DVector::from_fn(k, |i, _| qbar[(i, i)] - 2.0 / kf * qe[i] + total / (kf * kf))
}

/// Same quantity through the explicit projection `(I - ee'/K) Qbar
/// (I - ee'/K)`; used as the independent second route in tests.
pub fn projected_variances_via_projection(qbar: &DMatrix<f64>) -> DVector<f64> {
    let k = qbar.nrows();
    if k == 0 {
        return DVector::zeros(0);
    }
    let proj = DMatrix::identity(k, k) - DMatrix::from_element(k, k, 1.0 / k as f64);
    (&proj * qbar * &proj).diagonal()
}

/// Per-support-asset sensitivity quantities.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    /// Indices of held assets (|w| above the threshold), ascending.
    pub support: Vec<usize>,
    pub k: usize,
    /// All vectors below are aligned with `support`.
    pub weights: DVector<f64>,
    pub l: DVector<f64>,
    pub rsc: DVector<f64>,
    pub mcs: DVector<f64>,
    pub dir_deriv: DVector<f64>,
    pub eps_star: DVector<f64>,
    pub rho_bar: DVector<f64>,
    pub sharpe_bar: DVector<f64>,
    /// Exact objective change from dropping the asset and rebalancing.
    pub measured_drop_cost: DVector<f64>,
}

impl DiagnosticsReport {
    pub fn csv_header() -> &'static str {
        "asset,weight,L,RSC,MCS,dir_deriv,eps_star,rho_bar,sharpe_bar"
    }

    pub fn to_csv(&self, assets: &[String]) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for (row, &idx) in self.support.iter().enumerate() {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                assets[idx],
                self.weights[row],
                self.l[row],
                self.rsc[row],
                self.mcs[row],
                self.dir_deriv[row],
                self.eps_star[row],
                self.rho_bar[row],
                self.sharpe_bar[row],
            ));
        }
        out
    }
}

/// Builds the full sensitivity report for a portfolio at the given reward
/// multiplier. The support is `{i : |w_i| > zero_threshold}`.
pub fn sparsity_costs(
    weights: &DVector<f64>,
    market: &MarketEstimate,
    phi: f64,
    zero_threshold: f64,
) -> Result<DiagnosticsReport> {
    if weights.len() != market.n_assets() {
        return Err(Error::Spec("weights/market dimension mismatch".into()));
    }
    let support: Vec<usize> = (0..weights.len())
        .filter(|&i| weights[i].abs() > zero_threshold)
        .collect();
    let k = support.len();
    let kf = k as f64;
    let sub = market.restrict(&support);
    let qbar = sub.cov();
    let mbar = sub.mean();
    let xbar = DVector::from_fn(k, |i, _| weights[support[i]]);
    let l = projected_variances(qbar);
    let mean_support = if k > 0 { mbar.sum() / kf } else { 0.0 };

    let qx = qbar * &xbar;
    let avg_qx = if k > 0 { qx.sum() / kf } else { 0.0 };
    let portfolio_var = xbar.dot(&qx);
    let std_x = portfolio_var.max(0.0).sqrt();

    let mut rsc = DVector::zeros(k);
    let mut mcs = DVector::zeros(k);
    let mut dir_deriv = DVector::zeros(k);
    let mut eps_star = DVector::zeros(k);
    let mut rho_bar = DVector::zeros(k);
    let mut sharpe_bar = DVector::zeros(k);
    let mut measured = DVector::zeros(k);

    for i in 0..k {
        // Cov[x'eta, (e^i - e^0)'eta] = (Qbar xbar)_i - mean(Qbar xbar).
        let cov = qx[i] - avg_qx;
        let dd = cov - phi * (mbar[i] - mean_support);
        dir_deriv[i] = dd;
        rsc[i] = xbar[i] * l[i].max(0.0).sqrt();
        let std_i = l[i].max(0.0).sqrt();
        rho_bar[i] = if std_x > 1e-12 && std_i > 1e-12 {
            cov / (std_x * std_i)
        } else {
            f64::NAN
        };
        sharpe_bar[i] = if std_i > 1e-12 {
            (mbar[i] - mean_support) / std_i
        } else {
            f64::NAN
        };
        eps_star[i] = if l[i] > 1e-12 {
            -dd / l[i]
        } else if dd.abs() <= 1e-10 {
            0.0
        } else {
            -dd.signum() * f64::INFINITY
        };
        if k >= 2 {
            let ratio = kf / (kf - 1.0);
            mcs[i] = -ratio * xbar[i] * dd + ratio * ratio * xbar[i] * xbar[i] * l[i];
            let (dropped, _) = drop_and_rebalance(weights, support[i], zero_threshold)?;
            measured[i] = unregularized_objective(market, phi, &dropped)
                - unregularized_objective(market, phi, weights);
        } else {
            mcs[i] = f64::NAN;
            eps_star[i] = f64::NAN;
            measured[i] = f64::NAN;
        }
    }

    Ok(DiagnosticsReport {
        support,
        k,
        weights: xbar,
        l,
        rsc,
        mcs,
        dir_deriv,
        eps_star,
        rho_bar,
        sharpe_bar,
        measured_drop_cost: measured,
    })
}

fn unregularized_objective(market: &MarketEstimate, phi: f64, w: &DVector<f64>) -> f64 {
    0.5 * (w.transpose() * market.cov() * w)[(0, 0)] - phi * market.mean().dot(w)
}

/// Removes asset `i` along the cost-neutral direction and spreads its
/// weight over the rest of the support: `x' = x - (K x_i / (K-1))(e^i - e^0)`.
/// The flag reports weights pushed negative (the direction left the
/// simplex, so marginal-cost readings are extrapolations).
pub fn drop_and_rebalance(
    weights: &DVector<f64>,
    asset: usize,
    zero_threshold: f64,
) -> Result<(DVector<f64>, bool)> {
    let support: Vec<usize> = (0..weights.len())
        .filter(|&i| weights[i].abs() > zero_threshold)
        .collect();
    let k = support.len();
    if !support.contains(&asset) {
        return Err(Error::Spec(format!("asset {asset} is not in the support")));
    }
    if k < 2 {
        return Err(Error::Spec("dropping needs a support of at least 2".into()));
    }
    let share = weights[asset] / (k as f64 - 1.0);
    let mut out = weights.clone();
    out[asset] = 0.0;
    for &j in &support {
        if j != asset {
            out[j] += share;
        }
    }
    let flagged = out.iter().any(|v| *v < 0.0);
    Ok((out, flagged))
}

/// Which sparsity theorem applies to a model variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFamily {
    /// No-shorting lp model: plain support bound and entry lower bound.
    NoShort,
    /// l1-ball split model: per-sign bounds with the (delta +- 1)/2 factors.
    L1Ball,
    /// l2-regularized split model: 2 mu augmented projected variances.
    L2,
    /// Split models without a stated support bound; complementarity only.
    ComplementarityOnly,
}

/// One evaluated inequality.
#[derive(Debug, Clone)]
pub struct BoundLine {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Outcome of the sparsity bound checks at a certified solution.
#[derive(Debug, Clone)]
pub struct BoundChecks {
    pub family: BoundFamily,
    /// False when lambda = 0 (bounds are vacuous) or p != 1/2.
    pub applicable: bool,
    pub support_bound_pass: bool,
    pub entry_bound_pass: bool,
    pub complementarity_pass: bool,
    pub lines: Vec<BoundLine>,
}

impl BoundChecks {
    pub fn all_pass(&self) -> bool {
        self.support_bound_pass && self.entry_bound_pass && self.complementarity_pass
    }
}

fn not_applicable(family: BoundFamily) -> BoundChecks {
    BoundChecks {
        family,
        applicable: false,
        support_bound_pass: true,
        entry_bound_pass: true,
        complementarity_pass: true,
        lines: Vec::new(),
    }
}

/// Evaluates the sparsity bounds satisfied by second-order KKT points of
/// the square-root-penalty models, with multiplicative slack `1 + 10 eps`
/// because certified points are eps-approximate.
pub fn theorem_bounds(
    market: &MarketEstimate,
    spec: &ModelSpec,
    result: &SolveResult,
    zero_threshold: f64,
) -> Result<BoundChecks> {
    let family = match spec.variant {
        ModelVariant::MarkowitzNoShort | ModelVariant::LpNoShort => BoundFamily::NoShort,
        ModelVariant::L1BallLp => BoundFamily::L1Ball,
        ModelVariant::L2Lp => BoundFamily::L2,
        _ => BoundFamily::ComplementarityOnly,
    };
    let lambda = spec.lambda;
    if lambda == 0.0 || spec.p != 0.5 {
        return Ok(not_applicable(family));
    }
    let slack = 1.0 + 10.0 * result.certificate.eps_used;
    let n = market.n_assets();
    let mut lines = Vec::new();
    let mut support_pass = true;
    let mut entry_pass = true;
    let mut comp_pass = true;

    let support_of = |xs: &[f64]| -> Vec<usize> {
        (0..xs.len()).filter(|&i| xs[i] > zero_threshold).collect()
    };

    // Support bound (K-1)K^q <= factor * 4 sum L / lambda, entry bound
    // x_i >= (lambda (K-1)^2 / (4 L_i K^2))^(2/3).
    let check_group = |label: &str,
                           xvals: &DVector<f64>,
                           support: &[usize],
                           l: &DVector<f64>,
                           k_exponent: f64,
                           factor: f64|
     -> (bool, bool, Vec<BoundLine>) {
        let k = support.len() as f64;
        let mut group_lines = Vec::new();
        let mut sb = true;
        let mut eb = true;
        if support.is_empty() {
            return (sb, eb, group_lines);
        }
        let lhs = (k - 1.0) * k.powf(k_exponent);
        let rhs = factor * 4.0 * l.sum() / lambda * slack;
        let pass = lhs <= rhs;
        sb &= pass;
        group_lines.push(BoundLine {
            label: format!("{label} support bound"),
            lhs,
            rhs,
            pass,
        });
        for (row, &i) in support.iter().enumerate() {
            let li = l[row];
            if li <= 1e-12 {
                // A vanishing projected variance forces a singleton support.
                let pass = support.len() == 1;
                eb &= pass;
                group_lines.push(BoundLine {
                    label: format!("{label} entry {i}: L=0 forces K=1"),
                    lhs: k,
                    rhs: 1.0,
                    pass,
                });
                continue;
            }
            let bound = (lambda * (k - 1.0) * (k - 1.0) / (4.0 * li * k * k)).powf(2.0 / 3.0);
            let pass = xvals[row] >= bound / slack;
            eb &= pass;
            group_lines.push(BoundLine {
                label: format!("{label} entry {i} lower bound"),
                lhs: xvals[row],
                rhs: bound / slack,
                pass,
            });
        }
        (sb, eb, group_lines)
    };

    match family {
        BoundFamily::NoShort => {
            let x = &result.x;
            let support = support_of(x.as_slice());
            let sub = market.restrict(&support);
            let l = projected_variances(sub.cov());
            let xvals = DVector::from_fn(support.len(), |i, _| x[support[i]]);
            let (sb, eb, ls) = check_group("T1", &xvals, &support, &l, 1.5, 1.0);
            support_pass &= sb;
            entry_pass &= eb;
            lines.extend(ls);
        }
        BoundFamily::L1Ball | BoundFamily::ComplementarityOnly => {
            let x = &result.x;
            let plus: Vec<usize> = (0..n).filter(|&i| x[i] > zero_threshold).collect();
            let minus: Vec<usize> = (0..n).filter(|&i| x[n + i] > zero_threshold).collect();
            let overlap = plus.iter().filter(|i| minus.contains(i)).count();
            comp_pass &= overlap == 0;
            lines.push(BoundLine {
                label: "disjoint long/short supports".into(),
                lhs: overlap as f64,
                rhs: 0.0,
                pass: overlap == 0,
            });
            if family == BoundFamily::L1Ball {
                let delta = spec
                    .delta
                    .ok_or_else(|| Error::Spec("l1 ball bound needs delta".into()))?;
                for (label, idxs, offset, factor) in [
                    ("T2+", &plus, 0usize, ((delta + 1.0) / 2.0).powf(1.5)),
                    ("T2-", &minus, n, ((delta - 1.0) / 2.0).powf(1.5)),
                ] {
                    let sub = market.restrict(idxs);
                    let l = projected_variances(sub.cov());
                    let xvals = DVector::from_fn(idxs.len(), |i, _| x[idxs[i] + offset]);
                    let (sb, eb, ls) = check_group(label, &xvals, idxs, &l, 1.5, factor);
                    support_pass &= sb;
                    entry_pass &= eb;
                    lines.extend(ls);
                }
            }
        }
        BoundFamily::L2 => {
            let x = &result.x;
            let mu = spec.mu.ok_or_else(|| Error::Spec("l2 bound needs mu".into()))?;
            let plus: Vec<usize> = (0..n).filter(|&i| x[i] > zero_threshold).collect();
            let minus: Vec<usize> = (0..n).filter(|&i| x[n + i] > zero_threshold).collect();
            let overlap = plus.iter().filter(|i| minus.contains(i)).count();
            comp_pass &= overlap == 0;
            lines.push(BoundLine {
                label: "disjoint long/short supports".into(),
                lhs: overlap as f64,
                rhs: 0.0,
                pass: overlap == 0,
            });
            let mut union: Vec<usize> = plus.clone();
            for &i in &minus {
                if !union.contains(&i) {
                    union.push(i);
                }
            }
            union.sort_unstable();
            let sub = market.restrict(&union);
            let l = projected_variances(sub.cov()).map(|v| v + 2.0 * mu);
            // The split magnitude per union index (signs are disjoint).
            let xvals = DVector::from_fn(union.len(), |i, _| x[union[i]].max(x[n + union[i]]));
            // Verified l2 bound on the split vector.
            let delta = x.rows(0, 2 * n).norm();
            let factor = delta.powf(1.5);
            let (sb, eb, ls) = check_group("T3", &xvals, &union, &l, 0.75, factor);
            support_pass &= sb;
            entry_pass &= eb;
            lines.extend(ls);
        }
    }

    Ok(BoundChecks {
        family,
        applicable: true,
        support_bound_pass: support_pass,
        entry_bound_pass: entry_pass,
        complementarity_pass: comp_pass,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn toy(n: usize, q: &[f64], m: &[f64]) -> MarketEstimate {
        MarketEstimate::new(
            DVector::from_row_slice(m),
            DMatrix::from_row_slice(n, n, q),
        )
        .unwrap()
    }

    fn toy1() -> MarketEstimate {
        toy(3, &[2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0], &[1.0, 2.0, 3.0])
    }

    fn toy3() -> MarketEstimate {
        toy(3, &[3.0, 1.0, 2.0, 1.0, 7.0, 4.0, 2.0, 4.0, 3.0], &[1.0, 3.0, 2.0])
    }

    #[test]
    fn projected_variance_golden_values() {
        let l1 = projected_variances(toy1().cov());
        for i in 0..3 {
            assert!((l1[i] - 2.0 / 3.0).abs() < 1e-12);
        }
        let l2 = projected_variances(toy(
            3,
            &[2.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 1.0, 2.0],
            &[0.0; 3],
        )
        .cov());
        assert!((l2[0] - 14.0 / 9.0).abs() < 1e-10);
        assert!((l2[1] - 8.0 / 9.0).abs() < 1e-10);
        let l3 = projected_variances(toy3().cov());
        assert!((l3[0] - 2.0).abs() < 1e-12);
        assert!((l3[1] - 2.0).abs() < 1e-12);
        assert!(l3[2].abs() < 1e-12);
    }

    #[test]
    fn rank_one_covariance_has_zero_projected_variance() {
        let q = DMatrix::from_element(4, 4, 0.7);
        let l = projected_variances(&q);
        assert!(l.amax() < 1e-12);
    }

    #[test]
    fn two_routes_agree_on_random_psd_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let k = rng.gen_range(1..8);
            let b = DMatrix::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
            let q = &b * b.transpose();
            let l1 = projected_variances(&q);
            let l2 = projected_variances_via_projection(&q);
            assert!((l1 - l2).amax() < 1e-12 * (1.0 + q.norm()));
            // Trace identity.
            let lsum = projected_variances(&q).sum();
            let e = DVector::from_element(k, 1.0);
            let expect = q.trace() - (e.transpose() * &q * &e)[(0, 0)] / k as f64;
            assert!((lsum - expect).abs() < 1e-12 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn toy1_report_matches_reference_columns() {
        let x = DVector::from_vec(vec![0.3233333333, 0.3333333333, 0.3433333333]);
        let rep = sparsity_costs(&x, &toy1(), 0.01, 1e-6).unwrap();
        let rsc_expect = [0.2640, 0.2722, 0.2803];
        for i in 0..3 {
            assert!((rep.rsc[i] - rsc_expect[i]).abs() < 1e-3);
            // At the optimum every directional derivative vanishes.
            assert!(rep.dir_deriv[i].abs() < 1e-9);
            assert!(rep.eps_star[i].abs() < 1e-9);
        }
        // Asset 1 is the cheapest to drop.
        assert!(rep.rsc[0] < rep.rsc[1] && rep.rsc[1] < rep.rsc[2]);
        assert!((rep.mcs[0] - 0.156817).abs() < 1e-5);
        assert!((rep.mcs[1] - 0.166667).abs() < 1e-5);
        assert!((rep.mcs[2] - 0.176817).abs() < 1e-5);
    }

    #[test]
    fn drop_and_rebalance_examples() {
        let (x, flagged) =
            drop_and_rebalance(&DVector::from_vec(vec![0.5, 0.5]), 0, 1e-6).unwrap();
        assert_eq!(x, DVector::from_vec(vec![0.0, 1.0]));
        assert!(!flagged);

        let x0 = DVector::from_vec(vec![0.3233333333, 0.3333333333, 0.3433333333]);
        let (x, _) = drop_and_rebalance(&x0, 0, 1e-6).unwrap();
        assert!((x[0]).abs() < 1e-15);
        assert!((x[1] - 0.495).abs() < 1e-9);
        assert!((x[2] - 0.505).abs() < 1e-9);
        assert!((x.sum() - 1.0).abs() < 1e-12);

        // The measured cost at an optimum is exactly the quadratic term
        // 1/2 (K/(K-1))^2 x_i^2 L_i.
        let rep = sparsity_costs(&x0, &toy1(), 0.01, 1e-6).unwrap();
        let predicted = 0.5 * (1.5 * x0[0]).powi(2) * (2.0 / 3.0);
        assert!((rep.measured_drop_cost[0] - predicted).abs() < 1e-6);
        // The quoted marginal cost over-estimates the measured cost.
        assert!(rep.mcs[0] >= rep.measured_drop_cost[0]);
    }

    #[test]
    fn drop_errors_off_support_and_singleton() {
        let w = DVector::from_vec(vec![1.0, 0.0]);
        assert!(drop_and_rebalance(&w, 1, 1e-6).is_err());
        assert!(drop_and_rebalance(&w, 0, 1e-6).is_err());
    }

    #[test]
    fn zero_projected_variance_predicts_droppable_asset() {
        // Third asset of the redundant-fund instance has L = 0; dropping it
        // leaves the optimal objective unchanged.
        let market = toy3();
        let c = market.mean() * 0.01;
        let a3 = DMatrix::from_element(1, 3, 1.0);
        let b = DVector::from_element(1, 1.0);
        let full = crate::oracle::solve_convex_qp(market.cov(), &c, &a3, &b, true, None).unwrap();
        let reduced_market = market.restrict(&[0, 1]);
        let c2 = DVector::from_vec(vec![c[0], c[1]]);
        let a2 = DMatrix::from_element(1, 2, 1.0);
        let reduced =
            crate::oracle::solve_convex_qp(reduced_market.cov(), &c2, &a2, &b, true, None)
                .unwrap();
        assert!((full.objective - reduced.objective).abs() < 1e-8);
    }

    #[test]
    fn rho_and_eps_star_identities_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.gen_range(2..7);
            let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let q = &b * b.transpose() + DMatrix::identity(n, n) * 0.2;
            let m = DVector::from_fn(n, |_, _| rng.gen_range(-0.5..0.5));
            let market = MarketEstimate::new(m, q).unwrap();
            let phi = rng.gen_range(0.0..0.5);
            let raw = DVector::from_fn(n, |_, _| rng.gen_range(0.05..1.0));
            let w = &raw / raw.sum();
            let rep = sparsity_costs(&w, &market, phi, 1e-9).unwrap();
            let sub = market.restrict(&rep.support);
            let xbar = rep.weights.clone();
            let std_x = (xbar.transpose() * sub.cov() * &xbar)[(0, 0)].sqrt();
            for i in 0..rep.k {
                let std_i = rep.l[i].max(0.0).sqrt();
                if std_i < 1e-10 {
                    continue;
                }
                assert!(rep.rho_bar[i] >= -1.0 - 1e-8 && rep.rho_bar[i] <= 1.0 + 1e-8);
                // rho * Std[x'eta] * Std[action] recovers the covariance.
                let cov = rep.rho_bar[i] * std_x * std_i;
                let direct = rep.dir_deriv[i] + phi * (sub.mean()[i] - sub.mean().mean());
                assert!((cov - direct).abs() < 1e-10 * (1.0 + direct.abs()));
                // eps* = Sbar * phi / std_i - rho * std_x / std_i.
                let alt = rep.sharpe_bar[i] * phi / std_i - rep.rho_bar[i] * std_x / std_i;
                assert!((rep.eps_star[i] - alt).abs() < 1e-8 * (1.0 + alt.abs()));
            }
        }
    }

    #[test]
    fn singleton_support_marks_costs_not_applicable() {
        let market = toy1();
        let w = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let rep = sparsity_costs(&w, &market, 0.01, 1e-6).unwrap();
        assert_eq!(rep.k, 1);
        assert!(rep.mcs[0].is_nan());
        assert!(rep.eps_star[0].is_nan());
    }

    #[test]
    fn report_csv_includes_all_support_rows() {
        let market = toy1();
        let w = DVector::from_vec(vec![0.5, 0.5, 0.0]);
        let rep = sparsity_costs(&w, &market, 0.01, 1e-6).unwrap();
        let assets = vec!["A".to_string(), "B".to_string(), "C".to_string()];
        let csv = rep.to_csv(&assets);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("A,"));
        assert!(lines[2].starts_with("B,"));
    }
}
