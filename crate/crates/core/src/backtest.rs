//! Rolling-window out-of-sample evaluation: estimate moments on a training
//! window, solve the model, hold the weights over the next span, and
//! aggregate realized mean/variance/Sharpe together with sparsity and
//! leverage. Windows advance by the holding span (non-overlapping holds);
//! the final partial hold is truncated to the available rows.

use crate::error::{Error, Result};
use crate::market::{estimate_market, ReturnsMatrix};
use crate::model::{self, build_general_form, ModelSpec};
use crate::solver::{self, SolverConfig};
use nalgebra::DVector;

/// How the reward multiplier is chosen per window.
#[derive(Debug, Clone)]
pub enum PhiPolicy {
    Fixed(f64),
    /// Calibrate from the window's moments so the constrained model meets
    /// the target return.
    Calibrate { m0: f64 },
}

/// What to hold each window.
#[derive(Debug, Clone)]
pub enum Strategy {
    Model(ModelSpec),
    /// Equal-weight baseline.
    EqualWeight,
}

#[derive(Debug, Clone)]
pub struct BacktestConfig {
    pub train_window: usize,
    pub rebalance_period: usize,
    pub strategy: Strategy,
    pub phi_policy: PhiPolicy,
    pub windows_limit: Option<usize>,
    pub solver: SolverConfig,
}

impl BacktestConfig {
    fn validate(&self, n_periods: usize) -> Result<()> {
        if self.train_window < 2 {
            return Err(Error::Config("training window must be at least 2".into()));
        }
        if self.rebalance_period < 1 {
            return Err(Error::Config("rebalance period must be at least 1".into()));
        }
        if self.train_window + self.rebalance_period > n_periods {
            return Err(Error::Config(format!(
                "need at least train + rebalance = {} rows, file has {}",
                self.train_window + self.rebalance_period,
                n_periods
            )));
        }
        Ok(())
    }
}

/// One executed (or skipped) window.
#[derive(Debug, Clone)]
pub struct WindowResult {
    pub index: usize,
    pub hold_start: usize,
    pub hold_end: usize,
    pub sparsity: usize,
    pub leverage: f64,
    pub in_sample_mean: f64,
    pub in_sample_variance: f64,
    pub weights: DVector<f64>,
    pub realized: Vec<f64>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BacktestReport {
    pub windows: Vec<WindowResult>,
    pub n_skipped: usize,
    pub oos_mean: f64,
    pub oos_variance: f64,
    /// Per-period mean over per-period standard deviation of the realized
    /// series; `None` when the realized variance is zero.
    pub sharpe: Option<f64>,
    pub avg_sparsity: f64,
    pub avg_leverage: f64,
}

impl BacktestReport {
    /// Concatenated realized out-of-sample series across executed windows.
    pub fn realized_series(&self) -> Vec<f64> {
        self.windows
            .iter()
            .filter(|w| w.skipped.is_none())
            .flat_map(|w| w.realized.iter().copied())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("window,start,end,sparsity,leverage,is_mean,is_var\n");
        for w in &self.windows {
            if w.skipped.is_some() {
                out.push_str(&format!(
                    "{},{},{},nan,nan,nan,nan\n",
                    w.index, w.hold_start, w.hold_end
                ));
            } else {
                out.push_str(&format!(
                    "{},{},{},{},{:.17e},{:.17e},{:.17e}\n",
                    w.index,
                    w.hold_start,
                    w.hold_end,
                    w.sparsity,
                    w.leverage,
                    w.in_sample_mean,
                    w.in_sample_variance
                ));
            }
        }
        out.push_str(&format!(
            "# aggregate: {:.17e},{:.17e},{},{:.17e},{:.17e}\n",
            self.oos_mean,
            self.oos_variance,
            self.sharpe
                .map_or("nan".to_string(), |s| format!("{s:.17e}")),
            self.avg_sparsity,
            self.avg_leverage
        ));
        out
    }
}

fn sample_mean_var(series: &[f64]) -> (f64, f64) {
    let t = series.len();
    if t == 0 {
        return (0.0, 0.0);
    }
    let mean = series.iter().sum::<f64>() / t as f64;
    if t < 2 {
        return (mean, 0.0);
    }
    let var = series.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (t - 1) as f64;
    (mean, var)
}

/// Runs the rolling-window protocol. Window `w` trains on rows
/// `[w r, w r + train)` and holds over `[w r + train, w r + train + r)`,
/// truncated at the end of the data; weights never see held rows.
pub fn run_backtest(returns: &ReturnsMatrix, config: &BacktestConfig) -> Result<BacktestReport> {
    config.validate(returns.n_periods())?;
    let t = returns.n_periods();
    let n = returns.n_assets();
    let r = config.rebalance_period;
    let train = config.train_window;

    let mut windows = Vec::new();
    let mut index = 0;
    loop {
        if let Some(limit) = config.windows_limit {
            if index >= limit {
                break;
            }
        }
        let train_start = index * r;
        let hold_start = train_start + train;
        if hold_start >= t {
            break;
        }
        let hold_end = (hold_start + r).min(t);
        let window = compute_window(returns, config, index, train_start, hold_start, hold_end);
        windows.push(window);
        index += 1;
        if hold_end == t {
            break;
        }
    }
    if windows.is_empty() {
        return Err(Error::Config("no executable windows".into()));
    }

    let executed: Vec<&WindowResult> = windows.iter().filter(|w| w.skipped.is_none()).collect();
    let n_skipped = windows.len() - executed.len();
    let series: Vec<f64> = executed
        .iter()
        .flat_map(|w| w.realized.iter().copied())
        .collect();
    let (oos_mean, oos_variance) = sample_mean_var(&series);
    let sharpe = if oos_variance > 0.0 {
        Some(oos_mean / oos_variance.sqrt())
    } else {
        None
    };
    let denom = executed.len().max(1) as f64;
    let avg_sparsity = executed.iter().map(|w| w.sparsity as f64).sum::<f64>() / denom;
    let avg_leverage = executed.iter().map(|w| w.leverage).sum::<f64>() / denom;
    let _ = n;
    Ok(BacktestReport {
        windows,
        n_skipped,
        oos_mean,
        oos_variance,
        sharpe,
        avg_sparsity,
        avg_leverage,
    })
}

fn compute_window(
    returns: &ReturnsMatrix,
    config: &BacktestConfig,
    index: usize,
    train_start: usize,
    hold_start: usize,
    hold_end: usize,
) -> WindowResult {
    let n = returns.n_assets();
    let skipped = |msg: String| WindowResult {
        index,
        hold_start,
        hold_end,
        sparsity: 0,
        leverage: 0.0,
        in_sample_mean: 0.0,
        in_sample_variance: 0.0,
        weights: DVector::zeros(n),
        realized: Vec::new(),
        skipped: Some(msg),
    };

    let train_slice = match returns.window(train_start, hold_start) {
        Ok(w) => w,
        Err(e) => return skipped(e.to_string()),
    };
    let market = match estimate_market(&train_slice) {
        Ok(m) => m,
        Err(e) => return skipped(e.to_string()),
    };

    let weights = match &config.strategy {
        Strategy::EqualWeight => DVector::from_element(n, 1.0 / n as f64),
        Strategy::Model(spec) => {
            let mut spec = spec.clone();
            spec.phi = match &config.phi_policy {
                PhiPolicy::Fixed(phi) => *phi,
                PhiPolicy::Calibrate { m0 } => {
                    match solver::calibrate_phi(&market, *m0, &spec.variant) {
                        Ok(phi) => phi,
                        Err(e) => return skipped(format!("calibration failed: {e}")),
                    }
                }
            };
            let form = match build_general_form(&spec, &market) {
                Ok(f) => f,
                Err(e) => return skipped(format!("form construction failed: {e}")),
            };
            match solver::solve(&form, spec.lambda, spec.p, &config.solver) {
                Ok(res) => res.weights,
                Err(e) => return skipped(format!("solver failed: {e}")),
            }
        }
    };

    let sparsity = weights.iter().filter(|w| w.abs() > 0.0).count();
    let leverage = model::leverage(&weights);
    let in_sample_mean = market.mean().dot(&weights);
    let in_sample_variance = (weights.transpose() * market.cov() * &weights)[(0, 0)];
    let realized: Vec<f64> = (hold_start..hold_end)
        .map(|t| weights.dot(&returns.period(t)))
        .collect();
    WindowResult {
        index,
        hold_start,
        hold_end,
        sparsity,
        leverage,
        in_sample_mean,
        in_sample_variance,
        weights,
        realized,
        skipped: None,
    }
}

/// One frontier row of a lambda sweep.
#[derive(Debug, Clone)]
pub struct FrontierRow {
    pub lambda: f64,
    pub avg_sparsity: f64,
    pub oos_mean: f64,
    pub oos_variance: f64,
    pub sharpe: Option<f64>,
    pub avg_leverage: f64,
}

pub fn frontier_csv(rows: &[FrontierRow]) -> String {
    let mut out = String::from("lambda,avg_sparsity,oos_mean,oos_var,sharpe,avg_leverage\n");
    for r in rows {
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{},{:.17e}\n",
            r.lambda,
            r.avg_sparsity,
            r.oos_mean,
            r.oos_variance,
            r.sharpe.map_or("nan".to_string(), |s| format!("{s:.17e}")),
            r.avg_leverage
        ));
    }
    out
}

/// Runs the backtest once per penalty weight and tabulates the frontier.
pub fn lambda_sweep(
    returns: &ReturnsMatrix,
    config: &BacktestConfig,
    lambdas: &[f64],
) -> Result<Vec<FrontierRow>> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut cfg = config.clone();
        match &mut cfg.strategy {
            Strategy::Model(spec) => {
                if lambda < 0.0 {
                    return Err(Error::Spec(format!("lambda must be >= 0, got {lambda}")));
                }
                spec.lambda = lambda;
            }
            Strategy::EqualWeight => {
                return Err(Error::Config(
                    "lambda sweep needs a model strategy".into(),
                ))
            }
        }
        let report = run_backtest(returns, &cfg)?;
        rows.push(FrontierRow {
            lambda,
            avg_sparsity: report.avg_sparsity,
            oos_mean: report.oos_mean,
            oos_variance: report.oos_variance,
            sharpe: report.sharpe,
            avg_leverage: report.avg_leverage,
        });
    }
    Ok(rows)
}
