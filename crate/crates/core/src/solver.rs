//! Affine-scaling trust-region interior-point solver with scaled first- and
//! second-order KKT certification.
//!
//! Iterates stay strictly feasible: the step solves the ball-constrained
//! subproblem in scaled coordinates `dtilde = X^{-1} d` with radius
//! `beta * sqrt(eps) < 1`, so `x_{k+1} = x_k (1 + dtilde)` keeps every
//! coordinate positive while `A x = b` is preserved exactly.

use crate::error::{Error, Result};
use crate::linalg::{least_squares, min_eigenvalue};
use crate::market::MarketEstimate;
use crate::model::{self, GeneralForm, ModelVariant};
use crate::oracle;
use crate::trust_region::{null_space_basis, solve_tr, Subproblem};
use nalgebra::{DMatrix, DVector};

/// Solver parameters.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Certification tolerance, in (0, 1].
    pub eps: f64,
    /// Trust parameter; clamped to the provable range for the given lambda.
    pub beta: f64,
    pub max_iters: usize,
    /// Support cutoff for reported weights.
    pub zero_threshold: f64,
    /// Strictly feasible starting point; defaults to the closed-form
    /// interior point of the general form.
    pub start: Option<DVector<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-4,
            beta: 0.45,
            max_iters: 200_000,
            zero_threshold: 1e-6,
            start: None,
        }
    }
}

impl SolverConfig {
    pub fn with_eps(eps: f64) -> Self {
        Self {
            eps,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::Spec(format!("eps must lie in (0,1], got {}", self.eps)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Spec(format!("beta must be positive, got {}", self.beta)));
        }
        if self.max_iters == 0 {
            return Err(Error::Spec("max_iters must be at least 1".into()));
        }
        if !(self.zero_threshold > 0.0) {
            return Err(Error::Spec("zero threshold must be positive".into()));
        }
        Ok(())
    }
}

/// Largest trust parameter covered by the convergence guarantee at this
/// lambda: min{1/2, sqrt(2/lambda), 3/((18 sqrt 2 + 2) lambda)}.
pub fn provable_beta_bound(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.5;
    }
    let b1 = (2.0 / lambda).sqrt();
    let b2 = 3.0 / ((18.0 * 2.0f64.sqrt() + 2.0) * lambda);
    0.5f64.min(b1).min(b2)
}

/// Scaled KKT certificate at a feasible point.
#[derive(Debug, Clone)]
pub struct KktCertificate {
    /// |X(Qx - c) + lambda p x^p on R - X A' y| with the least-squares dual.
    pub first_order_residual: f64,
    /// Smallest eigenvalue of N'(XQX + X d2pen X)N plus sqrt(eps), with N a
    /// null-space basis of AX.
    pub second_order_margin: f64,
    pub eps_used: f64,
}

impl KktCertificate {
    /// An eps-scaled second-order KKT point: residual within eps and the
    /// shifted projected Hessian positive semidefinite (to 1e-8).
    pub fn is_certified(&self) -> bool {
        self.first_order_residual <= self.eps_used && self.second_order_margin >= -1e-8
    }
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// mu_k <= (lambda/6) |dtilde| fired; the step lands on a certified point.
    LemmaStep,
    /// Certificate passed at the working point.
    Certified,
    /// Step collapsed below 1e-12.
    Stationary,
    /// Iteration cap reached; best iterate returned uncertified.
    IterationLimit,
}

/// One loop iteration: objective at the pre-step point, ball multiplier,
/// and scaled step norm.
#[derive(Debug, Clone, Copy)]
pub struct TraceEntry {
    pub objective: f64,
    pub mu: f64,
    pub step_norm: f64,
}

/// Final iterate with duals, certificate, support, and the iteration trace.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Final canonical iterate (strictly positive).
    pub x: DVector<f64>,
    /// Dual estimate for the equality rows.
    pub y: DVector<f64>,
    /// Back-mapped weights after thresholding and renormalization.
    pub weights: DVector<f64>,
    /// Canonical coordinates above the zero threshold.
    pub support: Vec<usize>,
    pub certificate: KktCertificate,
    pub certified: bool,
    pub termination: Termination,
    pub iterations: usize,
    /// General-form objective at the final iterate.
    pub objective: f64,
    pub trace: Vec<TraceEntry>,
    pub warnings: Vec<String>,
}

/// Scaled first-order pieces at `x`: the penalized scaled gradient
/// `v = X(Qx-c) + lambda p x^p on R`, the least-squares dual for
/// `X A' y ~ v`, and the residual norm.
fn scaled_first_order(
    form: &GeneralForm,
    x: &DVector<f64>,
    lambda: f64,
    p: f64,
) -> (f64, DVector<f64>) {
    let (a, _) = form.constraints();
    let n = form.dim();
    let rows = a.nrows();
    let mut v = form.qhat() * x - form.chat();
    for j in 0..n {
        v[j] *= x[j];
    }
    if lambda > 0.0 {
        for (j, &in_r) in form.reg_mask().iter().enumerate() {
            if in_r {
                v[j] += lambda * p * x[j].powf(p);
            }
        }
    }
    // Least squares for (X A') y = v via the normal equations, with an SVD
    // fallback when the scaled rows are degenerate.
    let mut gram = DMatrix::<f64>::zeros(rows, rows);
    let mut rhs = DVector::<f64>::zeros(rows);
    for r in 0..rows {
        for s in r..rows {
            let mut acc = 0.0;
            for j in 0..n {
                acc += a[(r, j)] * a[(s, j)] * x[j] * x[j];
            }
            gram[(r, s)] = acc;
            gram[(s, r)] = acc;
        }
        let mut acc = 0.0;
        for j in 0..n {
            acc += a[(r, j)] * x[j] * v[j];
        }
        rhs[r] = acc;
    }
    let y = match gram.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => {
            let xat = DMatrix::from_fn(n, rows, |j, r| x[j] * a[(r, j)]);
            least_squares(&xat, &v)
        }
    };
    let mut resid = v;
    for j in 0..n {
        let mut acc = 0.0;
        for r in 0..rows {
            acc += a[(r, j)] * y[r];
        }
        resid[j] -= x[j] * acc;
    }
    (resid.norm(), y)
}

/// Smallest eigenvalue of the projected scaled Hessian at `x` (before the
/// sqrt(eps) shift).
fn projected_hessian_min_eig(
    form: &GeneralForm,
    x: &DVector<f64>,
    lambda: f64,
    p: f64,
) -> Result<f64> {
    let (a, _) = form.constraints();
    let n = form.dim();
    let mut m = form.qhat().clone();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] *= x[i] * x[j];
        }
    }
    if lambda > 0.0 {
        for (j, &in_r) in form.reg_mask().iter().enumerate() {
            if in_r {
                m[(j, j)] += lambda * p * (p - 1.0) * x[j].powf(p);
            }
        }
    }
    let ax = scale_columns(a, x);
    let basis = null_space_basis(&ax)?;
    if basis.ncols() == 0 {
        return Ok(0.0);
    }
    Ok(min_eigenvalue(&(basis.transpose() * m * basis)))
}

fn scale_columns(a: &DMatrix<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, j| a[(r, j)] * x[j])
}

/// Evaluates the scaled KKT certificate at a feasible `x >= 0`. When `y` is
/// not supplied, the dual minimizing the reported residual is used.
pub fn certify(
    form: &GeneralForm,
    x: &DVector<f64>,
    y: Option<&DVector<f64>>,
    lambda: f64,
    p: f64,
    eps: f64,
) -> Result<KktCertificate> {
    if x.iter().any(|v| *v < 0.0) {
        return Err(Error::Spec("certificate requires x >= 0".into()));
    }
    let (a, b) = form.constraints();
    if (a * x - b).norm() > 1e-8 * (1.0 + b.norm()) {
        return Err(Error::Spec("certificate requires A x = b".into()));
    }
    let first_order_residual = match y {
        None => scaled_first_order(form, x, lambda, p).0,
        Some(y) => {
            let n = form.dim();
            let mut v = form.qhat() * x - form.chat();
            for j in 0..n {
                v[j] *= x[j];
            }
            if lambda > 0.0 {
                for (j, &in_r) in form.reg_mask().iter().enumerate() {
                    if in_r {
                        v[j] += lambda * p * x[j].powf(p);
                    }
                }
            }
            let aty = a.transpose() * y;
            for j in 0..n {
                v[j] -= x[j] * aty[j];
            }
            v.norm()
        }
    };
    let second_order_margin = projected_hessian_min_eig(form, x, lambda, p)? + eps.sqrt();
    Ok(KktCertificate {
        first_order_residual,
        second_order_margin,
        eps_used: eps,
    })
}

/// Runs the interior-point loop on a general form.
pub fn solve(
    form: &GeneralForm,
    lambda: f64,
    p: f64,
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    if !(lambda >= 0.0) {
        return Err(Error::Spec("lambda must be >= 0".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Spec("p must lie in (0,1)".into()));
    }
    let mut warnings = Vec::new();
    let bound = provable_beta_bound(lambda);
    let beta = if config.beta > bound {
        warnings.push(format!(
            "beta {} clamped to the provable bound {bound:.6}",
            config.beta
        ));
        bound
    } else {
        config.beta
    };
    let radius = beta * config.eps.sqrt();
    debug_assert!(radius < 1.0);

    let (a, b) = form.constraints();
    let n = form.dim();
    let mut x = match &config.start {
        Some(x0) => {
            if x0.len() != n {
                return Err(Error::Spec("starting point has wrong dimension".into()));
            }
            if x0.iter().any(|v| *v <= 0.0) || (a * x0 - b).norm() > 1e-8 * (1.0 + b.norm()) {
                return Err(Error::Infeasible(
                    "starting point is not strictly feasible".into(),
                ));
            }
            x0.clone()
        }
        None => form.interior_point().clone(),
    };

    // The Lemma-based exit constant is specific to the square-root penalty;
    // for other exponents only the certificate can stop the loop early.
    let lemma_exit_enabled = lambda == 0.0 || p == 0.5;

    let mut f_curr = form.objective(&x, lambda, p)?;
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut termination = Termination::IterationLimit;
    let mut y_final: Option<DVector<f64>> = None;

    for _ in 0..config.max_iters {
        let qtilde = {
            let mut m = form.qhat().clone();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] *= x[i] * x[j];
                }
            }
            if lambda > 0.0 {
                for (j, &in_r) in form.reg_mask().iter().enumerate() {
                    if in_r {
                        m[(j, j)] += lambda * p * (p - 1.0) * x[j].powf(p);
                    }
                }
            }
            m
        };
        let ctilde = {
            let mut v = form.qhat() * &x - form.chat();
            for j in 0..n {
                v[j] *= x[j];
            }
            if lambda > 0.0 {
                for (j, &in_r) in form.reg_mask().iter().enumerate() {
                    if in_r {
                        v[j] += lambda * p * x[j].powf(p);
                    }
                }
            }
            v
        };
        let ax = scale_columns(a, &x);
        let sub = Subproblem::new(qtilde, ctilde, ax, radius)?;
        let sol = solve_tr(&sub)?;
        let step_norm = sol.dtilde.norm();
        trace.push(TraceEntry {
            objective: f_curr,
            mu: sol.mu,
            step_norm,
        });

        if step_norm <= 1e-12 {
            y_final = Some(sol.y);
            termination = Termination::Stationary;
            break;
        }

        let x_next = DVector::from_fn(n, |j, _| x[j] * (1.0 + sol.dtilde[j]));
        debug_assert!(x_next.iter().all(|v| *v > 0.0));
        let f_next = form.objective(&x_next, lambda, p)?;

        if lemma_exit_enabled && sol.mu <= lambda / 6.0 * step_norm {
            if f_next <= f_curr + 1e-12 {
                x = x_next;
                f_curr = f_next;
            } else {
                warnings.push(
                    "final step would increase the objective; returning the pre-step iterate"
                        .into(),
                );
            }
            y_final = Some(sol.y);
            termination = Termination::LemmaStep;
            break;
        }

        if f_next > f_curr + 1e-12 {
            return Err(Error::Internal(format!(
                "objective increased by {} on an accepted step (trust-region kernel bug)",
                f_next - f_curr
            )));
        }
        x = x_next;
        f_curr = f_next;

        let (resid, y) = scaled_first_order(form, &x, lambda, p);
        if resid <= config.eps {
            let margin = projected_hessian_min_eig(form, &x, lambda, p)? + config.eps.sqrt();
            if margin >= -1e-8 {
                y_final = Some(y);
                termination = Termination::Certified;
                break;
            }
        }
    }

    let certificate = certify(form, &x, None, lambda, p, config.eps)?;
    let certified = certificate.is_certified();
    let y = match y_final {
        Some(y) => y,
        None => scaled_first_order(form, &x, lambda, p).1,
    };
    let weights_raw = form.back_map(&x)?;
    let weights = model::truncate_and_renormalize(&weights_raw, config.zero_threshold);
    let support = model::support(&x, config.zero_threshold);
    let iterations = trace.len();
    Ok(SolveResult {
        x,
        y,
        weights,
        support,
        certificate,
        certified,
        termination,
        iterations,
        objective: f_curr,
        trace,
        warnings,
    })
}

/// Calibrates the return-reward multiplier from a target return: solves the
/// constrained unregularized model and returns the multiplier of the
/// `m'x >= m0` row (zero when the constraint is slack at the minimum-variance
/// portfolio).
pub fn calibrate_phi(market: &MarketEstimate, m0: f64, variant: &ModelVariant) -> Result<f64> {
    if !m0.is_finite() {
        return Err(Error::Spec("target return must be finite".into()));
    }
    let no_short = matches!(
        variant,
        ModelVariant::MarkowitzNoShort | ModelVariant::LpNoShort | ModelVariant::DynamicLp
    );
    let n = market.n_assets();
    let q = market.cov();
    let m = market.mean();
    let ones_row = DMatrix::from_element(1, n, 1.0);
    let unit = DVector::from_element(1, 1.0);

    if no_short {
        let m_max = m.max();
        if m0 > m_max + 1e-12 {
            return Err(Error::Infeasible(format!(
                "target return {m0} exceeds the best asset mean {m_max}"
            )));
        }
        let gmv = oracle::solve_convex_qp(q, &DVector::zeros(n), &ones_row, &unit, true, None)?;
        if m.dot(&gmv.x) >= m0 - 1e-12 {
            return Ok(0.0);
        }
        // Tight return constraint: resolve with it as an equality row.
        let mut a = DMatrix::zeros(2, n);
        let mut b = DVector::zeros(2);
        for j in 0..n {
            a[(0, j)] = 1.0;
            a[(1, j)] = m[j];
        }
        b[0] = 1.0;
        b[1] = m0;
        let lo = m
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .unwrap()
            .0;
        let hi = m
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .unwrap()
            .0;
        let start = if (m[hi] - m[lo]).abs() < 1e-15 {
            DVector::from_element(n, 1.0 / n as f64)
        } else {
            let t = ((m0 - m[lo]) / (m[hi] - m[lo])).clamp(0.0, 1.0);
            let mut s = DVector::zeros(n);
            s[lo] = 1.0 - t;
            s[hi] += t;
            s
        };
        let sol = oracle::solve_convex_qp(q, &DVector::zeros(n), &a, &b, true, Some(start))?;
        return Ok(sol.eq_duals[1].max(0.0));
    }

    // Shorting allowed: equality-constrained KKT systems in closed form.
    let spread = m.max() - m.min();
    if spread < 1e-14 {
        return if m0 <= m.mean() + 1e-12 {
            Ok(0.0)
        } else {
            Err(Error::Infeasible(
                "all asset means are equal; the target return is unreachable".into(),
            ))
        };
    }
    let solve_kkt = |with_return: bool| -> Result<(DVector<f64>, f64)> {
        let rows = n + 1 + usize::from(with_return);
        let mut k = DMatrix::<f64>::zeros(rows, rows);
        let mut rhs = DVector::<f64>::zeros(rows);
        for i in 0..n {
            for j in 0..n {
                k[(i, j)] = q[(i, j)];
            }
            k[(i, n)] = -1.0;
            k[(n, i)] = 1.0;
            if with_return {
                k[(i, n + 1)] = -m[i];
                k[(n + 1, i)] = m[i];
            }
        }
        rhs[n] = 1.0;
        if with_return {
            rhs[n + 1] = m0;
        }
        let z = least_squares(&k, &rhs);
        if (&k * &z - &rhs).norm() > 1e-8 * (1.0 + rhs.norm()) {
            return Err(Error::Infeasible(
                "KKT system for the return target is inconsistent".into(),
            ));
        }
        let x = DVector::from_fn(n, |i, _| z[i]);
        let phi = if with_return { z[n + 1] } else { 0.0 };
        Ok((x, phi))
    };
    let (x_gmv, _) = solve_kkt(false)?;
    if m.dot(&x_gmv) >= m0 - 1e-12 {
        return Ok(0.0);
    }
    let (_, phi) = solve_kkt(true)?;
    Ok(phi.max(0.0))
}
