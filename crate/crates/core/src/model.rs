//! Model variants and their reduction to the canonical nonnegatively
//! constrained form
//!
//! ```text
//!     minimize   1/2 x' Qhat x - chat' x + lambda * sum_{j in R} x_j^p
//!     subject to A x = b,  x >= 0
//! ```
//!
//! together with objective/derivative evaluation and the back-map from
//! canonical variables to portfolio weights.

use crate::error::{Error, Result};
use crate::linalg::null_space;
use crate::market::MarketEstimate;
use nalgebra::{DMatrix, DVector};

/// Which portfolio model to solve.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelVariant {
    /// Unregularized mean-variance, shorting allowed (split form, lambda 0).
    Markowitz,
    /// Unregularized mean-variance with the no-shorting constraint.
    MarkowitzNoShort,
    /// lp-regularized, no shorting.
    LpNoShort,
    /// lp-regularized, shorting allowed via the positive/negative split.
    LpShort,
    /// lp-regularized with an l1-ball budget `|x|_1 <= delta`, `delta > 1`.
    L1BallLp,
    /// lp- and l2-regularized, shorting allowed.
    L2Lp,
    /// Sparse adjustment of an existing portfolio (anchor `a`).
    DynamicLp,
}

/// A fully parameterized model instance. `c = phi * m` is always derived
/// from the market estimate at reduction time, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub variant: ModelVariant,
    pub lambda: f64,
    pub p: f64,
    pub phi: f64,
    pub delta: Option<f64>,
    pub mu: Option<f64>,
    pub anchor: Option<DVector<f64>>,
}

pub const DEFAULT_P: f64 = 0.5;

impl ModelSpec {
    fn base(variant: ModelVariant, lambda: f64, p: f64, phi: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Spec(format!("lambda must be >= 0, got {lambda}")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Spec(format!("p must lie in (0,1), got {p}")));
        }
        if !(phi >= 0.0 && phi.is_finite()) {
            return Err(Error::Spec(format!("phi must be >= 0, got {phi}")));
        }
        Ok(Self {
            variant,
            lambda,
            p,
            phi,
            delta: None,
            mu: None,
            anchor: None,
        })
    }

    pub fn markowitz(phi: f64) -> Result<Self> {
        Self::base(ModelVariant::Markowitz, 0.0, DEFAULT_P, phi)
    }

    pub fn markowitz_no_short(phi: f64) -> Result<Self> {
        Self::base(ModelVariant::MarkowitzNoShort, 0.0, DEFAULT_P, phi)
    }

    pub fn lp_no_short(lambda: f64, p: f64, phi: f64) -> Result<Self> {
        Self::base(ModelVariant::LpNoShort, lambda, p, phi)
    }

    pub fn lp_short(lambda: f64, p: f64, phi: f64) -> Result<Self> {
        Self::base(ModelVariant::LpShort, lambda, p, phi)
    }

    pub fn l1_ball_lp(lambda: f64, p: f64, phi: f64, delta: f64) -> Result<Self> {
        if !(delta > 1.0) {
            return Err(Error::Spec(format!("delta must exceed 1, got {delta}")));
        }
        let mut s = Self::base(ModelVariant::L1BallLp, lambda, p, phi)?;
        s.delta = Some(delta);
        Ok(s)
    }

    pub fn l2_lp(lambda: f64, p: f64, phi: f64, mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Spec(format!("mu must be >= 0, got {mu}")));
        }
        let mut s = Self::base(ModelVariant::L2Lp, lambda, p, phi)?;
        s.mu = Some(mu);
        Ok(s)
    }

    pub fn dynamic_lp(lambda: f64, p: f64, phi: f64, anchor: DVector<f64>) -> Result<Self> {
        if anchor.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Spec("anchor weights must be finite and >= 0".into()));
        }
        if (anchor.sum() - 1.0).abs() > 1e-10 {
            return Err(Error::Spec(format!(
                "anchor weights must sum to 1, got {}",
                anchor.sum()
            )));
        }
        let mut s = Self::base(ModelVariant::DynamicLp, lambda, p, phi)?;
        s.anchor = Some(anchor);
        Ok(s)
    }

    /// Whether the canonical form splits weights into positive/negative parts.
    pub fn is_split(&self) -> bool {
        matches!(
            self.variant,
            ModelVariant::Markowitz
                | ModelVariant::LpShort
                | ModelVariant::L1BallLp
                | ModelVariant::L2Lp
                | ModelVariant::DynamicLp
        )
    }
}

/// How canonical variables map back to portfolio weights.
#[derive(Debug, Clone, PartialEq)]
pub enum BackMap {
    /// Canonical variables are the weights.
    Direct,
    /// `w = x[0..n] - x[n..2n]`; anything past `2n` is slack.
    Split { n: usize },
    /// `w = anchor + y[0..n] - y[n..2n]`; trailing `n` slacks bound `y-`.
    Dynamic { anchor: DVector<f64> },
}

/// The canonical problem plus everything needed to interpret a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralForm {
    qhat: DMatrix<f64>,
    chat: DVector<f64>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    /// true where the coordinate carries the lp penalty (slacks never do).
    reg_mask: Vec<bool>,
    back_map: BackMap,
    interior: DVector<f64>,
}

impl GeneralForm {
    fn new(
        qhat: DMatrix<f64>,
        chat: DVector<f64>,
        a: DMatrix<f64>,
        b: DVector<f64>,
        reg_mask: Vec<bool>,
        back_map: BackMap,
        interior: DVector<f64>,
    ) -> Result<Self> {
        let n = chat.len();
        debug_assert_eq!(qhat.nrows(), n);
        debug_assert_eq!(a.ncols(), n);
        debug_assert_eq!(a.nrows(), b.len());
        debug_assert_eq!(reg_mask.len(), n);
        if null_space(&a, 1e-12).is_none() {
            return Err(Error::Infeasible("constraint matrix is rank deficient".into()));
        }
        let feas = (&a * &interior - &b).norm();
        let scale = 1.0 + b.norm();
        if feas > 1e-10 * scale || interior.iter().any(|v| *v <= 0.0) {
            return Err(Error::Infeasible(
                "no strictly feasible interior point for this instance".into(),
            ));
        }
        Ok(Self {
            qhat,
            chat,
            a,
            b,
            reg_mask,
            back_map,
            interior,
        })
    }

    pub fn dim(&self) -> usize {
        self.chat.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.a.nrows()
    }

    pub fn qhat(&self) -> &DMatrix<f64> {
        &self.qhat
    }

    pub fn chat(&self) -> &DVector<f64> {
        &self.chat
    }

    pub fn constraints(&self) -> (&DMatrix<f64>, &DVector<f64>) {
        (&self.a, &self.b)
    }

    pub fn reg_mask(&self) -> &[bool] {
        &self.reg_mask
    }

    pub fn back_map_kind(&self) -> &BackMap {
        &self.back_map
    }

    /// Closed-form strictly feasible point, also the default solver start.
    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior
    }

    /// Number of underlying portfolio weights.
    pub fn n_weights(&self) -> usize {
        match &self.back_map {
            BackMap::Direct => self.dim(),
            BackMap::Split { n } => *n,
            BackMap::Dynamic { anchor } => anchor.len(),
        }
    }

    /// Maps a canonical point to portfolio weights (slacks dropped).
    pub fn back_map(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        match &self.back_map {
            BackMap::Direct => {
                if x.len() != self.dim() {
                    return Err(Error::Spec("dimension mismatch in back_map".into()));
                }
                Ok(x.clone())
            }
            BackMap::Split { n } => {
                if x.len() != self.dim() {
                    return Err(Error::Spec("dimension mismatch in back_map".into()));
                }
                Ok(DVector::from_fn(*n, |i, _| x[i] - x[n + i]))
            }
            BackMap::Dynamic { anchor } => {
                if x.len() != self.dim() {
                    return Err(Error::Spec("dimension mismatch in back_map".into()));
                }
                let n = anchor.len();
                Ok(DVector::from_fn(n, |i, _| anchor[i] + x[i] - x[n + i]))
            }
        }
    }

    /// f(x) = 1/2 x'Qhat x - chat'x + lambda sum_R x_j^p, defined for x >= 0
    /// with the penalty extended by continuity at zero.
    pub fn objective(&self, x: &DVector<f64>, lambda: f64, p: f64) -> Result<f64> {
        if x.iter().any(|v| *v < 0.0) {
            return Err(Error::Spec("objective requires x >= 0".into()));
        }
        let quad = 0.5 * (x.transpose() * &self.qhat * x)[(0, 0)] - self.chat.dot(x);
        let mut penalty = 0.0;
        if lambda > 0.0 {
            for (j, &in_r) in self.reg_mask.iter().enumerate() {
                if in_r {
                    penalty += x[j].powf(p);
                }
            }
        }
        Ok(quad + lambda * penalty)
    }

    /// Gradient and Hessian at a strictly interior point.
    pub fn gradient_hessian(
        &self,
        x: &DVector<f64>,
        lambda: f64,
        p: f64,
    ) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if x.iter().any(|v| *v <= 0.0) {
            return Err(Error::Spec("derivatives require strictly positive x".into()));
        }
        let mut grad = &self.qhat * x - &self.chat;
        let mut hess = self.qhat.clone();
        if lambda > 0.0 {
            for (j, &in_r) in self.reg_mask.iter().enumerate() {
                if in_r {
                    grad[j] += lambda * p * x[j].powf(p - 1.0);
                    hess[(j, j)] += lambda * p * (p - 1.0) * x[j].powf(p - 2.0);
                }
            }
        }
        Ok((grad, hess))
    }
}

/// Reduces a model instance over the given market to the canonical form.
pub fn build_general_form(spec: &ModelSpec, market: &MarketEstimate) -> Result<GeneralForm> {
    let n = market.n_assets();
    let q = market.cov();
    let c = market.mean() * spec.phi;
    let e_row = |len: usize| DMatrix::from_element(1, len, 1.0);

    match spec.variant {
        ModelVariant::MarkowitzNoShort | ModelVariant::LpNoShort => {
            let a = e_row(n);
            let b = DVector::from_element(1, 1.0);
            let interior = DVector::from_element(n, 1.0 / n as f64);
            GeneralForm::new(
                q.clone(),
                c,
                a,
                b,
                vec![true; n],
                BackMap::Direct,
                interior,
            )
        }
        ModelVariant::Markowitz | ModelVariant::LpShort | ModelVariant::L2Lp => {
            let big_n = 2 * n;
            let mut qhat = split_quadratic(q);
            if spec.variant == ModelVariant::L2Lp {
                let mu = spec.mu.ok_or_else(|| Error::Spec("l2_lp requires mu".into()))?;
                for i in 0..n {
                    qhat[(i, i)] += 2.0 * mu;
                    qhat[(n + i, n + i)] += 2.0 * mu;
                    qhat[(i, n + i)] -= 2.0 * mu;
                    qhat[(n + i, i)] -= 2.0 * mu;
                }
            }
            let chat = stack_vec(&c, &(-&c), 0);
            let mut a = DMatrix::zeros(1, big_n);
            for i in 0..n {
                a[(0, i)] = 1.0;
                a[(0, n + i)] = -1.0;
            }
            let b = DVector::from_element(1, 1.0);
            let mut interior = DVector::from_element(big_n, 0.5 / n as f64);
            for i in 0..n {
                interior[i] = 1.5 / n as f64;
            }
            GeneralForm::new(
                qhat,
                chat,
                a,
                b,
                vec![true; big_n],
                BackMap::Split { n },
                interior,
            )
        }
        ModelVariant::L1BallLp => {
            let delta = spec
                .delta
                .ok_or_else(|| Error::Spec("l1_ball_lp requires delta".into()))?;
            let big_n = 2 * n + 1;
            let qhat = pad_square(&split_quadratic(q), big_n);
            let chat = stack_vec(&c, &(-&c), 1);
            let mut a = DMatrix::zeros(2, big_n);
            for i in 0..n {
                a[(0, i)] = 1.0;
                a[(0, n + i)] = -1.0;
                a[(1, i)] = 1.0;
                a[(1, n + i)] = 1.0;
            }
            a[(1, 2 * n)] = 1.0;
            let b = DVector::from_vec(vec![1.0, delta]);
            // Interior point: short mass v = (delta-1)/4 split evenly, long
            // mass 1 + v, leaving slack (delta-1)/2 > 0.
            let v = 0.25 * (delta - 1.0);
            let u = 1.0 + v;
            let mut interior = DVector::zeros(big_n);
            for i in 0..n {
                interior[i] = u / n as f64;
                interior[n + i] = v / n as f64;
            }
            interior[2 * n] = delta - u - v;
            let mut reg = vec![true; big_n];
            reg[2 * n] = false;
            GeneralForm::new(qhat, chat, a, b, reg, BackMap::Split { n }, interior)
        }
        ModelVariant::DynamicLp => {
            let anchor = spec
                .anchor
                .clone()
                .ok_or_else(|| Error::Spec("dynamic_lp requires an anchor portfolio".into()))?;
            if anchor.len() != n {
                return Err(Error::Spec(format!(
                    "anchor has {} entries for {} assets",
                    anchor.len(),
                    n
                )));
            }
            if anchor.iter().any(|v| *v <= 0.0) {
                return Err(Error::Infeasible(
                    "dynamic model needs a strictly positive anchor for strict feasibility".into(),
                ));
            }
            let big_n = 3 * n;
            let qhat = pad_square(&split_quadratic(q), big_n);
            let qa_minus_c = q * &anchor - &c;
            let chat = stack_vec(&(-&qa_minus_c), &qa_minus_c, n);
            let mut a = DMatrix::zeros(n + 1, big_n);
            for i in 0..n {
                a[(0, i)] = 1.0;
                a[(0, n + i)] = -1.0;
                a[(1 + i, n + i)] = 1.0;
                a[(1 + i, 2 * n + i)] = 1.0;
            }
            let mut b = DVector::zeros(n + 1);
            for i in 0..n {
                b[1 + i] = anchor[i];
            }
            let mut interior = DVector::zeros(big_n);
            let theta = 0.25;
            for i in 0..n {
                interior[n + i] = theta * anchor[i];
                interior[2 * n + i] = (1.0 - theta) * anchor[i];
                interior[i] = theta / n as f64;
            }
            let mut reg = vec![true; big_n];
            for item in reg.iter_mut().skip(2 * n) {
                *item = false;
            }
            GeneralForm::new(qhat, chat, a, b, reg, BackMap::Dynamic { anchor }, interior)
        }
    }
}

/// [[Q, -Q], [-Q, Q]] for the positive/negative split.
fn split_quadratic(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = q[(i, j)];
            out[(n + i, n + j)] = q[(i, j)];
            out[(i, n + j)] = -q[(i, j)];
            out[(n + i, j)] = -q[(i, j)];
        }
    }
    out
}

fn pad_square(m: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(dim, dim);
    out.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    out
}

fn stack_vec(top: &DVector<f64>, bottom: &DVector<f64>, extra_zeros: usize) -> DVector<f64> {
    let mut out = DVector::zeros(top.len() + bottom.len() + extra_zeros);
    out.rows_mut(0, top.len()).copy_from(top);
    out.rows_mut(top.len(), bottom.len()).copy_from(bottom);
    out
}

/// Coordinates of a canonical point above the zero threshold.
pub fn support(x: &DVector<f64>, zero_threshold: f64) -> Vec<usize> {
    (0..x.len()).filter(|&j| x[j] > zero_threshold).collect()
}

/// Truncates back-mapped weights at the zero threshold and renormalizes to
/// unit budget. Iterates remain strictly interior, so thresholding is how
/// the reported support is determined.
pub fn truncate_and_renormalize(weights: &DVector<f64>, zero_threshold: f64) -> DVector<f64> {
    let mut out = weights.map(|w| if w.abs() <= zero_threshold { 0.0 } else { w });
    let total = out.sum();
    if total.abs() > 1e-12 {
        out /= total;
    }
    out
}

/// Largest pairwise overlap min(x+_j, x-_j) of a split solution; `None`
/// for direct forms.
pub fn complementarity_violation(form: &GeneralForm, x: &DVector<f64>) -> Option<f64> {
    let n = match form.back_map_kind() {
        BackMap::Direct => return None,
        BackMap::Split { n } => *n,
        BackMap::Dynamic { anchor } => anchor.len(),
    };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max(x[i].min(x[n + i]));
    }
    Some(worst)
}

/// l1 norm of a weight vector (portfolio leverage; 2 e'x^- + 1 at unit budget).
pub fn leverage(weights: &DVector<f64>) -> f64 {
    weights.iter().map(|w| w.abs()).sum()
}
