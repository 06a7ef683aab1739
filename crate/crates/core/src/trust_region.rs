//! Exact solver for the affine-scaled, null-space-projected, ball-constrained
//! quadratic subproblem
//!
//! ```text
//!     minimize   1/2 d' Qtilde d + ctilde' d
//!     subject to AX d = 0,  |d| <= radius
//! ```
//!
//! The step is computed in reduced coordinates `d = N v` where `N` is an
//! orthonormal null-space basis of `AX`. The reduced ball problem is solved
//! globally through an eigendecomposition: interior Newton step when the
//! reduced Hessian is positive definite and the step fits, otherwise a
//! safeguarded secular-equation root for the boundary multiplier, with an
//! explicit eigenvector step in the hard case.

use crate::error::{Error, Result};
use crate::linalg::{least_squares, null_space, sym_eigen_sorted};
use nalgebra::{DMatrix, DVector};

/// One affine-scaled trust-region subproblem.
#[derive(Debug, Clone)]
pub struct Subproblem {
    qtilde: DMatrix<f64>,
    ctilde: DVector<f64>,
    ax: DMatrix<f64>,
    radius: f64,
}

impl Subproblem {
    pub fn new(
        qtilde: DMatrix<f64>,
        ctilde: DVector<f64>,
        ax: DMatrix<f64>,
        radius: f64,
    ) -> Result<Self> {
        let n = ctilde.len();
        if qtilde.nrows() != n || qtilde.ncols() != n || ax.ncols() != n {
            return Err(Error::Spec("subproblem dimension mismatch".into()));
        }
        if (qtilde.transpose() - &qtilde).norm() > 1e-10 * (1.0 + qtilde.norm()) {
            return Err(Error::Spec("scaled Hessian must be symmetric".into()));
        }
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Spec(format!(
                "trust radius must lie in (0,1), got {radius}"
            )));
        }
        Ok(Self {
            qtilde,
            ctilde,
            ax,
            radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.ctilde.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn qtilde(&self) -> &DMatrix<f64> {
        &self.qtilde
    }

    pub fn ctilde(&self) -> &DVector<f64> {
        &self.ctilde
    }

    pub fn ax(&self) -> &DMatrix<f64> {
        &self.ax
    }

    /// Model value 1/2 d'Qd + c'd of a candidate step.
    pub fn model_value(&self, d: &DVector<f64>) -> f64 {
        0.5 * (d.transpose() * &self.qtilde * d)[(0, 0)] + self.ctilde.dot(d)
    }
}

/// Global solution of a subproblem.
#[derive(Debug, Clone)]
pub struct TrSolution {
    /// Step in scaled coordinates; `AX * dtilde = 0`, `|dtilde| <= radius`.
    pub dtilde: DVector<f64>,
    /// Ball multiplier, `mu >= 0`, complementary with the radius.
    pub mu: f64,
    /// Dual estimate for the equality rows (least squares from stationarity).
    pub y: DVector<f64>,
    /// Whether the reduced Hessian had negative curvature.
    pub negative_curvature: bool,
}

/// Orthonormal basis of the null space of `ax`; errors if `ax` is row-rank
/// deficient.
pub fn null_space_basis(ax: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    null_space(ax, 1e-12)
        .ok_or_else(|| Error::Numerical("degenerate constraints: AX is rank deficient".into()))
}

/// Reduced-coordinate global solution over the ball `|v| <= radius`:
/// returns `(v, mu, negative_curvature)` for `min 1/2 v'Hv + g'v`.
fn solve_reduced_ball(h: &DMatrix<f64>, g: &DVector<f64>, radius: f64) -> (DVector<f64>, f64, bool) {
    let m = g.len();
    if m == 0 {
        return (DVector::zeros(0), 0.0, false);
    }
    let (eigvals, eigvecs) = sym_eigen_sorted(h);
    let lambda_min = eigvals[0];
    let scale = eigvals[m - 1].abs().max(lambda_min.abs()).max(1.0);
    let tol0 = 1e-12 * scale;
    let gbar = eigvecs.transpose() * g;
    let negative_curvature = lambda_min < -tol0;

    // Coordinates of w(mu) = -(H + mu I)^{-1} g in the eigenbasis, skipping
    // (pseudo-inverting) denominators at or below `gap`.
    let w_pseudo = |mu: f64, gap: f64| -> (DVector<f64>, f64) {
        let mut w = DVector::<f64>::zeros(m);
        let mut dropped_mass = 0.0;
        for i in 0..m {
            let denom = eigvals[i] + mu;
            if denom > gap {
                w[i] = -gbar[i] / denom;
            } else {
                dropped_mass += gbar[i].abs();
            }
        }
        (w, dropped_mass)
    };

    let mu_low = (-lambda_min).max(0.0);
    let (w_low, dropped) = w_pseudo(mu_low, tol0);
    let has_mass_on_min = dropped > 1e-13 * (1.0 + g.norm());

    if !negative_curvature && !has_mass_on_min && w_low.norm() <= radius {
        // Interior (or boundary-touching) minimum-norm Newton step, mu = 0.
        return (eigvecs * w_low, 0.0, negative_curvature);
    }
    if negative_curvature && !has_mass_on_min && w_low.norm() < radius {
        // Hard case: pad with the minimal eigenvector to reach the boundary.
        let tau = (radius * radius - w_low.norm_squared()).sqrt();
        let mut z = eigvecs.column(0).into_owned();
        // Deterministic orientation.
        let lead = z.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if lead < 0.0 {
            z = -z;
        }
        let v = eigvecs * w_low + z * tau;
        return (v, mu_low, negative_curvature);
    }

    // Boundary solution: find mu in (mu_low, mu_hi] with |w(mu)| = radius.
    let norm_at = |mu: f64| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            let denom = eigvals[i] + mu;
            let t = gbar[i] / denom;
            s += t * t;
        }
        s.sqrt()
    };
    let deriv_sq_at = |mu: f64| -> f64 {
        // d/dmu of |w(mu)|^2
        let mut s = 0.0;
        for i in 0..m {
            let denom = eigvals[i] + mu;
            s += -2.0 * gbar[i] * gbar[i] / (denom * denom * denom);
        }
        s
    };

    let gnorm = gbar.norm();
    let mut lo = mu_low + 1e-14 * (1.0 + mu_low);
    let mut hi = mu_low + gnorm / radius + 1.0;
    while norm_at(hi) > radius {
        hi = mu_low + 2.0 * (hi - mu_low);
    }
    if norm_at(lo) < radius {
        // Root pinned against mu_low (near-hard case); lo is already the best
        // bracket start.
        lo = mu_low;
    }
    let mut mu = 0.5 * (lo + hi);
    for _ in 0..200 {
        let s = norm_at(mu);
        if (s - radius).abs() <= 1e-13 * radius {
            break;
        }
        if s > radius {
            lo = mu;
        } else {
            hi = mu;
        }
        // Newton step on 1/radius - 1/|w(mu)|, clamped to the bracket.
        let sp = deriv_sq_at(mu) / (2.0 * s);
        let newton = mu - (1.0 / radius - 1.0 / s) * s * s / sp;
        mu = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-16 * (1.0 + hi) {
            break;
        }
    }
    let (w, _) = w_pseudo(mu, 0.0);
    // Rescale exactly onto the boundary to keep complementarity tight.
    let wn = w.norm();
    let w = if wn > 0.0 { w * (radius / wn) } else { w };
    (eigvecs * w, mu, negative_curvature)
}

/// Solves the subproblem globally and recovers the equality dual by least
/// squares from the stationarity system.
pub fn solve_tr(sub: &Subproblem) -> Result<TrSolution> {
    let basis = null_space_basis(&sub.ax)?;
    let reduced_dim = basis.ncols();
    let (dtilde, mu, negative_curvature) = if reduced_dim == 0 {
        (DVector::zeros(sub.dim()), 0.0, false)
    } else {
        let h = basis.transpose() * &sub.qtilde * &basis;
        let g = basis.transpose() * &sub.ctilde;
        let (v, mu, neg) = solve_reduced_ball(&h, &g, sub.radius);
        (&basis * v, mu, neg)
    };
    // (Qtilde + mu I) d + ctilde = (AX)' y
    let rhs = &sub.qtilde * &dtilde + &dtilde * mu + &sub.ctilde;
    let y = least_squares(&sub.ax.transpose(), &rhs);
    Ok(TrSolution {
        dtilde,
        mu,
        y,
        negative_curvature,
    })
}
