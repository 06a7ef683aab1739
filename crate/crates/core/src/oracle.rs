//! Ground-truth solvers at desk scale: an exact active-set convex QP over
//! the simplex (optionally with extra equality rows), exhaustive support
//! enumeration for cardinality-constrained selection, and the paired
//! lp-vs-cardinality comparison table.

use crate::error::{Error, Result};
use crate::linalg::{least_squares, sym_eigen_sorted, sym_solve_min_norm};
use crate::market::MarketEstimate;
use nalgebra::{DMatrix, DVector};

/// Default cap for exhaustive support enumeration.
pub const DEFAULT_N_LIMIT: usize = 20;

/// Exact solution of `min 1/2 x'Qx - c'x` under equality rows and
/// (optionally) nonnegativity bounds.
#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x: DVector<f64>,
    /// Multipliers of the equality rows, in row order.
    pub eq_duals: DVector<f64>,
    /// Multipliers of the active bounds (zero elsewhere / when bounds off).
    pub bound_duals: DVector<f64>,
    pub objective: f64,
}

/// Orthonormal basis of the null space of `a`, tolerant of row-rank
/// deficiency (returns the full geometric null space).
fn null_space_tolerant(a: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let gram = a.transpose() * a;
    let (vals, vecs) = sym_eigen_sorted(&gram);
    let scale = vals[vals.len() - 1].max(1.0);
    let cols: Vec<usize> = (0..n).filter(|&i| vals[i] <= 1e-12 * scale).collect();
    let mut out = DMatrix::zeros(n, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &vecs.column(i));
    }
    out
}

/// Primal active-set method over the bound constraints, with exact KKT
/// solves on each working set and Bland-style (smallest index) selection
/// for entering/leaving bounds.
pub fn solve_convex_qp(
    q: &DMatrix<f64>,
    c: &DVector<f64>,
    a_eq: &DMatrix<f64>,
    b_eq: &DVector<f64>,
    nonneg: bool,
    start: Option<DVector<f64>>,
) -> Result<QpSolution> {
    let n = c.len();
    if q.nrows() != n || q.ncols() != n || a_eq.ncols() != n || a_eq.nrows() != b_eq.len() {
        return Err(Error::Spec("QP dimension mismatch".into()));
    }
    let mut x = match start {
        Some(x0) => x0,
        None => default_start(a_eq, b_eq, nonneg)?,
    };
    let feas_tol = 1e-9 * (1.0 + b_eq.norm());
    if (a_eq * &x - b_eq).norm() > feas_tol || (nonneg && x.iter().any(|v| *v < -1e-12)) {
        return Err(Error::Infeasible("QP starting point is infeasible".into()));
    }
    if nonneg {
        x = x.map(|v| v.max(0.0));
    }

    let objective = |x: &DVector<f64>| 0.5 * (x.transpose() * q * x)[(0, 0)] - c.dot(x);
    // Working set: indices pinned at their zero bound.
    let mut working: Vec<bool> = if nonneg {
        (0..n).map(|i| x[i] == 0.0).collect()
    } else {
        vec![false; n]
    };

    let max_pass = 400 + 80 * n;
    for _ in 0..max_pass {
        let free: Vec<usize> = (0..n).filter(|&i| !working[i]).collect();
        let nf = free.len();
        let grad = q * &x - c;

        // Equality-constrained step on the free variables.
        let a_f = DMatrix::from_fn(a_eq.nrows(), nf, |r, j| a_eq[(r, free[j])]);
        let z = null_space_tolerant(&a_f, nf);
        let p = if z.ncols() == 0 {
            DVector::zeros(n)
        } else {
            let q_ff = DMatrix::from_fn(nf, nf, |i, j| q[(free[i], free[j])]);
            let h = z.transpose() * &q_ff * &z;
            let g_f = DVector::from_fn(nf, |j, _| grad[free[j]]);
            let g_red = z.transpose() * &g_f;
            let (v, out_of_range) = sym_solve_min_norm(&h, &(-&g_red), 1e-11);
            if out_of_range.norm() > 1e-10 * (1.0 + g_red.norm()) {
                // Objective is linear and decreasing along this curvature-free
                // direction (out_of_range is the null-space part of -g):
                // ride it to a blocking bound.
                let dir = &z * &out_of_range;
                let p = embed(&dir, &free, n);
                let (alpha, blocker) = max_step(&x, &p, nonneg, f64::INFINITY);
                match blocker {
                    None => {
                        return Err(Error::Numerical(
                            "objective is unbounded below on the feasible set".into(),
                        ))
                    }
                    Some(i) => {
                        x += &p * alpha;
                        x[i] = 0.0;
                        working[i] = true;
                        continue;
                    }
                }
            }
            embed(&(&z * v), &free, n)
        };

        if p.norm() <= 1e-11 * (1.0 + x.norm()) {
            // Stationary on the working set: check bound multipliers.
            let (eq_duals, bound_duals) = recover_duals(q, c, a_eq, &x, &working);
            let entering = (0..n)
                .filter(|&i| working[i] && bound_duals[i] < -1e-10 * (1.0 + grad.norm()))
                .min();
            match entering {
                None => {
                    return Ok(QpSolution {
                        objective: objective(&x),
                        x,
                        eq_duals,
                        bound_duals: bound_duals.map(|v| v.max(0.0)),
                    });
                }
                Some(i) => {
                    working[i] = false;
                    continue;
                }
            }
        }

        let (alpha, blocker) = max_step(&x, &p, nonneg, 1.0);
        x += &p * alpha;
        if let Some(i) = blocker {
            x[i] = 0.0;
            working[i] = true;
        }
    }
    Err(Error::Internal("active-set QP failed to converge".into()))
}

fn embed(p_free: &DVector<f64>, free: &[usize], n: usize) -> DVector<f64> {
    let mut p = DVector::zeros(n);
    for (j, &i) in free.iter().enumerate() {
        p[i] = p_free[j];
    }
    p
}

/// Largest feasible step along `p` up to `cap`; returns the smallest-index
/// blocking bound if one binds first.
fn max_step(x: &DVector<f64>, p: &DVector<f64>, nonneg: bool, cap: f64) -> (f64, Option<usize>) {
    if !nonneg {
        return if cap.is_finite() { (cap, None) } else { (1.0, None) };
    }
    let mut alpha = cap;
    let mut blocker = None;
    for i in 0..x.len() {
        if p[i] < -1e-14 {
            let a = x[i] / -p[i];
            if a < alpha - 1e-15 {
                alpha = a;
                blocker = Some(i);
            }
        }
    }
    if !alpha.is_finite() {
        return (alpha, None);
    }
    (alpha.max(0.0), blocker)
}

fn recover_duals(
    q: &DMatrix<f64>,
    c: &DVector<f64>,
    a_eq: &DMatrix<f64>,
    x: &DVector<f64>,
    working: &[bool],
) -> (DVector<f64>, DVector<f64>) {
    let n = c.len();
    let grad = q * x - c;
    let free: Vec<usize> = (0..n).filter(|&i| !working[i]).collect();
    // grad = A_eq' nu on the free coordinates.
    let at_free = DMatrix::from_fn(free.len(), a_eq.nrows(), |j, r| a_eq[(r, free[j])]);
    let g_free = DVector::from_fn(free.len(), |j, _| grad[free[j]]);
    let nu = least_squares(&at_free, &g_free);
    let resid = &grad - a_eq.transpose() * &nu;
    let mut bound = DVector::zeros(n);
    for i in 0..n {
        if working[i] {
            bound[i] = resid[i];
        }
    }
    (nu, bound)
}

fn default_start(a_eq: &DMatrix<f64>, b_eq: &DVector<f64>, nonneg: bool) -> Result<DVector<f64>> {
    let n = a_eq.ncols();
    // Budget-row-only problems start at the equal-weight point.
    if a_eq.nrows() == 1 && (0..n).all(|j| (a_eq[(0, j)] - 1.0).abs() < 1e-14) {
        return Ok(DVector::from_element(n, b_eq[0] / n as f64));
    }
    let x = least_squares(&a_eq.clone(), b_eq);
    if (a_eq * &x - b_eq).norm() > 1e-9 * (1.0 + b_eq.norm()) {
        return Err(Error::Infeasible("equality rows are inconsistent".into()));
    }
    if nonneg && x.iter().any(|v| *v < -1e-12) {
        return Err(Error::Infeasible(
            "no nonnegative starting point available; supply one explicitly".into(),
        ));
    }
    Ok(x)
}

/// Result of exhaustive cardinality-constrained selection.
#[derive(Debug, Clone)]
pub struct CcpsResult {
    /// Lexicographically smallest optimal support of size <= K.
    pub best_support: Vec<usize>,
    /// Optimal weights embedded in full dimension.
    pub weights: DVector<f64>,
    /// Minimal unregularized objective 1/2 x'Qx - c'x.
    pub objective: f64,
    /// Best objective and support per cardinality 1..=K.
    pub per_k_frontier: Vec<CcpsFrontierRow>,
}

#[derive(Debug, Clone)]
pub struct CcpsFrontierRow {
    pub k: usize,
    pub objective: f64,
    pub support: Vec<usize>,
    pub weights: DVector<f64>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // Advance the rightmost index that can move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact cardinality-constrained portfolio selection by support
/// enumeration: every support of size <= `k` is solved as a convex QP over
/// its simplex, and the global best is returned.
pub fn solve_ccps(
    market: &MarketEstimate,
    phi: f64,
    k: usize,
    n_limit: usize,
) -> Result<CcpsResult> {
    let n = market.n_assets();
    if k < 1 {
        return Err(Error::Spec("cardinality limit must be at least 1".into()));
    }
    if n > n_limit {
        return Err(Error::Size(format!(
            "{n} assets exceeds the enumeration limit {n_limit}"
        )));
    }
    let k = k.min(n);
    let c_full = market.mean() * phi;
    let mut frontier: Vec<CcpsFrontierRow> = Vec::with_capacity(k);
    for size in 1..=k {
        let mut best: Option<CcpsFrontierRow> = None;
        for support in combinations(n, size) {
            let sub = market.restrict(&support);
            let c_s = DVector::from_fn(size, |i, _| c_full[support[i]]);
            let a = DMatrix::from_element(1, size, 1.0);
            let b = DVector::from_element(1, 1.0);
            let sol = solve_convex_qp(sub.cov(), &c_s, &a, &b, true, None)?;
            if best.as_ref().map_or(true, |b| sol.objective < b.objective) {
                let mut weights = DVector::zeros(n);
                for (i, &j) in support.iter().enumerate() {
                    weights[j] = sol.x[i];
                }
                best = Some(CcpsFrontierRow {
                    k: size,
                    objective: sol.objective,
                    support,
                    weights,
                });
            }
        }
        let mut row = best.ok_or_else(|| Error::Internal("empty enumeration".into()))?;
        // A smaller support can only be matched, never beaten, by accident of
        // ties; keep the frontier monotone non-increasing.
        if let Some(prev) = frontier.last() {
            if prev.objective < row.objective {
                row = CcpsFrontierRow {
                    k: size,
                    objective: prev.objective,
                    support: prev.support.clone(),
                    weights: prev.weights.clone(),
                };
            }
        }
        frontier.push(row);
    }
    let best = frontier.last().unwrap().clone();
    Ok(CcpsResult {
        best_support: best.support,
        weights: best.weights,
        objective: best.objective,
        per_k_frontier: frontier,
    })
}

/// One paired row of the lp-vs-cardinality comparison.
#[derive(Debug, Clone)]
pub struct LpCcpsRow {
    pub lambda: f64,
    pub k: usize,
    pub lp_mean: f64,
    pub lp_variance: f64,
    pub lp_objective: f64,
    pub ccps_mean: f64,
    pub ccps_variance: f64,
    pub ccps_objective: f64,
    /// (lp - ccps) / max(|ccps|, 1e-12) on the unregularized objective.
    pub objective_gap: f64,
}

impl LpCcpsRow {
    pub fn csv_header() -> &'static str {
        "lambda,k,lp_mean,lp_variance,lp_objective,ccps_mean,ccps_variance,ccps_objective,objective_gap"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.lambda,
            self.k,
            self.lp_mean,
            self.lp_variance,
            self.lp_objective,
            self.ccps_mean,
            self.ccps_variance,
            self.ccps_objective,
            self.objective_gap
        )
    }
}

/// Unregularized objective, mean, and variance of a weight vector.
pub fn portfolio_stats(market: &MarketEstimate, phi: f64, w: &DVector<f64>) -> (f64, f64, f64) {
    let mean = market.mean().dot(w);
    let var = (w.transpose() * market.cov() * w)[(0, 0)];
    (mean, var, 0.5 * var - phi * mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy4() -> MarketEstimate {
        MarketEstimate::new(
            DVector::zeros(4),
            DMatrix::from_row_slice(
                4,
                4,
                &[
                    8.0, 7.0, 6.0, 6.0, 7.0, 26.0, 6.0, 0.0, 6.0, 6.0, 96.0, -68.0, 6.0, 0.0,
                    -68.0, 73.0,
                ],
            ),
        )
        .unwrap()
    }

    fn toy1() -> MarketEstimate {
        MarketEstimate::new(
            DVector::from_vec(vec![1.0, 2.0, 3.0]),
            DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0]),
        )
        .unwrap()
    }

    fn assert_kkt(
        q: &DMatrix<f64>,
        c: &DVector<f64>,
        a: &DMatrix<f64>,
        b: &DVector<f64>,
        sol: &QpSolution,
        nonneg: bool,
    ) {
        let grad = q * &sol.x - c;
        let stat = &grad - a.transpose() * &sol.eq_duals - &sol.bound_duals;
        assert!(stat.norm() < 1e-9 * (1.0 + grad.norm()), "stationarity");
        assert!((a * &sol.x - b).norm() < 1e-9 * (1.0 + b.norm()), "primal eq");
        if nonneg {
            assert!(sol.x.min() > -1e-12, "primal bounds");
            for i in 0..sol.x.len() {
                assert!(sol.bound_duals[i] > -1e-10, "dual sign");
                assert!(
                    (sol.bound_duals[i] * sol.x[i]).abs() < 1e-10,
                    "complementary slackness"
                );
            }
        }
    }

    #[test]
    fn toy1_qp_matches_closed_form() {
        let m = toy1();
        let c = m.mean() * 0.01;
        let a = DMatrix::from_element(1, 3, 1.0);
        let b = DVector::from_element(1, 1.0);
        let sol = solve_convex_qp(m.cov(), &c, &a, &b, true, None).unwrap();
        let expect = DVector::from_vec(vec![0.3233333333, 0.3333333333, 0.3433333333]);
        assert!((&sol.x - &expect).norm() < 1e-9);
        assert_kkt(m.cov(), &c, &a, &b, &sol, true);
    }

    #[test]
    fn identity_covariance_gives_equal_weights() {
        let n = 5;
        let q = DMatrix::identity(n, n);
        let c = DVector::zeros(n);
        let a = DMatrix::from_element(1, n, 1.0);
        let b = DVector::from_element(1, 1.0);
        let sol = solve_convex_qp(&q, &c, &a, &b, true, None).unwrap();
        assert!((&sol.x - DVector::from_element(n, 0.2)).norm() < 1e-12);
    }

    #[test]
    fn active_bounds_engage_when_unconstrained_optimum_is_negative() {
        // Strongly favor asset 2; asset 1 pinned at zero.
        let q = DMatrix::identity(2, 2);
        let c = DVector::from_vec(vec![0.0, 3.0]);
        let a = DMatrix::from_element(1, 2, 1.0);
        let b = DVector::from_element(1, 1.0);
        let sol = solve_convex_qp(&q, &c, &a, &b, true, None).unwrap();
        assert!((sol.x[0] - 0.0).abs() < 1e-12);
        assert!((sol.x[1] - 1.0).abs() < 1e-12);
        assert_kkt(&q, &c, &a, &b, &sol, true);
    }

    #[test]
    fn singular_q_resolves_to_an_optimum() {
        // Third asset duplicates an equal mix of the first two.
        let q = DMatrix::from_row_slice(3, 3, &[3.0, 1.0, 2.0, 1.0, 7.0, 4.0, 2.0, 4.0, 3.0]);
        let c = DVector::from_vec(vec![0.01, 0.03, 0.02]);
        let a = DMatrix::from_element(1, 3, 1.0);
        let b = DVector::from_element(1, 1.0);
        let sol = solve_convex_qp(&q, &c, &a, &b, true, None).unwrap();
        assert!((sol.objective - 1.234975).abs() < 1e-10);
        assert_kkt(&q, &c, &a, &b, &sol, true);
    }

    #[test]
    fn unbounded_without_bounds_is_reported() {
        // Singular Q with gradient mass on the null direction and no bounds.
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let c = DVector::from_vec(vec![0.0, 1.0]);
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let b = DVector::from_element(1, 1.0);
        let err = solve_convex_qp(&q, &c, &a, &b, false, None).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn projected_gradient_cross_check_on_random_instances() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = 5;
            let bmat = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let q = &bmat * bmat.transpose() + DMatrix::identity(n, n) * 0.05;
            let c = DVector::from_fn(n, |_, _| rng.gen_range(-0.1..0.1));
            let a = DMatrix::from_element(1, n, 1.0);
            let b = DVector::from_element(1, 1.0);
            let sol = solve_convex_qp(&q, &c, &a, &b, true, None).unwrap();
            assert_kkt(&q, &c, &a, &b, &sol, true);

            // Independent method: projected gradient descent on the simplex.
            let mut x = DVector::from_element(n, 1.0 / n as f64);
            let lip = q.norm() + 1.0;
            for _ in 0..200_000 {
                let g = &q * &x - &c;
                x = project_simplex(&(x - g / lip));
            }
            let f_pg = 0.5 * (x.transpose() * &q * &x)[(0, 0)] - c.dot(&x);
            assert!(
                (sol.objective - f_pg).abs() < 1e-8,
                "active set {} vs projected gradient {}",
                sol.objective,
                f_pg
            );
        }
    }

    fn project_simplex(v: &DVector<f64>) -> DVector<f64> {
        let n = v.len();
        let mut u: Vec<f64> = v.iter().cloned().collect();
        u.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut css = 0.0;
        let mut rho = 0;
        let mut theta = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            css += ui;
            let t = (css - 1.0) / (i + 1) as f64;
            if ui - t > 0.0 {
                rho = i;
                theta = t;
            }
        }
        let _ = rho;
        DVector::from_fn(n, |i, _| (v[i] - theta).max(0.0))
    }

    #[test]
    fn ccps_single_stock_is_stock_one() {
        let r = solve_ccps(&toy4(), 0.01, 1, DEFAULT_N_LIMIT).unwrap();
        assert_eq!(r.best_support, vec![0]);
        assert!((r.objective - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ccps_pair_is_three_and_four() {
        let r = solve_ccps(&toy4(), 0.01, 2, DEFAULT_N_LIMIT).unwrap();
        assert_eq!(r.best_support, vec![2, 3]);
        assert!((r.objective - 3.9081967213).abs() < 1e-8);
    }

    #[test]
    fn ccps_triple_excludes_stock_one() {
        let r = solve_ccps(&toy4(), 0.01, 3, DEFAULT_N_LIMIT).unwrap();
        assert!(!r.best_support.contains(&0));
        assert_eq!(r.best_support, vec![1, 2, 3]);
    }

    #[test]
    fn ccps_full_cardinality_equals_unconstrained() {
        let m = toy4();
        let r = solve_ccps(&m, 0.01, 4, DEFAULT_N_LIMIT).unwrap();
        let a = DMatrix::from_element(1, 4, 1.0);
        let b = DVector::from_element(1, 1.0);
        let c = m.mean() * 0.01;
        let full = solve_convex_qp(m.cov(), &c, &a, &b, true, None).unwrap();
        assert!((r.objective - full.objective).abs() < 1e-12);
    }

    #[test]
    fn frontier_is_monotone() {
        let r = solve_ccps(&toy4(), 0.01, 4, DEFAULT_N_LIMIT).unwrap();
        for pair in r.per_k_frontier.windows(2) {
            assert!(pair[1].objective <= pair[0].objective + 1e-15);
        }
    }

    #[test]
    fn size_and_cardinality_guards() {
        assert!(matches!(
            solve_ccps(&toy4(), 0.01, 0, DEFAULT_N_LIMIT),
            Err(Error::Spec(_))
        ));
        assert!(matches!(
            solve_ccps(&toy4(), 0.01, 2, 3),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn enumeration_matches_simplex_grid_search() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5 {
            let n = 3;
            let bmat = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let q = &bmat * bmat.transpose() + DMatrix::identity(n, n) * 0.1;
            let m = DVector::from_fn(n, |_, _| rng.gen_range(0.0..0.05));
            let market = MarketEstimate::new(m, q).unwrap();
            let phi = 0.02;
            let k = rng.gen_range(1..=n);
            let exact = solve_ccps(&market, phi, k, DEFAULT_N_LIMIT).unwrap();

            // Grid with step 1e-3 over the simplex, restricted to <= k names.
            let steps = 1000usize;
            let c = market.mean() * phi;
            let mut best = f64::INFINITY;
            for i in 0..=steps {
                for j in 0..=(steps - i) {
                    let w = DVector::from_vec(vec![
                        i as f64 / steps as f64,
                        j as f64 / steps as f64,
                        (steps - i - j) as f64 / steps as f64,
                    ]);
                    if w.iter().filter(|v| **v > 0.0).count() > k {
                        continue;
                    }
                    let f = 0.5 * (w.transpose() * market.cov() * &w)[(0, 0)] - c.dot(&w);
                    best = best.min(f);
                }
            }
            assert!(exact.objective <= best + 1e-12);
            let slack = 2.0 * (market.cov().norm() + c.norm()) * 1e-3;
            assert!(best - exact.objective <= slack);
        }
    }
}
