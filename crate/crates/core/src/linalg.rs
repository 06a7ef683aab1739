//! Small dense linear-algebra helpers shared by the solver kernels.

use nalgebra::{DMatrix, DVector};

/// Householder QR of a tall matrix `a` (n x p, n >= p) with the full
/// orthogonal factor accumulated explicitly.
///
/// Returns `(q, r)` with `q` n x n orthogonal and `r` n x p upper triangular
/// such that `q * r = a`. The thin factorizations in nalgebra do not expose
/// the orthogonal complement, which is what the null-space construction
/// needs, so we accumulate the reflectors ourselves.
pub fn householder_qr_full(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let p = a.ncols();
    let mut r = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);

    for k in 0..p.min(n.saturating_sub(1)) {
        // Householder vector for column k below the diagonal.
        let mut v = DVector::<f64>::zeros(n - k);
        for i in k..n {
            v[i - k] = r[(i, k)];
        }
        let alpha = -v[0].signum() * v.norm();
        if alpha == 0.0 {
            continue;
        }
        v[0] -= alpha;
        let vnorm = v.norm();
        if vnorm <= f64::EPSILON * alpha.abs() {
            continue;
        }
        v /= vnorm;

        // r <- (I - 2 v v^T) r on the trailing block.
        for j in k..p {
            let mut dot = 0.0;
            for i in k..n {
                dot += v[i - k] * r[(i, j)];
            }
            for i in k..n {
                r[(i, j)] -= 2.0 * v[i - k] * dot;
            }
        }
        // q <- q (I - 2 v v^T), accumulating the product of reflectors.
        for i in 0..n {
            let mut dot = 0.0;
            for j in k..n {
                dot += q[(i, j)] * v[j - k];
            }
            for j in k..n {
                q[(i, j)] -= 2.0 * dot * v[j - k];
            }
        }
    }
    (q, r)
}

/// Numerical row rank of an upper-triangular factor, judged against the
/// largest diagonal magnitude.
fn triangular_rank(r: &DMatrix<f64>, rel_tol: f64) -> usize {
    let p = r.ncols().min(r.nrows());
    let mut max_diag: f64 = 0.0;
    for i in 0..p {
        max_diag = max_diag.max(r[(i, i)].abs());
    }
    if max_diag == 0.0 {
        return 0;
    }
    (0..p).filter(|&i| r[(i, i)].abs() > rel_tol * max_diag).count()
}

/// Orthonormal basis of the null space of `a` (p x n, p <= n), obtained from
/// the full QR of `a^T`. Returns `None` if `a` is rank deficient.
pub fn null_space(a: &DMatrix<f64>, rank_rel_tol: f64) -> Option<DMatrix<f64>> {
    let p = a.nrows();
    let n = a.ncols();
    debug_assert!(p <= n);
    if p == 0 {
        return Some(DMatrix::<f64>::identity(n, n));
    }
    let (q, r) = householder_qr_full(&a.transpose());
    if triangular_rank(&r, rank_rel_tol) < p {
        return None;
    }
    Some(q.columns(p, n - p).into_owned())
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// ascending. Returns `(values, vectors)` with `vectors` column i paired
/// with `values[i]`. The input is symmetrized first so that tiny
/// asymmetries from accumulated products cannot leak in.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut values = DVector::<f64>::zeros(n);
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (new, &old) in idx.iter().enumerate() {
        values[new] = eig.eigenvalues[old];
        vectors.set_column(new, &eig.eigenvectors.column(old));
    }
    (values, vectors)
}

/// Smallest eigenvalue of a symmetric matrix; 0 for the empty matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let (values, _) = sym_eigen_sorted(m);
    values[0]
}

/// Minimum-norm least-squares solution of `a x = b` via SVD.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-13 * svd.singular_values.max().max(1.0))
        .expect("svd solve")
}

/// Solves the symmetric system `m x = b` through an eigendecomposition,
/// returning the minimum-norm solution when `m` is singular. The second
/// return value is the residual component of `b` outside the range of `m`
/// (zero when the system is consistent).
pub fn sym_solve_min_norm(
    m: &DMatrix<f64>,
    b: &DVector<f64>,
    rank_rel_tol: f64,
) -> (DVector<f64>, DVector<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), DVector::zeros(0));
    }
    let (values, vectors) = sym_eigen_sorted(m);
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = rank_rel_tol * scale.max(1.0);
    let proj = vectors.transpose() * b;
    let mut x = DVector::<f64>::zeros(n);
    let mut out_of_range = DVector::<f64>::zeros(n);
    for i in 0..n {
        if values[i].abs() > tol {
            x += vectors.column(i) * (proj[i] / values[i]);
        } else {
            out_of_range += vectors.column(i) * proj[i];
        }
    }
    (x, out_of_range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn qr_reconstructs_and_q_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..8);
            let p = rng.gen_range(1..=n);
            let a = random_matrix(&mut rng, n, p);
            let (q, r) = householder_qr_full(&a);
            assert!((q.transpose() * &q - DMatrix::identity(n, n)).norm() < 1e-12);
            assert!((&q * &r - &a).norm() < 1e-12);
        }
    }

    #[test]
    fn null_space_annihilates_and_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(3..9);
            let p = rng.gen_range(1..n);
            let a = random_matrix(&mut rng, p, n);
            let basis = null_space(&a, 1e-12).expect("full rank");
            assert_eq!(basis.ncols(), n - p);
            assert!((&a * &basis).norm() < 1e-12 * (1.0 + a.norm()));
            assert!(
                (basis.transpose() * &basis - DMatrix::identity(n - p, n - p)).norm() < 1e-12
            );
        }
    }

    #[test]
    fn null_space_rejects_rank_deficient() {
        let mut a = DMatrix::<f64>::zeros(2, 4);
        a.set_row(0, &nalgebra::RowDVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]).row(0));
        a.set_row(1, &nalgebra::RowDVector::from_vec(vec![2.0, 2.0, 0.0, 0.0]).row(0));
        assert!(null_space(&a, 1e-10).is_none());
    }

    #[test]
    fn eigen_sorted_matches_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(2..7);
            let b = random_matrix(&mut rng, n, n);
            let m = &b * b.transpose();
            let (values, vectors) = sym_eigen_sorted(&m);
            for i in 1..n {
                assert!(values[i] >= values[i - 1]);
            }
            assert!((&m - &vectors * DMatrix::from_diagonal(&values) * vectors.transpose())
                .norm()
                < 1e-10 * (1.0 + m.norm()));
        }
    }

    #[test]
    fn min_norm_solve_handles_singular_systems() {
        // m has null space span{[1,1,-2]}; pick b in range(m).
        let m = DMatrix::from_row_slice(3, 3, &[3.0, 1.0, 2.0, 1.0, 7.0, 4.0, 2.0, 4.0, 3.0]);
        let target = DVector::from_vec(vec![0.2, 0.5, 0.3]);
        let b = &m * &target;
        let (x, out) = sym_solve_min_norm(&m, &b, 1e-10);
        assert!(out.norm() < 1e-10);
        assert!((&m * &x - &b).norm() < 1e-10);
        // Minimum norm: orthogonal to null direction.
        let u = DVector::from_vec(vec![1.0, 1.0, -2.0]);
        assert!(x.dot(&u).abs() < 1e-9);
    }
}
