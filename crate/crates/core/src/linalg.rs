//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, Matrix4};

/// Minimum-norm least-squares solution of `a x = b` via SVD.
pub fn min_norm_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = smax * 1e-13 * (a.nrows().max(a.ncols()) as f64);
    svd.solve(b, eps.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

/// Pfaffian of a 4x4 skew matrix.
pub fn pfaffian4(m: &Matrix4<f64>) -> f64 {
    m[(0, 1)] * m[(2, 3)] - m[(0, 2)] * m[(1, 3)] + m[(0, 3)] * m[(1, 2)]
}

/// Orthonormal basis (as columns) of the orthogonal complement of the span
/// of `normals` in R^n, built by Gram-Schmidt over the coordinate axes in
/// order, so the basis is deterministic.
pub fn tangent_basis(normals: &[DVector<f64>], n: usize) -> DMatrix<f64> {
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for g in normals {
        let mut v = g.clone();
        for u in &ortho {
            v -= u * u.dot(&v);
        }
        let nv = v.norm();
        if nv > 1e-12 {
            ortho.push(v / nv);
        }
    }
    let k = ortho.len();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        if basis.len() + k == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        for u in ortho.iter().chain(basis.iter()) {
            v -= u * u.dot(&v);
        }
        let nv = v.norm();
        if nv > 1e-8 {
            basis.push(v / nv);
        }
    }
    DMatrix::from_columns(&basis)
}

/// Orthogonal projector onto the complement of the span of `normals`.
pub fn tangent_projector(normals: &[DVector<f64>], n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::identity(n, n);
    if normals.is_empty() {
        return p;
    }
    let g = DMatrix::from_columns(normals);
    let gram = g.transpose() * &g;
    if let Some(inv) = gram.try_inverse() {
        p -= &g * inv * g.transpose();
    }
    p
}

pub fn to_matrix4(m: &DMatrix<f64>) -> Matrix4<f64> {
    assert_eq!(m.shape(), (4, 4));
    Matrix4::from_fn(|i, j| m[(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_norm_solution_of_underdetermined_system() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = DVector::from_vec(vec![2.0]);
        let x = min_norm_solve(&a, &b);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pfaffian_of_canonical_form() {
        // dq1^dp1 + dq2^dp2 in the order (q1, p1, q2, p2)
        let mut m = Matrix4::zeros();
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        m[(2, 3)] = 1.0;
        m[(3, 2)] = -1.0;
        assert_eq!(pfaffian4(&m), 1.0);
        assert!((m.determinant() - pfaffian4(&m).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn tangent_basis_of_sphere_pole() {
        let n = DVector::from_vec(vec![2.0, 0.0, 0.0]);
        let b = tangent_basis(&[n], 3);
        assert_eq!(b.ncols(), 2);
        assert!((b[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((b[(2, 1)] - 1.0).abs() < 1e-15);
    }
}
