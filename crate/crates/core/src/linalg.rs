//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::scalar::Real;

/// Eigen-decomposition of a symmetric `N x N` matrix.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// rows of the second array (`vectors[k]` belongs to `values[k]`).
pub fn symmetric_eigen<T: Real, const N: usize>(matrix: [[T; N]; N]) -> ([T; N], [[T; N]; N]) {
    let mut a = matrix;
    let mut v = [[T::zero(); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for _sweep in 0..64 {
        let off: T = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        let diag: T = (0..N).map(|i| a[i][i] * a[i][i]).sum();
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| {
        a[i][i]
            .partial_cmp(&a[j][j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = [T::zero(); N];
    let mut vectors = [[T::zero(); N]; N];
    for (k, &i) in order.iter().enumerate() {
        values[k] = a[i][i];
        for r in 0..N {
            vectors[k][r] = v[r][i];
        }
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_nalgebra_on_random_symmetric() {
        let m = [
            [4.0, -1.0, 0.5, 0.2],
            [-1.0, 3.0, 0.1, -0.7],
            [0.5, 0.1, 2.0, 0.3],
            [0.2, -0.7, 0.3, 1.0],
        ];
        let (vals, vecs) = symmetric_eigen(m);
        let na = nalgebra::Matrix4::from_fn(|i, j| m[i][j]).symmetric_eigen();
        let mut reference: Vec<f64> = na.eigenvalues.iter().copied().collect();
        reference.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in vals.iter().zip(&reference) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
        for (k, v) in vecs.iter().enumerate() {
            for i in 0..4 {
                let mv: f64 = (0..4).map(|j| m[i][j] * v[j]).sum();
                assert_abs_diff_eq!(mv, vals[k] * v[i], epsilon = 1e-12);
            }
        }
    }
}
