//! Reference spectral computations for cross-checking the optimizers.
//!
//! A self-contained one-sided Jacobi iteration (orthogonalize column pairs
//! until convergence; singular values are the final column norms). It shares
//! no code with the optimization machinery or the linear-algebra backend's
//! SVD, which is the point: verification suites compare optimizer output
//! against these values as an independent witness. Desk-scale only.

use nalgebra::DMatrix;

/// Singular values of `a`, largest first.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut w = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    };
    let n = w.ncols();
    if n == 0 || w.nrows() == 0 {
        return vec![0.0; n];
    }
    let scale = w.amax();
    if scale == 0.0 {
        return vec![0.0; n];
    }

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let cp = w.column(p).into_owned();
                let cq = w.column(q).into_owned();
                let apq = cp.dot(&cq);
                let app = cp.norm_squared();
                let aqq = cq.norm_squared();
                if apq.abs() <= 1e-15 * (app * aqq).sqrt().max(1e-300) {
                    continue;
                }
                rotated = true;
                // Jacobi rotation annihilating the (p, q) inner product.
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let new_p = &cp * c - &cq * s;
                let new_q = &cp * s + &cq * c;
                w.set_column(p, &new_p);
                w.set_column(q, &new_q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigmas: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    sigmas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sigmas
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Sum of singular values.
pub fn nuclear_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_matrix_reads_off_its_entries() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -2.0]);
        let s = singular_values(&a);
        assert_abs_diff_eq!(s[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn two_by_two_matches_the_closed_form() {
        // For A = [[1,2],[3,4]], the eigenvalues of AᵀA = [[10,14],[14,20]]
        // are 15 ± √221; singular values are their square roots.
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let s = singular_values(&a);
        let disc = 221.0f64.sqrt();
        assert_abs_diff_eq!(s[0], (15.0 + disc).sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(s[1], (15.0 - disc).sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn wide_matrices_are_handled_by_transposition() {
        let a = DMatrix::from_row_slice(1, 3, &[2.0, 3.0, 6.0]);
        assert_abs_diff_eq!(spectral_norm(&a), 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nuclear_norm(&a), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let a = DMatrix::zeros(3, 2);
        assert_eq!(spectral_norm(&a), 0.0);
        assert_eq!(nuclear_norm(&a), 0.0);
    }

    #[test]
    fn rank_one_outer_product_multiplies_factor_lengths() {
        let u = nalgebra::DVector::from_column_slice(&[3.0, 4.0]);
        let v = nalgebra::DVector::from_column_slice(&[5.0, 12.0]);
        let a = &u * v.transpose();
        assert_abs_diff_eq!(spectral_norm(&a), 65.0, epsilon = 1e-9);
        assert_abs_diff_eq!(nuclear_norm(&a), 65.0, epsilon = 1e-9);
    }
}
