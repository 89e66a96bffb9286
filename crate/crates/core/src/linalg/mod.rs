//! Dense decompositions shared by the rest of the crate.
//!
//! The symmetric eigensolver delegates to `nalgebra` and the SVD refines
//! its output with Jacobi sweeps; the complex
//! Schur form with eigenvalue reordering lives in [`schur`]. Every factor
//! record is returned with a fixed sign/phase convention: each vector is
//! scaled so that its largest-magnitude entry (lowest index on ties) is
//! real and positive. Identical inputs therefore give identical bytes.

mod schur;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use schur::{
    lower_mass, offdiag_mass, schur_complex, schur_complex_of, ComplexSchurFactors, EigenOrder,
};

pub type RMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Singular value decomposition `A = U diag(σ) Vᵀ` of a square matrix.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left_vectors: RMatrix,
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    pub right_vectors: RMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> RMatrix {
        let mut us = self.left_vectors.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.right_vectors.transpose()
    }
}

/// Eigendecomposition `S = V diag(λ) Vᵀ` of a symmetric matrix, values
/// nonincreasing.
#[derive(Debug, Clone)]
pub struct SymEigFactors {
    pub vectors: RMatrix,
    pub values: Vec<f64>,
}

impl SymEigFactors {
    pub fn reconstruct(&self) -> RMatrix {
        let mut vl = self.vectors.clone();
        for (j, l) in self.values.iter().enumerate() {
            vl.column_mut(j).scale_mut(*l);
        }
        vl * self.vectors.transpose()
    }
}

pub(crate) fn check_square_finite<T: nalgebra::Scalar>(
    a: &DMatrix<T>,
    finite: impl Fn(&T) -> bool,
) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if let Some(pos) = a.iter().position(|x| !finite(x)) {
        return Err(Error::Value(format!(
            "non-finite entry at ({}, {})",
            pos % a.nrows(),
            pos / a.nrows()
        )));
    }
    Ok(a.nrows())
}

/// Index of the largest entry of `mags`; the lowest index wins ties.
pub(crate) fn dominant_index(mags: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, m) in mags.enumerate() {
        if m > best_val {
            best = i;
            best_val = m;
        }
    }
    best
}

/// Flips column `j` of `m` if its dominant entry is negative. Returns
/// whether a flip happened.
fn fix_column_sign(m: &mut RMatrix, j: usize) -> bool {
    let col = m.column(j);
    let k = dominant_index(col.iter().map(|x| x.abs()));
    if col[k] < 0.0 {
        m.column_mut(j).neg_mut();
        true
    } else {
        false
    }
}

pub(crate) fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// ‖MᵀM − I‖_max
pub fn orthogonality_defect(m: &RMatrix) -> f64 {
    let g = m.transpose() * m;
    max_abs(&(g - RMatrix::identity(m.ncols(), m.ncols())))
}

/// ‖MᴴM − I‖_max
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let g = m.adjoint() * m;
    let id = CMatrix::identity(m.ncols(), m.ncols());
    (g - id).iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// SVD of a square real matrix with singular values sorted nonincreasing.
///
/// `nalgebra`'s bidiagonal QR supplies a starting `V`; one-sided Jacobi
/// sweeps on `A V` then bring the factors to working accuracy. The QR
/// result alone can be off by 1e-3 when singular values nearly coincide.
pub fn svd(a: &RMatrix) -> Result<SvdFactors> {
    let n = check_square_finite(a, |x| x.is_finite())?;
    let start = a
        .clone()
        .try_svd(false, true, f64::EPSILON, 0)
        .and_then(|s| s.v_t)
        .map(|vt| vt.transpose())
        .unwrap_or_else(|| RMatrix::identity(n, n));
    let (w, v) = one_sided_jacobi(a * &start, start)?;

    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let floor = norms.iter().fold(0.0_f64, |m, x| m.max(*x)) * n as f64 * f64::EPSILON;
    let mut left = RMatrix::zeros(n, n);
    let mut right = RMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    let mut rank = 0;
    for (dst, &src) in order.iter().enumerate() {
        right.set_column(dst, &v.column(src));
        if norms[src] > floor && norms[src] > 0.0 {
            left.set_column(dst, &(w.column(src) / norms[src]));
            rank = dst + 1;
        }
        values.push(norms[src]);
    }
    complete_orthonormal(&mut left, rank);
    for j in 0..n {
        if fix_column_sign(&mut left, j) {
            right.column_mut(j).neg_mut();
        }
    }
    Ok(SvdFactors {
        left_vectors: left,
        singular_values: values,
        right_vectors: right,
    })
}

/// Rotates column pairs of `w` (and the same pairs of `v`) until all
/// columns of `w` are mutually orthogonal.
fn one_sided_jacobi(mut w: RMatrix, mut v: RMatrix) -> Result<(RMatrix, RMatrix)> {
    const MAX_SWEEPS: usize = 60;
    let n = w.ncols();
    let tol = (n as f64).sqrt() * f64::EPSILON;
    // columns this small are rounding noise from a zero singular value
    let scale = (0..n).fold(0.0_f64, |m, j| m.max(w.column(j).norm()));
    let negligible = (scale * n as f64 * f64::EPSILON).powi(2);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if alpha <= negligible || beta <= negligible || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::numerical("Jacobi SVD did not converge", f64::NAN))
}

fn rotate_pair(m: &mut RMatrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Fills columns `rank..` of `m` so that all columns are orthonormal:
/// pivoted Gram-Schmidt on the columns of the projector `I − M_r M_rᵀ`,
/// taking the largest remaining column each time (lowest index on ties).
fn complete_orthonormal(m: &mut RMatrix, rank: usize) {
    let n = m.nrows();
    if rank == n {
        return;
    }
    let kept = m.columns(0, rank).into_owned();
    let mut rest = RMatrix::identity(n, n) - &kept * kept.transpose();
    for dst in rank..n {
        let k = dominant_index((0..n).map(|j| rest.column(j).norm_squared()));
        let mut q = rest.column(k).into_owned();
        // second pass against the columns already placed
        for j in 0..dst {
            let proj = m.column(j).dot(&q);
            q.axpy(-proj, &m.column(j), 1.0);
        }
        q /= q.norm();
        m.set_column(dst, &q);
        let coeffs = q.transpose() * &rest;
        rest -= &q * coeffs;
    }
}

/// Symmetric eigendecomposition, eigenvalues nonincreasing.
///
/// The input must be symmetric to `1e-8·‖S‖_F`; it is averaged with its
/// transpose before factoring.
pub fn sym_eig(s: &RMatrix) -> Result<SymEigFactors> {
    let n = check_square_finite(s, |x| x.is_finite())?;
    let asym = max_abs(&(s - s.transpose()));
    if asym > 1e-8 * s.norm() {
        return Err(Error::Validation(format!(
            "matrix is not symmetric (max |S - Sᵀ| = {asym:e})"
        )));
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("symmetric eigensolver did not converge", f64::NAN))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let mut vectors = RMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
        values.push(eig.eigenvalues[src]);
    }
    for j in 0..n {
        fix_column_sign(&mut vectors, j);
    }
    Ok(SymEigFactors { vectors, values })
}

/// Principal square root of a symmetric positive semidefinite matrix.
///
/// Eigenvalues down to `-1e-10·‖S‖_F` are clamped to zero; anything more
/// negative is rejected.
pub fn psd_sqrt(s: &RMatrix) -> Result<RMatrix> {
    let eig = sym_eig(s)?;
    let floor = -1e-10 * s.norm();
    if let Some(&min) = eig.values.last() {
        if min < floor {
            return Err(Error::Validation(format!(
                "matrix is indefinite (smallest eigenvalue {min:e})"
            )));
        }
    }
    let roots = SymEigFactors {
        vectors: eig.vectors,
        values: eig.values.iter().map(|l| l.max(0.0).sqrt()).collect(),
    };
    let r = roots.reconstruct();
    Ok((&r + r.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> RMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn svd_identity() {
        let f = svd(&RMatrix::identity(3, 3)).unwrap();
        assert_eq!(f.singular_values, vec![1.0, 1.0, 1.0]);
        assert!(max_abs(&(&f.left_vectors - RMatrix::identity(3, 3))) < 1e-15);
        assert!(max_abs(&(&f.right_vectors - RMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn svd_diagonal_absorbs_sign() {
        let a = RMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -2.0]);
        let f = svd(&a).unwrap();
        assert!((f.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((f.singular_values[1] - 2.0).abs() < 1e-14);
        assert!((f.reconstruct() - a).norm() < 1e-14);
    }

    #[test]
    fn svd_random_residual() {
        let a = random_matrix(5, 11);
        let f = svd(&a).unwrap();
        assert!((f.reconstruct() - &a).norm() / a.norm() <= 1e-12);
        assert!(orthogonality_defect(&f.left_vectors) <= 1e-10);
        assert!(orthogonality_defect(&f.right_vectors) <= 1e-10);
        assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_rejects_bad_input() {
        assert!(matches!(svd(&RMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
        let mut a = RMatrix::identity(2, 2);
        a[(1, 0)] = f64::NAN;
        assert!(matches!(svd(&a), Err(Error::Value(_))));
    }

    #[test]
    fn svd_sign_convention() {
        let f = svd(&random_matrix(6, 3)).unwrap();
        for j in 0..6 {
            let col = f.left_vectors.column(j);
            let k = dominant_index(col.iter().map(|x| x.abs()));
            assert!(col[k] > 0.0);
        }
    }

    #[test]
    fn svd_spread_null_space() {
        // x ↦ x shifted right plus x shifted down on a 6x6 torus: the null
        // space is spread over every node
        let n = 36;
        let a = RMatrix::from_fn(n, n, |i, j| {
            let (r, c) = (j / 6, j % 6);
            let right = r * 6 + (c + 1) % 6;
            let down = ((r + 1) % 6) * 6 + c;
            if i == right || i == down { 1.0 } else { 0.0 }
        });
        let f = svd(&a).unwrap();
        assert!(f.singular_values.iter().filter(|s| **s < 1e-12).count() > 1);
        assert!(orthogonality_defect(&f.left_vectors) < 1e-13);
        assert!(orthogonality_defect(&f.right_vectors) < 1e-13);
        assert!((f.reconstruct() - &a).norm() < 1e-13);
    }

    #[test]
    fn svd_close_singular_values() {
        // two blocks whose top singular values differ by ~1e-4
        let mut a = RMatrix::zeros(8, 8);
        let b = random_matrix(4, 11).map(|x| 1.0 + 0.01 * x);
        let c = random_matrix(4, 12).map(|x| 1.0 + 0.01 * x);
        a.view_mut((0, 4), (4, 4)).copy_from(&b);
        a.view_mut((4, 0), (4, 4)).copy_from(&c);
        let f = svd(&a).unwrap();
        assert!((f.reconstruct() - &a).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn sym_eig_cases() {
        let f = sym_eig(&RMatrix::identity(4, 4)).unwrap();
        assert!(f.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));

        let f = sym_eig(&RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 5.0]))).unwrap();
        assert!((f.values[0] - 5.0).abs() < 1e-15 && (f.values[1] - 2.0).abs() < 1e-15);

        let b = random_matrix(6, 5);
        let s = &b + b.transpose();
        let f = sym_eig(&s).unwrap();
        assert!((f.reconstruct() - &s).norm() / s.norm() <= 1e-11);
        assert!(orthogonality_defect(&f.vectors) <= 1e-10);
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let a = RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&a), Err(Error::Validation(_))));
    }

    #[test]
    fn psd_sqrt_cases() {
        let r = psd_sqrt(&RMatrix::identity(3, 3)).unwrap();
        assert!(max_abs(&(r - RMatrix::identity(3, 3))) < 1e-15);

        let d = RMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let r = psd_sqrt(&d).unwrap();
        assert!(max_abs(&(r - RMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]))) < 1e-14);

        let a = random_matrix(7, 9);
        let s = &a * a.transpose();
        let r = psd_sqrt(&s).unwrap();
        assert!((&r * &r - &s).norm() <= 1e-9 * s.norm().max(1.0));
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let s = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(psd_sqrt(&s), Err(Error::Validation(_))));
    }
}
