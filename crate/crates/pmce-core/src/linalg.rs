//! Dense complex linear algebra helpers on top of nalgebra.
//!
//! These wrap the library decompositions with the conventions the estimation
//! chain relies on: descending eigenvalue order, a deterministic eigenvector
//! phase, tall least squares by orthogonal factorization (never the normal
//! equations), and eigenvalues of small non-Hermitian matrices via the complex
//! Schur form.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from64, to64, Scalar};

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// descending and eigenvectors permuted to match.
///
/// The sort is stable, so exactly degenerate eigenvalues keep the order the
/// underlying solver produced (relevant for the identity-matrix convention in
/// `precoding::eigenbeams`).
pub fn hermitian_eigen_desc<T: Scalar>(
    m: &DMatrix<Complex<T>>,
) -> Result<(Vec<T>, DMatrix<Complex<T>>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParams(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "eigensolver returned non-finite eigenvalues".into(),
        ));
    }
    let vectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Rotate each column so that its largest-magnitude entry is real positive,
/// breaking magnitude ties by lowest row index.
///
/// This pins the arbitrary per-eigenvector phase so a basis is reproducible
/// across runs and backends. Columns that are identically zero are left
/// untouched.
pub fn phase_normalize_columns<T: Scalar>(m: &mut DMatrix<Complex<T>>) {
    for c in 0..m.ncols() {
        let mut best = 0usize;
        let mut best_mag = T::zero();
        for r in 0..m.nrows() {
            let mag = m[(r, c)].norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        if best_mag > T::zero() {
            let pivot = m[(best, c)];
            let rot = pivot.conj() / Complex::new(pivot.modulus(), T::zero());
            for r in 0..m.nrows() {
                let v = m[(r, c)] * rot;
                m[(r, c)] = v;
            }
            // force the pivot exactly onto the real axis
            let p = m[(best, c)];
            m[(best, c)] = Complex::new(p.modulus(), T::zero());
        }
    }
}

/// Least-squares solve of `a x ≈ y` for tall `a` by Householder QR.
///
/// When `cond_cap` is given, the condition number is estimated from the
/// extreme diagonal magnitudes of R and systems above the cap are refused
/// instead of returning garbage.
pub fn lstsq_qr<T: Scalar>(
    a: &DMatrix<Complex<T>>,
    y: &DVector<Complex<T>>,
    cond_cap: Option<T>,
) -> Result<DVector<Complex<T>>> {
    let sol = lstsq_qr_multi(a, &DMatrix::from_column_slice(y.len(), 1, y.as_slice()), cond_cap)?;
    Ok(DVector::from_column_slice(sol.column(0).as_slice()))
}

/// Least-squares solve with a matrix right-hand side (column-wise).
pub fn lstsq_qr_multi<T: Scalar>(
    a: &DMatrix<Complex<T>>,
    y: &DMatrix<Complex<T>>,
    cond_cap: Option<T>,
) -> Result<DMatrix<Complex<T>>> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::InvalidParams(format!(
            "least squares expects a tall system, got {}x{}",
            rows, cols
        )));
    }
    if y.nrows() != rows {
        return Err(Error::InvalidParams(format!(
            "right-hand side has {} rows, expected {}",
            y.nrows(),
            rows
        )));
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let mut dmin = T::max_value().unwrap();
    let mut dmax = T::zero();
    for i in 0..cols {
        let d = r[(i, i)].modulus();
        if d < dmin {
            dmin = d;
        }
        if d > dmax {
            dmax = d;
        }
    }
    if dmin <= T::zero() {
        return Err(Error::Numerical(
            "rank-deficient least-squares system (zero diagonal in R)".into(),
        ));
    }
    if let Some(cap) = cond_cap {
        let cond = dmax / dmin;
        if cond > cap {
            return Err(Error::IllConditioned {
                cond: to64(cond),
                cap: to64(cap),
            });
        }
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let small = qty.rows(0, cols).into_owned();
    r.rows(0, cols)
        .into_owned()
        .solve_upper_triangular(&small)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))
}

/// Eigenvalues of a small general complex matrix via its Schur form.
pub fn complex_eigenvalues<T: Scalar>(m: &DMatrix<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let schur = m.clone().schur();
    match schur.eigenvalues() {
        Some(v) => Ok(v.iter().cloned().collect()),
        None => Err(Error::Numerical(
            "Schur iteration did not converge to a triangular form".into(),
        )),
    }
}

/// Hermitian square root `P^{1/2}` of a PSD matrix via eigendecomposition.
///
/// Tiny negative eigenvalues from roundoff are clamped to zero.
pub fn hermitian_sqrt<T: Scalar>(m: &DMatrix<Complex<T>>) -> Result<DMatrix<Complex<T>>> {
    let (vals, vecs) = hermitian_eigen_desc(m)?;
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        let s = if v > T::zero() { v.sqrt() } else { T::zero() };
        let col = vecs.column(i);
        for r in 0..n {
            for c in 0..n {
                let add = col[r] * col[c].conj() * Complex::new(s, T::zero());
                out[(r, c)] += add;
            }
        }
    }
    Ok(out)
}

/// Symmetrize a numerically almost-Hermitian matrix: `(m + m^H)/2`.
pub fn hermitize<T: Scalar>(m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let half = Complex::new(from64::<T>(0.5), T::zero());
    (m + m.adjoint()) * half
}
