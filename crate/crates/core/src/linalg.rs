//! Small SVD-based helpers over `nalgebra` dense matrices.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_REL_TOL: f64 = 1e-7;

/// Pad with zero rows up to a square so that the thin SVD exposes a full `V`.
fn padded<T: ComplexField>(a: &DMatrix<T>) -> DMatrix<T> {
    if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        let mut p = DMatrix::zeros(a.ncols(), a.ncols());
        p.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        p
    }
}

/// Singular values in decreasing order.
pub fn singular_values<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> Vec<f64> {
    if a.is_empty() {
        return vec![];
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

fn cutoff(s: &[f64], rel: f64) -> f64 {
    rel * s.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE)
}

/// Numerical rank with cutoff `rel · σ_max`.
pub fn rank_rel<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, rel: f64) -> usize {
    let s = singular_values(a);
    if s.first().map_or(true, |&m| m == 0.0) {
        return 0;
    }
    let c = cutoff(&s, rel);
    s.iter().filter(|&&x| x > c).count()
}

pub fn rank<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> usize {
    rank_rel(a, RANK_REL_TOL)
}

/// Orthonormal basis (as columns) of the null space, using an absolute cutoff.
pub fn null_space_abs<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, abs: f64) -> DMatrix<T> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = padded(a).svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let cols: Vec<DVector<T>> = (0..n)
        .filter(|&i| svd.singular_values[i] <= abs)
        .map(|i| vt.row(i).adjoint().into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal null-space basis with cutoff `rel · σ_max`.
pub fn null_space_rel<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, rel: f64) -> DMatrix<T> {
    let s = singular_values(a);
    if s.first().map_or(true, |&m| m == 0.0) {
        return DMatrix::identity(a.ncols(), a.ncols());
    }
    null_space_abs(a, cutoff(&s, rel))
}

pub fn null_space<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> DMatrix<T> {
    null_space_rel(a, RANK_REL_TOL)
}

/// Orthonormal basis of the column space.
pub fn column_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let s = singular_values(a);
    if s[0] == 0.0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let c = cutoff(&s, RANK_REL_TOL);
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let cols: Vec<DVector<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > c)
        .map(|i| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(a.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Minimum-norm least-squares solution of `A x ≈ b`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let s = singular_values(a);
    let eps = cutoff(&s, 1e-12);
    let svd = a.clone().svd(true, true);
    svd.solve(b, eps).expect("U and V were computed")
}

/// Orthonormalize `v` against the columns of `basis`; `None` if it falls inside their span.
pub fn gram_schmidt_step(basis: &[DVector<f64>], v: &DVector<f64>, tol: f64) -> Option<DVector<f64>> {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&w);
            w -= b * c;
        }
    }
    let n = w.norm();
    if n <= tol * v.norm().max(1.0) {
        None
    } else {
        Some(w / n)
    }
}

/// Rows stacked into a matrix.
pub fn vstack(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        m.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    m
}
