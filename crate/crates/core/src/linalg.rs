//! Small dense complex helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "max_abs_diff_vec length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise residual `max |U U^† - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let prod = u * u.adjoint();
    max_abs_diff(&prod, &identity(u.nrows()))
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    a.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

pub fn mat_vec(a: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.ncols(), x.len());
    let mut out = vec![ZERO; a.nrows()];
    for (j, xj) in x.iter().enumerate() {
        if *xj == ZERO {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += a[(i, j)] * xj;
        }
    }
    out
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm1(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

/// 2^w ≥ n with w = ceil(log2 n); `n = 1` gives w = 0.
pub fn qubits_for(n: usize) -> usize {
    let mut w = 0;
    while (1usize << w) < n {
        w += 1;
    }
    w
}

/// Unitary dilation `[[B, sqrt(I - B B†)], [sqrt(I - B† B), -B†]]` of a contraction.
pub fn unitary_dilation(b: &CMatrix) -> CMatrix {
    let n = b.nrows();
    assert_eq!(n, b.ncols(), "dilation needs a square block");
    let svd = b.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors");
    let v_t = svd.v_t.expect("right singular vectors");
    let comp = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        svd.singular_values
            .iter()
            .map(|s| Complex64::new((1.0 - s * s).max(0.0).sqrt(), 0.0)),
    ));
    let left = &u * &comp * u.adjoint();
    let right = v_t.adjoint() * &comp * &v_t;
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(b);
    out.view_mut((0, n), (n, n)).copy_from(&left);
    out.view_mut((n, 0), (n, n)).copy_from(&right);
    out.view_mut((n, n), (n, n)).copy_from(&(-b.adjoint()));
    out
}
