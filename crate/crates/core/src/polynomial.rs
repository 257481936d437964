//! Chebyshev series and the odd polynomial approximating `δ/(2x)` away from
//! the origin.
//!
//! The target is `h(x) = δ/(2x)·(1 − e^{−(x/w)^4})` with
//! `w = δ·ln(2/ε)^{−1/4}`: smooth through zero, within `ε/4` of `δ/(2x)` for
//! `|x| ≥ δ`. Chebyshev coefficients come from a DCT of samples at the
//! extrema points and are truncated once the discarded tail sums to `ε/4`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Degree bound `deg ≤ C·(1/δ)·ln(1/(δε))`; measured `deg/bound` stays below
/// 0.7 for `δ ∈ [1/64, 1/2]`, `ε ∈ [1e-13, 1e-2]`.
pub const DEGREE_CONSTANT: f64 = 4.0;

/// Points per unit length of `[δ, 1]` used by [`InversePolynomial::verify`].
pub const VERIFY_GRID: usize = 10_000;

/// Smallest accuracy the double-precision construction resolves.
pub const MIN_EPSILON: f64 = 1e-13;

const MAX_SAMPLES: usize = 1 << 20;

/// `Σ_k c_k T_k(x)` on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    pub coefficients: Vec<f64>,
}

impl ChebyshevSeries {
    pub fn new(coefficients: Vec<f64>) -> Self {
        ChebyshevSeries { coefficients }
    }

    /// `p(x) = x`.
    pub fn identity() -> Self {
        ChebyshevSeries::new(vec![0.0, 1.0])
    }

    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| *c != 0.0)
            .unwrap_or(0)
    }

    /// Clenshaw recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        let c0 = self.coefficients.first().copied().unwrap_or(0.0);
        x * b1 - b2 + c0
    }

    pub fn is_odd(&self) -> bool {
        self.coefficients.iter().step_by(2).all(|c| *c == 0.0)
    }
}

/// Chebyshev coefficients of the interpolant through `cos(πj/N)`, `j = 0..=N`.
fn chebyshev_coefficients(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let samples: Vec<f64> = (0..=n)
        .map(|j| f((std::f64::consts::PI * j as f64 / n as f64).cos()))
        .collect();
    let mut buf: Vec<Complex64> = samples
        .iter()
        .chain(samples[1..n].iter().rev())
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
    let mut c: Vec<f64> = buf[..=n].iter().map(|z| z.re / n as f64).collect();
    c[0] /= 2.0;
    c[n] /= 2.0;
    c
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversePolynomial {
    pub series: ChebyshevSeries,
    pub delta: f64,
    pub epsilon: f64,
    pub degree: usize,
    /// Factor `≤ 1` applied so that `sup |p| ≤ 1`.
    pub clamp: f64,
}

impl InversePolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.series.eval(x)
    }

    pub fn target(&self, x: f64) -> f64 {
        self.delta / (2.0 * x)
    }

    pub fn degree_bound(&self) -> f64 {
        degree_bound(self.delta, self.epsilon)
    }

    /// Grid check of both invariants with `VERIFY_GRID` points on each of
    /// `[δ, 1]` and `[−1, 1]`.
    pub fn verify(&self) -> PolynomialCheck {
        let n = VERIFY_GRID;
        let mut max_error: f64 = 0.0;
        let mut max_odd_defect: f64 = 0.0;
        for i in 0..n {
            let x = self.delta + (1.0 - self.delta) * i as f64 / (n - 1) as f64;
            let p = self.eval(x);
            max_error = max_error.max((p - self.target(x)).abs());
            max_odd_defect = max_odd_defect.max((self.eval(-x) + p).abs());
        }
        let mut sup: f64 = 0.0;
        for i in 0..n {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            sup = sup.max(self.eval(x).abs());
        }
        PolynomialCheck {
            max_error,
            sup_norm: sup,
            max_odd_defect,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialCheck {
    /// `max |p(x) − δ/(2x)|` over `[δ, 1]`.
    pub max_error: f64,
    /// `max |p(x)|` over `[−1, 1]`.
    pub sup_norm: f64,
    pub max_odd_defect: f64,
}

pub fn degree_bound(delta: f64, epsilon: f64) -> f64 {
    DEGREE_CONSTANT / delta * (1.0 / (delta * epsilon)).ln().max(1.0)
}

pub fn build_inverse_polynomial(delta: f64, epsilon: f64) -> Result<InversePolynomial> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2]")));
    }
    if !epsilon.is_finite() || epsilon < MIN_EPSILON {
        return Err(Error::Domain(format!(
            "epsilon = {epsilon} outside [{MIN_EPSILON:e}, ∞)"
        )));
    }
    let eps = epsilon.min(0.5);
    let width = delta * (2.0 / eps).ln().powf(-0.25);
    let h = move |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            delta / (2.0 * x) * -(-(x / width).powi(4)).exp_m1()
        }
    };

    let resolved = eps * 1e-3;
    let mut n = 64;
    let coeffs = loop {
        let c = chebyshev_coefficients(h, n);
        let tail = c[3 * n / 4..].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if tail < resolved || n >= MAX_SAMPLES {
            break c;
        }
        n *= 2;
    };

    let mut tail = 0.0;
    let mut degree = coeffs.len() - 1;
    for k in (1..coeffs.len()).rev() {
        if k % 2 == 1 {
            if tail + coeffs[k].abs() > eps / 4.0 {
                degree = k;
                break;
            }
            tail += coeffs[k].abs();
        }
    }
    let mut kept: Vec<f64> = coeffs[..=degree].to_vec();
    for c in kept.iter_mut().step_by(2) {
        *c = 0.0;
    }
    let mut poly = InversePolynomial {
        series: ChebyshevSeries::new(kept),
        delta,
        epsilon,
        degree,
        clamp: 1.0,
    };
    let sup = poly.verify().sup_norm;
    if sup > 1.0 {
        poly.clamp = 1.0 / sup;
        poly.series.coefficients.iter_mut().for_each(|c| *c /= sup);
    }
    Ok(poly)
}
