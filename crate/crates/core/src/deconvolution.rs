//! Inverting group operations: exact per-irrep inversion and the simulated
//! singular value transformation route.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::block_encoding::{
    amplified_repetitions, fourier_block_encoding, lcu_block_encoding, max_fourier_entry,
    BlockEncoding, FourierOptions,
};
use crate::convolution::{
    condition_data, filter_blocks_with, operation_matrix, ConditionData, OperationVariant,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{mat_vec, norm2, CMatrix};
use crate::polynomial::{build_inverse_polynomial, ChebyshevSeries, InversePolynomial};
use crate::representations::{classical_fourier_with, inverse_classical_fourier, irreps};
use crate::signal::GroupSignal;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDeconvolution {
    /// `x/‖x‖` for the solution `x` of `φ_m(x) = y`.
    pub state: GroupSignal,
    /// `‖x‖`.
    pub scale: f64,
    pub condition: ConditionData,
}

impl ExactDeconvolution {
    pub fn solution(&self) -> GroupSignal {
        self.state.scaled(Complex64::new(self.scale, 0.0))
    }
}

fn ensure_invertible(c: &ConditionData) -> Result<()> {
    if c.is_singular() {
        Err(Error::SingularOperation {
            sigma_min: c.sigma_min,
        })
    } else {
        Ok(())
    }
}

/// Solves `φ_m(x) = y`, inverting `m̂(ρ)` per irrep when irreps exist and by
/// a dense LU solve otherwise.
pub fn deconvolve_exact(
    group: &FiniteGroup,
    m: &GroupSignal,
    y: &GroupSignal,
    variant: OperationVariant,
) -> Result<ExactDeconvolution> {
    m.ensure_on(group)?;
    y.ensure_on(group)?;
    let condition = condition_data(group, m, variant)?;
    ensure_invertible(&condition)?;
    let singular = || Error::SingularOperation {
        sigma_min: condition.sigma_min,
    };

    let x = match irreps(group) {
        Ok(reps) => {
            let fb = filter_blocks_with(&reps, group, m, variant)?;
            let yh = classical_fourier_with(&reps, group, y)?;
            let mut blocks = Vec::with_capacity(yh.blocks.len());
            for (b, yb) in fb.coefficients.blocks.iter().zip(&yh.blocks) {
                let xb = if b.nrows() == 1 {
                    yb / b[(0, 0)]
                } else if variant.is_right() {
                    // x̂ B = ŷ  ⇔  Bᵀ x̂ᵀ = ŷᵀ
                    b.transpose()
                        .lu()
                        .solve(&yb.transpose())
                        .ok_or_else(singular)?
                        .transpose()
                } else {
                    b.clone().lu().solve(yb).ok_or_else(singular)?
                };
                blocks.push(xb);
            }
            let xh = crate::representations::FourierCoefficients {
                labels: yh.labels,
                blocks,
            };
            inverse_classical_fourier(&reps, group, &xh)?
        }
        Err(Error::IrrepsUnavailable(_)) => {
            let om = operation_matrix(group, m, variant)?;
            let rhs = DVector::from_column_slice(y.values());
            let sol = om.matrix.lu().solve(&rhs).ok_or_else(singular)?;
            GroupSignal::new(sol.iter().copied().collect())
        }
        Err(e) => return Err(e),
    };
    let (state, scale) = x.normalized().map_err(|_| Error::ZeroOutput)?;
    Ok(ExactDeconvolution {
        state,
        scale,
        condition,
    })
}

/// `W·p(Σ)·V†` for `M = WΣV†`. Applied to `M†` with the inverse polynomial
/// this yields `≈ (δ/2)·M⁻¹`.
pub fn svt_apply(m: &CMatrix, p: &ChebyshevSeries) -> Result<CMatrix> {
    let svd = m.clone().svd(true, true);
    let norm = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if norm > 1.0 + 1e-12 {
        return Err(Error::Normalization { norm });
    }
    let w = svd.u.expect("left singular vectors");
    let v_t = svd.v_t.expect("right singular vectors");
    let mut scaled = w;
    for (j, s) in svd.singular_values.iter().enumerate() {
        let ps = Complex64::new(p.eval(*s), 0.0);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= ps);
    }
    Ok(scaled * v_t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingMethod {
    Lcu,
    Fourier,
}

impl EncodingMethod {
    pub fn name(self) -> &'static str {
        match self {
            EncodingMethod::Lcu => "lcu",
            EncodingMethod::Fourier => "fourier",
        }
    }
}

impl fmt::Display for EncodingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lcu" => Ok(EncodingMethod::Lcu),
            "fourier" => Ok(EncodingMethod::Fourier),
            other => Err(Error::Parse(format!("unknown encoding method `{other}`"))),
        }
    }
}

/// Builds the requested block encoding; Fourier filters whose largest
/// coefficient exceeds one are scaled down first.
pub fn encode(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
    method: EncodingMethod,
) -> Result<BlockEncoding> {
    match method {
        EncodingMethod::Lcu => lcu_block_encoding(group, m, variant),
        EncodingMethod::Fourier => {
            let peak = max_fourier_entry(group, m, variant)?;
            let m = if peak > 1.0 {
                m.scaled(Complex64::new(1.0 / peak, 0.0))
            } else {
                m.clone()
            };
            fourier_block_encoding(group, &m, variant, FourierOptions::default())
        }
    }
}

/// Error of the recovered state is at most `ε` (constant `c = 1`): the
/// polynomial is built to accuracy `εδ/4` and `‖(δ/2)A⁻¹y‖ ≥ δ/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvtDeconvolution {
    pub state: GroupSignal,
    pub method: EncodingMethod,
    pub alpha: f64,
    pub kappa: f64,
    /// `σ_min(M)/α` before any rescaling.
    pub delta_encoded: f64,
    /// Lower edge actually handed to the polynomial, `≤ 1/2`.
    pub delta: f64,
    /// Factor applied to the encoded block when `δ > 1/2`.
    pub rescale: f64,
    pub polynomial_epsilon: f64,
    pub degree: usize,
    /// `‖p(A)y‖²`, the simulated post-selection probability.
    pub success_probability: f64,
    /// `‖(δ/2)A⁻¹y‖²` from the exact SVD.
    pub predicted_probability: f64,
    /// `(2κ)⁻²`, the state-independent lower bound.
    pub worst_case_probability: f64,
    pub expected_repetitions_plain: f64,
    pub expected_repetitions_amplified: u64,
}

/// Overall error budget for the recovered state reported as `c·ε`.
pub const SVT_ERROR_CONSTANT: f64 = 1.0;

pub fn deconvolve_svt(
    group: &FiniteGroup,
    m: &GroupSignal,
    y: &GroupSignal,
    variant: OperationVariant,
    epsilon: f64,
    method: EncodingMethod,
) -> Result<SvtDeconvolution> {
    m.ensure_on(group)?;
    y.ensure_on(group)?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    let condition = condition_data(group, m, variant)?;
    ensure_invertible(&condition)?;

    let be = encode(group, m, variant, method)?;
    let mut a = be.top_left_block();
    let sv = crate::linalg::singular_values(&a);
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let delta_encoded = sigma_min;
    let mut delta = sigma_min;
    let mut rescale = 1.0;
    if delta > 0.5 {
        rescale = 0.5 / delta;
        a *= Complex64::new(rescale, 0.0);
        delta = 0.5;
    }
    let polynomial_epsilon = epsilon * delta / 4.0;
    let poly: InversePolynomial = build_inverse_polynomial(delta, polynomial_epsilon)?;
    let transformed = svt_apply(&a.adjoint(), &poly.series)?;

    let (y_unit, _) = y.normalized().map_err(|_| Error::ZeroOutput)?;
    let z = mat_vec(&transformed, y_unit.values());
    let amp = norm2(&z);
    if amp == 0.0 {
        return Err(Error::ZeroOutput);
    }
    let p = amp * amp;

    let rhs = DVector::from_column_slice(y_unit.values());
    let exact = a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularOperation { sigma_min })?;
    let predicted = (delta / 2.0 * exact.norm()).powi(2);

    Ok(SvtDeconvolution {
        state: GroupSignal::new(z.iter().map(|v| v / amp).collect()),
        method,
        alpha: be.normalization,
        kappa: condition.kappa,
        delta_encoded,
        delta,
        rescale,
        polynomial_epsilon,
        degree: poly.degree,
        success_probability: p,
        predicted_probability: predicted,
        worst_case_probability: (2.0 * condition.kappa).powi(-2),
        expected_repetitions_plain: 1.0 / p,
        expected_repetitions_amplified: amplified_repetitions(p),
    })
}
