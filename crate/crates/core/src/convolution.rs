//! The four group operations (convolution, right convolution,
//! cross-correlation, right cross-correlation) in direct, matrix and Fourier
//! form, plus conditioning and equivariance checks.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::linalg::{mat_vec, max_abs_diff_vec, singular_values, CMatrix, ZERO};
use crate::representations::{
    classical_fourier_with, direct_sum_left, direct_sum_right, inverse_classical_fourier, irreps,
    FourierCoefficients, Irrep,
};
use crate::signal::GroupSignal;

/// Filters whose smallest singular value falls below this fraction of the
/// largest are reported with `κ = ∞`.
pub const SINGULAR_RATIO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperationVariant {
    /// `(m ⊛ x)(u) = Σ_v m(u v⁻¹) x(v)`, matrix `Σ m_i L_i`.
    Convolution,
    /// `(m ⊛_R x)(u) = Σ_v m(v⁻¹ u) x(v)`, matrix `Σ m_i R_i`.
    RightConvolution,
    /// `(m ⋆ x)(u) = Σ_v m(v u⁻¹) x(v)`, matrix `Σ m_i L_i⁻¹`.
    CrossCorrelation,
    /// `(m ⋆_R x)(u) = Σ_v m(u⁻¹ v) x(v)`, matrix `Σ m_i R_i⁻¹`.
    RightCrossCorrelation,
}

impl OperationVariant {
    pub const ALL: [OperationVariant; 4] = [
        OperationVariant::Convolution,
        OperationVariant::RightConvolution,
        OperationVariant::CrossCorrelation,
        OperationVariant::RightCrossCorrelation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperationVariant::Convolution => "convolution",
            OperationVariant::RightConvolution => "right-convolution",
            OperationVariant::CrossCorrelation => "cross-correlation",
            OperationVariant::RightCrossCorrelation => "right-cross-correlation",
        }
    }

    pub fn is_right(self) -> bool {
        matches!(
            self,
            OperationVariant::RightConvolution | OperationVariant::RightCrossCorrelation
        )
    }

    pub fn is_correlation(self) -> bool {
        matches!(
            self,
            OperationVariant::CrossCorrelation | OperationVariant::RightCrossCorrelation
        )
    }

    /// Image of basis vector `j` under the regular-representation
    /// permutation attached to filter index `i`.
    #[inline]
    pub fn permute(self, group: &FiniteGroup, i: usize, j: usize) -> usize {
        match self {
            OperationVariant::Convolution => group.mul(i, j),
            OperationVariant::RightConvolution => group.mul(j, i),
            OperationVariant::CrossCorrelation => group.mul(group.inv(i), j),
            OperationVariant::RightCrossCorrelation => group.mul(j, group.inv(i)),
        }
    }
}

impl fmt::Display for OperationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "convolution" | "conv" => Ok(OperationVariant::Convolution),
            "right-convolution" | "rconv" => Ok(OperationVariant::RightConvolution),
            "cross-correlation" | "xcorr" | "correlation" => Ok(OperationVariant::CrossCorrelation),
            "right-cross-correlation" | "rxcorr" => Ok(OperationVariant::RightCrossCorrelation),
            other => Err(Error::Parse(format!("unknown operation variant `{other}`"))),
        }
    }
}

fn check_pair(group: &FiniteGroup, m: &GroupSignal, x: &GroupSignal) -> Result<()> {
    m.ensure_on(group)?;
    x.ensure_on(group)
}

/// Evaluates the defining double sum.
pub fn convolve_direct(
    group: &FiniteGroup,
    m: &GroupSignal,
    x: &GroupSignal,
    variant: OperationVariant,
) -> Result<GroupSignal> {
    check_pair(group, m, x)?;
    let n = group.order();
    let (mv, xv) = (m.values(), x.values());
    let mut out = vec![ZERO; n];
    for (u, o) in out.iter_mut().enumerate() {
        let ui = group.inv(u);
        let mut acc = ZERO;
        for (v, xval) in xv.iter().enumerate() {
            if *xval == ZERO {
                continue;
            }
            let vi = group.inv(v);
            let idx = match variant {
                OperationVariant::Convolution => group.mul(u, vi),
                OperationVariant::RightConvolution => group.mul(vi, u),
                OperationVariant::CrossCorrelation => group.mul(v, ui),
                OperationVariant::RightCrossCorrelation => group.mul(ui, v),
            };
            acc += mv[idx] * xval;
        }
        *o = acc;
    }
    Ok(GroupSignal::new(out))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionData {
    /// `σ_max/σ_min`, or `f64::INFINITY` for a singular operation.
    pub kappa: f64,
    /// Spectral norm `σ_max`.
    pub norm: f64,
    pub sigma_min: f64,
}

impl ConditionData {
    pub fn from_singular_values(sv: &[f64]) -> Self {
        let norm = sv.iter().copied().fold(0.0, f64::max);
        let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let sigma_min = if sigma_min.is_finite() { sigma_min } else { 0.0 };
        let kappa = if norm == 0.0 || sigma_min < SINGULAR_RATIO * norm {
            f64::INFINITY
        } else {
            norm / sigma_min
        };
        ConditionData {
            kappa,
            norm,
            sigma_min,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.kappa.is_infinite()
    }
}

/// Dense `Σ_i m_i U_i` for one variant.
#[derive(Debug, Clone)]
pub struct OperationMatrix {
    pub matrix: CMatrix,
    pub variant: OperationVariant,
    pub filter: GroupSignal,
    spectral: OnceLock<ConditionData>,
}

impl OperationMatrix {
    pub fn apply(&self, x: &GroupSignal) -> Result<GroupSignal> {
        if x.len() != self.matrix.ncols() {
            return Err(Error::IncompatibleSignal {
                order: self.matrix.ncols(),
                found: x.len(),
            });
        }
        Ok(GroupSignal::new(mat_vec(&self.matrix, x.values())))
    }

    /// Spectral data from a dense SVD, computed once.
    pub fn condition(&self) -> ConditionData {
        *self
            .spectral
            .get_or_init(|| ConditionData::from_singular_values(&singular_values(&self.matrix)))
    }
}

pub fn operation_matrix(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<OperationMatrix> {
    m.ensure_on(group)?;
    let n = group.order();
    let mut matrix = CMatrix::zeros(n, n);
    for (i, mi) in m.values().iter().enumerate() {
        if *mi == ZERO {
            continue;
        }
        for j in 0..n {
            matrix[(variant.permute(group, i, j), j)] += mi;
        }
    }
    Ok(OperationMatrix {
        matrix,
        variant,
        filter: m.clone(),
        spectral: OnceLock::new(),
    })
}

/// Per-irrep filter blocks acting in the Fourier domain.
///
/// Left variants multiply `x̂(ρ)` from the left, right variants from the
/// right. Correlations use `Σ_w m(w) ρ(w)^†`, the transform of the inverted
/// filter `u ↦ m(u⁻¹)`; for real filters this is `m̂(ρ)^†`.
#[derive(Debug, Clone)]
pub struct FilterBlocks {
    pub variant: OperationVariant,
    pub coefficients: FourierCoefficients,
}

impl FilterBlocks {
    /// The matrix `F_G M F_G^†`, block diagonal in `F_G` row order.
    pub fn block_diagonal(&self) -> CMatrix {
        if self.variant.is_right() {
            direct_sum_right(&self.coefficients.blocks)
        } else {
            direct_sum_left(&self.coefficients.blocks)
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.coefficients
            .blocks
            .iter()
            .flat_map(singular_values)
            .collect()
    }

    pub fn condition(&self) -> ConditionData {
        ConditionData::from_singular_values(&self.singular_values())
    }
}

pub fn filter_blocks_with(
    reps: &[Irrep],
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<FilterBlocks> {
    m.ensure_on(group)?;
    let source = if variant.is_correlation() {
        m.inverted(group)
    } else {
        m.clone()
    };
    Ok(FilterBlocks {
        variant,
        coefficients: classical_fourier_with(reps, group, &source)?,
    })
}

pub fn filter_blocks(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<FilterBlocks> {
    let reps = irreps(group)?;
    filter_blocks_with(&reps, group, m, variant)
}

/// Applies the operation through the convolution theorem.
pub fn convolve_fourier(
    group: &FiniteGroup,
    m: &GroupSignal,
    x: &GroupSignal,
    variant: OperationVariant,
) -> Result<GroupSignal> {
    check_pair(group, m, x)?;
    let reps = irreps(group)?;
    let fb = filter_blocks_with(&reps, group, m, variant)?;
    let xh = classical_fourier_with(&reps, group, x)?;
    let yh = product_in_fourier(&fb, &xh);
    inverse_classical_fourier(&reps, group, &yh)
}

/// `ŷ(ρ) = B(ρ) x̂(ρ)` for left variants and `x̂(ρ) B(ρ)` for right ones.
pub fn product_in_fourier(fb: &FilterBlocks, xh: &FourierCoefficients) -> FourierCoefficients {
    if fb.variant.is_right() {
        xh.zip_map(&fb.coefficients, |x, b| x * b)
    } else {
        fb.coefficients.zip_map(xh, |b, x| b * x)
    }
}

/// Spectral data for the operation matrix; per-irrep singular values when
/// irreps exist, otherwise a dense SVD.
pub fn condition_data(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<ConditionData> {
    m.ensure_on(group)?;
    match irreps(group) {
        Ok(reps) => Ok(filter_blocks_with(&reps, group, m, variant)?.condition()),
        Err(Error::IrrepsUnavailable(_)) => condition_data_dense(group, m, variant),
        Err(e) => Err(e),
    }
}

pub fn condition_data_dense(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<ConditionData> {
    Ok(operation_matrix(group, m, variant)?.condition())
}

/// Coordinate permutation induced by the group action the variant commutes
/// with: `(T_g x)(u) = x(u∘g)` for the left-acting operations and
/// `x(g∘u)` for the right ones.
pub fn act(group: &FiniteGroup, variant: OperationVariant, g: GroupElement, x: &GroupSignal) -> GroupSignal {
    let v = x.values();
    GroupSignal::new(
        (0..group.order())
            .map(|u| {
                if variant.is_right() {
                    v[group.mul(g.0, u)]
                } else {
                    v[group.mul(u, g.0)]
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivarianceReport {
    pub equivariant: bool,
    pub max_deviation: f64,
}

/// Compares `φ_m(T_g x)` with `T_g φ_m(x)`.
pub fn check_equivariance(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
    g: GroupElement,
    x: &GroupSignal,
    tolerance: f64,
) -> Result<EquivarianceReport> {
    check_pair(group, m, x)?;
    group.check(g)?;
    let lhs = convolve_direct(group, m, &act(group, variant, g, x), variant)?;
    let rhs = act(group, variant, g, &convolve_direct(group, m, x, variant)?);
    let max_deviation = max_abs_diff_vec(lhs.values(), rhs.values());
    Ok(EquivarianceReport {
        equivariant: max_deviation <= tolerance,
        max_deviation,
    })
}
