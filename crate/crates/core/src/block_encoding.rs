//! Dense simulations of block encodings: LCU (PREP/SELECT), Fourier-basis
//! dilation and the digital-to-analog amplitude oracle.

use std::f64::consts::PI;
use std::fmt;

use log::warn;
use num_complex::Complex64;

use crate::convolution::{
    filter_blocks_with, operation_matrix, ConditionData, FilterBlocks, OperationVariant,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{
    identity, mat_vec, norm2, qubits_for, singular_values, spectral_norm, unitary_dilation,
    CMatrix, ONE, ZERO,
};
use crate::representations::{fourier_matrix_with, irreps, max_dim};
use crate::signal::GroupSignal;

/// Below this `‖(M/α)x‖`, post-selection is treated as never succeeding.
pub const ZERO_OUTPUT_NORM: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionTag {
    Lcu,
    FourierAbelian,
    FourierNonabelian,
    Dilation,
}

impl ConstructionTag {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionTag::Lcu => "lcu",
            ConstructionTag::FourierAbelian => "fourier_abelian",
            ConstructionTag::FourierNonabelian => "fourier_nonabelian",
            ConstructionTag::Dilation => "dilation",
        }
    }
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A unitary on `a` ancilla qubits (most significant) and `w` data qubits
/// whose `|0^a⟩` block restricted to the first `|G|` data indices encodes
/// `target / normalization`.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub unitary: CMatrix,
    pub data_qubits: usize,
    pub ancilla_qubits: usize,
    pub normalization: f64,
    pub tag: ConstructionTag,
    /// Unscaled matrix `M` the encoding is meant to represent.
    pub target: CMatrix,
    pub spectrum: ConditionData,
}

impl BlockEncoding {
    pub fn group_order(&self) -> usize {
        self.target.nrows()
    }

    pub fn data_dim(&self) -> usize {
        1 << self.data_qubits
    }

    /// `(⟨0^a| ⊗ I) W (|0^a⟩ ⊗ I)` on the unpadded data indices.
    pub fn top_left_block(&self) -> CMatrix {
        let n = self.group_order();
        self.unitary.view((0, 0), (n, n)).into_owned()
    }

    /// Spectral norm of `top_left_block − M/α`.
    pub fn block_residual(&self) -> f64 {
        let scaled = &self.target / Complex64::new(self.normalization, 0.0);
        spectral_norm(&(self.top_left_block() - scaled))
    }

    pub fn unitarity_residual(&self) -> f64 {
        crate::linalg::unitarity_residual(&self.unitary)
    }
}

/// Householder completion of `|0⟩ ↦ Σ √(|m_i|/‖m‖₁) |i⟩` on `2^w` amplitudes.
pub fn prep_unitary(m: &GroupSignal) -> Result<CMatrix> {
    let l1 = m.norm1();
    if l1 == 0.0 {
        return Err(Error::DegenerateFilter);
    }
    let dim = 1usize << qubits_for(m.len());
    let mut t = vec![ZERO; dim];
    for (ti, mi) in t.iter_mut().zip(m.values()) {
        *ti = Complex64::new((mi.norm() / l1).sqrt(), 0.0);
    }
    Ok(householder_to(&t))
}

/// Hermitian unitary `I − 2vv†/(v†v)` with `v = e₀ − t`, mapping `e₀` to a
/// unit vector `t` whose first entry is real.
fn householder_to(t: &[Complex64]) -> CMatrix {
    let dim = t.len();
    let mut v: Vec<Complex64> = t.iter().map(|x| -x).collect();
    v[0] += ONE;
    let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let mut h = identity(dim);
    if vv < 1e-30 {
        return h;
    }
    for i in 0..dim {
        for j in 0..dim {
            h[(i, j)] -= v[i] * v[j].conj() * (2.0 / vv);
        }
    }
    h
}

/// `W = (A† ⊗ I)·SELECT·(A ⊗ I)` with `SELECT = Σ_i |i⟩⟨i| ⊗ e^{iφ_i} U_i`.
pub fn lcu_block_encoding(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<BlockEncoding> {
    m.ensure_on(group)?;
    let prep = prep_unitary(m)?;
    let order = group.order();
    let w = qubits_for(order);
    let n = 1usize << w;
    let total = n * n;

    // Data permutation and phase per index-register value; padding acts as identity.
    let perms: Vec<Vec<usize>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|c| {
                    if k < order && c < order {
                        variant.permute(group, k, c)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            if k < order && m.get(k) != ZERO {
                Complex64::from_polar(1.0, m.get(k).arg())
            } else {
                ONE
            }
        })
        .collect();

    let mut unitary = CMatrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            for (k, perm) in perms.iter().enumerate() {
                let c = prep[(k, i)].conj() * prep[(k, j)] * phases[k];
                if c.norm_sqr() < 1e-300 {
                    continue;
                }
                for (col, &row) in perm.iter().enumerate() {
                    unitary[(i * n + row, j * n + col)] += c;
                }
            }
        }
    }

    let target = operation_matrix(group, m, variant)?;
    let spectrum = target.condition();
    Ok(BlockEncoding {
        unitary,
        data_qubits: w,
        ancilla_qubits: w,
        normalization: m.norm1(),
        tag: ConstructionTag::Lcu,
        target: target.matrix,
        spectrum,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FourierOptions {
    /// Round real and imaginary parts of every Fourier entry to `2^{-b}`.
    pub quantize_bits: Option<u32>,
}

/// Largest modulus over all entries of the variant's per-irrep filter blocks.
pub fn max_fourier_entry(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<f64> {
    let reps = irreps(group)?;
    let fb = filter_blocks_with(&reps, group, m, variant)?;
    Ok(max_entry(&fb).0)
}

fn max_entry(fb: &FilterBlocks) -> (f64, String) {
    let mut best = (0.0, String::new());
    for (label, b) in fb.coefficients.labels.iter().zip(&fb.coefficients.blocks) {
        for j in 0..b.nrows() {
            for k in 0..b.ncols() {
                let v = b[(j, k)].norm();
                if v > best.0 {
                    best = (v, format!("{label}[{},{}] = {}", j + 1, k + 1, b[(j, k)]));
                }
            }
        }
    }
    best
}

/// Scales `m` so its largest Fourier entry has modulus one; returns the
/// scaled filter and the factor applied.
pub fn normalize_for_fourier(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
) -> Result<(GroupSignal, f64)> {
    let peak = max_fourier_entry(group, m, variant)?;
    if peak == 0.0 {
        return Err(Error::DegenerateFilter);
    }
    let factor = 1.0 / peak;
    Ok((m.scaled(Complex64::new(factor, 0.0)), factor))
}

/// One-ancilla dilation of `B = F_G M F_G^† / d_max`, conjugated back into
/// the group basis.
pub fn fourier_block_encoding(
    group: &FiniteGroup,
    m: &GroupSignal,
    variant: OperationVariant,
    options: FourierOptions,
) -> Result<BlockEncoding> {
    m.ensure_on(group)?;
    let reps = irreps(group)?;
    let d_max = max_dim(&reps);
    let mut fb = filter_blocks_with(&reps, group, m, variant)?;
    let (peak, witness) = max_entry(&fb);
    if peak > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "Fourier entry {witness} exceeds modulus 1 (peak {peak:.6e})"
        )));
    }
    if let Some(bits) = options.quantize_bits {
        let q = f64::powi(2.0, bits as i32);
        let round = |v: f64| (v * q).round() / q;
        fb.coefficients = fb
            .coefficients
            .map(|b| b.map(|z| Complex64::new(round(z.re), round(z.im))));
    }

    let order = group.order();
    let w = qubits_for(order);
    let n = 1usize << w;
    let mut b = identity(n);
    let block = fb.block_diagonal() / Complex64::new(d_max as f64, 0.0);
    b.view_mut((0, 0), (order, order)).copy_from(&block);
    let norm_b = spectral_norm(&b);
    if norm_b > 1.0 {
        b /= Complex64::new(norm_b, 0.0);
    }
    let ud = unitary_dilation(&b);

    let fm = fourier_matrix_with(&reps, group);
    let mut f_pad = identity(n);
    f_pad.view_mut((0, 0), (order, order)).copy_from(&fm.matrix);
    let conj = identity(2).kronecker(&f_pad);
    let unitary = conj.adjoint() * ud * conj;

    let target = operation_matrix(group, m, variant)?;
    let spectrum = target.condition();
    Ok(BlockEncoding {
        unitary,
        data_qubits: w,
        ancilla_qubits: 1,
        normalization: d_max as f64,
        tag: if d_max == 1 {
            ConstructionTag::FourierAbelian
        } else {
            ConstructionTag::FourierNonabelian
        },
        target: target.matrix,
        spectrum,
    })
}

/// One-ancilla dilation of an arbitrary square matrix with `α = max(1, ‖M‖)`
/// unless a larger `alpha` is supplied.
pub fn dilation_block_encoding(target: &CMatrix, alpha: Option<f64>) -> Result<BlockEncoding> {
    let order = target.nrows();
    if target.ncols() != order {
        return Err(Error::Shape {
            expected: order,
            found: target.ncols(),
        });
    }
    let spectrum = ConditionData::from_singular_values(&singular_values(target));
    let alpha = alpha.unwrap_or(spectrum.norm.max(1.0));
    if alpha < spectrum.norm * (1.0 - 1e-12) {
        return Err(Error::Normalization {
            norm: spectrum.norm / alpha,
        });
    }
    let w = qubits_for(order);
    let n = 1usize << w;
    let mut b = identity(n);
    b.view_mut((0, 0), (order, order))
        .copy_from(&(target / Complex64::new(alpha, 0.0)));
    Ok(BlockEncoding {
        unitary: unitary_dilation(&b),
        data_qubits: w,
        ancilla_qubits: 1,
        normalization: alpha,
        tag: ConstructionTag::Dilation,
        target: target.clone(),
        spectrum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApplicationResult {
    /// `Mx/‖Mx‖`.
    pub output_state: GroupSignal,
    /// `‖(M/α)x‖²` read off the simulated ancilla-zero sector.
    pub success_probability: f64,
    pub expected_repetitions_plain: f64,
    pub expected_repetitions_amplified: u64,
    /// `(κα/‖M‖)⁻²`, zero for singular targets.
    pub worst_case_probability: f64,
    /// Largest entry of the ancilla-zero sector of `W(|0⟩⊗x) − |0⟩⊗(M/α)x`.
    pub garbage_leak: f64,
}

pub fn amplified_repetitions(p: f64) -> u64 {
    (PI / (4.0 * p.sqrt())).ceil().max(1.0) as u64
}

/// Simulates `W(|0^a⟩ ⊗ x)` and post-selects the ancilla on zero.
pub fn apply_block_encoding(be: &BlockEncoding, x: &GroupSignal) -> Result<ApplicationResult> {
    let order = be.group_order();
    if x.len() != order {
        return Err(Error::IncompatibleSignal {
            order,
            found: x.len(),
        });
    }
    let (x, norm) = x.normalized()?;
    if (norm - 1.0).abs() > 1e-12 {
        warn!("input had norm {norm:.6e}; normalized before encoding");
    }
    let n = be.data_dim();
    let ancilla_sector: Vec<Complex64> = (0..n)
        .map(|r| {
            x.values()
                .iter()
                .enumerate()
                .map(|(c, xc)| be.unitary[(r, c)] * xc)
                .sum()
        })
        .collect();

    let alpha = Complex64::new(be.normalization, 0.0);
    let mut expected = mat_vec(&be.target, x.values());
    expected.iter_mut().for_each(|v| *v /= alpha);
    let garbage_leak = ancilla_sector
        .iter()
        .enumerate()
        .map(|(i, a)| (a - expected.get(i).copied().unwrap_or(ZERO)).norm())
        .fold(0.0, f64::max);

    let amp = norm2(&ancilla_sector);
    if norm2(&expected) <= ZERO_OUTPUT_NORM || amp <= ZERO_OUTPUT_NORM {
        return Err(Error::ZeroOutput);
    }
    let p = amp * amp;
    let output_state = GroupSignal::new(
        ancilla_sector[..order]
            .iter()
            .map(|v| v / amp)
            .collect(),
    );
    let spec = be.spectrum;
    let worst_case_probability = if spec.is_singular() {
        0.0
    } else {
        (spec.kappa * be.normalization / spec.norm).powi(-2)
    };
    Ok(ApplicationResult {
        output_state,
        success_probability: p,
        expected_repetitions_plain: 1.0 / p,
        expected_repetitions_amplified: amplified_repetitions(p),
        worst_case_probability,
        garbage_leak,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalogState {
    /// Post-selected amplitudes, proportional to `√|m_i|`.
    pub amplitudes: Vec<f64>,
    pub success_probability: f64,
    pub support: usize,
    /// Factor applied so that `max |m_i| = 1`.
    pub rescale: f64,
}

/// Converts a digital oracle for `m` to the amplitude oracle by uniform
/// superposition over the support, a controlled rotation by `√|m_i|` on one
/// ancilla, and post-selection of that ancilla.
pub fn digital_to_analog(m: &GroupSignal) -> Result<AnalogState> {
    let peak = m.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::DegenerateFilter);
    }
    let rescale = 1.0 / peak;
    if (peak - 1.0).abs() > 1e-12 {
        warn!("filter peak magnitude {peak:.6e}; rescaled to 1");
    }
    let mags: Vec<f64> = m.values().iter().map(|v| v.norm() * rescale).collect();
    let support = mags.iter().filter(|&&v| v > 0.0).count();
    let uniform = 1.0 / (support as f64).sqrt();
    let branch: Vec<f64> = mags
        .iter()
        .map(|&v| if v > 0.0 { uniform * v.sqrt() } else { 0.0 })
        .collect();
    let p: f64 = branch.iter().map(|b| b * b).sum();
    let root = p.sqrt();
    Ok(AnalogState {
        amplitudes: branch.iter().map(|b| b / root).collect(),
        success_probability: p,
        support,
        rescale,
    })
}
