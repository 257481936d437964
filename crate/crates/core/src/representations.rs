//! Irreducible representations, the unitary Fourier matrix `F_G` and the
//! classical group Fourier transform `f̂(ρ) = Σ_u f(u) ρ(u)`.
//!
//! Characters of `Z/n` are `χ_k(x) = ω^{kx}` with `ω = e^{2πi/n}`, so the
//! Fourier matrix of a cyclic group has entries `ω^{kx}/√n`. Rows of `F_G`
//! are ordered by irrep (in the order returned by [`irreps`]) and then
//! row-major over the matrix entries `(j, k)` of each irrep.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{mixed_radix_digits, Family, FiniteGroup};
use crate::linalg::{mat_vec, CMatrix, ONE, ZERO};
use crate::signal::GroupSignal;

fn roots_of_unity(n: usize) -> Arc<[Complex64]> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect::<Vec<_>>()
        .into()
}

#[derive(Debug, Clone)]
enum Form {
    Cyclic {
        n: usize,
        k: usize,
        roots: Arc<[Complex64]>,
    },
    /// `(-1)^{x·rot + a·refl}` on `(x, a)`.
    DihedralSign { n: usize, rot: bool, refl: bool },
    Dihedral2 {
        n: usize,
        h: usize,
        roots: Arc<[Complex64]>,
    },
    Tensor {
        radices: Vec<usize>,
        factors: Vec<Irrep>,
    },
}

/// One irreducible unitary representation, evaluated on demand.
#[derive(Debug, Clone)]
pub struct Irrep {
    label: String,
    dim: usize,
    form: Form,
}

impl Irrep {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value of a one-dimensional irrep.
    pub fn character(&self, u: usize) -> Complex64 {
        debug_assert_eq!(self.dim, 1);
        match &self.form {
            Form::Cyclic { n, k, roots } => roots[(k * u) % n],
            Form::DihedralSign { n, rot, refl } => {
                let (x, a) = (u % n, u / n);
                let odd = (*rot && x % 2 == 1) ^ (*refl && a == 1);
                if odd {
                    -ONE
                } else {
                    ONE
                }
            }
            Form::Tensor { radices, factors } => {
                let mut rest = u;
                let mut acc = ONE;
                for (f, r) in factors.iter().zip(radices).rev() {
                    acc *= f.character(rest % r);
                    rest /= r;
                }
                acc
            }
            Form::Dihedral2 { .. } => unreachable!("two-dimensional irrep has no scalar value"),
        }
    }

    /// `ρ(u)` as a dense `dim × dim` matrix.
    pub fn matrix(&self, u: usize) -> CMatrix {
        match &self.form {
            Form::Dihedral2 { n, h, roots } => {
                let (x, a) = (u % n, u / n);
                let p = roots[(h * x) % n];
                let q = p.conj();
                if a == 0 {
                    CMatrix::from_row_slice(2, 2, &[p, ZERO, ZERO, q])
                } else {
                    CMatrix::from_row_slice(2, 2, &[ZERO, p, q, ZERO])
                }
            }
            Form::Tensor { radices, factors } if self.dim > 1 => {
                let digits = mixed_radix_digits(u, radices);
                factors
                    .iter()
                    .zip(digits)
                    .fold(CMatrix::identity(1, 1), |acc, (f, d)| acc.kronecker(&f.matrix(d)))
            }
            _ => CMatrix::from_element(1, 1, self.character(u)),
        }
    }

    pub fn matrices(&self, order: usize) -> Vec<CMatrix> {
        (0..order).map(|u| self.matrix(u)).collect()
    }
}

/// All irreps of a cyclic, dihedral or product group.
///
/// Generic (table-loaded) groups have no irreps here; use the matrix path.
pub fn irreps(group: &FiniteGroup) -> Result<Vec<Irrep>> {
    match group.family() {
        Family::Cyclic(n) => {
            let roots = roots_of_unity(*n);
            Ok((0..*n)
                .map(|k| Irrep {
                    label: format!("chi_{k}"),
                    dim: 1,
                    form: Form::Cyclic {
                        n: *n,
                        k,
                        roots: roots.clone(),
                    },
                })
                .collect())
        }
        Family::Dihedral(n) => Ok(dihedral_irreps(*n)),
        Family::Product(factors) => {
            let per_factor = factors.iter().map(irreps).collect::<Result<Vec<_>>>()?;
            let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
            let counts: Vec<usize> = per_factor.iter().map(|v| v.len()).collect();
            let total: usize = counts.iter().product();
            Ok((0..total)
                .map(|idx| {
                    let pick = mixed_radix_digits(idx, &counts);
                    let chosen: Vec<Irrep> = pick
                        .iter()
                        .zip(&per_factor)
                        .map(|(&i, irs)| irs[i].clone())
                        .collect();
                    let label = format!(
                        "({})",
                        chosen.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join("*")
                    );
                    Irrep {
                        label,
                        dim: chosen.iter().map(|c| c.dim).product(),
                        form: Form::Tensor {
                            radices: radices.clone(),
                            factors: chosen,
                        },
                    }
                })
                .collect())
        }
        Family::Generic => Err(Error::IrrepsUnavailable("generic".into())),
    }
}

fn dihedral_irreps(n: usize) -> Vec<Irrep> {
    let sign = |label: &str, rot, refl| Irrep {
        label: label.to_string(),
        dim: 1,
        form: Form::DihedralSign { n, rot, refl },
    };
    let mut out = vec![sign("sigma_tt", false, false), sign("sigma_ts", false, true)];
    if n.is_multiple_of(2) {
        out.push(sign("sigma_st", true, false));
        out.push(sign("sigma_ss", true, true));
    }
    let roots = roots_of_unity(n);
    let h_max = n.div_ceil(2).saturating_sub(1);
    for h in 1..=h_max {
        out.push(Irrep {
            label: format!("sigma_{h}"),
            dim: 2,
            form: Form::Dihedral2 {
                n,
                h,
                roots: roots.clone(),
            },
        });
    }
    out
}

pub fn max_dim(irreps: &[Irrep]) -> usize {
    irreps.iter().map(Irrep::dim).max().unwrap_or(1)
}

/// Per-irrep coefficient matrices `ĥ(ρ)` in irrep order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub labels: Vec<String>,
    pub blocks: Vec<CMatrix>,
}

impl FourierCoefficients {
    pub fn get(&self, label: &str) -> Option<&CMatrix> {
        self.labels.iter().position(|l| l == label).map(|i| &self.blocks[i])
    }

    pub fn map(&self, mut f: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        FourierCoefficients {
            labels: self.labels.clone(),
            blocks: self.blocks.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, mut f: impl FnMut(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        FourierCoefficients {
            labels: self.labels.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

/// Unnormalized transform `f̂(ρ) = Σ_u f(u) ρ(u)`.
pub fn classical_fourier(group: &FiniteGroup, f: &GroupSignal) -> Result<FourierCoefficients> {
    let reps = irreps(group)?;
    classical_fourier_with(&reps, group, f)
}

pub fn classical_fourier_with(
    reps: &[Irrep],
    group: &FiniteGroup,
    f: &GroupSignal,
) -> Result<FourierCoefficients> {
    if f.len() != group.order() {
        return Err(Error::Shape {
            expected: group.order(),
            found: f.len(),
        });
    }
    let values = f.values();
    let blocks = reps
        .iter()
        .map(|rho| {
            if rho.dim() == 1 {
                let s = values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != ZERO)
                    .fold(ZERO, |acc, (u, v)| acc + v * rho.character(u));
                CMatrix::from_element(1, 1, s)
            } else {
                let mut acc = CMatrix::zeros(rho.dim(), rho.dim());
                for (u, v) in values.iter().enumerate() {
                    if *v != ZERO {
                        acc += rho.matrix(u) * *v;
                    }
                }
                acc
            }
        })
        .collect();
    Ok(FourierCoefficients {
        labels: reps.iter().map(|r| r.label.clone()).collect(),
        blocks,
    })
}

/// Inversion `f(u) = (1/|G|) Σ_ρ d_ρ tr(ρ(u⁻¹) f̂(ρ))`.
pub fn inverse_classical_fourier(
    reps: &[Irrep],
    group: &FiniteGroup,
    coeffs: &FourierCoefficients,
) -> Result<GroupSignal> {
    if coeffs.blocks.len() != reps.len() {
        return Err(Error::Shape {
            expected: reps.len(),
            found: coeffs.blocks.len(),
        });
    }
    let order = group.order();
    let scale = 1.0 / order as f64;
    let mut out = vec![ZERO; order];
    for (rho, block) in reps.iter().zip(&coeffs.blocks) {
        let d = rho.dim();
        if block.shape() != (d, d) {
            return Err(Error::Shape {
                expected: d,
                found: block.nrows(),
            });
        }
        if d == 1 {
            let c = block[(0, 0)];
            if c == ZERO {
                continue;
            }
            for (u, o) in out.iter_mut().enumerate() {
                // ρ(u⁻¹) = conj(ρ(u)) for unitary characters.
                *o += rho.character(u).conj() * c;
            }
        } else {
            for (u, o) in out.iter_mut().enumerate() {
                let m = rho.matrix(group.inv(u));
                *o += (m * block).trace() * d as f64;
            }
        }
    }
    for o in &mut out {
        *o *= scale;
    }
    Ok(GroupSignal::new(out))
}

/// Row label of `F_G`: irrep position plus 1-based intra-irrep entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowLabel {
    pub irrep: usize,
    pub label: String,
    pub j: usize,
    pub k: usize,
}

impl std::fmt::Display for RowLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.label, self.j, self.k)
    }
}

/// Unitary group Fourier transform with entry `√(d_ρ/|G|)·ρ(x)_{j,k}` at row
/// `(ρ, j, k)` and column `x`.
#[derive(Debug, Clone)]
pub struct FourierMatrix {
    pub group: FiniteGroup,
    pub matrix: CMatrix,
    pub row_index: Vec<RowLabel>,
}

pub fn fourier_matrix(group: &FiniteGroup) -> Result<FourierMatrix> {
    let reps = irreps(group)?;
    Ok(fourier_matrix_with(&reps, group))
}

pub fn fourier_matrix_with(reps: &[Irrep], group: &FiniteGroup) -> FourierMatrix {
    let order = group.order();
    let mut matrix = CMatrix::zeros(order, order);
    let mut row_index = Vec::with_capacity(order);
    let mut row = 0;
    for (ri, rho) in reps.iter().enumerate() {
        let d = rho.dim();
        let c = (d as f64 / order as f64).sqrt();
        for j in 0..d {
            for k in 0..d {
                row_index.push(RowLabel {
                    irrep: ri,
                    label: rho.label.clone(),
                    j: j + 1,
                    k: k + 1,
                });
            }
        }
        for x in 0..order {
            let m = rho.matrix(x);
            for j in 0..d {
                for k in 0..d {
                    matrix[(row + j * d + k, x)] = m[(j, k)] * c;
                }
            }
        }
        row += d * d;
    }
    debug_assert_eq!(row, order);
    FourierMatrix {
        group: group.clone(),
        matrix,
        row_index,
    }
}

impl FourierMatrix {
    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    /// Lays classical coefficients out along `row_index`, scaled by `√(d_ρ/|G|)`.
    pub fn arrange(&self, coeffs: &FourierCoefficients) -> Vec<Complex64> {
        let order = self.order() as f64;
        self.row_index
            .iter()
            .map(|r| {
                let b = &coeffs.blocks[r.irrep];
                b[(r.j - 1, r.k - 1)] * (b.nrows() as f64 / order).sqrt()
            })
            .collect()
    }
}

pub fn fourier_apply(fm: &FourierMatrix, f: &GroupSignal) -> Result<GroupSignal> {
    check_len(fm, f)?;
    Ok(GroupSignal::new(mat_vec(&fm.matrix, f.values())))
}

pub fn fourier_apply_inverse(fm: &FourierMatrix, f: &GroupSignal) -> Result<GroupSignal> {
    check_len(fm, f)?;
    Ok(GroupSignal::new(mat_vec(&fm.matrix.adjoint(), f.values())))
}

fn check_len(fm: &FourierMatrix, f: &GroupSignal) -> Result<()> {
    if f.len() != fm.order() {
        return Err(Error::Shape {
            expected: fm.order(),
            found: f.len(),
        });
    }
    Ok(())
}

/// `⊕_ρ B_ρ ⊗ I_{d_ρ}` in `F_G` row order.
pub fn direct_sum_left(blocks: &[CMatrix]) -> CMatrix {
    direct_sum_with(blocks, |b| b.kronecker(&CMatrix::identity(b.nrows(), b.nrows())))
}

/// `⊕_ρ I_{d_ρ} ⊗ B_ρᵀ`, the right-action counterpart.
pub fn direct_sum_right(blocks: &[CMatrix]) -> CMatrix {
    direct_sum_with(blocks, |b| CMatrix::identity(b.nrows(), b.nrows()).kronecker(&b.transpose()))
}

fn direct_sum_with(blocks: &[CMatrix], f: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows() * b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        let e = f(b);
        let s = e.nrows();
        out.view_mut((at, at), (s, s)).copy_from(&e);
        at += s;
    }
    out
}
