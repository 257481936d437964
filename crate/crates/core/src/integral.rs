//! Nyström discretization of `f(t) + λ∫K(t,s)f(s)ds = g(t)` on a periodic
//! lattice. With a displacement kernel, `I + λK` is the cross-correlation
//! matrix `Σ m_i L_i⁻¹` over `(Z/n)^d`, so the system is solved by
//! deconvolution.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::convolution::{condition_data, ConditionData, OperationVariant};
use crate::deconvolution::deconvolve_exact;
use crate::error::{Error, Result};
use crate::group::{make_cyclic, make_product, mixed_radix_digits, FiniteGroup};
use crate::linalg::{identity, CMatrix, ONE};
use crate::signal::GroupSignal;

/// Value of `∬ e^{−D(t,0)} dt` over the unit torus in two dimensions as
/// reported for the exponential Manhattan kernel.
pub const REPORTED_KERNEL_INTEGRAL: f64 = 0.7869;

/// `Σ_i min(|t_i − t′_i|, L_i − |t_i − t′_i|)` after wrapping into `[0, L_i)`.
pub fn manhattan_periodic(t: &[f64], t_prime: &[f64], period: &[f64]) -> f64 {
    assert!(t.len() == t_prime.len() && t.len() == period.len());
    t.iter()
        .zip(t_prime)
        .zip(period)
        .map(|((a, b), l)| {
            let diff = (a - b).abs().rem_euclid(*l);
            diff.min(l - diff)
        })
        .sum()
}

/// Kernel `K(t, t′) = k(D(t, t′))` of the periodic Manhattan distance.
#[derive(Clone)]
pub struct PeriodicKernel {
    name: String,
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    period: Vec<f64>,
}

impl fmt::Debug for PeriodicKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicKernel")
            .field("name", &self.name)
            .field("period", &self.period)
            .finish()
    }
}

impl PeriodicKernel {
    /// `profile` must be non-negative on `[0, Σ L_i / 2]`.
    pub fn new(
        name: impl Into<String>,
        period: Vec<f64>,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if period.is_empty() || period.iter().any(|l| l.is_nan() || *l <= 0.0) {
            return Err(Error::InvalidInput(format!("invalid lattice period {period:?}")));
        }
        Ok(PeriodicKernel {
            name: name.into(),
            profile: Arc::new(profile),
            period,
        })
    }

    /// `e^{−D(t, t′)}` on the unit torus of dimension `d`.
    pub fn exp_manhattan(d: usize) -> Result<Self> {
        PeriodicKernel::new("exp-manhattan", vec![1.0; d], |r| (-r).exp())
    }

    pub fn parse(name: &str, d: usize) -> Result<Self> {
        match name {
            "exp-manhattan" => PeriodicKernel::exp_manhattan(d),
            other => Err(Error::Parse(format!("unknown kernel `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.period.len()
    }

    pub fn period(&self) -> &[f64] {
        &self.period
    }

    pub fn eval(&self, t: &[f64], t_prime: &[f64]) -> f64 {
        (self.profile)(manhattan_periodic(t, t_prime, &self.period))
    }

    /// Grid point with multi-index `digits`: `t_k = L_k·i_k/n`.
    pub fn grid_point(&self, digits: &[usize], n: usize) -> Vec<f64> {
        digits
            .iter()
            .zip(&self.period)
            .map(|(&i, l)| l * i as f64 / n as f64)
            .collect()
    }

    /// Quadrature weight `Π L_k / n^d`.
    pub fn weight(&self, n: usize) -> f64 {
        self.period.iter().map(|l| l / n as f64).product()
    }
}

pub fn lattice_group(n: usize, d: usize) -> Result<FiniteGroup> {
    if d == 0 {
        return Err(Error::InvalidInput("lattice dimension must be positive".into()));
    }
    let c = make_cyclic(n)?;
    make_product(&vec![c; d])
}

/// Discrete kernel column `K_{i0} = w·K(t_i, 0)` in lexicographic order.
pub fn kernel_column(n: usize, kernel: &PeriodicKernel) -> Vec<f64> {
    let d = kernel.dim();
    let radices = vec![n; d];
    let origin = vec![0.0; d];
    let w = kernel.weight(n);
    (0..n.pow(d as u32))
        .map(|i| w * kernel.eval(&kernel.grid_point(&mixed_radix_digits(i, &radices), n), &origin))
        .collect()
}

fn check_stability(lambda: f64, kernel_sum: f64) -> Result<()> {
    let product = lambda.abs() * kernel_sum;
    if product >= 1.0 {
        return Err(Error::IllConditioned {
            kernel_sum,
            product,
        });
    }
    Ok(())
}

/// `m_i = δ_{i0} + λ K_{i0}`.
pub fn build_filter(n: usize, lambda: f64, kernel: &PeriodicKernel) -> Result<GroupSignal> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let column = kernel_column(n, kernel);
    check_stability(lambda, column.iter().sum())?;
    let mut m: Vec<Complex64> = column.iter().map(|k| Complex64::new(lambda * k, 0.0)).collect();
    m[0] += ONE;
    Ok(GroupSignal::new(m))
}

/// `∫ e^{−d(u,s)} (s − s³) ds` over the unit circle.
pub fn benchmark_h(u: f64) -> f64 {
    let sqrt_e = std::f64::consts::E.sqrt();
    let cubic = -2.0 * u * (5.0 + u * u);
    if u < 0.5 {
        -3.0 * (-u).exp() + cubic + (1.0 + 2.0 * u) * (21.0 + 4.0 * u * (1.0 + u)) / (4.0 * sqrt_e)
    } else {
        9.0 * (u - 1.0).exp() + cubic
            + (-1.0 + 2.0 * u) * (21.0 + 4.0 * u * (-1.0 + u)) / (4.0 * sqrt_e)
    }
}

fn sample(n: usize, d: usize, f: impl Fn(&[f64]) -> f64) -> GroupSignal {
    let radices = vec![n; d];
    GroupSignal::new(
        (0..n.pow(d as u32))
            .map(|i| {
                let t: Vec<f64> = mixed_radix_digits(i, &radices)
                    .into_iter()
                    .map(|k| k as f64 / n as f64)
                    .collect();
                Complex64::new(f(&t), 0.0)
            })
            .collect(),
    )
}

/// `f(t) = Π (t_k − t_k³)` on the `n^d` grid.
pub fn example_f(n: usize, d: usize) -> GroupSignal {
    sample(n, d, |t| t.iter().map(|x| x - x * x * x).product())
}

/// `g = f + λ Π h(t_k)`, the right-hand side whose exact solution is
/// [`example_f`] under the exponential Manhattan kernel.
pub fn example_g(n: usize, d: usize, lambda: f64) -> GroupSignal {
    sample(n, d, |t| {
        t.iter().map(|x| x - x * x * x).product::<f64>()
            + lambda * t.iter().map(|x| benchmark_h(*x)).product::<f64>()
    })
}

pub fn benchmark_f(n: usize) -> GroupSignal {
    example_f(n, 2)
}

pub fn benchmark_g(n: usize) -> GroupSignal {
    example_g(n, 2, 1.0)
}

#[derive(Debug, Clone)]
pub struct IntegralProblem {
    pub n: usize,
    pub lambda: f64,
    pub kernel: PeriodicKernel,
    pub g: GroupSignal,
    pub f_true: Option<GroupSignal>,
    pub group: FiniteGroup,
    pub filter: GroupSignal,
    /// `Σ_i K_{i0}`, an upper bound on `‖K‖`.
    pub kernel_sum: f64,
}

impl IntegralProblem {
    pub fn new(
        n: usize,
        lambda: f64,
        kernel: PeriodicKernel,
        g: GroupSignal,
        f_true: Option<GroupSignal>,
    ) -> Result<Self> {
        let group = lattice_group(n, kernel.dim())?;
        g.ensure_on(&group)?;
        if let Some(f) = &f_true {
            f.ensure_on(&group)?;
        }
        let filter = build_filter(n, lambda, &kernel)?;
        let kernel_sum = kernel_column(n, &kernel).iter().sum();
        Ok(IntegralProblem {
            n,
            lambda,
            kernel,
            g,
            f_true,
            group,
            filter,
            kernel_sum,
        })
    }

    /// `λ = 1`, exponential Manhattan kernel on the unit square.
    pub fn benchmark(n: usize) -> Result<Self> {
        IntegralProblem::example(n, 2, 1.0)
    }

    pub fn example(n: usize, d: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("need n >= 2, got {n}")));
        }
        IntegralProblem::new(
            n,
            lambda,
            PeriodicKernel::exp_manhattan(d)?,
            example_g(n, d, lambda),
            Some(example_f(n, d)),
        )
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// `I + λK` assembled entrywise from kernel evaluations.
    pub fn assembled_matrix(&self) -> CMatrix {
        let len = self.group.order();
        let radices = vec![self.n; self.dim()];
        let points: Vec<Vec<f64>> = (0..len)
            .map(|i| self.kernel.grid_point(&mixed_radix_digits(i, &radices), self.n))
            .collect();
        let w = self.kernel.weight(self.n);
        let mut out = identity(len);
        for (i, ti) in points.iter().enumerate() {
            for (j, tj) in points.iter().enumerate() {
                out[(i, j)] += Complex64::new(self.lambda * w * self.kernel.eval(ti, tj), 0.0);
            }
        }
        out
    }
}

/// Solves `m ⋆ f = g`; the unnormalized solution.
pub fn solve(problem: &IntegralProblem) -> Result<GroupSignal> {
    let r = deconvolve_exact(
        &problem.group,
        &problem.filter,
        &problem.g,
        OperationVariant::CrossCorrelation,
    )?;
    Ok(r.solution())
}

/// `‖f_num − f_true‖₁ / len`.
pub fn error_metric(f_num: &GroupSignal, f_true: &GroupSignal) -> Result<f64> {
    if f_num.len() != f_true.len() {
        return Err(Error::Shape {
            expected: f_true.len(),
            found: f_num.len(),
        });
    }
    if f_num.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = f_num
        .values()
        .iter()
        .zip(f_true.values())
        .map(|(a, b)| (a - b).norm())
        .sum();
    Ok(total / f_num.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionBound {
    /// `(1 + |λ|S)/(1 − |λ|S)` with `S = Σ K_{i0}`.
    pub kappa_bound: f64,
    /// `1 − |λ|S ≤ σ_min ≤ ‖I + λK‖`.
    pub norm_lower: f64,
    pub kernel_sum: f64,
}

pub fn condition_bound(problem: &IntegralProblem) -> Result<ConditionBound> {
    bound_from_sum(problem.lambda, problem.kernel_sum)
}

/// Same bound evaluated with an externally supplied estimate of `‖K‖`.
pub fn bound_from_sum(lambda: f64, kernel_sum: f64) -> Result<ConditionBound> {
    check_stability(lambda, kernel_sum)?;
    let q = lambda.abs() * kernel_sum;
    Ok(ConditionBound {
        kappa_bound: (1.0 + q) / (1.0 - q),
        norm_lower: 1.0 - q,
        kernel_sum,
    })
}

pub fn measured_condition(problem: &IntegralProblem) -> Result<ConditionData> {
    condition_data(&problem.group, &problem.filter, OperationVariant::CrossCorrelation)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub error: f64,
    pub kappa_measured: f64,
    pub kappa_bound: f64,
    pub kernel_sum: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<StudyRow>,
    /// Least-squares slope of `ln(error)` against `ln(n)`.
    pub slope: f64,
}

impl ConvergenceStudy {
    pub fn plot_points(&self) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .map(|r| ((r.n as f64).ln(), r.error.ln()))
            .collect()
    }
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn study_row(n: usize, d: usize, lambda: f64) -> Result<StudyRow> {
    let start = Instant::now();
    let problem = IntegralProblem::example(n, d, lambda)?;
    let f = solve(&problem)?;
    let error = error_metric(&f, problem.f_true.as_ref().expect("example has a solution"))?;
    let kappa_measured = measured_condition(&problem)?.kappa;
    let bound = condition_bound(&problem)?;
    Ok(StudyRow {
        n,
        error,
        kappa_measured,
        kappa_bound: bound.kappa_bound,
        kernel_sum: bound.kernel_sum,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs the manufactured-solution experiment for each `n`, one thread per
/// resolution, rows ordered as given.
pub fn convergence_study(n_list: &[usize], d: usize, lambda: f64) -> Result<ConvergenceStudy> {
    if n_list.len() < 3 {
        return Err(Error::Precondition(format!(
            "convergence study needs at least 3 resolutions, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("resolutions must be strictly increasing".into()));
    }
    let rows: Vec<Result<StudyRow>> = std::thread::scope(|s| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| s.spawn(move || study_row(n, d, lambda)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("study worker panicked"))
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), r.error.ln()))
        .collect();
    Ok(ConvergenceStudy {
        slope: least_squares_slope(&points),
        rows,
    })
}
