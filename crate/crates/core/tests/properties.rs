//! Property tests for the algebraic invariants of every module.

use groupconv::block_encoding::{
    apply_block_encoding, fourier_block_encoding, lcu_block_encoding, normalize_for_fourier,
    prep_unitary,
};
use groupconv::convolution::{
    check_equivariance, condition_data, condition_data_dense, convolve_direct, convolve_fourier,
    operation_matrix, OperationVariant,
};
use groupconv::deconvolution::{deconvolve_exact, deconvolve_svt, EncodingMethod};
use groupconv::group::{
    left_regular, make_cyclic, make_dihedral, make_product, right_regular, FiniteGroup,
    GroupElement,
};
use groupconv::integral::{manhattan_periodic, IntegralProblem, PeriodicKernel};
use groupconv::io::{read_signal_csv, read_signal_json, write_signal_csv, write_signal_json};
use groupconv::linalg::{
    identity, kron, max_abs_diff, max_abs_diff_vec, norm2, spectral_norm, unitarity_residual,
    CMatrix,
};
use groupconv::polynomial::build_inverse_polynomial;
use groupconv::representations::{
    classical_fourier, fourier_apply, fourier_matrix, irreps, max_dim, FourierMatrix,
};
use groupconv::signal::GroupSignal;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(n: usize) -> FiniteGroup {
    make_cyclic(n).unwrap()
}

fn d(n: usize) -> FiniteGroup {
    make_dihedral(n).unwrap()
}

fn zoo() -> Vec<FiniteGroup> {
    vec![
        c(1),
        c(2),
        c(5),
        c(8),
        d(3),
        d(4),
        d(5),
        d(6),
        make_product(&[c(2), c(3)]).unwrap(),
        make_product(&[c(3), c(3)]).unwrap(),
        make_product(&[c(2), c(4)]).unwrap(),
        make_product(&[c(2), d(3)]).unwrap(),
        c(48),
        d(24),
        make_product(&[c(2), d(12)]).unwrap(),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn signal(len: usize) -> impl Strategy<Value = GroupSignal> {
    proptest::collection::vec(complex(), len).prop_map(GroupSignal::new)
}

fn unit_signal(len: usize) -> impl Strategy<Value = GroupSignal> {
    signal(len).prop_filter_map("nonzero", |s| s.normalized().ok().map(|p| p.0))
}

fn variant() -> impl Strategy<Value = OperationVariant> {
    prop::sample::select(OperationVariant::ALL.to_vec())
}

/// A group from the zoo with two signals on it.
fn group_pair() -> impl Strategy<Value = (FiniteGroup, GroupSignal, GroupSignal)> {
    prop::sample::select(zoo()).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), signal(n), signal(n))
    })
}

fn block_diag_of(reps: &[groupconv::representations::Irrep], u: usize, right: bool) -> CMatrix {
    let blocks: Vec<CMatrix> = reps.iter().map(|r| r.matrix(u)).collect();
    if right {
        // F R_u F† = ⊕ I ⊗ ρ(u)ᵀ: the Fourier image of x ↦ x̂ρ(u).
        groupconv::representations::direct_sum_right(&blocks)
    } else {
        groupconv::representations::direct_sum_left(&blocks)
    }
}

// ---- group_core -------------------------------------------------------------

#[test]
fn regular_representation_laws_exhaustive() {
    for g in zoo().into_iter().chain([d(12), make_product(&[c(4), c(12)]).unwrap()]) {
        if g.order() > 48 {
            continue;
        }
        let ls: Vec<_> = g.elements().map(|u| left_regular(&g, u).unwrap()).collect();
        let rs: Vec<_> = g.elements().map(|u| right_regular(&g, u).unwrap()).collect();
        for u in 0..g.order() {
            assert_eq!(ls[u].inverse(), ls[g.inv(u)]);
            assert_eq!(ls[u].to_dense().transpose(), ls[g.inv(u)].to_dense());
            for v in 0..g.order() {
                assert_eq!(ls[u].compose(&ls[v]), ls[g.mul(u, v)]);
                assert_eq!(rs[u].compose(&rs[v]), rs[g.mul(v, u)]);
                assert_eq!(ls[u].compose(&rs[v]), rs[v].compose(&ls[u]));
            }
        }
    }
}

#[test]
fn table_axioms() {
    for g in zoo() {
        let n = g.order();
        for i in 0..n {
            assert_eq!(g.mul(0, i), i);
            assert_eq!(g.mul(i, 0), i);
            assert_eq!(g.mul(i, g.inv(i)), 0);
            let mut row: Vec<usize> = (0..n).map(|j| g.mul(i, j)).collect();
            let mut col: Vec<usize> = (0..n).map(|j| g.mul(j, i)).collect();
            row.sort_unstable();
            col.sort_unstable();
            assert_eq!(row, (0..n).collect::<Vec<_>>());
            assert_eq!(col, (0..n).collect::<Vec<_>>());
        }
    }
}

// ---- representations --------------------------------------------------------

#[test]
fn irreps_are_unitary_homomorphisms() {
    for g in zoo() {
        let reps = irreps(&g).unwrap();
        let sum: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
        assert_eq!(sum, g.order());
        for r in &reps {
            let ms = r.matrices(g.order());
            for u in 0..g.order() {
                assert!(unitarity_residual(&ms[u]) < 1e-10);
                for v in 0..g.order() {
                    assert!(max_abs_diff(&(&ms[u] * &ms[v]), &ms[g.mul(u, v)]) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn fourier_matrix_block_diagonalizes_regular_representations() {
    for g in zoo() {
        let reps = irreps(&g).unwrap();
        let fm = fourier_matrix(&g).unwrap();
        assert!(unitarity_residual(&fm.matrix) < 1e-10);
        for u in g.elements() {
            let l = left_regular(&g, u).unwrap().to_dense();
            let r = right_regular(&g, u).unwrap().to_dense();
            let fl = &fm.matrix * l * fm.matrix.adjoint();
            let fr = &fm.matrix * r * fm.matrix.adjoint();
            assert!(max_abs_diff(&fl, &block_diag_of(&reps, u.0, false)) < 1e-10);
            assert!(max_abs_diff(&fr, &block_diag_of(&reps, u.0, true)) < 1e-10);
        }
    }
}

#[test]
fn abelian_fourier_matrix_is_tensor_of_dfts() {
    let g = make_product(&[c(2), c(3), c(4)]).unwrap();
    let f = |n| fourier_matrix(&c(n)).unwrap().matrix;
    let t = kron(&kron(&f(2), &f(3)), &f(4));
    assert!(max_abs_diff(&fourier_matrix(&g).unwrap().matrix, &t) < 1e-12);
}

#[test]
fn abelian_operations_are_diagonalized() {
    let g = make_product(&[c(2), c(3), c(4)]).unwrap();
    let fm = fourier_matrix(&g).unwrap();
    let m = GroupSignal::new((0..24).map(|i| Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.03)).collect());
    for v in OperationVariant::ALL {
        let om = operation_matrix(&g, &m, v).unwrap();
        let dm = &fm.matrix * &om.matrix * fm.matrix.adjoint();
        let off = CMatrix::from_fn(24, 24, |i, j| if i == j { num_complex::Complex64::new(0.0, 0.0) } else { dm[(i, j)] });
        assert!(off.iter().all(|z| z.norm() < 1e-10), "{v}");
    }
}

fn fourier_of(g: &FiniteGroup) -> FourierMatrix {
    fourier_matrix(g).unwrap()
}

proptest! {
    #[test]
    fn parseval_and_normalization((g, f, _) in group_pair()) {
        let fm = fourier_of(&g);
        let fh = fourier_apply(&fm, &f).unwrap();
        prop_assert!((norm2(fh.values()) - f.norm2()).abs() < 1e-10);
        let arranged = fm.arrange(&classical_fourier(&g, &f).unwrap());
        prop_assert!(max_abs_diff_vec(&arranged, fh.values()) < 1e-10);
    }

    // ---- convolution --------------------------------------------------------

    #[test]
    fn path_equivalence((g, m, x) in group_pair(), v in variant()) {
        let a = convolve_direct(&g, &m, &x, v).unwrap();
        let b = operation_matrix(&g, &m, v).unwrap().apply(&x).unwrap();
        let f = convolve_fourier(&g, &m, &x, v).unwrap();
        prop_assert!(max_abs_diff_vec(a.values(), b.values()) < 1e-9);
        prop_assert!(max_abs_diff_vec(a.values(), f.values()) < 1e-9);
    }

    #[test]
    fn norm_bounded_by_l1((g, m, _) in group_pair(), v in variant()) {
        let c = condition_data(&g, &m, v).unwrap();
        prop_assert!(c.norm <= m.norm1() + 1e-12);
        let dense = condition_data_dense(&g, &m, v).unwrap();
        prop_assert!((c.norm - dense.norm).abs() < 1e-9);
        prop_assert!((c.sigma_min - dense.sigma_min).abs() < 1e-9);
    }

    #[test]
    fn right_convolution_is_swapped_convolution((g, m, x) in group_pair()) {
        let a = convolve_direct(&g, &m, &x, OperationVariant::RightConvolution).unwrap();
        let b = convolve_direct(&g, &x, &m, OperationVariant::Convolution).unwrap();
        prop_assert!(max_abs_diff_vec(a.values(), b.values()) < 1e-12);
    }

    #[test]
    fn equivariance((g, m, x) in group_pair(), v in variant(), gi in 0usize..1000) {
        let e = GroupElement(gi % g.order());
        let r = check_equivariance(&g, &m, v, e, &x, 1e-10).unwrap();
        prop_assert!(r.equivariant, "deviation {}", r.max_deviation);
    }
}

/// Groups small enough for dense LCU unitaries of size `4^w`.
fn lcu_zoo() -> Vec<FiniteGroup> {
    vec![c(2), c(3), c(6), c(8), d(3), d(4), make_product(&[c(2), c(3)]).unwrap(), d(8), c(13), make_product(&[c(2), c(2), c(4)]).unwrap()]
}

fn lcu_case() -> impl Strategy<Value = (FiniteGroup, GroupSignal, GroupSignal)> {
    prop::sample::select(lcu_zoo()).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), signal(n).prop_filter("nonzero", |s| s.norm1() > 1e-3), unit_signal(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // ---- block_encoding -----------------------------------------------------

    #[test]
    fn prep_is_unitary_with_target_column(m in signal(11).prop_filter("nonzero", |s| s.norm1() > 0.0)) {
        let u = prep_unitary(&m).unwrap();
        prop_assert!(unitarity_residual(&u) < 1e-12);
        let l1 = m.norm1();
        for i in 0..16 {
            let want = if i < 11 { m.get(i).norm() / l1 } else { 0.0 };
            prop_assert!((u[(i, 0)].norm_sqr() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn lcu_contract((g, m, x) in lcu_case(), v in variant()) {
        let be = lcu_block_encoding(&g, &m, v).unwrap();
        prop_assert!(be.unitarity_residual() < 1e-10);
        prop_assert!(be.block_residual() < 1e-10);
        let om = operation_matrix(&g, &m, v).unwrap();
        let expected = norm2(om.apply(&x).unwrap().values()).powi(2) / be.normalization.powi(2);
        match apply_block_encoding(&be, &x) {
            Ok(r) => {
                prop_assert!((r.success_probability - expected).abs() < 1e-12);
                prop_assert!(r.garbage_leak < 1e-10);
                prop_assert!(r.success_probability + 1e-12 >= r.worst_case_probability);
            }
            Err(groupconv::Error::ZeroOutput) => prop_assert!(expected < 1e-20),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn fourier_contract((g, m, x) in group_pair(), v in variant()) {
        prop_assume!(m.norm1() > 1e-3);
        let (m, _) = normalize_for_fourier(&g, &m, v).unwrap();
        let be = fourier_block_encoding(&g, &m, v, Default::default()).unwrap();
        let reps = irreps(&g).unwrap();
        prop_assert_eq!(be.normalization, max_dim(&reps) as f64);
        prop_assert!(be.unitarity_residual() < 1e-10);
        prop_assert!(be.block_residual() < 1e-10);
        let (x, _) = x.normalized().unwrap();
        if let Ok(r) = apply_block_encoding(&be, &x) {
            prop_assert!(r.garbage_leak < 1e-10);
            prop_assert!(r.success_probability + 1e-12 >= r.worst_case_probability);
        }
    }

    #[test]
    fn constructions_agree_up_to_alpha((g, m, _) in lcu_case(), v in variant()) {
        let (m, _) = normalize_for_fourier(&g, &m, v).unwrap();
        let a = lcu_block_encoding(&g, &m, v).unwrap();
        let b = fourier_block_encoding(&g, &m, v, Default::default()).unwrap();
        let ta = a.top_left_block() * Complex64::new(a.normalization, 0.0);
        let tb = b.top_left_block() * Complex64::new(b.normalization, 0.0);
        prop_assert!(max_abs_diff(&ta, &tb) < 1e-10);
    }

    #[test]
    fn lcu_success_constant(raw in signal(6)) {
        // Σ m_i = 1 makes the uniform state a fixed point, so p = α⁻².
        let total: Complex64 = raw.values().iter().sum();
        prop_assume!(total.norm() > 1e-2);
        let m = raw.scaled(total.inv());
        let g = c(6);
        let be = lcu_block_encoding(&g, &m, OperationVariant::Convolution).unwrap();
        let x = GroupSignal::from_real(&[1.0; 6]);
        let r = apply_block_encoding(&be, &x).unwrap();
        prop_assert!((r.success_probability - be.normalization.powi(-2)).abs() < 1e-12);
    }

    // ---- deconvolution ------------------------------------------------------

    #[test]
    fn deconvolution_composes((g, m, x) in group_pair(), v in variant()) {
        let c = condition_data(&g, &m, v).unwrap();
        prop_assume!(c.kappa < 1e6);
        let y = convolve_direct(&g, &m, &x, v).unwrap();
        prop_assume!(y.norm2() > 1e-6);
        let r = deconvolve_exact(&g, &m, &y, v).unwrap();
        let back = convolve_direct(&g, &m, &r.solution(), v).unwrap();
        prop_assert!(max_abs_diff_vec(back.values(), y.values()) < 1e-8);
    }

    #[test]
    fn inverse_polynomial_invariants(delta in 0.05f64..0.5, exp in 2.0f64..8.0) {
        let eps = 10f64.powf(-exp);
        let p = build_inverse_polynomial(delta, eps).unwrap();
        let check = p.verify();
        prop_assert!(check.max_error <= eps);
        prop_assert!(check.sup_norm <= 1.0);
        prop_assert!(check.max_odd_defect == 0.0);
        prop_assert!((p.degree as f64) <= p.degree_bound());
    }

    // ---- integral_solver ----------------------------------------------------

    #[test]
    fn assembled_system_is_cross_correlation(n in 2usize..7, dim in 1usize..3, lambda in -0.4f64..0.9) {
        let p = IntegralProblem::example(n, dim, lambda).unwrap();
        let om = operation_matrix(&p.group, &p.filter, OperationVariant::CrossCorrelation).unwrap();
        prop_assert!(max_abs_diff(&om.matrix, &p.assembled_matrix()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn manhattan_symmetric(a in proptest::collection::vec(0.0f64..1.0, 2), b in proptest::collection::vec(0.0f64..1.0, 2)) {
        let l = [1.0, 1.0];
        let dab = manhattan_periodic(&a, &b, &l);
        prop_assert_eq!(dab, manhattan_periodic(&b, &a, &l));
        prop_assert!((0.0..=1.0).contains(&dab));
    }

    // ---- cli serialization ---------------------------------------------------

    #[test]
    fn serialization_round_trips(s in proptest::collection::vec((any::<f64>(), any::<f64>()), 0..12)) {
        prop_assume!(s.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let sig = GroupSignal::new(s.iter().map(|(a, b)| Complex64::new(*a, *b)).collect());
        let mut buf = Vec::new();
        write_signal_csv(&mut buf, &sig, None).unwrap();
        prop_assert_eq!(read_signal_csv(buf.as_slice()).unwrap(), sig.clone());
        let mut buf = Vec::new();
        write_signal_json(&mut buf, &sig).unwrap();
        prop_assert_eq!(read_signal_json(buf.as_slice()).unwrap(), sig);
    }
}

#[test]
fn svt_converges_to_exact() {
    let g = c(8);
    let m = GroupSignal::from_real(&[1.5, 0.3, -0.1, 0.05, 0.0, 0.1, -0.2, 0.25]);
    let x = GroupSignal::from_real(&[0.2, -1.0, 0.5, 0.3, 0.0, 0.7, -0.4, 0.1]);
    let y = convolve_direct(&g, &m, &x, OperationVariant::Convolution).unwrap();
    let exact = deconvolve_exact(&g, &m, &y, OperationVariant::Convolution).unwrap();
    let mut last = f64::INFINITY;
    for eps in [1e-3, 1e-5, 1e-7] {
        let r = deconvolve_svt(&g, &m, &y, OperationVariant::Convolution, eps, EncodingMethod::Lcu).unwrap();
        let err = norm2(
            &r.state.values().iter().zip(exact.state.values()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        assert!(err <= eps, "eps {eps}: {err}");
        assert!(err <= 10.0 * last);
        last = err;
    }
}

#[test]
fn fourier_route_carries_dmax() {
    let g = d(4);
    let m = GroupSignal::from_real(&[1.0, 0.2, 0.0, 0.1, 0.05, 0.0, -0.1, 0.15]);
    let y = GroupSignal::from_real(&[1.0, 0.0, 0.5, 0.0, -0.5, 0.2, 0.0, 0.3]);
    let a = deconvolve_svt(&g, &m, &y, OperationVariant::Convolution, 1e-6, EncodingMethod::Fourier).unwrap();
    assert_eq!(a.alpha, 2.0);
    let b = deconvolve_svt(&g, &m, &y, OperationVariant::Convolution, 1e-6, EncodingMethod::Lcu).unwrap();
    assert!((b.alpha - m.norm1()).abs() < 1e-12);
    assert!(max_abs_diff_vec(a.state.values(), b.state.values()) < 2e-6);
}

#[test]
fn stability_gate_refuses_large_lambda() {
    let k = PeriodicKernel::exp_manhattan(2).unwrap();
    let g = groupconv::integral::benchmark_g(4);
    let err = IntegralProblem::new(4, 1.7, k, g, None).unwrap_err();
    assert_eq!(err.name(), "ill-conditioned-problem");
}

#[test]
fn dilations_are_unitary() {
    let b = CMatrix::from_fn(5, 5, |i, j| Complex64::new((i as f64 - j as f64) * 0.07, (i * j) as f64 * 0.01));
    let b = &b / Complex64::new(spectral_norm(&b) * 1.001, 0.0);
    let u = groupconv::linalg::unitary_dilation(&b);
    assert!(unitarity_residual(&u) < 1e-12);
    assert!(max_abs_diff(&u.view((0, 0), (5, 5)).into_owned(), &b) == 0.0);
    assert!(unitarity_residual(&identity(3)) == 0.0);
}

#[test]
fn correlation_blocks_use_inverted_filter() {
    use groupconv::convolution::filter_blocks;
    let g = d(3);
    let fm = fourier_of(&g);
    let complex_m = GroupSignal::new((0..6).map(|i| Complex64::new(0.3 * i as f64 - 0.5, 0.2 + 0.1 * i as f64)).collect());
    let real_m = GroupSignal::new(complex_m.values().iter().map(|z| Complex64::new(z.re, 0.0)).collect());
    for v in [OperationVariant::CrossCorrelation, OperationVariant::RightCrossCorrelation] {
        for (m, literal_ok) in [(&complex_m, false), (&real_m, true)] {
            let om = operation_matrix(&g, m, v).unwrap();
            let conj = &fm.matrix * &om.matrix * fm.matrix.adjoint();
            let fb = filter_blocks(&g, m, v).unwrap();
            assert!(max_abs_diff(&conj, &fb.block_diagonal()) < 1e-10);
            let literal = groupconv::convolution::FilterBlocks {
                variant: v,
                coefficients: classical_fourier(&g, m).unwrap().map(|b| b.adjoint()),
            };
            let agrees = max_abs_diff(&conj, &literal.block_diagonal()) < 1e-10;
            assert_eq!(agrees, literal_ok, "{v}");
        }
    }
}

#[test]
fn block_property_up_to_48() {
    // Full W†W checks are covered above on smaller groups; here only the block.
    let groups = [c(48), d(24), make_product(&[c(2), d(12)]).unwrap(), make_product(&[c(3), c(4), c(4)]).unwrap()];
    for (k, g) in groups.iter().enumerate() {
        let m = GroupSignal::new((0..48).map(|i| Complex64::new(((i * 7 + k) % 11) as f64 / 11.0 - 0.4, ((i * 3) % 5) as f64 * 0.1)).collect());
        let v = OperationVariant::ALL[k];
        let lcu = lcu_block_encoding(g, &m, v).unwrap();
        assert!(lcu.block_residual() < 1e-10, "lcu on group {k}");
        let (mf, _) = normalize_for_fourier(g, &m, v).unwrap();
        let f = fourier_block_encoding(g, &mf, v, Default::default()).unwrap();
        assert!(f.block_residual() < 1e-10, "fourier on group {k}");
        assert!(f.unitarity_residual() < 1e-10);
    }
}
